#include "vtsig/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "vtsig/csv.hpp"
#include "vtsig/dialogue.hpp"
#include "vtsig/rng.hpp"

namespace vtsig {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string subject_id(std::size_t index) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "S%03zu", index + 1);
  return buffer;
}

// Spread of the shared per-turn means relative to the within-turn spread.
// Sized so that the pooled linear-trend statistics carry only a weak class
// signal (the within-turn sort bias) on top of a pair-shared trend, which
// keeps the HSF aggregator near chance while leaving correlation-based
// selection something order-sensitive to find.
constexpr double kTurnMeanSd = 0.35;

}  // namespace

std::filesystem::path synth_generate(const SynthParams& params,
                                     const std::filesystem::path& out_dir) {
  if (params.n_subjects < 2 || params.n_subjects % 2 != 0) {
    throw std::invalid_argument("n_subjects must be even and >= 2");
  }
  if (params.turns_per_subject < 2 || params.frames_per_turn < 2 ||
      params.dim < 1) {
    throw std::invalid_argument("turns/frames must be >= 2 and dim >= 1");
  }

  std::filesystem::create_directories(out_dir / "matrices");
  Rng rng(params.seed);

  std::vector<std::string> columns;
  for (std::size_t j = 0; j < params.dim; ++j) {
    columns.push_back("f" + std::to_string(j + 1));
  }

  ordered_json manifest;
  manifest["name"] = "synthetic-order-separability";
  manifest["feature_sets"] = ordered_json::array();
  manifest["feature_sets"].push_back(
      {{"name", "acoustic"},
       {"columns", columns},
       {"level", "frame"},
       {"turn_scaled", false}});
  {
    std::vector<std::string> dialogue_columns(kDialogueFeatureNames.begin(),
                                              kDialogueFeatureNames.end());
    manifest["feature_sets"].push_back({{"name", "dialogue"},
                                        {"columns", dialogue_columns},
                                        {"level", "turn"}});
  }
  manifest["subjects"] = ordered_json::array();

  const double participant_dur =
      std::max(2.5, 0.1 * static_cast<double>(params.frames_per_turn));
  const std::size_t n_pairs = params.n_subjects / 2;

  for (std::size_t pair = 0; pair < n_pairs; ++pair) {
    // Per-pair shape nuisance: mixing weight toward a skewed (centered
    // exponential) frame distribution. Order-free by construction and
    // independent of the class label.
    const double skew_weight = rng.uniform();

    // Draw the shared per-turn values once, then order them per class.
    // sorted_values[turn][dim] ascending; shuffled_values independently
    // permuted per dimension. The per-turn means give every subject a
    // between-turn trend (trend_score below) that dominates the pooled
    // linear-regression statistics, so those stats stay essentially
    // label-free while still varying within a pair.
    std::vector<std::vector<std::vector<double>>> sorted_values(
        params.turns_per_subject);
    std::vector<std::vector<std::vector<double>>> shuffled_values(
        params.turns_per_subject);
    double trend_score = 0.0;
    const double turn_center =
        (static_cast<double>(params.turns_per_subject) - 1.0) / 2.0;
    double trend_norm = 0.0;
    for (std::size_t k = 0; k < params.turns_per_subject; ++k) {
      sorted_values[k].resize(params.dim);
      shuffled_values[k].resize(params.dim);
      for (std::size_t j = 0; j < params.dim; ++j) {
        const double turn_mean = kTurnMeanSd * rng.normal();
        if (j == 0) {
          const double w = static_cast<double>(k) - turn_center;
          trend_score += w * turn_mean;
          trend_norm += w * w * kTurnMeanSd * kTurnMeanSd;
        }
        std::vector<double> values(params.frames_per_turn);
        for (double& v : values) {
          const double sample = (1.0 - skew_weight) * rng.normal() +
                                skew_weight * (rng.exponential() - 1.0);
          v = turn_mean + 0.6 * sample;
        }
        auto sorted = values;
        std::sort(sorted.begin(), sorted.end());
        sorted_values[k][j] = std::move(sorted);
        rng.shuffle(values);
        shuffled_values[k][j] = std::move(values);
      }
    }
    trend_score /= std::sqrt(trend_norm);

    // Shared (label-independent) controls and timings within the pair.
    const std::string environment = pair % 2 == 0 ? "room" : "phone";
    const std::string interviewer = "I" + std::to_string(pair % 3 + 1);
    const std::string gender = (pair / 2) % 2 == 0 ? "F" : "M";

    struct TurnPlan {
      double iv_start, iv_end;
      int iv_words;
      double pt_start, pt_end;
      int pt_words;
      double pause_at;  // fraction of the participant turn, 0 = no pause
    };
    std::vector<TurnPlan> plans(params.turns_per_subject);
    double clock = 0.0;
    for (auto& plan : plans) {
      const double iv_dur = 2.2 + 1.5 * rng.uniform();
      plan.iv_start = clock;
      plan.iv_end = clock + iv_dur;
      plan.iv_words = static_cast<int>(iv_dur * (2.0 + rng.uniform()));
      clock = plan.iv_end + 0.3 + 0.4 * rng.uniform();
      plan.pt_start = clock;
      plan.pt_end = clock + participant_dur;
      plan.pt_words = static_cast<int>(participant_dur * (2.0 + rng.uniform()));
      plan.pause_at = rng.uniform() < 0.5 ? 0.35 + 0.2 * rng.uniform() : 0.0;
      clock = plan.pt_end + 0.3 + 0.4 * rng.uniform();
    }

    for (int cls : {1, 0}) {
      const std::size_t index = pair * 2 + (cls == 1 ? 0 : 1);
      const std::string sid = subject_id(index);
      // Severity score: class signal plus the pair's (label-free)
      // between-turn trend, so correlation-based selection finds
      // order-sensitive statistics for every aggregator without handing
      // the order-free ones any class information.
      const double score =
          10.0 + 5.0 * (static_cast<double>(cls) + 0.8 * trend_score +
                        0.25 * rng.normal());

      ordered_json subject;
      subject["id"] = sid;
      subject["diagnosis"] = cls == 1 ? "BD" : "H";
      subject["score"] = score;
      subject["controls"] = {{"environment", environment},
                             {"interviewer", interviewer},
                             {"gender", gender}};
      subject["turns"] = ordered_json::array();

      const auto& values = cls == 1 ? sorted_values : shuffled_values;
      for (std::size_t k = 0; k < params.turns_per_subject; ++k) {
        const TurnPlan& plan = plans[k];
        ordered_json iv_turn;
        iv_turn["speaker"] = "interviewer";
        iv_turn["start_s"] = plan.iv_start;
        iv_turn["end_s"] = plan.iv_end;
        iv_turn["word_count"] = plan.iv_words;
        iv_turn["voiced_segments"] = {{plan.iv_start, plan.iv_end}};
        subject["turns"].push_back(std::move(iv_turn));

        Eigen::MatrixXd frames(
            static_cast<Eigen::Index>(params.frames_per_turn),
            static_cast<Eigen::Index>(params.dim));
        for (std::size_t f = 0; f < params.frames_per_turn; ++f) {
          for (std::size_t j = 0; j < params.dim; ++j) {
            frames(static_cast<Eigen::Index>(f),
                   static_cast<Eigen::Index>(j)) = values[k][j][f];
          }
        }
        char file_name[64];
        std::snprintf(file_name, sizeof file_name, "%s_t%02zu_acoustic.csv",
                      sid.c_str(), k);
        write_csv_matrix(out_dir / "matrices" / file_name, columns, frames);

        ordered_json pt_turn;
        pt_turn["speaker"] = "participant";
        pt_turn["start_s"] = plan.pt_start;
        pt_turn["end_s"] = plan.pt_end;
        pt_turn["word_count"] = plan.pt_words;
        if (plan.pause_at > 0.0) {
          const double split =
              plan.pt_start + plan.pause_at * participant_dur;
          pt_turn["voiced_segments"] = {{plan.pt_start, split},
                                        {split + 0.3, plan.pt_end}};
        } else {
          pt_turn["voiced_segments"] = {{plan.pt_start, plan.pt_end}};
        }
        pt_turn["features"] = {
            {"acoustic", std::string("matrices/") + file_name}};
        subject["turns"].push_back(std::move(pt_turn));
      }
      manifest["subjects"].push_back(std::move(subject));
    }
  }

  const auto manifest_path = out_dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) {
    throw std::runtime_error("cannot write " + manifest_path.string());
  }
  out << manifest.dump(2) << '\n';
  return manifest_path;
}

}  // namespace vtsig
