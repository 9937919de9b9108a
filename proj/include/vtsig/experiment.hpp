#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vtsig/aggregate.hpp"
#include "vtsig/dataset.hpp"

namespace vtsig {

enum class SpeakerConfig { kParticipant, kInterviewer, kBoth };

std::string to_string(SpeakerConfig speaker);
SpeakerConfig speaker_config_from_string(const std::string& s);

struct Task {
  Diagnosis negative;
  Diagnosis positive;
  std::string name;  // e.g. "H/BD"; positive class is the latter diagnosis
};

Task task_from_string(const std::string& s);

enum class SelectionTarget { kAuto, kScore, kLabel };

struct ExperimentConfig {
  std::vector<Task> tasks;
  SpeakerConfig speaker = SpeakerConfig::kParticipant;
  std::vector<AggregationMethod> aggregations;
  std::vector<NormalizationMode> normalizations;
  std::size_t signature_level = 3;
  std::vector<std::string> feature_sets;
  std::vector<std::string> fusion;  // sets fused per cell when >= 2 named
  std::vector<double> selection_thresholds{0.001, 0.005, 0.01};
  SelectionTarget selection_target = SelectionTarget::kAuto;
  double interaction_alpha = 0.05;
  std::vector<double> lambda_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  bool per_speaker_normalization = false;  // "both" mode only
  std::uint64_t seed = 0;
  int jobs = 0;
};

/// Loads and validates an experiment configuration file (JSON).
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentOutcome {
  int exit_code = 0;  // 0 ok, 2 when any cell failed
  std::filesystem::path report_json;
  std::filesystem::path report_text;
};

/// Runs nested LOSO for every (task, aggregation, normalization) cell and
/// feature set, fuses configured sets, and writes report.json plus
/// report.txt under out_dir. Failed cells are recorded and the run
/// continues. Byte-identical output for identical inputs.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const Dataset& dataset,
                                 const std::filesystem::path& out_dir);

}  // namespace vtsig
