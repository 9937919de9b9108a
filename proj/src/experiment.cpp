#include "vtsig/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "vtsig/eval.hpp"

namespace vtsig {

namespace {

using ordered_json = nlohmann::ordered_json;

int control_code(const std::vector<std::string>& levels,
                 const std::string& value) {
  const auto it = std::find(levels.begin(), levels.end(), value);
  return static_cast<int>(it - levels.begin());
}

// Sorted distinct values of each control variable across the dataset, so
// codes are stable regardless of subject order.
struct ControlCoding {
  std::vector<std::string> environments;
  std::vector<std::string> interviewers;
  std::vector<std::string> genders;
};

ControlCoding build_control_coding(const Dataset& dataset) {
  std::set<std::string> env, interviewer, gender;
  for (const auto& subject : dataset.subjects) {
    env.insert(subject.controls.environment);
    interviewer.insert(subject.controls.interviewer);
    gender.insert(subject.controls.gender);
  }
  return {{env.begin(), env.end()},
          {interviewer.begin(), interviewer.end()},
          {gender.begin(), gender.end()}};
}

// Dialogue column subset mapping: declared columns -> indices into the
// canonical 13-column feature matrix.
std::vector<Eigen::Index> dialogue_column_map(
    const std::vector<std::string>& columns) {
  std::vector<Eigen::Index> map;
  map.reserve(columns.size());
  for (const auto& col : columns) {
    const auto it =
        std::find_if(kDialogueFeatureNames.begin(), kDialogueFeatureNames.end(),
                     [&](const char* n) { return col == n; });
    map.push_back(it - kDialogueFeatureNames.begin());
  }
  return map;
}

// Builds the per-subject turn sequences for one feature set under a speaker
// configuration. Throws std::runtime_error when a required matrix is absent.
void build_sequences(const Subject& subject, const FeatureSetDecl& decl,
                     SpeakerConfig speaker, bool per_speaker_norm,
                     SubjectFeatures& out) {
  const auto want = [&](Speaker s) {
    switch (speaker) {
      case SpeakerConfig::kParticipant: return s == Speaker::kParticipant;
      case SpeakerConfig::kInterviewer: return s == Speaker::kInterviewer;
      case SpeakerConfig::kBoth: return true;
    }
    return false;
  };
  const auto group_of = [&](Speaker s) {
    return per_speaker_norm && speaker == SpeakerConfig::kBoth
               ? (s == Speaker::kParticipant ? 0 : 1)
               : 0;
  };

  if (decl.level == FeatureLevel::kFrame) {
    for (const auto& turn : subject.turns) {
      if (!want(turn.record.speaker)) continue;
      const auto it = turn.matrices.find(decl.name);
      if (it == turn.matrices.end()) {
        throw std::runtime_error(
            "subject " + subject.id + ": a " +
            to_string(turn.record.speaker) + " turn has no matrix for "
            "feature set " + decl.name);
      }
      out.sequences.push_back(it->second);
      out.sequence_groups.push_back(group_of(turn.record.speaker));
    }
    if (out.sequences.empty()) {
      throw std::runtime_error("subject " + subject.id +
                               ": no turns for speaker configuration");
    }
    return;
  }

  // Turn-level: compute the dialogue features over the full turn list, then
  // emit one single-row sequence per emitted turn.
  std::vector<TurnRecord> records;
  records.reserve(subject.turns.size());
  for (const auto& turn : subject.turns) records.push_back(turn.record);
  Eigen::MatrixXd rows;
  std::vector<Speaker> row_speakers;
  if (speaker == SpeakerConfig::kBoth) {
    rows = dialogue_features_interleaved(records);
    for (const auto& record : records) row_speakers.push_back(record.speaker);
  } else {
    const Speaker target = speaker == SpeakerConfig::kParticipant
                               ? Speaker::kParticipant
                               : Speaker::kInterviewer;
    rows = dialogue_features(records, target);
    for (const auto& record : records) {
      if (record.speaker == target) row_speakers.push_back(target);
    }
  }
  const auto col_map = dialogue_column_map(decl.columns);
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    Eigen::MatrixXd row(1, static_cast<Eigen::Index>(col_map.size()));
    for (std::size_t c = 0; c < col_map.size(); ++c) {
      row(0, static_cast<Eigen::Index>(c)) = rows(r, col_map[c]);
    }
    out.sequences.push_back(std::move(row));
    out.sequence_groups.push_back(
        group_of(row_speakers[static_cast<std::size_t>(r)]));
  }
}

std::string format_metric(double value) {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%.3f", value);
  return buffer;
}

}  // namespace

std::string to_string(SpeakerConfig speaker) {
  switch (speaker) {
    case SpeakerConfig::kParticipant: return "participant";
    case SpeakerConfig::kInterviewer: return "interviewer";
    case SpeakerConfig::kBoth: return "both";
  }
  return "?";
}

SpeakerConfig speaker_config_from_string(const std::string& s) {
  if (s == "participant") return SpeakerConfig::kParticipant;
  if (s == "interviewer") return SpeakerConfig::kInterviewer;
  if (s == "both") return SpeakerConfig::kBoth;
  throw std::invalid_argument("unknown speaker configuration: " + s);
}

Task task_from_string(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    throw std::invalid_argument("task must be '<neg>/<pos>', got: " + s);
  }
  Task task;
  task.negative = diagnosis_from_string(s.substr(0, slash));
  task.positive = diagnosis_from_string(s.substr(slash + 1));
  if (task.negative == task.positive) {
    throw std::invalid_argument("task classes must differ: " + s);
  }
  task.name = s;
  return task;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& error) {
    throw std::runtime_error("config " + path.string() +
                             " is not valid JSON: " + error.what());
  }

  ExperimentConfig config;
  for (const auto& t : root.at("tasks")) {
    config.tasks.push_back(task_from_string(t.get<std::string>()));
  }
  config.speaker =
      speaker_config_from_string(root.value("speaker", "participant"));
  for (const auto& a : root.at("aggregations")) {
    config.aggregations.push_back(
        aggregation_from_string(a.get<std::string>()));
  }
  for (const auto& n : root.at("normalizations")) {
    config.normalizations.push_back(
        normalization_from_string(n.get<std::string>()));
  }
  config.signature_level = root.value("signature_level", 3);
  if (config.signature_level < 1) {
    throw std::runtime_error("signature_level must be >= 1");
  }
  config.feature_sets =
      root.at("feature_sets").get<std::vector<std::string>>();
  if (root.contains("fusion")) {
    config.fusion = root.at("fusion").get<std::vector<std::string>>();
    for (const auto& name : config.fusion) {
      if (std::find(config.feature_sets.begin(), config.feature_sets.end(),
                    name) == config.feature_sets.end()) {
        throw std::runtime_error("fusion names unknown feature set " + name);
      }
    }
  }
  if (root.contains("selection_thresholds")) {
    config.selection_thresholds =
        root.at("selection_thresholds").get<std::vector<double>>();
    for (double t : config.selection_thresholds) {
      if (t <= 0.0 || t >= 1.0) {
        throw std::runtime_error("selection thresholds must lie in (0, 1)");
      }
    }
    if (config.selection_thresholds.empty()) {
      throw std::runtime_error("selection_thresholds must be non-empty");
    }
  }
  const std::string target = root.value("selection_target", "auto");
  if (target == "auto") {
    config.selection_target = SelectionTarget::kAuto;
  } else if (target == "score") {
    config.selection_target = SelectionTarget::kScore;
  } else if (target == "label") {
    config.selection_target = SelectionTarget::kLabel;
  } else {
    throw std::runtime_error("selection_target must be auto|score|label");
  }
  config.interaction_alpha = root.value("interaction_alpha", 0.05);
  if (root.contains("lambda_grid")) {
    config.lambda_grid = root.at("lambda_grid").get<std::vector<double>>();
    if (config.lambda_grid.empty()) {
      throw std::runtime_error("lambda_grid must be non-empty");
    }
  }
  config.per_speaker_normalization =
      root.value("both_normalization", "shared") == std::string("per_speaker");
  config.seed = root.value("seed", 0);
  config.jobs = root.value("jobs", 0);
  return config;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 const Dataset& dataset,
                                 const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ControlCoding coding = build_control_coding(dataset);

  ordered_json report;
  report["dataset"] = dataset.name;
  report["seed"] = config.seed;
  report["speaker"] = to_string(config.speaker);
  report["ingest_summary"] = {
      {"subjects", dataset.summary.subjects},
      {"turns", dataset.summary.turns},
      {"short_turns_filtered", dataset.summary.short_turns_filtered},
      {"warnings", dataset.summary.warnings}};
  report["results"] = ordered_json::array();
  report["failures"] = ordered_json::array();

  std::string text;
  bool any_failure = false;

  for (const Task& task : config.tasks) {
    // Task subset in dataset order; positive class = latter diagnosis.
    std::vector<const Subject*> subjects;
    for (const auto& subject : dataset.subjects) {
      if (subject.diagnosis == task.negative ||
          subject.diagnosis == task.positive) {
        subjects.push_back(&subject);
      }
    }

    bool use_scores = config.selection_target != SelectionTarget::kLabel;
    if (config.selection_target == SelectionTarget::kAuto) {
      use_scores = std::all_of(
          subjects.begin(), subjects.end(),
          [](const Subject* s) { return s->score.has_value(); });
    }

    // Per-feature-set subject data, shared across the grid cells.
    std::map<std::string, std::vector<SubjectFeatures>> task_data;
    std::map<std::string, std::string> data_errors;
    for (const auto& fs_name : config.feature_sets) {
      const auto decl = std::find_if(
          dataset.feature_sets.begin(), dataset.feature_sets.end(),
          [&](const FeatureSetDecl& fs) { return fs.name == fs_name; });
      if (decl == dataset.feature_sets.end()) {
        data_errors[fs_name] = "feature set not declared in manifest";
        continue;
      }
      std::vector<SubjectFeatures> data;
      try {
        for (const Subject* subject : subjects) {
          SubjectFeatures features;
          features.id = subject->id;
          features.label = subject->diagnosis == task.positive ? 1 : 0;
          features.score = subject->score;
          features.controls = {
              control_code(coding.environments,
                           subject->controls.environment),
              control_code(coding.interviewers,
                           subject->controls.interviewer),
              control_code(coding.genders, subject->controls.gender)};
          build_sequences(*subject, *decl, config.speaker,
                          config.per_speaker_normalization, features);
          data.push_back(std::move(features));
        }
        task_data[fs_name] = std::move(data);
      } catch (const std::exception& error) {
        data_errors[fs_name] = error.what();
      }
    }

    // task -> (feature set -> rows of "F1 AUROC" per cell) for the text
    // table, keyed in grid order.
    std::map<std::string, std::vector<std::string>> table_cells;
    std::vector<std::string> table_rows;

    for (AggregationMethod aggregation : config.aggregations) {
      for (NormalizationMode normalization : config.normalizations) {
        ordered_json cell;
        cell["task"] = task.name;
        cell["aggregation"] = to_string(aggregation);
        cell["normalization"] = to_string(normalization);
        cell["feature_sets"] = ordered_json::array();

        table_rows.push_back(to_string(aggregation) + "\t" +
                             to_string(normalization));

        std::vector<std::string> fused_sets;
        std::vector<std::vector<double>> fused_probs;
        std::vector<int> fused_labels;

        for (const auto& fs_name : config.feature_sets) {
          ordered_json entry;
          entry["feature_set"] = fs_name;

          const auto record_failure = [&](const std::string& reason) {
            entry["status"] = "failed";
            entry["reason"] = reason;
            report["failures"].push_back({{"task", task.name},
                                          {"aggregation",
                                           to_string(aggregation)},
                                          {"normalization",
                                           to_string(normalization)},
                                          {"feature_set", fs_name},
                                          {"reason", reason}});
            any_failure = true;
            table_cells[fs_name].push_back("failed");
          };

          if (data_errors.count(fs_name) != 0) {
            record_failure(data_errors.at(fs_name));
            cell["feature_sets"].push_back(std::move(entry));
            continue;
          }

          const auto decl = std::find_if(
              dataset.feature_sets.begin(), dataset.feature_sets.end(),
              [&](const FeatureSetDecl& fs) { return fs.name == fs_name; });

          EvalConfig eval;
          eval.aggregation.method = aggregation;
          eval.aggregation.level = config.signature_level;
          eval.aggregation.normalization = normalization;
          eval.selection.thresholds = config.selection_thresholds;
          eval.lambda_grid = config.lambda_grid;
          eval.interaction_alpha = config.interaction_alpha;
          eval.feature_names =
              aggregate_feature_names(decl->columns, eval.aggregation);
          eval.use_scores = use_scores;
          eval.jobs = config.jobs;

          try {
            const LosoReport loso =
                nested_loso(task_data.at(fs_name), eval);
            entry["status"] = "ok";
            entry["selection_target"] = use_scores ? "score" : "label";
            entry["macro_f1"] = loso.macro_f1;
            entry["auroc"] = loso.auroc;
            entry["folds"] = ordered_json::array();
            std::vector<double> probs;
            for (const FoldResult& fold : loso.folds) {
              entry["folds"].push_back(
                  {{"subject", fold.subject_id},
                   {"label", fold.label},
                   {"probability", fold.probability},
                   {"lambda", fold.lambda},
                   {"p_threshold", fold.p_threshold},
                   {"threshold_escalated", fold.threshold_escalated},
                   {"selected_features", fold.selected_features},
                   {"warnings", fold.warnings}});
              probs.push_back(fold.probability);
            }
            table_cells[fs_name].push_back(format_metric(loso.macro_f1) +
                                           " / " +
                                           format_metric(loso.auroc));
            if (std::find(config.fusion.begin(), config.fusion.end(),
                          fs_name) != config.fusion.end()) {
              fused_sets.push_back(fs_name);
              fused_probs.push_back(std::move(probs));
              if (fused_labels.empty()) {
                for (const FoldResult& fold : loso.folds) {
                  fused_labels.push_back(fold.label);
                }
              }
            }
          } catch (const std::exception& error) {
            record_failure(error.what());
          }
          cell["feature_sets"].push_back(std::move(entry));
        }

        if (config.fusion.size() >= 2) {
          if (fused_sets.size() == config.fusion.size()) {
            const std::vector<double> fused = late_fusion(fused_probs);
            std::vector<int> predictions;
            predictions.reserve(fused.size());
            for (double p : fused) predictions.push_back(p >= 0.5 ? 1 : 0);
            cell["fusion"] = {
                {"feature_sets", fused_sets},
                {"macro_f1", macro_f1(predictions, fused_labels)},
                {"auroc", auroc(fused, fused_labels)}};
            table_cells["(fused)"].push_back(
                format_metric(macro_f1(predictions, fused_labels)) + " / " +
                format_metric(auroc(fused, fused_labels)));
          } else {
            cell["fusion"] = {{"skipped", "component cell failed"}};
            table_cells["(fused)"].push_back("failed");
          }
        }
        report["results"].push_back(std::move(cell));
      }
    }

    // Table-4-style block: rows aggregation x normalization, one column per
    // feature set, cells "F1 / AUROC".
    text += "Task " + task.name + "  (speaker: " + to_string(config.speaker) +
            ", selection target: " + (use_scores ? "score" : "label") + ")\n";
    std::vector<std::string> column_names = config.feature_sets;
    if (config.fusion.size() >= 2) column_names.push_back("(fused)");
    char line[256];
    std::snprintf(line, sizeof line, "%-8s %-8s", "Aggr", "Norm");
    text += line;
    for (const auto& name : column_names) {
      std::snprintf(line, sizeof line, " %-16s", name.c_str());
      text += line;
    }
    text += "\n";
    for (std::size_t r = 0; r < table_rows.size(); ++r) {
      const auto tab = table_rows[r].find('\t');
      std::snprintf(line, sizeof line, "%-8s %-8s",
                    table_rows[r].substr(0, tab).c_str(),
                    table_rows[r].substr(tab + 1).c_str());
      text += line;
      for (const auto& name : column_names) {
        const auto& cells = table_cells[name];
        std::snprintf(line, sizeof line, " %-16s",
                      r < cells.size() ? cells[r].c_str() : "-");
        text += line;
      }
      text += "\n";
    }
    text += "\n";
  }

  ExperimentOutcome outcome;
  outcome.exit_code = any_failure ? 2 : 0;
  outcome.report_json = out_dir / "report.json";
  outcome.report_text = out_dir / "report.txt";
  {
    std::ofstream out(outcome.report_json);
    if (!out) {
      throw std::runtime_error("cannot write " + outcome.report_json.string());
    }
    out << report.dump(2) << '\n';
  }
  {
    std::ofstream out(outcome.report_text);
    if (!out) {
      throw std::runtime_error("cannot write " + outcome.report_text.string());
    }
    out << text;
  }
  return outcome;
}

}  // namespace vtsig
