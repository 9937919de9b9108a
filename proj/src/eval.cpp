#include "vtsig/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace vtsig {

namespace {

void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body) {
  unsigned n_threads = jobs > 0 ? static_cast<unsigned>(jobs)
                                : std::thread::hardware_concurrency();
  if (n_threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count;
           i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (error) std::rethrow_exception(error);
}

// Per-group normalization statistics computed from a set of interviews.
std::map<int, NormStats> group_stats(
    const std::vector<const SubjectFeatures*>& subjects) {
  std::map<int, std::vector<std::vector<Eigen::MatrixXd>>> pools;
  for (const auto* subject : subjects) {
    std::map<int, std::vector<Eigen::MatrixXd>> mine;
    for (std::size_t s = 0; s < subject->sequences.size(); ++s) {
      mine[subject->sequence_groups[s]].push_back(subject->sequences[s]);
    }
    for (auto& [group, seqs] : mine) pools[group].push_back(std::move(seqs));
  }
  std::map<int, NormStats> stats;
  for (const auto& [group, interviews] : pools) {
    std::vector<const std::vector<Eigen::MatrixXd>*> views;
    views.reserve(interviews.size());
    for (const auto& interview : interviews) views.push_back(&interview);
    stats[group] = pooled_norm_stats(views);
  }
  return stats;
}

std::vector<Eigen::MatrixXd> normalize_subject(
    const SubjectFeatures& subject, NormalizationMode mode,
    const std::map<int, NormStats>* global) {
  std::vector<Eigen::MatrixXd> sequences = subject.sequences;
  if (mode == NormalizationMode::kNone) return sequences;

  // Partition sequence indices by group, normalize each group.
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    groups[subject.sequence_groups[s]].push_back(s);
  }
  for (const auto& [group, indices] : groups) {
    std::vector<Eigen::MatrixXd> block;
    block.reserve(indices.size());
    for (std::size_t s : indices) block.push_back(std::move(sequences[s]));
    if (mode == NormalizationMode::kPerson) {
      person_normalize(block);
    } else {
      apply_norm_stats(block, global->at(group));
    }
    for (std::size_t b = 0; b < indices.size(); ++b) {
      sequences[indices[b]] = std::move(block[b]);
    }
  }
  return sequences;
}

struct FoldModel {
  std::map<int, NormStats> global_stats;
  Eigen::VectorXd col_mean;
  Eigen::VectorXd col_scale;
  std::vector<Eigen::Index> selected;
  double threshold = 0.0;
  bool escalated = false;
  double lambda = 0.0;
  LogRegModel model;
  std::vector<std::string> warnings;
};

double pick_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   const std::vector<double>& grid,
                   std::vector<std::string>& warnings) {
  const Eigen::Index n = X.rows();
  double best_lambda = 0.0;
  double best_auroc = -1.0;
  for (double lambda : grid) {
    std::vector<double> probs;
    std::vector<int> labels;
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::MatrixXd x_inner(n - 1, X.cols());
      Eigen::VectorXd y_inner(n - 1);
      Eigen::Index at = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i == j) continue;
        x_inner.row(at) = X.row(i);
        y_inner(at) = y(i);
        ++at;
      }
      try {
        const LogRegModel inner = fit_logreg_l2(x_inner, y_inner, lambda);
        probs.push_back(predict_proba(inner, X.row(j).transpose()));
        labels.push_back(static_cast<int>(y(j)));
      } catch (const std::exception&) {
        // Inner fold unusable (e.g. a class vanished); skip it.
      }
    }
    double score = -1.0;
    const bool has_both =
        std::count(labels.begin(), labels.end(), 1) > 0 &&
        std::count(labels.begin(), labels.end(), 0) > 0;
    if (has_both) score = auroc(probs, labels);
    if (score > best_auroc) {
      best_auroc = score;
      best_lambda = lambda;
    }
  }
  if (best_auroc < 0.0) {
    best_lambda = grid[grid.size() / 2];
    warnings.push_back("inner LOSO degenerate; lambda defaulted");
  }
  return best_lambda;
}

FoldModel build_fold(const std::vector<const SubjectFeatures*>& train,
                     const EvalConfig& config) {
  FoldModel fold;

  if (config.aggregation.normalization == NormalizationMode::kGlobal) {
    fold.global_stats = group_stats(train);
    for (const auto& [group, stats] : fold.global_stats) {
      for (Eigen::Index j : stats.zero_variance) {
        fold.warnings.push_back("global normalization: zero-variance dim " +
                                std::to_string(j) + " centered only");
      }
    }
  }

  const std::size_t n = train.size();
  Eigen::MatrixXd features;
  Eigen::VectorXd labels(static_cast<Eigen::Index>(n));
  Eigen::VectorXd target(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto sequences = normalize_subject(
        *train[i], config.aggregation.normalization, &fold.global_stats);
    const Eigen::VectorXd row =
        aggregate_interview(sequences, config.aggregation);
    if (features.size() == 0) {
      features.resize(static_cast<Eigen::Index>(n), row.size());
    }
    features.row(static_cast<Eigen::Index>(i)) = row.transpose();
    labels(static_cast<Eigen::Index>(i)) = train[i]->label;
    if (config.use_scores) {
      if (!train[i]->score.has_value()) {
        throw FoldError("subject " + train[i]->id + " has no severity score");
      }
      target(static_cast<Eigen::Index>(i)) = *train[i]->score;
    } else {
      target(static_cast<Eigen::Index>(i)) = train[i]->label;
    }
  }
  if (!features.allFinite()) {
    throw FoldError("aggregation produced non-finite features");
  }
  if (static_cast<std::size_t>(features.cols()) !=
      config.feature_names.size()) {
    throw FoldError("feature name list does not match aggregate length");
  }

  // Classifier-level column standardization from the training fold.
  fold.col_mean = features.colwise().mean();
  fold.col_scale.resize(features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double var =
        (features.col(j).array() - fold.col_mean(j)).square().mean();
    const double sd = std::sqrt(var);
    fold.col_scale(j) = sd > 0.0 ? sd : 1.0;
  }
  Eigen::MatrixXd standardized =
      (features.rowwise() - fold.col_mean.transpose()).array().rowwise() /
      fold.col_scale.transpose().array();

  // Selection with threshold escalation; interaction screening may empty a
  // level's selection, in which case escalation continues.
  const std::size_t n_controls = train.front()->controls.size();
  for (std::size_t t = 0; t < config.selection.thresholds.size(); ++t) {
    SelectionConfig single;
    single.thresholds = {config.selection.thresholds[t]};
    SelectionResult picked = select_features(standardized, target, single);
    if (picked.indices.empty()) continue;

    std::vector<Eigen::Index> kept;
    for (Eigen::Index col : picked.indices) {
      bool keep = true;
      for (std::size_t c = 0; c < n_controls; ++c) {
        std::vector<int> codes(n);
        for (std::size_t i = 0; i < n; ++i) {
          codes[i] = train[i]->controls[c];
        }
        const ScreenResult screen = interaction_screen(
            standardized.col(col), labels, codes, config.interaction_alpha);
        if (screen.skipped) continue;
        if (!screen.keep) {
          keep = false;
          fold.warnings.push_back(
              "feature " + config.feature_names[static_cast<std::size_t>(col)] +
              " dropped by interaction screen (control " + std::to_string(c) +
              ", p = " + std::to_string(screen.min_p) + ")");
          break;
        }
      }
      if (keep) kept.push_back(col);
    }
    if (kept.empty()) continue;
    fold.selected = std::move(kept);
    fold.threshold = config.selection.thresholds[t];
    fold.escalated = t > 0;
    break;
  }
  if (fold.selected.empty()) {
    throw FoldError("no features selected after threshold escalation");
  }

  Eigen::MatrixXd x_sel(standardized.rows(),
                        static_cast<Eigen::Index>(fold.selected.size()));
  for (std::size_t j = 0; j < fold.selected.size(); ++j) {
    x_sel.col(static_cast<Eigen::Index>(j)) =
        standardized.col(fold.selected[j]);
  }

  fold.lambda = pick_lambda(x_sel, labels, config.lambda_grid, fold.warnings);
  try {
    fold.model = fit_logreg_l2(x_sel, labels, fold.lambda);
  } catch (const std::exception& error) {
    throw FoldError(std::string("final fit failed: ") + error.what());
  }
  return fold;
}

double predict_held_out(const FoldModel& fold, const SubjectFeatures& subject,
                        const EvalConfig& config) {
  const auto sequences = normalize_subject(
      subject, config.aggregation.normalization, &fold.global_stats);
  const Eigen::VectorXd row = aggregate_interview(sequences, config.aggregation);
  const Eigen::VectorXd standardized =
      (row - fold.col_mean).array() / fold.col_scale.array();
  Eigen::VectorXd x(static_cast<Eigen::Index>(fold.selected.size()));
  for (std::size_t j = 0; j < fold.selected.size(); ++j) {
    x(static_cast<Eigen::Index>(j)) = standardized(fold.selected[j]);
  }
  return predict_proba(fold.model, x);
}

}  // namespace

LosoReport nested_loso(const std::vector<SubjectFeatures>& subjects,
                       const EvalConfig& config) {
  if (subjects.size() < 3) {
    throw std::invalid_argument("nested_loso: need at least 3 subjects");
  }
  int positives = 0;
  for (const auto& subject : subjects) positives += subject.label;
  if (positives == 0 || positives == static_cast<int>(subjects.size())) {
    throw std::invalid_argument("nested_loso: both classes required");
  }
  const std::size_t n_controls = subjects.front().controls.size();
  for (const auto& subject : subjects) {
    if (subject.controls.size() != n_controls) {
      throw std::invalid_argument("nested_loso: control arity mismatch");
    }
    if (subject.sequences.size() != subject.sequence_groups.size()) {
      throw std::invalid_argument("nested_loso: sequence group mismatch");
    }
  }

  LosoReport report;
  report.folds.resize(subjects.size());
  parallel_for(subjects.size(), config.jobs, [&](std::size_t held_out) {
    std::vector<const SubjectFeatures*> train;
    train.reserve(subjects.size() - 1);
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      if (i != held_out) train.push_back(&subjects[i]);
    }
    try {
      const FoldModel fold = build_fold(train, config);
      FoldResult& result = report.folds[held_out];
      result.subject_id = subjects[held_out].id;
      result.label = subjects[held_out].label;
      result.probability = predict_held_out(fold, subjects[held_out], config);
      result.lambda = fold.lambda;
      result.p_threshold = fold.threshold;
      result.threshold_escalated = fold.escalated;
      result.warnings = fold.warnings;
      result.selected_features.reserve(fold.selected.size());
      for (Eigen::Index col : fold.selected) {
        result.selected_features.push_back(
            config.feature_names[static_cast<std::size_t>(col)]);
      }
    } catch (const FoldError& error) {
      throw FoldError("fold holding out " + subjects[held_out].id + ": " +
                      error.what());
    }
  });

  std::vector<double> probabilities;
  std::vector<int> labels;
  std::vector<int> predictions;
  probabilities.reserve(subjects.size());
  for (const FoldResult& fold : report.folds) {
    probabilities.push_back(fold.probability);
    labels.push_back(fold.label);
    predictions.push_back(fold.probability >= 0.5 ? 1 : 0);
  }
  report.auroc = auroc(probabilities, labels);
  report.macro_f1 = macro_f1(predictions, labels);
  return report;
}

}  // namespace vtsig
