#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtsig/aggregate.hpp"
#include "vtsig/model.hpp"
#include "vtsig/stats.hpp"

namespace vtsig {

// One subject's task label, selection target, control codes and (already
// speaker-selected) turn sequences. `sequence_groups` assigns each sequence
// to a normalization group; all-zero means shared statistics.
struct SubjectFeatures {
  std::string id;
  int label = 0;
  std::optional<double> score;
  std::vector<int> controls;  // one categorical code per control variable
  std::vector<Eigen::MatrixXd> sequences;
  std::vector<int> sequence_groups;
};

struct EvalConfig {
  AggregationConfig aggregation;
  SelectionConfig selection;
  std::vector<double> lambda_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  double interaction_alpha = 0.05;
  std::vector<std::string> feature_names;
  bool use_scores = true;  // select against scores; false = binary label
  int jobs = 1;            // outer-fold parallelism, 0 = hardware threads
};

struct FoldResult {
  std::string subject_id;
  int label = 0;
  double probability = 0.0;
  double lambda = 0.0;
  double p_threshold = 0.0;
  bool threshold_escalated = false;
  std::vector<std::string> selected_features;
  std::vector<std::string> warnings;
};

struct LosoReport {
  std::vector<FoldResult> folds;  // input subject order
  double macro_f1 = 0.0;
  double auroc = 0.0;
};

// A fold that cannot produce a model (empty selection after every threshold,
// failed fit, ...). nested_loso wraps it with the held-out subject id; the
// experiment layer records the configuration as failed.
class FoldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outer leave-one-subject-out loop. Inside each training fold only: Global
/// normalization statistics, feature selection with threshold escalation,
/// interaction screening, and lambda picked from the grid by an inner
/// leave-one-subject-out AUROC; then one fit on the full training fold and a
/// single prediction for the held-out subject. Folds are independent and may
/// run in parallel; results are merged in input order.
LosoReport nested_loso(const std::vector<SubjectFeatures>& subjects,
                       const EvalConfig& config);

}  // namespace vtsig
