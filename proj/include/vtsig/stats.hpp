#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

namespace vtsig {

/// Pearson correlation coefficient. Requires length >= 3 and two
/// non-constant inputs; throws std::invalid_argument otherwise (callers drop
/// constant feature columns).
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Two-sided p-value for a Pearson r observed on n samples, from
/// t = r*sqrt((n-2)/(1-r^2)) against the t distribution with n-2 degrees of
/// freedom. |r| = 1 maps to p = 0.
double pearson_pvalue(double r, std::size_t n);

/// Two-sided tail probability of the t distribution: P(|T| >= |t|) with
/// `dof` degrees of freedom.
double t_two_sided_pvalue(double t, double dof);

struct SelectionConfig {
  // Escalation order; the first threshold that yields a non-empty selection
  // wins.
  std::vector<double> thresholds{0.001, 0.005, 0.01};
};

struct SelectionResult {
  std::vector<Eigen::Index> indices;  // ordered by ascending p-value
  std::vector<double> pvalues;        // aligned with indices
  double threshold = 0.0;             // the threshold actually used
  bool escalated = false;
  std::vector<std::string> warnings;  // skipped constant columns etc.
};

/// p-value per column of X against the target; constant columns get p = 1
/// and a warning appended.
std::vector<double> feature_pvalues(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& target,
                                    std::vector<std::string>* warnings);

/// Correlation-based selection with threshold escalation. Runs strictly on
/// fold-internal data by construction: only the rows it is handed.
SelectionResult select_features(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& target,
                                const SelectionConfig& config);

struct ScreenResult {
  bool keep = true;
  double min_p = 1.0;  // smallest interaction p across control levels
  bool skipped = false;
  std::string note;
};

/// Interaction screen for one feature against one (coded) control variable:
/// OLS of label ~ 1 + f + ctrl + f*ctrl with the control one-hot encoded,
/// two-sided t-test on each interaction coefficient. keep == false when the
/// smallest interaction p is below alpha. Degenerate designs (constant
/// control, rank deficiency, no residual dof) skip the screen.
ScreenResult interaction_screen(const Eigen::VectorXd& feature,
                                const Eigen::VectorXd& labels,
                                const std::vector<int>& control_codes,
                                double alpha = 0.05);

}  // namespace vtsig
