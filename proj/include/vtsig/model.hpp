#pragma once

#include <Eigen/Dense>
#include <vector>

namespace vtsig {

struct LogRegModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
};

/// Minimizes mean negative log-likelihood + lambda/2 * ||w||^2 (bias
/// unpenalized) by damped Newton iteration from a zero start. Deterministic:
/// identical inputs give identical weights. Throws on single-class input or
/// non-convergence.
LogRegModel fit_logreg_l2(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          double lambda);

/// P(y = 1 | x); strictly inside (0, 1) for finite inputs.
double predict_proba(const LogRegModel& model, const Eigen::VectorXd& x);

/// Analytic gradient of the penalized objective at (weights, bias); exposed
/// so the optimum can be checked against finite differences.
Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y, double lambda,
                                const Eigen::VectorXd& weights, double bias);

/// Penalized objective value (mean NLL + ridge term).
double logreg_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        double lambda, const Eigen::VectorXd& weights,
                        double bias);

/// Probability that a random positive outranks a random negative; ties get
/// half credit. Requires both classes present.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);

/// Unweighted mean of per-class F1 over the classes that have members.
double macro_f1(const std::vector<int>& predicted,
                const std::vector<int>& labels);

/// Unweighted per-subject mean of the aligned probability lists.
std::vector<double> late_fusion(
    const std::vector<std::vector<double>>& probability_lists);

}  // namespace vtsig
