#include "vtsig/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace vtsig {

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

double logreg_objective(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        double lambda, const Eigen::VectorXd& weights,
                        double bias) {
  const Eigen::Index n = X.rows();
  const Eigen::VectorXd z =
      (X * weights).array() + bias;
  double nll = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    nll += softplus(z(i)) - y(i) * z(i);
  }
  return nll / static_cast<double>(n) +
         0.5 * lambda * weights.squaredNorm();
}

Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& y, double lambda,
                                const Eigen::VectorXd& weights, double bias) {
  const Eigen::Index n = X.rows();
  Eigen::VectorXd p(n);
  const Eigen::VectorXd z = (X * weights).array() + bias;
  for (Eigen::Index i = 0; i < n; ++i) p(i) = sigmoid(z(i));
  const Eigen::VectorXd diff = (p - y) / static_cast<double>(n);
  Eigen::VectorXd grad(weights.size() + 1);
  grad.head(weights.size()) = X.transpose() * diff + lambda * weights;
  grad(weights.size()) = diff.sum();
  return grad;
}

LogRegModel fit_logreg_l2(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          double lambda) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (n < 2) throw std::invalid_argument("fit_logreg_l2: need >= 2 samples");
  if (y.size() != n) throw std::invalid_argument("fit_logreg_l2: y mismatch");
  if (lambda <= 0.0) {
    throw std::invalid_argument("fit_logreg_l2: lambda must be > 0");
  }
  const double positives = y.sum();
  if (positives <= 0.0 || positives >= static_cast<double>(n)) {
    throw std::invalid_argument("fit_logreg_l2: single-class input");
  }

  constexpr int kMaxIterations = 200;
  constexpr double kGradTol = 1e-9;
  // The invariant guaranteed to callers; exits that hit numerical precision
  // before kGradTol still have to satisfy it.
  const double grad_bound = 1e-8 * std::max(1.0, static_cast<double>(n));
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(k + 1);  // [w; b]

  LogRegModel model;
  model.lambda = lambda;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const Eigen::VectorXd w = theta.head(k);
    const double b = theta(k);
    const Eigen::VectorXd grad = logreg_gradient(X, y, lambda, w, b);
    model.grad_norm = grad.norm();
    model.iterations = iter;
    if (model.grad_norm < kGradTol) {
      model.weights = w;
      model.bias = b;
      return model;
    }

    const Eigen::VectorXd z = (X * w).array() + b;
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigmoid(z(i));
      s(i) = p * (1.0 - p);
    }
    Eigen::MatrixXd hessian(k + 1, k + 1);
    const Eigen::MatrixXd xs = X.transpose() * s.asDiagonal();
    hessian.topLeftCorner(k, k) =
        xs * X / static_cast<double>(n) +
        lambda * Eigen::MatrixXd::Identity(k, k);
    hessian.topRightCorner(k, 1) = xs.rowwise().sum() / static_cast<double>(n);
    hessian.bottomLeftCorner(1, k) = hessian.topRightCorner(k, 1).transpose();
    hessian(k, k) = s.sum() / static_cast<double>(n);
    // Saturated probabilities drive the (unpenalized) bias curvature to
    // zero; a bit of diagonal damping keeps the factorization usable.
    hessian.diagonal().array() += 1e-12;

    Eigen::VectorXd step = hessian.ldlt().solve(-grad);
    if (!step.allFinite()) {
      throw std::runtime_error("fit_logreg_l2: singular Newton system");
    }

    // Backtracking line search on the penalized objective.
    const double j0 = logreg_objective(X, y, lambda, w, b);
    const double slope = grad.dot(step);
    double t = 1.0;
    while (t > 1e-10) {
      const Eigen::VectorXd cand = theta + t * step;
      const double j1 =
          logreg_objective(X, y, lambda, cand.head(k), cand(k));
      if (j1 <= j0 + 1e-4 * t * slope) break;
      t *= 0.5;
    }
    if (t <= 1e-10) {
      // The objective cannot be improved in double precision. Accept only
      // when the gradient already satisfies the contract bound.
      if (model.grad_norm < grad_bound) {
        model.weights = w;
        model.bias = b;
        return model;
      }
      throw std::runtime_error("fit_logreg_l2: line search failed (|grad| = " +
                               std::to_string(model.grad_norm) + ")");
    }
    theta += t * step;
  }
  if (model.grad_norm < grad_bound) {
    model.weights = theta.head(k);
    model.bias = theta(k);
    return model;
  }
  throw std::runtime_error(
      "fit_logreg_l2: no convergence after 200 iterations (|grad| = " +
      std::to_string(model.grad_norm) + ")");
}

double predict_proba(const LogRegModel& model, const Eigen::VectorXd& x) {
  double z = model.weights.dot(x) + model.bias;
  // Clamp so the probability stays strictly inside (0, 1) in double
  // precision.
  z = std::clamp(z, -35.0, 35.0);
  return sigmoid(z);
}

double auroc(const std::vector<double>& scores,
             const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw std::invalid_argument("auroc: bad input lengths");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + 1) +
                             static_cast<double>(j)) / 2.0;  // 1-based
    for (std::size_t m = i; m < j; ++m) {
      if (labels[order[m]] == 1) {
        rank_sum_pos += mid_rank;
        ++n_pos;
      } else {
        ++n_neg;
      }
    }
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("auroc: needs both classes");
  }
  const double u = rank_sum_pos -
                   static_cast<double>(n_pos) *
                       (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double macro_f1(const std::vector<int>& predicted,
                const std::vector<int>& labels) {
  if (predicted.size() != labels.size() || predicted.empty()) {
    throw std::invalid_argument("macro_f1: bad input lengths");
  }
  double sum = 0.0;
  int classes = 0;
  for (int cls : {0, 1}) {
    std::size_t tp = 0, fp = 0, fn = 0, members = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const bool is_cls = labels[i] == cls;
      const bool pred_cls = predicted[i] == cls;
      members += is_cls;
      tp += is_cls && pred_cls;
      fp += !is_cls && pred_cls;
      fn += is_cls && !pred_cls;
    }
    if (members == 0) continue;  // class absent: skipped, not zeroed
    const double precision =
        tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                    : 0.0;
    const double recall =
        tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                    : 0.0;
    const double f1 = precision + recall > 0.0
                          ? 2.0 * precision * recall / (precision + recall)
                          : 0.0;
    sum += f1;
    ++classes;
  }
  return classes > 0 ? sum / classes : 0.0;
}

std::vector<double> late_fusion(
    const std::vector<std::vector<double>>& probability_lists) {
  if (probability_lists.size() < 2) {
    throw std::invalid_argument("late_fusion: need >= 2 probability lists");
  }
  const std::size_t n = probability_lists.front().size();
  for (const auto& list : probability_lists) {
    if (list.size() != n) {
      throw std::invalid_argument("late_fusion: misaligned subject sets");
    }
  }
  std::vector<double> fused(n, 0.0);
  for (const auto& list : probability_lists) {
    for (std::size_t i = 0; i < n; ++i) fused[i] += list[i];
  }
  for (double& v : fused) v /= static_cast<double>(probability_lists.size());
  return fused;
}

}  // namespace vtsig
