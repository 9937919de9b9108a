#include "vtsig/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace vtsig {

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  if (x.size() < 3) {
    throw std::invalid_argument("pearson: need at least 3 samples");
  }
  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double sxx = xc.squaredNorm();
  const double syy = yc.squaredNorm();
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("pearson: constant input");
  }
  return xc.dot(yc) / std::sqrt(sxx * syy);
}

double t_two_sided_pvalue(double t, double dof) {
  if (dof <= 0.0) throw std::invalid_argument("t-test: dof must be positive");
  if (!std::isfinite(t)) return 0.0;
  const double t2 = t * t;
  return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t2));
}

double pearson_pvalue(double r, std::size_t n) {
  if (n < 3) throw std::invalid_argument("pearson_pvalue: need n >= 3");
  if (std::abs(r) > 1.0 + 1e-12) {
    throw std::invalid_argument("pearson_pvalue: |r| > 1");
  }
  const double one_minus_r2 = 1.0 - r * r;
  if (one_minus_r2 <= 0.0) return 0.0;
  const double dof = static_cast<double>(n - 2);
  const double t = r * std::sqrt(dof / one_minus_r2);
  return t_two_sided_pvalue(t, dof);
}

std::vector<double> feature_pvalues(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& target,
                                    std::vector<std::string>* warnings) {
  if (X.rows() != target.size()) {
    throw std::invalid_argument("feature_pvalues: row/target mismatch");
  }
  std::vector<double> pvalues(static_cast<std::size_t>(X.cols()), 1.0);
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    try {
      const double r = pearson(X.col(j), target);
      pvalues[static_cast<std::size_t>(j)] =
          pearson_pvalue(r, static_cast<std::size_t>(X.rows()));
    } catch (const std::invalid_argument&) {
      if (warnings != nullptr) {
        warnings->push_back("column " + std::to_string(j) +
                            " skipped: constant or degenerate");
      }
    }
  }
  return pvalues;
}

SelectionResult select_features(const Eigen::MatrixXd& X,
                                const Eigen::VectorXd& target,
                                const SelectionConfig& config) {
  if (config.thresholds.empty()) {
    throw std::invalid_argument("select_features: no thresholds");
  }
  SelectionResult result;
  const std::vector<double> pvalues =
      feature_pvalues(X, target, &result.warnings);

  for (std::size_t t = 0; t < config.thresholds.size(); ++t) {
    const double threshold = config.thresholds[t];
    std::vector<Eigen::Index> picked;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (pvalues[static_cast<std::size_t>(j)] < threshold) picked.push_back(j);
    }
    if (picked.empty()) continue;
    std::stable_sort(picked.begin(), picked.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                       return pvalues[static_cast<std::size_t>(a)] <
                              pvalues[static_cast<std::size_t>(b)];
                     });
    result.indices = std::move(picked);
    result.pvalues.reserve(result.indices.size());
    for (Eigen::Index j : result.indices) {
      result.pvalues.push_back(pvalues[static_cast<std::size_t>(j)]);
    }
    result.threshold = threshold;
    result.escalated = t > 0;
    return result;
  }
  result.threshold = config.thresholds.back();
  result.escalated = config.thresholds.size() > 1;
  return result;  // empty selection: structured outcome for the caller
}

ScreenResult interaction_screen(const Eigen::VectorXd& feature,
                                const Eigen::VectorXd& labels,
                                const std::vector<int>& control_codes,
                                double alpha) {
  const Eigen::Index n = feature.size();
  if (labels.size() != n ||
      static_cast<Eigen::Index>(control_codes.size()) != n) {
    throw std::invalid_argument("interaction_screen: length mismatch");
  }
  ScreenResult result;

  std::set<int> codes(control_codes.begin(), control_codes.end());
  if (codes.size() < 2) {
    result.skipped = true;
    result.note = "control constant in fold";
    return result;
  }
  // One-hot encode levels 2..L against the smallest code as baseline.
  std::vector<int> levels(codes.begin(), codes.end());
  const std::size_t n_dummies = levels.size() - 1;
  const Eigen::Index p = static_cast<Eigen::Index>(2 + 2 * n_dummies);
  if (n <= p) {
    result.skipped = true;
    result.note = "not enough samples for the interaction design";
    return result;
  }

  Eigen::MatrixXd design(n, p);
  design.col(0).setOnes();
  design.col(1) = feature;
  for (std::size_t l = 0; l < n_dummies; ++l) {
    const int code = levels[l + 1];
    for (Eigen::Index i = 0; i < n; ++i) {
      const double on = control_codes[static_cast<std::size_t>(i)] == code;
      design(i, static_cast<Eigen::Index>(2 + l)) = on;
      design(i, static_cast<Eigen::Index>(2 + n_dummies + l)) =
          on * feature(i);
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < p) {
    result.skipped = true;
    result.note = "rank-deficient interaction design";
    return result;
  }
  const Eigen::VectorXd beta = qr.solve(labels);
  const Eigen::VectorXd residuals = labels - design * beta;
  const double dof = static_cast<double>(n - p);
  const double sigma2 = residuals.squaredNorm() / dof;
  if (residuals.squaredNorm() <= 1e-12 * labels.squaredNorm()) {
    // Perfect fit: no residual variance to test against.
    result.skipped = true;
    result.note = "no residual variance in the interaction design";
    return result;
  }
  const Eigen::MatrixXd xtx_inv =
      (design.transpose() * design)
          .ldlt()
          .solve(Eigen::MatrixXd::Identity(p, p));

  result.min_p = 1.0;
  for (std::size_t l = 0; l < n_dummies; ++l) {
    const Eigen::Index j = static_cast<Eigen::Index>(2 + n_dummies + l);
    const double se = std::sqrt(sigma2 * xtx_inv(j, j));
    if (se == 0.0) continue;
    const double t = beta(j) / se;
    result.min_p = std::min(result.min_p, t_two_sided_pvalue(t, dof));
  }
  result.keep = result.min_p >= alpha;
  return result;
}

}  // namespace vtsig
