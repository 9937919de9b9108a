#include "vtsig/stats.hpp"

#include <cmath>
#include <doctest.h>

#include "vtsig/rng.hpp"

using namespace vtsig;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

double t_density(double x, double dof) {
  const double ln = std::lgamma((dof + 1.0) / 2.0) - std::lgamma(dof / 2.0) -
                    0.5 * std::log(dof * M_PI) -
                    (dof + 1.0) / 2.0 * std::log1p(x * x / dof);
  return std::exp(ln);
}

// Quadrature oracle for the two-sided t-tail: composite Simpson over the
// density, independent of the incomplete-beta route used in production.
double t_two_sided_quadrature(double t, double dof) {
  const double a = std::abs(t);
  const double b = a + 80.0;  // the remaining tail is negligible
  const int n = 400000;       // even
  const double h = (b - a) / n;
  double sum = t_density(a, dof) + t_density(b, dof);
  for (int i = 1; i < n; ++i) {
    sum += t_density(a + h * i, dof) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return 2.0 * sum * h / 3.0;
}

}  // namespace

TEST_CASE("pearson on hand-computed cases") {
  CHECK(pearson(vec({1, 2, 3}), vec({2, 4, 6})) == doctest::Approx(1.0));
  CHECK(pearson(vec({1, 2, 3}), vec({6, 4, 2})) == doctest::Approx(-1.0));
  CHECK(pearson(vec({1, 2, 3, 4}), vec({1, 3, 2, 4})) ==
        doctest::Approx(0.8).epsilon(1e-12));

  CHECK_THROWS_AS(pearson(vec({1, 2}), vec({3, 4})), std::invalid_argument);
  CHECK_THROWS_AS(pearson(vec({1, 1, 1}), vec({1, 2, 3})),
                  std::invalid_argument);
  CHECK_THROWS_AS(pearson(vec({1, 2, 3}), vec({1, 2})), std::invalid_argument);
}

TEST_CASE("pearson_pvalue") {
  SUBCASE("degenerate limits") {
    CHECK(pearson_pvalue(0.0, 10) == doctest::Approx(1.0));
    CHECK(pearson_pvalue(1.0, 10) == 0.0);
    CHECK(pearson_pvalue(-1.0, 10) == 0.0);
  }
  SUBCASE("matches the quadrature oracle") {
    const double p = pearson_pvalue(0.8, 20);
    const double t = 0.8 * std::sqrt(18.0 / (1.0 - 0.64));
    const double oracle = t_two_sided_quadrature(t, 18.0);
    CHECK(p == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(p == doctest::Approx(2.2e-5).epsilon(0.05));
    for (double r : {0.1, 0.35, 0.6}) {
      const std::size_t n = 25;
      const double tt = r * std::sqrt((n - 2) / (1.0 - r * r));
      CHECK(pearson_pvalue(r, n) ==
            doctest::Approx(t_two_sided_quadrature(tt, n - 2.0))
                .epsilon(1e-6));
    }
  }
  SUBCASE("monotone decreasing in |r| for fixed n") {
    double previous = 1.1;
    for (double r = 0.0; r < 0.99; r += 0.07) {
      const double p = pearson_pvalue(r, 12);
      CHECK(p < previous);
      previous = p;
      CHECK(pearson_pvalue(-r, 12) == doctest::Approx(p));
    }
  }
}

TEST_CASE("select_features") {
  Rng rng(31);
  const Eigen::Index n = 40;

  SUBCASE("a column equal to the target is selected with p = 0") {
    Eigen::MatrixXd X(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = rng.normal();
      X(i, 1) = rng.normal();
      X(i, 2) = rng.normal();
    }
    const Eigen::VectorXd target = X.col(1);
    const SelectionResult result = select_features(X, target, {});
    REQUIRE(!result.indices.empty());
    CHECK(result.indices.front() == 1);
    CHECK(result.pvalues.front() == 0.0);
    CHECK(result.threshold == 0.001);
    CHECK_FALSE(result.escalated);
  }

  SUBCASE("independent noise columns: almost never selected at 0.001") {
    SelectionConfig config;
    config.thresholds = {0.001};
    std::size_t false_hits = 0;
    for (int rep = 0; rep < 100; ++rep) {
      Eigen::MatrixXd X(n, 50);
      Eigen::VectorXd target(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        target(i) = rng.normal();
        for (Eigen::Index j = 0; j < 50; ++j) X(i, j) = rng.normal();
      }
      false_hits += select_features(X, target, config).indices.size();
    }
    CHECK(static_cast<double>(false_hits) / 100.0 < 0.2);
  }

  SUBCASE("escalation tags the threshold actually used") {
    // A moderate correlate: significant at 0.005 but not at 0.001.
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd target(n);
    double r_target = 0.47;  // p ~ 0.002 at n = 40
    for (Eigen::Index i = 0; i < n; ++i) {
      const double shared = rng.normal();
      target(i) = shared;
      X(i, 0) = r_target * shared +
                std::sqrt(1.0 - r_target * r_target) * rng.normal();
      X(i, 1) = rng.normal();
    }
    const double p0 = feature_pvalues(X, target, nullptr)[0];
    REQUIRE(p0 > 0.001);
    REQUIRE(p0 < 0.005);
    const SelectionResult result = select_features(X, target, {});
    CHECK(result.threshold == 0.005);
    CHECK(result.escalated);
    CHECK(result.indices == std::vector<Eigen::Index>{0});
  }

  SUBCASE("constant columns are skipped with a warning") {
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = 4.2;
      X(i, 1) = rng.normal();
      target(i) = X(i, 1);
    }
    const SelectionResult result = select_features(X, target, {});
    CHECK(result.indices == std::vector<Eigen::Index>{1});
    REQUIRE(!result.warnings.empty());
  }

  SUBCASE("selection is invariant to positive column scaling") {
    Eigen::MatrixXd X(n, 6);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      target(i) = rng.normal();
      for (Eigen::Index j = 0; j < 6; ++j) {
        X(i, j) = 0.5 * target(i) + rng.normal();
      }
    }
    const SelectionResult base = select_features(X, target, {});
    Eigen::MatrixXd scaled = X;
    scaled.col(2) *= 1713.0;
    scaled.col(4) *= 1e-6;
    const SelectionResult after = select_features(scaled, target, {});
    CHECK(base.indices == after.indices);
    CHECK(base.threshold == after.threshold);
  }

  SUBCASE("empty selection is a structured outcome") {
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = rng.normal();
      target(i) = rng.normal();
    }
    SelectionConfig config;
    config.thresholds = {1e-12};
    const SelectionResult result = select_features(X, target, config);
    CHECK(result.indices.empty());
  }
}

TEST_CASE("interaction_screen") {
  Rng rng(32);
  const Eigen::Index n = 60;

  SUBCASE("a sign flip across environments is dropped") {
    Eigen::VectorXd feature(n), labels(n);
    std::vector<int> env(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      env[i] = i % 2;
      feature(i) = rng.normal();
      const double effect = env[i] == 0 ? feature(i) : -feature(i);
      labels(i) = effect > 0.0 ? 1.0 : 0.0;
    }
    const ScreenResult result = interaction_screen(feature, labels, env, 0.05);
    CHECK_FALSE(result.skipped);
    CHECK_FALSE(result.keep);
    CHECK(result.min_p < 1e-6);
  }

  SUBCASE("control-independent features are kept at roughly rate 1 - alpha") {
    int drops = 0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
      Eigen::VectorXd feature(n), labels(n);
      std::vector<int> env(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        env[i] = static_cast<int>(rng.below(2));
        feature(i) = rng.normal();
        labels(i) = feature(i) + 0.5 * rng.normal() > 0.0 ? 1.0 : 0.0;
      }
      const ScreenResult result =
          interaction_screen(feature, labels, env, 0.05);
      REQUIRE_FALSE(result.skipped);
      drops += result.keep ? 0 : 1;
    }
    const double rate = static_cast<double>(drops) / reps;
    CHECK(rate < 0.12);
    CHECK(rate > 0.005);
  }

  SUBCASE("constant control skips the screen and keeps the feature") {
    Eigen::VectorXd feature(n), labels(n);
    std::vector<int> env(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      feature(i) = rng.normal();
      labels(i) = i % 2 ? 1.0 : 0.0;
    }
    const ScreenResult result = interaction_screen(feature, labels, env, 0.05);
    CHECK(result.skipped);
    CHECK(result.keep);
  }

  SUBCASE("multi-level controls are one-hot screened") {
    Eigen::VectorXd feature(n), labels(n);
    std::vector<int> interviewer(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      interviewer[i] = static_cast<int>(i % 3);
      feature(i) = rng.normal();
      // The effect flips only for interviewer 2 of 3.
      const double effect =
          interviewer[i] == 2 ? -feature(i) : feature(i);
      labels(i) = effect > 0.0 ? 1.0 : 0.0;
    }
    const ScreenResult result =
        interaction_screen(feature, labels, interviewer, 0.05);
    CHECK_FALSE(result.keep);
  }
}
