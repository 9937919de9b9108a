#include "vtsig/signature.hpp"

#include <doctest.h>

#include "test_util.hpp"

using namespace vtsig;

TEST_CASE("sig_dim counts truncated tensor coefficients") {
  CHECK(sig_dim(1, 3) == 3);
  CHECK(sig_dim(7, 3) == 399);
  CHECK(sig_dim(8, 3) == 584);
  CHECK(sig_dim(14, 3) == 2954);
  CHECK(sig_dim(13, 3) == 2379);
  CHECK_THROWS_AS(sig_dim(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(sig_dim(3, 0), std::invalid_argument);
}

TEST_CASE("multi-index flat addressing") {
  const std::size_t d = 3;
  CHECK(multi_index_to_flat(std::vector<std::size_t>{1}, d) == 0);
  CHECK(multi_index_to_flat(std::vector<std::size_t>{3, 1}, d) == 9);
  CHECK(multi_index_to_flat(std::vector<std::size_t>{2, 1, 3}, d) == 23);
  CHECK_THROWS_AS(multi_index_to_flat(std::vector<std::size_t>{4}, d),
                  std::invalid_argument);
  CHECK_THROWS_AS(multi_index_to_flat(std::vector<std::size_t>{0}, d),
                  std::invalid_argument);

  SUBCASE("bijective against its inverse over all k <= 4, d <= 3") {
    for (std::size_t dim = 1; dim <= 3; ++dim) {
      const std::size_t total = sig_dim(dim, 4);
      for (std::size_t pos = 0; pos < total; ++pos) {
        const auto indices = flat_to_multi_index(pos, dim);
        CHECK(multi_index_to_flat(indices, dim) == pos);
      }
    }
  }
}

TEST_CASE("render_term matches the report notation") {
  const std::vector<std::string> names = {"apq", "logE", "c"};
  CHECK(render_term(std::vector<std::size_t>{3, 1, 2}, names) ==
        "(c, apq, logE)");
  CHECK(render_term(std::vector<std::size_t>{1}, names) == "(apq)");
}

TEST_CASE("segment_signature is the truncated tensor exponential") {
  SUBCASE("1d increment") {
    Eigen::VectorXd inc(1);
    inc << 2.0;
    const auto sig = segment_signature(inc, 3);
    REQUIRE(sig.coeffs.size() == 3);
    CHECK(sig.coeffs[0] == doctest::Approx(2.0));
    CHECK(sig.coeffs[1] == doctest::Approx(2.0));
    CHECK(sig.coeffs[2] == doctest::Approx(4.0 / 3.0));
  }
  SUBCASE("zero increment gives the zero signature") {
    Eigen::VectorXd inc(2);
    inc << 0.0, 0.0;
    const auto sig = segment_signature(inc, 3);
    for (double v : sig.coeffs) CHECK(v == 0.0);
  }
  SUBCASE("level-2 block is the halved outer product") {
    Eigen::VectorXd inc(2);
    inc << 1.0, -1.0;
    const auto sig = segment_signature(inc, 2);
    CHECK(sig.coeffs[0] == doctest::Approx(1.0));
    CHECK(sig.coeffs[1] == doctest::Approx(-1.0));
    CHECK(sig.at({1, 1}) == doctest::Approx(0.5));
    CHECK(sig.at({1, 2}) == doctest::Approx(-0.5));
    CHECK(sig.at({2, 1}) == doctest::Approx(-0.5));
    CHECK(sig.at({2, 2}) == doctest::Approx(0.5));
  }
}

TEST_CASE("chen_product") {
  Rng rng(11);

  SUBCASE("zero signature is the identity element") {
    Eigen::VectorXd inc(2);
    inc << 0.7, -0.3;
    const auto sig = segment_signature(inc, 3);
    const auto zero = SignatureVector::zero(2, 3);
    const auto left = chen_product(sig, zero);
    const auto right = chen_product(zero, sig);
    for (std::size_t i = 0; i < sig.coeffs.size(); ++i) {
      CHECK(left.coeffs[i] == doctest::Approx(sig.coeffs[i]));
      CHECK(right.coeffs[i] == doctest::Approx(sig.coeffs[i]));
    }
  }

  SUBCASE("collinear increments compose like exponentials") {
    Eigen::VectorXd inc(3);
    inc << 0.4, -1.2, 0.9;
    const auto one = segment_signature(inc, 4);
    const auto twice = chen_product(one, one);
    const auto direct = segment_signature((2.0 * inc).eval(), 4);
    for (std::size_t i = 0; i < direct.coeffs.size(); ++i) {
      CHECK(twice.coeffs[i] ==
            doctest::Approx(direct.coeffs[i]).epsilon(1e-12));
    }
  }

  SUBCASE("L-shaped path, exact level-2 areas") {
    Eigen::VectorXd e1(2), e2(2);
    e1 << 1.0, 0.0;
    e2 << 0.0, 1.0;
    const auto sig =
        chen_product(segment_signature(e1, 2), segment_signature(e2, 2));
    CHECK(sig.at({1}) == doctest::Approx(1.0));
    CHECK(sig.at({2}) == doctest::Approx(1.0));
    CHECK(sig.at({1, 2}) == doctest::Approx(1.0));
    CHECK(sig.at({2, 1}) == doctest::Approx(0.0));
    CHECK(sig.at({1, 1}) == doctest::Approx(0.5));
    CHECK(sig.at({2, 2}) == doctest::Approx(0.5));

    // Cross-checked against the independent integration oracle.
    Eigen::MatrixXd points(3, 2);
    points << 0, 0, 1, 0, 1, 1;
    const auto oracle = brute_force_signature(points, 2, 256);
    for (std::size_t i = 0; i < sig.coeffs.size(); ++i) {
      CHECK(sig.coeffs[i] == doctest::Approx(oracle.coeffs[i]).epsilon(1e-9));
    }
  }

  SUBCASE("rejects mismatched operands") {
    CHECK_THROWS_AS(
        chen_product(SignatureVector::zero(2, 3), SignatureVector::zero(3, 3)),
        std::invalid_argument);
    CHECK_THROWS_AS(
        chen_product(SignatureVector::zero(2, 3), SignatureVector::zero(2, 2)),
        std::invalid_argument);
  }
}

TEST_CASE("path_signature") {
  SUBCASE("single segment matches the segment exponential") {
    Eigen::MatrixXd points(2, 1);
    points << 0.0, 2.0;
    const auto sig = path_signature(points, 3);
    CHECK(sig.coeffs[0] == doctest::Approx(2.0));
    CHECK(sig.coeffs[1] == doctest::Approx(2.0));
    CHECK(sig.coeffs[2] == doctest::Approx(4.0 / 3.0));
  }
  SUBCASE("constant path has the zero signature") {
    Eigen::MatrixXd points(3, 2);
    points << 0.4, -1.0, 0.4, -1.0, 0.4, -1.0;
    const auto sig = path_signature(points, 3);
    for (double v : sig.coeffs) CHECK(v == 0.0);
  }
  SUBCASE("single point path is valid and zero") {
    Eigen::MatrixXd points(1, 3);
    points << 1.0, 2.0, 3.0;
    const auto sig = path_signature(points, 2);
    for (double v : sig.coeffs) CHECK(v == 0.0);
  }
  SUBCASE("two-segment 2d path matches the oracle") {
    Eigen::MatrixXd points(3, 2);
    points << 0, 0, 1, 0, 1, 1;
    const auto sig = path_signature(points, 3);
    const auto oracle = brute_force_signature(points, 3, 4096);
    CHECK(test::relative_error(sig.coeffs, oracle.coeffs) < 1e-6);
  }
  SUBCASE("rejects empty input") {
    CHECK_THROWS_AS(path_signature(Eigen::MatrixXd(0, 2), 3),
                    std::invalid_argument);
  }
}

TEST_CASE("brute_force_signature") {
  Rng rng(23);

  SUBCASE("level 1 telescopes for any subdivision count") {
    Eigen::MatrixXd points(2, 1);
    points << 0.3, 1.7;
    for (std::size_t subdivisions : {1u, 3u, 64u}) {
      const auto sig = brute_force_signature(points, 1, subdivisions);
      CHECK(sig.coeffs[0] == doctest::Approx(1.4).epsilon(1e-14));
    }
  }

  SUBCASE("refinement converges to the exact signature") {
    const Eigen::MatrixXd points = test::random_path(rng, 3, 2);
    const auto exact = path_signature(points, 3);
    const auto coarse = brute_force_signature(points, 3, 2);
    const auto fine = brute_force_signature(points, 3, 4096);
    const double coarse_err = test::relative_error(coarse.coeffs, exact.coeffs);
    const double fine_err = test::relative_error(fine.coeffs, exact.coeffs);
    CHECK(fine_err < 1e-6);
    CHECK(coarse_err > fine_err);
  }

  SUBCASE("level 1 equals endpoint difference exactly") {
    const Eigen::MatrixXd points = test::random_path(rng, 7, 3);
    const auto sig = brute_force_signature(points, 1, 8);
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(sig.coeffs[static_cast<std::size_t>(j)] ==
            doctest::Approx(points(6, j) - points(0, j)).epsilon(1e-13));
    }
  }
}

TEST_CASE("oracle equivalence on seeded random paths") {
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t dim = 1 + rng.below(4);
    const std::size_t n_points = 2 + rng.below(9);
    const std::size_t level = 1 + rng.below(4);
    const Eigen::MatrixXd points = test::random_path(rng, n_points, dim);
    const auto sig = path_signature(points, level);
    const auto oracle = brute_force_signature(points, level, 4096);
    CHECK(test::relative_error(sig.coeffs, oracle.coeffs) < 1e-6);
  }
}

TEST_CASE("Chen identity over concatenated random paths") {
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const Eigen::MatrixXd a = test::random_path(rng, 2 + rng.below(5), dim);
    Eigen::MatrixXd b = test::random_path(rng, 2 + rng.below(5), dim);
    b.row(0) = a.row(a.rows() - 1);  // share the junction point

    Eigen::MatrixXd joined(a.rows() + b.rows() - 1, dim);
    joined.topRows(a.rows()) = a;
    joined.bottomRows(b.rows() - 1) = b.bottomRows(b.rows() - 1);

    const auto whole = path_signature(joined, 4);
    const auto product =
        chen_product(path_signature(a, 4), path_signature(b, 4));
    CHECK(test::relative_error(whole.coeffs, product.coeffs) < 1e-12);
  }
}

TEST_CASE("translation invariance") {
  Rng rng(303);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const Eigen::MatrixXd points = test::random_path(rng, 6, dim);
    Eigen::RowVectorXd shift(static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j < shift.size(); ++j) {
      shift(j) = rng.uniform(-5.0, 5.0);
    }
    const Eigen::MatrixXd shifted = points.rowwise() + shift;
    const auto base = path_signature(points, 3);
    const auto moved = path_signature(shifted, 3);
    CHECK(test::relative_error(moved.coeffs, base.coeffs) < 1e-12);
  }
}

TEST_CASE("midpoint insertion is a no-op") {
  Rng rng(404);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const Eigen::MatrixXd points = test::random_path(rng, 5, dim);
    const std::size_t seg = rng.below(4);

    Eigen::MatrixXd refined(points.rows() + 1, points.cols());
    for (Eigen::Index i = 0, at = 0; i < points.rows(); ++i, ++at) {
      refined.row(at) = points.row(i);
      if (static_cast<std::size_t>(i) == seg) {
        ++at;
        refined.row(at) = 0.5 * (points.row(i) + points.row(i + 1));
      }
    }
    const auto base = path_signature(points, 4);
    const auto split = path_signature(refined, 4);
    CHECK(test::relative_error(split.coeffs, base.coeffs) < 1e-12);
  }
}

TEST_CASE("level-1 block telescopes exactly") {
  Rng rng(505);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd points = test::random_path(rng, 9, 3);
    const auto sig = path_signature(points, 2);
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(sig.coeffs[static_cast<std::size_t>(j)] ==
            points(8, j) - points(0, j));
    }
  }
}
