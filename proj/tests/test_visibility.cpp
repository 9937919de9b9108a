#include "vtsig/visibility.hpp"

#include <doctest.h>

#include "test_util.hpp"

using namespace vtsig;

TEST_CASE("visibility_transform appends the binary coordinate and two steps") {
  SUBCASE("single 1d frame") {
    Eigen::MatrixXd seq(1, 1);
    seq << 5.0;
    const Eigen::MatrixXd out = visibility_transform(seq);
    REQUIRE(out.rows() == 3);
    REQUIRE(out.cols() == 2);
    CHECK(out(0, 0) == 5.0);
    CHECK(out(0, 1) == 1.0);
    CHECK(out(1, 0) == 5.0);
    CHECK(out(1, 1) == 0.0);
    CHECK(out(2, 0) == 0.0);
    CHECK(out(2, 1) == 0.0);
  }
  SUBCASE("two 2d frames") {
    Eigen::MatrixXd seq(2, 2);
    seq << 1, 2, 3, 4;
    const Eigen::MatrixXd out = visibility_transform(seq);
    Eigen::MatrixXd expected(4, 3);
    expected << 1, 2, 1, 3, 4, 1, 3, 4, 0, 0, 0, 0;
    CHECK(out == expected);
  }
  SUBCASE("shape contract for arbitrary input") {
    Rng rng(6);
    const Eigen::MatrixXd seq = test::random_path(rng, 7, 4);
    const Eigen::MatrixXd out = visibility_transform(seq);
    CHECK(out.rows() == 9);
    CHECK(out.cols() == 5);
  }
  SUBCASE("rejects the empty sequence") {
    CHECK_THROWS_AS(visibility_transform(Eigen::MatrixXd(0, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("assemble_interview_path") {
  SUBCASE("one turn equals its own transform") {
    Eigen::MatrixXd seq(2, 2);
    seq << 1, 2, 3, 4;
    const VisibilityPath path = assemble_interview_path({seq});
    CHECK(path.points == visibility_transform(seq));
    CHECK(path.turn_boundaries == std::vector<std::size_t>{0});
    CHECK(path.base_dim == 2);
  }
  SUBCASE("two single-frame 1d turns concatenate blockwise") {
    Eigen::MatrixXd a(1, 1), b(1, 1);
    a << 5.0;
    b << 7.0;
    const VisibilityPath path = assemble_interview_path({a, b});
    Eigen::MatrixXd expected(6, 2);
    expected << 5, 1, 5, 0, 0, 0, 7, 1, 7, 0, 0, 0;
    CHECK(path.points == expected);
    CHECK(path.turn_boundaries == std::vector<std::size_t>{0, 3});
  }
  SUBCASE("total length sums turn lengths plus two each") {
    Rng rng(7);
    std::vector<Eigen::MatrixXd> turns;
    std::size_t expected = 0;
    for (std::size_t lengths : {3u, 1u, 5u}) {
      turns.push_back(test::random_path(rng, lengths, 2));
      expected += lengths + 2;
    }
    const VisibilityPath path = assemble_interview_path(turns);
    CHECK(static_cast<std::size_t>(path.points.rows()) == expected);
  }
  SUBCASE("rejects schema mismatch across turns") {
    CHECK_THROWS_AS(
        assemble_interview_path({Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 3)}),
        std::invalid_argument);
  }
}

TEST_CASE("vt_signature single-turn identities") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng.below(3);
    const std::size_t frames = 1 + rng.below(6);
    const Eigen::MatrixXd turn = test::random_path(rng, frames, dim);
    const SignatureVector sig = vt_signature({turn}, 2);
    const std::size_t c_index = dim + 1;

    // (c) telescopes to -1: the binary coordinate starts at 1 and ends at 0.
    CHECK(sig.at({c_index}) == doctest::Approx(-1.0).epsilon(1e-12));

    // (c, i) picks out the final frame's i-th value.
    for (std::size_t i = 1; i <= dim; ++i) {
      CHECK(sig.at({c_index, i}) ==
            doctest::Approx(turn(turn.rows() - 1,
                                 static_cast<Eigen::Index>(i - 1)))
                .epsilon(1e-9));
    }
  }

  SUBCASE("(c, i) validated against the integration oracle") {
    const Eigen::MatrixXd turn = test::random_path(rng, 4, 2);
    const Eigen::MatrixXd lifted = assemble_interview_path({turn}).points;
    const SignatureVector oracle = brute_force_signature(lifted, 2, 2048);
    CHECK(oracle.at({3, 1}) ==
          doctest::Approx(turn(3, 0)).epsilon(1e-6));
    CHECK(oracle.at({3, 2}) ==
          doctest::Approx(turn(3, 1)).epsilon(1e-6));
    CHECK(oracle.at({3}) == doctest::Approx(-1.0).epsilon(1e-9));
  }

  SUBCASE("constant turn: (i) equals minus the constant") {
    Eigen::MatrixXd turn(3, 2);
    turn << 0.4, -1.5, 0.4, -1.5, 0.4, -1.5;
    const SignatureVector sig = vt_signature({turn}, 1);
    CHECK(sig.at({1}) == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(sig.at({2}) == doctest::Approx(1.5).epsilon(1e-12));
  }
}

TEST_CASE("vt_signature output shape") {
  Rng rng(9);
  const Eigen::MatrixXd turn = test::random_path(rng, 5, 7);
  CHECK(vt_signature({turn}, 3).coeffs.size() == sig_dim(8, 3));
  CHECK(vt_signature({turn}, 3).coeffs.size() == 584);
}

TEST_CASE("position sensitivity distinguishes permuted sequences") {
  // Same frame multiset, different final frame: the raw level-1 signature
  // coincides but VT coefficients with leading index c differ.
  Eigen::MatrixXd forward(3, 1), backward(3, 1);
  forward << 1.0, 2.0, 3.0;
  backward << 3.0, 2.0, 1.0;

  const auto raw_f = path_signature(forward, 1);
  const auto raw_b = path_signature(backward, 1);
  CHECK(raw_f.coeffs[0] == doctest::Approx(2.0));
  CHECK(raw_b.coeffs[0] == doctest::Approx(-2.0));  // order-dependent already

  const auto vt_f = vt_signature({forward}, 2);
  const auto vt_b = vt_signature({backward}, 2);
  CHECK(vt_f.at({2, 1}) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(vt_b.at({2, 1}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("shift detection: VT sees translations the raw signature cannot") {
  Rng rng(10);
  const Eigen::MatrixXd turn = test::random_path(rng, 6, 2);
  const Eigen::MatrixXd shifted =
      turn.rowwise() + Eigen::RowVector2d(2.5, -1.0);

  const auto raw = path_signature(turn, 2);
  const auto raw_shifted = path_signature(shifted, 2);
  CHECK(test::relative_error(raw_shifted.coeffs, raw.coeffs) < 1e-12);

  const auto vt = vt_signature({turn}, 2);
  const auto vt_shifted = vt_signature({shifted}, 2);
  CHECK(vt_shifted.at({3, 1}) - vt.at({3, 1}) ==
        doctest::Approx(2.5).epsilon(1e-9));
  CHECK(vt_shifted.at({3, 2}) - vt.at({3, 2}) ==
        doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("vt_signature is bit-deterministic") {
  Rng rng(12);
  std::vector<Eigen::MatrixXd> turns;
  for (int k = 0; k < 4; ++k) turns.push_back(test::random_path(rng, 5, 3));
  const auto a = vt_signature(turns, 3);
  const auto b = vt_signature(turns, 3);
  CHECK(a.coeffs == b.coeffs);
}
