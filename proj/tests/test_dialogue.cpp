#include "vtsig/dialogue.hpp"

#include <doctest.h>

using namespace vtsig;

namespace {

TurnRecord turn(Speaker speaker, double start, double end, int words = 10,
                std::vector<std::pair<double, double>> voiced = {}) {
  TurnRecord record;
  record.speaker = speaker;
  record.start_s = start;
  record.end_s = end;
  record.word_count = words;
  record.voiced_segments =
      voiced.empty() ? std::vector<std::pair<double, double>>{{start, end}}
                     : std::move(voiced);
  return record;
}

constexpr auto P = Speaker::kParticipant;
constexpr auto I = Speaker::kInterviewer;

}  // namespace

TEST_CASE("single participant turn baseline") {
  const Eigen::MatrixXd rows =
      dialogue_features({turn(P, 0.0, 10.0, 20)}, P);
  REQUIRE(rows.rows() == 1);
  REQUIRE(rows.cols() == 13);
  CHECK(rows(0, 0) == 10.0);   // TL
  CHECK(rows(0, 1) == 2.0);    // WPS
  CHECK(rows(0, 2) == 0.0);    // TSO
  CHECK(rows(0, 3) == 0.0);    // THO
  CHECK(rows(0, 4) == 1.0);    // n_consec
  CHECK(rows(0, 5) == 0.0);    // n_OVL
  CHECK(rows(0, 6) == 0.0);    // OVL_dur
  CHECK(rows(0, 7) == 1.0);    // RFC_t
  CHECK(rows(0, 8) == 1.0);    // RFC_n
  for (int c = 9; c < 13; ++c) CHECK(rows(0, c) == 0.0);  // pauses
}

TEST_CASE("turn switch offset") {
  SUBCASE("gap after the interviewer") {
    const Eigen::MatrixXd rows =
        dialogue_features({turn(I, 0.0, 5.0), turn(P, 6.0, 10.0)}, P);
    CHECK(rows(0, 2) == doctest::Approx(1.0));
  }
  SUBCASE("interruption is negative, with overlap counted") {
    const Eigen::MatrixXd rows =
        dialogue_features({turn(I, 0.0, 5.0), turn(P, 4.0, 8.0)}, P);
    CHECK(rows(0, 2) == doctest::Approx(-1.0));  // TSO
    CHECK(rows(0, 5) == 1.0);                    // n_OVL
    CHECK(rows(0, 6) == doctest::Approx(1.0));   // OVL_dur
  }
}

TEST_CASE("consecutive runs and turn hold offset") {
  const std::vector<TurnRecord> turns = {
      turn(I, 0.0, 3.0), turn(P, 3.5, 6.5), turn(P, 7.0, 10.0),
      turn(I, 10.5, 13.0), turn(P, 13.5, 16.5)};
  const Eigen::MatrixXd rows = dialogue_features(turns, P);
  REQUIRE(rows.rows() == 3);
  CHECK(rows(0, 4) == 1.0);                    // run restarts
  CHECK(rows(1, 4) == 2.0);
  CHECK(rows(2, 4) == 1.0);
  CHECK(rows(0, 3) == 0.0);                    // previous turn other speaker
  CHECK(rows(1, 3) == doctest::Approx(0.5));   // hold within the run
  CHECK(rows(2, 3) == 0.0);
  // THO defined only within a run; TSO for the second turn still points at
  // the most recent interviewer turn.
  CHECK(rows(1, 2) == doctest::Approx(4.0));   // 7.0 - 3.0
}

TEST_CASE("relative floor control accumulates through the dialogue") {
  const std::vector<TurnRecord> turns = {turn(P, 0.0, 4.0), turn(I, 4.0, 6.0),
                                         turn(P, 6.0, 10.0)};
  const Eigen::MatrixXd rows = dialogue_features(turns, P);
  CHECK(rows(0, 7) == doctest::Approx(1.0));        // 4 / 4
  CHECK(rows(1, 7) == doctest::Approx(8.0 / 10.0)); // (4+4) / (4+2+4)
  CHECK(rows(0, 8) == doctest::Approx(1.0));        // 1 / 1
  CHECK(rows(1, 8) == doctest::Approx(2.0 / 3.0));  // 2 of 3 turns
}

TEST_CASE("pause features split at the 500 ms boundary") {
  // Gaps: 0.3 (short), 0.5 (short, boundary inclusive), 0.8 (long).
  const Eigen::MatrixXd rows = dialogue_features(
      {turn(P, 0.0, 10.0, 20,
            {{0.0, 2.0}, {2.3, 4.0}, {4.5, 6.0}, {6.8, 10.0}})},
      P);
  CHECK(rows(0, 9) == 2.0);                      // n_SP
  CHECK(rows(0, 10) == doctest::Approx(0.4));    // SP_m
  CHECK(rows(0, 11) == 1.0);                     // n_LP
  CHECK(rows(0, 12) == doctest::Approx(0.8));    // LP_m
}

TEST_CASE("pause counts match the voiced-segment identity") {
  const std::vector<std::pair<double, double>> voiced = {
      {0.0, 1.0}, {1.2, 2.0}, {2.9, 4.0}, {4.2, 5.5}};
  const Eigen::MatrixXd rows =
      dialogue_features({turn(P, 0.0, 5.5, 12, voiced)}, P);
  CHECK(rows(0, 9) + rows(0, 11) == doctest::Approx(voiced.size() - 1));
}

TEST_CASE("time-shift invariance") {
  const std::vector<TurnRecord> base = {
      turn(I, 0.0, 3.0), turn(P, 3.2, 7.2, 9, {{3.2, 5.0}, {5.4, 7.2}}),
      turn(P, 7.5, 10.5)};
  std::vector<TurnRecord> shifted = base;
  for (auto& record : shifted) {
    record.start_s += 1000.0;
    record.end_s += 1000.0;
    for (auto& seg : record.voiced_segments) {
      seg.first += 1000.0;
      seg.second += 1000.0;
    }
  }
  CHECK(dialogue_features(base, P) == dialogue_features(shifted, P));
}

TEST_CASE("row count equals surviving target turns") {
  const std::vector<TurnRecord> turns = {turn(I, 0.0, 3.0), turn(P, 3.5, 6.0),
                                         turn(I, 6.5, 9.0), turn(P, 9.5, 12.0)};
  CHECK(dialogue_features(turns, P).rows() == 2);
  CHECK(dialogue_features(turns, I).rows() == 2);
  CHECK(dialogue_features_interleaved(turns).rows() == 4);
}

TEST_CASE("interleaved rows use each turn's own speaker") {
  const std::vector<TurnRecord> turns = {turn(I, 0.0, 3.0), turn(P, 3.5, 6.5)};
  const Eigen::MatrixXd both = dialogue_features_interleaved(turns);
  const Eigen::MatrixXd iv = dialogue_features(turns, I);
  const Eigen::MatrixXd pt = dialogue_features(turns, P);
  CHECK(both.row(0) == iv.row(0));
  CHECK(both.row(1) == pt.row(0));
}

TEST_CASE("filter_short_turns") {
  std::size_t removed = 0;
  const auto kept = filter_short_turns(
      {turn(P, 0.0, 1.9), turn(P, 2.0, 4.0), turn(P, 5.0, 6.5)}, 2.0,
      &removed);
  REQUIRE(kept.size() == 1);          // 1.9 s and 1.5 s removed
  CHECK(removed == 2);
  CHECK(kept[0].end_s == 4.0);        // exactly 2.0 s is kept
}

TEST_CASE("validation rejects malformed inputs") {
  CHECK_THROWS_AS(dialogue_features({turn(P, 5.0, 5.0)}, P),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      dialogue_features({turn(P, 5.0, 8.0), turn(P, 1.0, 3.0)}, P),
      std::invalid_argument);
  CHECK_THROWS_AS(
      dialogue_features({turn(P, 0.0, 5.0, 10, {{0.0, 3.0}, {2.0, 5.0}})}, P),
      std::invalid_argument);
  CHECK_THROWS_AS(
      dialogue_features({turn(P, 0.0, 5.0, 10, {{0.0, 6.0}})}, P),
      std::invalid_argument);
  CHECK_THROWS_AS(dialogue_features({turn(I, 0.0, 5.0)}, P),
                  std::invalid_argument);
}
