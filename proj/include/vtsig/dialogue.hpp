#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace vtsig {

enum class Speaker { kParticipant, kInterviewer };

std::string to_string(Speaker speaker);
Speaker speaker_from_string(const std::string& s);

// One speaker turn's timing metadata. Voiced segments are the intra-turn
// speech regions (ordered, non-overlapping, contained in [start_s, end_s]);
// gaps between them are the pauses.
struct TurnRecord {
  Speaker speaker = Speaker::kParticipant;
  double start_s = 0.0;
  double end_s = 0.0;
  int word_count = 0;
  std::vector<std::pair<double, double>> voiced_segments;
};

// The 13 per-turn turn-taking features, in output order. Short/long pause
// boundary is 500 ms.
inline constexpr std::array<const char*, 13> kDialogueFeatureNames = {
    "TL",    "WPS",   "TSO",   "THO",  "n_consec", "n_OVL", "OVL_dur",
    "RFC_t", "RFC_n", "n_SP",  "SP_m", "n_LP",     "LP_m"};

inline constexpr double kPauseBoundaryS = 0.5;

/// Removes turns shorter than min_s. `removed`, when given, receives the
/// count of dropped turns.
std::vector<TurnRecord> filter_short_turns(std::vector<TurnRecord> turns,
                                           double min_s = 2.0,
                                           std::size_t* removed = nullptr);

/// Validates the turn list (ordering, durations, voiced segments). Throws
/// std::invalid_argument with a description on the first violation.
void validate_turns(const std::vector<TurnRecord>& turns);

/// One 13-dimensional row per target-speaker turn, in chronological order.
Eigen::MatrixXd dialogue_features(const std::vector<TurnRecord>& turns,
                                  Speaker target);

/// One row per turn (any speaker), each computed with that turn's own
/// speaker as target; used for the "both" speaker configuration.
Eigen::MatrixXd dialogue_features_interleaved(
    const std::vector<TurnRecord>& turns);

}  // namespace vtsig
