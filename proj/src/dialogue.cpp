#include "vtsig/dialogue.hpp"

#include <algorithm>
#include <stdexcept>

namespace vtsig {

namespace {

struct PauseStats {
  double n_short = 0.0, mean_short = 0.0;
  double n_long = 0.0, mean_long = 0.0;
};

PauseStats pause_stats(const TurnRecord& turn) {
  PauseStats stats;
  double sum_short = 0.0, sum_long = 0.0;
  for (std::size_t i = 1; i < turn.voiced_segments.size(); ++i) {
    const double gap =
        turn.voiced_segments[i].first - turn.voiced_segments[i - 1].second;
    if (gap > kPauseBoundaryS) {
      stats.n_long += 1.0;
      sum_long += gap;
    } else if (gap > 0.0) {
      stats.n_short += 1.0;
      sum_short += gap;
    }
  }
  if (stats.n_short > 0.0) stats.mean_short = sum_short / stats.n_short;
  if (stats.n_long > 0.0) stats.mean_long = sum_long / stats.n_long;
  return stats;
}

// Feature row for turns[i] with `target` as the tracked speaker. cum_* are
// running sums over turns[0..i].
Eigen::RowVectorXd turn_row(const std::vector<TurnRecord>& turns,
                            std::size_t i, Speaker target,
                            double cum_target_time, double cum_total_time,
                            std::size_t cum_target_count) {
  const TurnRecord& turn = turns[i];
  const double duration = turn.end_s - turn.start_s;

  // Most recent other-speaker turn before this one.
  double tso = 0.0;
  for (std::size_t j = i; j-- > 0;) {
    if (turns[j].speaker != target) {
      tso = turn.start_s - turns[j].end_s;
      break;
    }
  }

  // Previous same-speaker turn, only within a consecutive run.
  double tho = 0.0;
  if (i > 0 && turns[i - 1].speaker == target) {
    tho = turn.start_s - turns[i - 1].end_s;
  }

  double n_consec = 1.0;
  for (std::size_t j = i; j-- > 0 && turns[j].speaker == target;) {
    n_consec += 1.0;
  }

  double n_ovl = 0.0, ovl_dur = 0.0;
  for (const TurnRecord& other : turns) {
    if (other.speaker == target) continue;
    const double overlap = std::min(turn.end_s, other.end_s) -
                           std::max(turn.start_s, other.start_s);
    if (overlap > 0.0) {
      n_ovl += 1.0;
      ovl_dur += overlap;
    }
  }

  const PauseStats pauses = pause_stats(turn);

  Eigen::RowVectorXd row(13);
  row(0) = duration;
  row(1) = static_cast<double>(turn.word_count) / duration;
  row(2) = tso;
  row(3) = tho;
  row(4) = n_consec;
  row(5) = n_ovl;
  row(6) = ovl_dur;
  row(7) = cum_target_time / cum_total_time;
  row(8) = static_cast<double>(cum_target_count) / static_cast<double>(i + 1);
  row(9) = pauses.n_short;
  row(10) = pauses.mean_short;
  row(11) = pauses.n_long;
  row(12) = pauses.mean_long;
  return row;
}

Eigen::MatrixXd feature_rows(const std::vector<TurnRecord>& turns,
                             bool per_turn_target, Speaker target) {
  validate_turns(turns);
  // Cumulative speech time per speaker, updated turn by turn.
  double cum_time[2] = {0.0, 0.0};
  std::size_t cum_count[2] = {0, 0};
  std::vector<Eigen::RowVectorXd> rows;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const std::size_t s = turns[i].speaker == Speaker::kParticipant ? 0 : 1;
    cum_time[s] += turns[i].end_s - turns[i].start_s;
    cum_count[s] += 1;
    const Speaker row_target = per_turn_target ? turns[i].speaker : target;
    if (turns[i].speaker != row_target) continue;
    const std::size_t t = row_target == Speaker::kParticipant ? 0 : 1;
    rows.push_back(turn_row(turns, i, row_target, cum_time[t],
                            cum_time[0] + cum_time[1], cum_count[t]));
  }
  if (rows.empty()) {
    throw std::invalid_argument("no turns for the requested speaker");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), 13);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = rows[i];
  }
  return out;
}

}  // namespace

std::string to_string(Speaker speaker) {
  return speaker == Speaker::kParticipant ? "participant" : "interviewer";
}

Speaker speaker_from_string(const std::string& s) {
  if (s == "participant") return Speaker::kParticipant;
  if (s == "interviewer") return Speaker::kInterviewer;
  throw std::invalid_argument("unknown speaker: " + s);
}

std::vector<TurnRecord> filter_short_turns(std::vector<TurnRecord> turns,
                                           double min_s,
                                           std::size_t* removed) {
  const auto keep = [min_s](const TurnRecord& t) {
    return t.end_s - t.start_s >= min_s;
  };
  const std::size_t before = turns.size();
  std::erase_if(turns, [&](const TurnRecord& t) { return !keep(t); });
  if (removed != nullptr) *removed = before - turns.size();
  return turns;
}

void validate_turns(const std::vector<TurnRecord>& turns) {
  for (std::size_t i = 0; i < turns.size(); ++i) {
    const TurnRecord& turn = turns[i];
    if (!(turn.end_s > turn.start_s)) {
      throw std::invalid_argument("turn has non-positive duration");
    }
    if (i > 0 && turn.start_s < turns[i - 1].start_s) {
      throw std::invalid_argument("turns are not ordered by start time");
    }
    if (turn.word_count < 0) {
      throw std::invalid_argument("negative word count");
    }
    double prev_end = turn.start_s;
    for (const auto& [seg_start, seg_end] : turn.voiced_segments) {
      if (!(seg_end > seg_start)) {
        throw std::invalid_argument("voiced segment has non-positive length");
      }
      if (seg_start < prev_end) {
        throw std::invalid_argument(
            "voiced segments overlap or precede the turn start");
      }
      if (seg_end > turn.end_s) {
        throw std::invalid_argument("voiced segment extends past the turn");
      }
      prev_end = seg_end;
    }
  }
}

Eigen::MatrixXd dialogue_features(const std::vector<TurnRecord>& turns,
                                  Speaker target) {
  return feature_rows(turns, false, target);
}

Eigen::MatrixXd dialogue_features_interleaved(
    const std::vector<TurnRecord>& turns) {
  return feature_rows(turns, true, Speaker::kParticipant);
}

}  // namespace vtsig
