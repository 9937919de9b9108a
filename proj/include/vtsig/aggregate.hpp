#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vtsig/signature.hpp"

namespace vtsig {

enum class AggregationMethod { kHsf, kSig, kVtSig };
enum class NormalizationMode { kNone, kGlobal, kPerson };

std::string to_string(AggregationMethod method);
std::string to_string(NormalizationMode mode);
AggregationMethod aggregation_from_string(const std::string& s);
NormalizationMode normalization_from_string(const std::string& s);

struct AggregationConfig {
  AggregationMethod method = AggregationMethod::kVtSig;
  std::size_t level = 3;  // signature truncation order
  NormalizationMode normalization = NormalizationMode::kNone;
};

// The 12 per-dimension statistics of the HSF aggregator, in output order.
inline constexpr std::array<const char*, 12> kHsfStatNames = {
    "mean", "std",  "min",      "max",      "range", "median",
    "p25",  "p75",  "skewness", "kurtosis", "slope", "intercept"};

/// Pools all turn frames chronologically and computes the 12 statistics per
/// feature dimension. Output length 12*d, feature-major. A single-frame pool
/// yields std/skewness/kurtosis/slope = 0.
Eigen::VectorXd hsf_aggregate(const std::vector<Eigen::MatrixXd>& turns);

/// Signature of the raw concatenated frames (no visibility transform).
/// Output length sig_dim(d, level).
Eigen::VectorXd sig_aggregate(const std::vector<Eigen::MatrixXd>& turns,
                              std::size_t level);

/// Dispatches to hsf_aggregate / sig_aggregate / vt_signature.
Eigen::VectorXd aggregate_interview(const std::vector<Eigen::MatrixXd>& turns,
                                    const AggregationConfig& config);

/// Feature names for aggregate_interview output: "col_stat" for HSF,
/// "(col_a, col_b)" signature terms for SIG/VT-SIG (VT-SIG appends the
/// binary coordinate name "c").
std::vector<std::string> aggregate_feature_names(
    const std::vector<std::string>& columns, const AggregationConfig& config);

/// Parses a rendered feature name back to its origin. Returns the multi-index
/// (1-based, signature methods) or the column/stat pair encoded as indices
/// (HSF). Empty optional when the name is not a valid term for this config.
std::optional<std::vector<std::size_t>> parse_feature_name(
    const std::string& name, const std::vector<std::string>& columns,
    const AggregationConfig& config);

// Per-dimension pooled mean/std used by Global and Person normalization.
// Zero-variance dimensions are centered and left unscaled.
struct NormStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  std::vector<Eigen::Index> zero_variance;
};

/// Pooled per-dimension statistics over every frame of every listed
/// interview (an interview is a list of turn matrices).
NormStats pooled_norm_stats(
    const std::vector<const std::vector<Eigen::MatrixXd>*>& interviews);

/// Applies (x - mean) / std in place; zero-variance dimensions are centered
/// only.
void apply_norm_stats(std::vector<Eigen::MatrixXd>& turns,
                      const NormStats& stats);

/// Person normalization: z-scores the interview with its own pooled
/// statistics. Returns the stats used (zero_variance lists the warned
/// dimensions).
NormStats person_normalize(std::vector<Eigen::MatrixXd>& turns);

}  // namespace vtsig
