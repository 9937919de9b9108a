#include "vtsig/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vtsig/visibility.hpp"

namespace vtsig {

namespace {

Eigen::MatrixXd pool_frames(const std::vector<Eigen::MatrixXd>& turns) {
  if (turns.empty()) {
    throw std::invalid_argument("aggregation requires at least one turn");
  }
  const Eigen::Index d = turns.front().cols();
  Eigen::Index rows = 0;
  for (const auto& turn : turns) {
    if (turn.cols() != d) {
      throw std::invalid_argument("turns disagree on feature dimension");
    }
    if (turn.rows() < 1) {
      throw std::invalid_argument("empty turn sequence");
    }
    rows += turn.rows();
  }
  Eigen::MatrixXd pooled(rows, d);
  Eigen::Index at = 0;
  for (const auto& turn : turns) {
    pooled.block(at, 0, turn.rows(), d) = turn;
    at += turn.rows();
  }
  return pooled;
}

// Linear interpolation between order statistics.
double percentile(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::string to_string(AggregationMethod method) {
  switch (method) {
    case AggregationMethod::kHsf: return "HSF";
    case AggregationMethod::kSig: return "SIG";
    case AggregationMethod::kVtSig: return "VT_SIG";
  }
  return "?";
}

std::string to_string(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::kNone: return "None";
    case NormalizationMode::kGlobal: return "Global";
    case NormalizationMode::kPerson: return "Person";
  }
  return "?";
}

AggregationMethod aggregation_from_string(const std::string& s) {
  if (s == "HSF") return AggregationMethod::kHsf;
  if (s == "SIG") return AggregationMethod::kSig;
  if (s == "VT_SIG" || s == "VT-SIG") return AggregationMethod::kVtSig;
  throw std::invalid_argument("unknown aggregation method: " + s);
}

NormalizationMode normalization_from_string(const std::string& s) {
  if (s == "None") return NormalizationMode::kNone;
  if (s == "Global") return NormalizationMode::kGlobal;
  if (s == "Person") return NormalizationMode::kPerson;
  throw std::invalid_argument("unknown normalization mode: " + s);
}

Eigen::VectorXd hsf_aggregate(const std::vector<Eigen::MatrixXd>& turns) {
  const Eigen::MatrixXd pooled = pool_frames(turns);
  const Eigen::Index n = pooled.rows();
  const Eigen::Index d = pooled.cols();
  const double dn = static_cast<double>(n);

  Eigen::VectorXd out(12 * d);
  std::vector<double> sorted(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto col = pooled.col(j);
    const double mean = col.mean();
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = col(i) - mean;
      const double c2 = c * c;
      m2 += c2;
      m3 += c2 * c;
      m4 += c2 * c2;
    }
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    const double sd = std::sqrt(m2);
    // Population moments; degenerate (constant) input maps to 0.
    const double skewness = m2 > 0.0 ? m3 / (m2 * sd) : 0.0;
    const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

    for (Eigen::Index i = 0; i < n; ++i) {
      sorted[static_cast<std::size_t>(i)] = col(i);
    }
    std::sort(sorted.begin(), sorted.end());
    const double min = sorted.front();
    const double max = sorted.back();

    // Least squares against the 0-based frame index.
    double slope = 0.0;
    if (n > 1) {
      const double tbar = (dn - 1.0) / 2.0;
      double sxy = 0.0, sxx = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double tc = static_cast<double>(i) - tbar;
        sxy += tc * (col(i) - mean);
        sxx += tc * tc;
      }
      slope = sxy / sxx;
    }
    const double intercept = mean - slope * (dn - 1.0) / 2.0;

    double* stats = out.data() + 12 * j;
    stats[0] = mean;
    stats[1] = sd;
    stats[2] = min;
    stats[3] = max;
    stats[4] = max - min;
    stats[5] = percentile(sorted, 0.5);
    stats[6] = percentile(sorted, 0.25);
    stats[7] = percentile(sorted, 0.75);
    stats[8] = skewness;
    stats[9] = kurtosis;
    stats[10] = slope;
    stats[11] = intercept;
  }
  return out;
}

Eigen::VectorXd sig_aggregate(const std::vector<Eigen::MatrixXd>& turns,
                              std::size_t level) {
  const SignatureVector sig = path_signature(pool_frames(turns), level);
  return Eigen::Map<const Eigen::VectorXd>(
      sig.coeffs.data(), static_cast<Eigen::Index>(sig.coeffs.size()));
}

Eigen::VectorXd aggregate_interview(const std::vector<Eigen::MatrixXd>& turns,
                                    const AggregationConfig& config) {
  switch (config.method) {
    case AggregationMethod::kHsf:
      return hsf_aggregate(turns);
    case AggregationMethod::kSig:
      return sig_aggregate(turns, config.level);
    case AggregationMethod::kVtSig: {
      const SignatureVector sig = vt_signature(turns, config.level);
      return Eigen::Map<const Eigen::VectorXd>(
          sig.coeffs.data(), static_cast<Eigen::Index>(sig.coeffs.size()));
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<std::string> aggregate_feature_names(
    const std::vector<std::string>& columns, const AggregationConfig& config) {
  std::vector<std::string> names;
  if (config.method == AggregationMethod::kHsf) {
    names.reserve(columns.size() * kHsfStatNames.size());
    for (const auto& col : columns) {
      for (const char* stat : kHsfStatNames) {
        names.push_back(col + "_" + stat);
      }
    }
    return names;
  }
  std::vector<std::string> coord_names = columns;
  if (config.method == AggregationMethod::kVtSig) coord_names.push_back("c");
  const std::size_t total = sig_dim(coord_names.size(), config.level);
  names.reserve(total);
  for (std::size_t pos = 0; pos < total; ++pos) {
    const auto indices = flat_to_multi_index(pos, coord_names.size());
    names.push_back(render_term(indices, coord_names));
  }
  return names;
}

std::optional<std::vector<std::size_t>> parse_feature_name(
    const std::string& name, const std::vector<std::string>& columns,
    const AggregationConfig& config) {
  if (config.method == AggregationMethod::kHsf) {
    const auto sep = name.rfind('_');
    if (sep == std::string::npos) return std::nullopt;
    const std::string col = name.substr(0, sep);
    const std::string stat = name.substr(sep + 1);
    const auto cit = std::find(columns.begin(), columns.end(), col);
    const auto sit = std::find_if(
        kHsfStatNames.begin(), kHsfStatNames.end(),
        [&](const char* s) { return stat == s; });
    if (cit == columns.end() || sit == kHsfStatNames.end()) return std::nullopt;
    return std::vector<std::size_t>{
        static_cast<std::size_t>(cit - columns.begin()) + 1,
        static_cast<std::size_t>(sit - kHsfStatNames.begin()) + 1};
  }

  std::vector<std::string> coord_names = columns;
  if (config.method == AggregationMethod::kVtSig) coord_names.push_back("c");
  if (name.size() < 3 || name.front() != '(' || name.back() != ')') {
    return std::nullopt;
  }
  std::vector<std::size_t> indices;
  std::size_t at = 1;
  while (at < name.size() - 1) {
    std::size_t end = name.find(", ", at);
    if (end == std::string::npos || end > name.size() - 1) {
      end = name.size() - 1;
    }
    const std::string token = name.substr(at, end - at);
    const auto it = std::find(coord_names.begin(), coord_names.end(), token);
    if (it == coord_names.end()) return std::nullopt;
    indices.push_back(static_cast<std::size_t>(it - coord_names.begin()) + 1);
    at = end == name.size() - 1 ? end : end + 2;
  }
  if (indices.empty() || indices.size() > config.level) return std::nullopt;
  return indices;
}

NormStats pooled_norm_stats(
    const std::vector<const std::vector<Eigen::MatrixXd>*>& interviews) {
  if (interviews.empty()) {
    throw std::invalid_argument("pooled_norm_stats: no interviews");
  }
  Eigen::Index d = -1;
  std::size_t count = 0;
  Eigen::VectorXd sum;
  for (const auto* turns : interviews) {
    for (const auto& turn : *turns) {
      if (d < 0) {
        d = turn.cols();
        sum = Eigen::VectorXd::Zero(d);
      }
      if (turn.cols() != d) {
        throw std::invalid_argument("interviews disagree on dimension");
      }
      sum += turn.colwise().sum().transpose();
      count += static_cast<std::size_t>(turn.rows());
    }
  }
  if (count == 0) throw std::invalid_argument("pooled_norm_stats: no frames");

  NormStats stats;
  stats.mean = sum / static_cast<double>(count);
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(d);
  for (const auto* turns : interviews) {
    for (const auto& turn : *turns) {
      sq += (turn.rowwise() - stats.mean.transpose())
                .array()
                .square()
                .colwise()
                .sum()
                .matrix()
                .transpose();
    }
  }
  stats.std = (sq / static_cast<double>(count)).array().sqrt();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (stats.std(j) == 0.0) stats.zero_variance.push_back(j);
  }
  return stats;
}

void apply_norm_stats(std::vector<Eigen::MatrixXd>& turns,
                      const NormStats& stats) {
  Eigen::VectorXd scale = stats.std;
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (scale(j) == 0.0) scale(j) = 1.0;
  }
  for (auto& turn : turns) {
    turn = (turn.rowwise() - stats.mean.transpose()).array().rowwise() /
           scale.transpose().array();
  }
}

NormStats person_normalize(std::vector<Eigen::MatrixXd>& turns) {
  const NormStats stats = pooled_norm_stats({&turns});
  apply_norm_stats(turns, stats);
  return stats;
}

}  // namespace vtsig
