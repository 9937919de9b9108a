#include "vtsig/signature.hpp"

#include <cmath>
#include <stdexcept>

namespace vtsig {

namespace {

// Per-level powers d, d^2, ..., d^level.
std::vector<std::size_t> level_sizes(std::size_t dim, std::size_t level) {
  std::vector<std::size_t> sizes(level);
  std::size_t p = 1;
  for (std::size_t k = 0; k < level; ++k) {
    p *= dim;
    sizes[k] = p;
  }
  return sizes;
}

using Blocks = std::vector<std::vector<double>>;

Blocks zero_blocks(std::size_t dim, std::size_t level) {
  Blocks blocks(level);
  std::size_t p = 1;
  for (std::size_t k = 0; k < level; ++k) {
    p *= dim;
    blocks[k].assign(p, 0.0);
  }
  return blocks;
}

// blocks[k-1] = delta^{(x)k} / k!
void segment_blocks(const double* delta, std::size_t dim, Blocks& blocks) {
  auto& first = blocks[0];
  for (std::size_t i = 0; i < dim; ++i) first[i] = delta[i];
  for (std::size_t k = 2; k <= blocks.size(); ++k) {
    const auto& prev = blocks[k - 2];
    auto& cur = blocks[k - 1];
    const double scale = 1.0 / static_cast<double>(k);
    std::size_t pos = 0;
    for (double p : prev) {
      const double ps = p * scale;
      for (std::size_t i = 0; i < dim; ++i) cur[pos++] = ps * delta[i];
    }
  }
}

// In-place Chen product: run <- run (x) other. Levels are updated top-down so
// the lower-level blocks of `run` still hold their pre-product values when
// the cross terms are accumulated.
void chen_in_place(Blocks& run, const Blocks& other) {
  const std::size_t level = run.size();
  for (std::size_t lev = level; lev >= 1; --lev) {
    auto& dest = run[lev - 1];
    for (std::size_t alev = lev - 1; alev >= 1; --alev) {
      const auto& a = run[alev - 1];
      const auto& b = other[lev - alev - 1];
      const std::size_t nb = b.size();
      double* d = dest.data();
      for (double av : a) {
        for (std::size_t j = 0; j < nb; ++j) *d++ += av * b[j];
      }
    }
    const auto& b = other[lev - 1];
    for (std::size_t i = 0; i < dest.size(); ++i) dest[i] += b[i];
  }
}

SignatureVector flatten(std::size_t dim, std::size_t level,
                        const Blocks& blocks) {
  SignatureVector sig;
  sig.dim = dim;
  sig.level = level;
  sig.coeffs.reserve(sig_dim(dim, level));
  for (const auto& block : blocks) {
    sig.coeffs.insert(sig.coeffs.end(), block.begin(), block.end());
  }
  return sig;
}

Blocks to_blocks(const SignatureVector& sig) {
  Blocks blocks = zero_blocks(sig.dim, sig.level);
  std::size_t pos = 0;
  for (auto& block : blocks) {
    for (double& v : block) v = sig.coeffs[pos++];
  }
  return blocks;
}

void validate_path(const PathMatrix& points) {
  if (points.rows() < 1) {
    throw std::invalid_argument("path must contain at least one point");
  }
  if (points.cols() < 1) {
    throw std::invalid_argument("path dimension must be at least 1");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("path contains non-finite values");
  }
}

}  // namespace

std::size_t sig_dim(std::size_t dim, std::size_t level) {
  if (dim == 0) throw std::invalid_argument("sig_dim: dim must be >= 1");
  if (level == 0) throw std::invalid_argument("sig_dim: level must be >= 1");
  std::size_t total = 0;
  std::size_t p = 1;
  for (std::size_t k = 0; k < level; ++k) {
    p *= dim;
    total += p;
  }
  return total;
}

std::size_t multi_index_to_flat(std::span<const std::size_t> indices,
                                std::size_t dim) {
  if (indices.empty()) {
    throw std::invalid_argument("multi-index must be non-empty");
  }
  std::size_t offset = indices.size() > 1 ? sig_dim(dim, indices.size() - 1) : 0;
  std::size_t within = 0;
  for (std::size_t idx : indices) {
    if (idx < 1 || idx > dim) {
      throw std::invalid_argument("multi-index entry out of range 1..dim");
    }
    within = within * dim + (idx - 1);
  }
  return offset + within;
}

std::vector<std::size_t> flat_to_multi_index(std::size_t position,
                                             std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("dim must be >= 1");
  std::size_t k = 1;
  std::size_t block = dim;
  std::size_t pos = position;
  while (pos >= block) {
    pos -= block;
    block *= dim;
    ++k;
  }
  std::vector<std::size_t> indices(k);
  for (std::size_t m = k; m >= 1; --m) {
    indices[m - 1] = pos % dim + 1;
    pos /= dim;
  }
  return indices;
}

std::string render_term(std::span<const std::size_t> indices,
                        std::span<const std::string> names) {
  std::string out = "(";
  for (std::size_t m = 0; m < indices.size(); ++m) {
    if (m > 0) out += ", ";
    out += names[indices[m] - 1];
  }
  out += ")";
  return out;
}

SignatureVector SignatureVector::zero(std::size_t dim, std::size_t level) {
  SignatureVector sig;
  sig.dim = dim;
  sig.level = level;
  sig.coeffs.assign(sig_dim(dim, level), 0.0);
  return sig;
}

SignatureVector segment_signature(const Eigen::VectorXd& increment,
                                  std::size_t level) {
  if (increment.size() < 1) {
    throw std::invalid_argument("increment must have dimension >= 1");
  }
  if (!increment.allFinite()) {
    throw std::invalid_argument("increment contains non-finite values");
  }
  const auto dim = static_cast<std::size_t>(increment.size());
  Blocks blocks = zero_blocks(dim, level);
  segment_blocks(increment.data(), dim, blocks);
  return flatten(dim, level, blocks);
}

SignatureVector chen_product(const SignatureVector& a,
                             const SignatureVector& b) {
  if (a.dim != b.dim || a.level != b.level) {
    throw std::invalid_argument("chen_product: dimension/level mismatch");
  }
  Blocks run = to_blocks(a);
  Blocks other = to_blocks(b);
  chen_in_place(run, other);
  return flatten(a.dim, a.level, run);
}

SignatureVector path_signature(const PathMatrix& points, std::size_t level) {
  validate_path(points);
  if (level == 0) throw std::invalid_argument("level must be >= 1");
  const auto dim = static_cast<std::size_t>(points.cols());
  const auto n = static_cast<std::size_t>(points.rows());
  if (n == 1) return SignatureVector::zero(dim, level);

  Blocks run = zero_blocks(dim, level);
  Blocks seg = zero_blocks(dim, level);
  std::vector<double> delta(dim);
  for (std::size_t s = 0; s + 1 < n; ++s) {
    for (std::size_t j = 0; j < dim; ++j) {
      delta[j] = points(static_cast<Eigen::Index>(s + 1),
                        static_cast<Eigen::Index>(j)) -
                 points(static_cast<Eigen::Index>(s),
                        static_cast<Eigen::Index>(j));
    }
    segment_blocks(delta.data(), dim, seg);
    if (s == 0) {
      run = seg;
    } else {
      chen_in_place(run, seg);
    }
  }
  // The level-1 block telescopes to endpoint minus start; set it exactly
  // rather than keeping the accumulated sum of increments.
  for (std::size_t j = 0; j < dim; ++j) {
    run[0][j] = points(static_cast<Eigen::Index>(n - 1),
                       static_cast<Eigen::Index>(j)) -
                points(0, static_cast<Eigen::Index>(j));
  }
  return flatten(dim, level, run);
}

SignatureVector brute_force_signature(const PathMatrix& points,
                                      std::size_t level,
                                      std::size_t subdivisions) {
  validate_path(points);
  if (level == 0) throw std::invalid_argument("level must be >= 1");
  if (subdivisions == 0) {
    throw std::invalid_argument("subdivisions must be >= 1");
  }
  const auto dim = static_cast<std::size_t>(points.cols());
  const auto n = static_cast<std::size_t>(points.rows());
  const std::vector<std::size_t> sizes = level_sizes(dim, level);
  std::vector<std::size_t> offsets(level, 0);
  for (std::size_t k = 1; k < level; ++k) {
    offsets[k] = offsets[k - 1] + sizes[k - 1];
  }

  const std::size_t total = sig_dim(dim, level);
  std::vector<double> running(total, 0.0);
  std::vector<double> before(total, 0.0);
  std::vector<double> delta(dim);

  for (std::size_t s = 0; s + 1 < n; ++s) {
    for (std::size_t j = 0; j < dim; ++j) {
      delta[j] = (points(static_cast<Eigen::Index>(s + 1),
                         static_cast<Eigen::Index>(j)) -
                  points(static_cast<Eigen::Index>(s),
                         static_cast<Eigen::Index>(j))) /
                 static_cast<double>(subdivisions);
    }
    for (std::size_t step = 0; step < subdivisions; ++step) {
      before = running;
      // Level 1: the raw increment.
      for (std::size_t j = 0; j < dim; ++j) running[j] += delta[j];
      // Level k: integrate the level-(k-1) prefix against dX, averaging the
      // prefix over the step.
      for (std::size_t k = 2; k <= level; ++k) {
        const std::size_t off = offsets[k - 1];
        const std::size_t prev_off = offsets[k - 2];
        const std::size_t prev_count = sizes[k - 2];
        for (std::size_t p = 0; p < prev_count; ++p) {
          const double prefix =
              0.5 * (before[prev_off + p] + running[prev_off + p]);
          double* dest = &running[off + p * dim];
          for (std::size_t j = 0; j < dim; ++j) dest[j] += prefix * delta[j];
        }
      }
    }
  }

  SignatureVector sig;
  sig.dim = dim;
  sig.level = level;
  sig.coeffs = std::move(running);
  return sig;
}

}  // namespace vtsig
