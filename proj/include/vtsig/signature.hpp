#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace vtsig {

// A discretized stream, read as the piecewise-linear interpolation through
// its rows. rows = time steps, cols = path dimension d. A single row is a
// valid (constant) path.
using PathMatrix = Eigen::MatrixXd;

/// Number of coefficients in a signature truncated at `level`:
/// d + d^2 + ... + d^level. The level-0 scalar is implicit and not counted.
std::size_t sig_dim(std::size_t dim, std::size_t level);

/// Flat position (zero-based) of a multi-index within the level-major,
/// lexicographic coefficient layout. `indices` are 1-based coordinate
/// indices in 1..dim.
std::size_t multi_index_to_flat(std::span<const std::size_t> indices,
                                std::size_t dim);

/// Inverse of multi_index_to_flat.
std::vector<std::size_t> flat_to_multi_index(std::size_t position,
                                             std::size_t dim);

/// Renders a multi-index as "(name_a, name_b, ...)" given per-coordinate
/// feature names (Table-2-style signature term names).
std::string render_term(std::span<const std::size_t> indices,
                        std::span<const std::string> names);

// Truncated signature coefficients, levels 1..level stored contiguously in
// ascending level, lexicographic within a level.
struct SignatureVector {
  std::size_t dim = 0;
  std::size_t level = 0;
  std::vector<double> coeffs;

  static SignatureVector zero(std::size_t dim, std::size_t level);

  double at(std::span<const std::size_t> indices) const {
    return coeffs[multi_index_to_flat(indices, dim)];
  }
  double at(std::initializer_list<std::size_t> indices) const {
    return at(std::span<const std::size_t>(indices.begin(), indices.size()));
  }
};

/// Signature of a single linear segment: the truncated tensor exponential,
/// level-k block = increment^{(x)k} / k!.
SignatureVector segment_signature(const Eigen::VectorXd& increment,
                                  std::size_t level);

/// Tensor-algebra concatenation product with implicit level-0 scalars 1.
/// Equals the signature of the concatenated path when a and b are path
/// signatures (Chen's identity).
SignatureVector chen_product(const SignatureVector& a,
                             const SignatureVector& b);

/// Exact truncated signature of a piecewise-linear path: left-to-right Chen
/// fold of per-segment exponentials. A single-point path has zero signature.
SignatureVector path_signature(const PathMatrix& points, std::size_t level);

/// Independent numerical oracle: evaluates the iterated integrals directly
/// by refining every segment into `subdivisions` equal steps and running the
/// graded recursion S^{(i_1..i_k)} += avg prefix value * dX^{i_k} per step
/// (trapezoidal in the prefix, second order in the step size). Shares no
/// code with path_signature beyond the coefficient layout.
SignatureVector brute_force_signature(const PathMatrix& points,
                                      std::size_t level,
                                      std::size_t subdivisions);

}  // namespace vtsig
