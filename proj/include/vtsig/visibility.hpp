#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "vtsig/signature.hpp"

namespace vtsig {

// One interview's turn blocks after the visibility transform, concatenated
// into a single (d+1)-dimensional path. Each block is (turn frames + 2)
// points long and ends at the zero vector; the binary coordinate occupies
// the last column and is 1 everywhere except a block's final two points.
struct VisibilityPath {
  std::size_t base_dim = 0;
  PathMatrix points;
  std::vector<std::size_t> turn_boundaries;
};

/// Visibility transform of one turn: appends the binary coordinate c and two
/// terminal time steps, (ap_1(x_1), ..., ap_1(x_n), ap_0(x_n), 0).
/// Input n x d, output (n+2) x (d+1).
Eigen::MatrixXd visibility_transform(const Eigen::MatrixXd& seq);

/// Concatenates the per-turn transformed blocks in chronological order into
/// one interview-level path.
VisibilityPath assemble_interview_path(
    const std::vector<Eigen::MatrixXd>& turns);

/// Truncated signature of the assembled interview path; output length
/// sig_dim(d+1, level).
SignatureVector vt_signature(const std::vector<Eigen::MatrixXd>& turns,
                             std::size_t level = 3);

}  // namespace vtsig
