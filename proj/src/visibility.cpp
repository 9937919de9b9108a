#include "vtsig/visibility.hpp"

#include <stdexcept>

namespace vtsig {

Eigen::MatrixXd visibility_transform(const Eigen::MatrixXd& seq) {
  if (seq.rows() < 1) {
    throw std::invalid_argument("visibility_transform: empty sequence");
  }
  const Eigen::Index n = seq.rows();
  const Eigen::Index d = seq.cols();
  Eigen::MatrixXd out(n + 2, d + 1);
  out.block(0, 0, n, d) = seq;
  out.col(d).head(n).setOnes();
  out.row(n).head(d) = seq.row(n - 1);
  out(n, d) = 0.0;
  out.row(n + 1).setZero();
  return out;
}

VisibilityPath assemble_interview_path(
    const std::vector<Eigen::MatrixXd>& turns) {
  if (turns.empty()) {
    throw std::invalid_argument("assemble_interview_path: no turns");
  }
  const Eigen::Index d = turns.front().cols();
  Eigen::Index total = 0;
  for (const auto& turn : turns) {
    if (turn.cols() != d) {
      throw std::invalid_argument(
          "assemble_interview_path: turns disagree on feature dimension");
    }
    total += turn.rows() + 2;
  }

  VisibilityPath path;
  path.base_dim = static_cast<std::size_t>(d);
  path.points.resize(total, d + 1);
  path.turn_boundaries.reserve(turns.size());
  Eigen::Index row = 0;
  for (const auto& turn : turns) {
    path.turn_boundaries.push_back(static_cast<std::size_t>(row));
    const Eigen::MatrixXd block = visibility_transform(turn);
    path.points.block(row, 0, block.rows(), block.cols()) = block;
    row += block.rows();
  }
  return path;
}

SignatureVector vt_signature(const std::vector<Eigen::MatrixXd>& turns,
                             std::size_t level) {
  return path_signature(assemble_interview_path(turns).points, level);
}

}  // namespace vtsig
