#include "memrx/gradient.hpp"

namespace memrx {

Eigen::VectorXd GradientOperator::apply(const Eigen::VectorXd& n) const {
  const Eigen::Index nv = n_pixels();
  if (n.size() != nv) throw std::invalid_argument("GradientOperator::apply: size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * nv);
  for (int r = 0; r < rows; ++r) {
    const Eigen::Index base = static_cast<Eigen::Index>(r) * cols;
    for (int c = 0; c + 1 < cols; ++c)
      out(base + c) = n(base + c + 1) - n(base + c);
    if (r + 1 < rows)
      for (int c = 0; c < cols; ++c)
        out(nv + base + c) = n(base + cols + c) - n(base + c);
  }
  return out;
}

Eigen::VectorXd GradientOperator::adjoint(const Eigen::VectorXd& v) const {
  const Eigen::Index nv = n_pixels();
  if (v.size() != 2 * nv)
    throw std::invalid_argument("GradientOperator::adjoint: size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nv);
  for (int r = 0; r < rows; ++r) {
    const Eigen::Index base = static_cast<Eigen::Index>(r) * cols;
    for (int c = 0; c + 1 < cols; ++c) {
      out(base + c + 1) += v(base + c);
      out(base + c) -= v(base + c);
    }
    if (r + 1 < rows)
      for (int c = 0; c < cols; ++c) {
        out(base + cols + c) += v(nv + base + c);
        out(base + c) -= v(nv + base + c);
      }
  }
  return out;
}

}  // namespace memrx
