// Discrete gradient on a regular grid: forward differences with replicate
// (Neumann) boundary, x-differences stacked over y-differences.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace memrx {

struct GradientOperator {
  int rows = 0;  // image rows (y direction)
  int cols = 0;  // image cols (x direction)

  GradientOperator(int rows_, int cols_) : rows(rows_), cols(cols_) {
    if (rows < 1 || cols < 1)
      throw std::invalid_argument("GradientOperator: dimensions must be positive");
  }

  Eigen::Index n_pixels() const { return static_cast<Eigen::Index>(rows) * cols; }

  // R^{N_v} -> R^{2 N_v}; rows at boundary pixels in the difference
  // direction are identically zero.
  Eigen::VectorXd apply(const Eigen::VectorXd& n) const;

  // Exact transpose of apply.
  Eigen::VectorXd adjoint(const Eigen::VectorXd& v) const;

  // Anisotropic total variation |grad n|_1.
  double tv(const Eigen::VectorXd& n) const { return apply(n).lpNorm<1>(); }
};

}  // namespace memrx
