// Proximal map of anisotropic TV plus a box constraint, computed by
// Douglas-Rachford splitting over the two difference directions with exact
// 1D TV inner solves.
#pragma once

#include <Eigen/Dense>

namespace memrx {

// Exact 1D total variation denoising (Condat's direct algorithm):
// argmin_x (1/2)|y - x|^2 + lambda * sum |x_{i+1} - x_i|.
void tv1d_denoise(const double* y, double* x, int n, double lambda);

// Approximate minimizer of
//   (1/2)|v - z|^2 + weight * |grad z|_1 (+ i_[0,n_max] if box_active)
// on a rows x cols grid; with box_active the output lies in [0, n_max]
// exactly. Runs a fixed number of outer DR iterations.
Eigen::VectorXd tv_box_prox(const Eigen::VectorXd& v, double weight, int rows, int cols,
                            bool box_active, double n_max, int inner_iter);

}  // namespace memrx
