// Reconstruction algorithms: quadratic Tikhonov, Douglas-Rachford splitting
// on the sparse Tikhonov functional, and forward-backward as comparator.
#pragma once

#include "memrx/gradient.hpp"
#include "memrx/phantom.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace memrx {

enum class SolverMethod { Tikhonov, DouglasRachford, ForwardBackward };

SolverMethod solver_method_from_string(const std::string& name);
std::string to_string(SolverMethod method);

struct SolverConfig {
  double mu = 4e-13;       // implicit-step parameter
  double alpha = 1e-14;    // TV weight
  bool box_active = true;  // indicator of [0, n_max] on/off
  double s = 1.0;          // relaxation, in (0, 2)
  double n_max = 1.0;
  int n_iter = 50;
  int inner_iter = 30;     // TV-denoise DR iterations per outer step
  double tolerance = 0.0;  // stagnation threshold on relative iterate change

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("SolverConfig: mu must be positive");
    if (alpha < 0.0) throw std::invalid_argument("SolverConfig: alpha must be nonnegative");
    if (!(s > 0.0 && s < 2.0)) throw std::invalid_argument("SolverConfig: s must be in (0,2)");
    if (n_iter < 1) throw std::invalid_argument("SolverConfig: n_iter must be >= 1");
    if (inner_iter < 1) throw std::invalid_argument("SolverConfig: inner_iter must be >= 1");
    if (box_active && n_max <= 0.0)
      throw std::invalid_argument("SolverConfig: n_max must be positive");
  }
};

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;           // value of the sparse Tikhonov functional at n_k
  double relative_change = 0.0;     // |n_k - n_{k-1}| / |n_k|
  double feasibility_violation = 0.0;  // box violation of z~_k
};

struct ReconResult {
  Eigen::VectorXd reconstruction;  // final z~ (feasible when box is on)
  Eigen::VectorXd n_final;         // final data-fit iterate n_k
  int rows = 0;                    // image dimensions of the unknown
  int cols = 0;
  std::vector<IterationRecord> trace;
  SolverConfig config;
  double wall_time_s = 0.0;

  ConcentrationImage as_image(const GridSpec& grid) const {
    ConcentrationImage img;
    img.grid = grid;
    img.n_max = config.box_active ? config.n_max : std::max(1.0, reconstruction.maxCoeff());
    img.values = reconstruction.cwiseMax(0.0).cwiseMin(img.n_max);
    return img;
  }
};

// (M^T M + mu I)^{-1} M^T b via Cholesky of the shifted Gram matrix.
Eigen::VectorXd quadratic_tikhonov(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                   double mu);

// `rows` x `cols` are the image dimensions of the unknown (rows*cols must
// equal the operator's column count).
ReconResult douglas_rachford_solve(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                   const SolverConfig& config, int rows, int cols);

// Requires spectral norm of `op` <= 1.
ReconResult forward_backward_solve(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                   const SolverConfig& config, int rows, int cols);

}  // namespace memrx
