// Lead field matrix assembly (OpenMP kernel + serial reference) and the
// spectral normalization shared with the CS operator.
#pragma once

#include "memrx/geometry.hpp"

#include <Eigen/Dense>

namespace memrx {

// Dense forward operator, coil-major row blocks, rescaled to spectral norm 1.
// `scale` is the norm of the raw matrix, i.e. raw = scale * matrix.
struct LeadField {
  Eigen::MatrixXd matrix;
  double scale = 1.0;
  int n_sensors = 0;
  int n_coils = 0;
};

// Largest singular value by power iteration on the Gram matrix.
double spectral_norm(const Eigen::MatrixXd& m, double rel_tol = 1e-10,
                     int max_iter = 10000);

// N_s x N_v block for a single coil (unnormalized).
Eigen::MatrixXd assemble_coil_block(const Geometry& geometry, int coil_index);

// Unnormalized (N_c N_s) x N_v matrix; `parallel` switches between the
// OpenMP kernel and the serial reference (identical arithmetic per entry).
Eigen::MatrixXd assemble_lead_field_raw(const Geometry& geometry, bool parallel = true);

LeadField assemble_lead_field(const Geometry& geometry, bool parallel = true);

}  // namespace memrx
