// Compressed-sensing coil activations: pattern matrices, data compression
// and the composed measurement operator.
#pragma once

#include "memrx/leadfield.hpp"
#include "memrx/measurement.hpp"

#include <cstdint>
#include <string>

namespace memrx {

enum class ActivationScheme { Gaussian, Bernoulli, Deterministic };

ActivationScheme activation_scheme_from_string(const std::string& name);
std::string to_string(ActivationScheme scheme);

// m x N_c pattern matrix A; row j weights the contribution of each coil to
// the j-th simultaneous activation.
struct ActivationMatrix {
  Eigen::MatrixXd matrix;
  ActivationScheme scheme = ActivationScheme::Deterministic;
  std::uint64_t seed = 0;

  int m() const { return static_cast<int>(matrix.rows()); }
  int n_coils() const { return static_cast<int>(matrix.cols()); }
};

// (A kron I) L, rescaled to spectral norm 1. Data must be divided by
// `scale` before solving against `matrix`.
struct CsOperator {
  Eigen::MatrixXd matrix;
  double scale = 1.0;
  int n_sensors = 0;
  int m = 0;
};

ActivationMatrix make_activation(ActivationScheme scheme, int m, int n_coils,
                                 std::uint64_t seed);

// y_j = sum_c a_{j,c} b_c on the coil-major block structure.
MeasurementSet compress_data(const MeasurementSet& full, const ActivationMatrix& a);

CsOperator compose_operator(const LeadField& lead, const ActivationMatrix& a);

// Block i of the vector <-> row i of the matrix; mutually inverse.
Eigen::MatrixXd reshape_mat(const Eigen::VectorXd& v, int n_sensors);
Eigen::VectorXd reshape_vec(const Eigen::MatrixXd& x);

}  // namespace memrx
