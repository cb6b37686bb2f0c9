// Quantitative evaluation: error metrics, L-curve, singular spectrum,
// k-term approximation error and exhaustive RIP constants.
#pragma once

#include "memrx/phantom.hpp"

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace memrx {

// SNR reported for a perfect reconstruction (finite sentinel, keeps
// reports sortable).
inline constexpr double kSnrCapDb = 300.0;

struct MetricsReport {
  double relative_rmse = 0.0;
  double snr_db = 0.0;
  std::optional<double> pearson;  // missing when either input is constant
  std::string phantom;
  std::string method;
  int m = 0;
  std::string scheme;
};

MetricsReport evaluate(const ConcentrationImage& truth, const ConcentrationImage& recon);

struct LCurvePoint {
  double mu = 0.0;
  double log_residual = 0.0;       // log10 of the squared residual
  double log_solution_norm = 0.0;  // log10 of the solution norm
  bool ok = true;
};

std::vector<LCurvePoint> l_curve(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                 const std::vector<double>& mu_grid);

// Full singular value list, descending.
Eigen::VectorXd singular_spectrum(const Eigen::MatrixXd& m);

// sigma_k(x): l1 norm of everything but the k largest magnitudes.
double k_term_error(const Eigen::VectorXd& x, int k);

// Exact delta_k by enumeration of all k-column submatrices. Requires
// k <= min(12, cols) and C(cols, k) <= 1e6.
double rip_estimate(const Eigen::MatrixXd& m, int k);

}  // namespace memrx
