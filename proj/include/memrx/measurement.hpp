// Measurement vectors and noisy data simulation.
#pragma once

#include "memrx/leadfield.hpp"
#include "memrx/phantom.hpp"

#include <cstdint>
#include <limits>

namespace memrx {

enum class MeasurementLayout { Full, Compressed };

// Stacked sensor readings: N_c * N_s entries for full data (coil-major
// blocks), m * N_s for compressed data (pattern-major blocks).
struct MeasurementSet {
  Eigen::VectorXd values;
  double noise_snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  MeasurementLayout layout = MeasurementLayout::Full;
  int n_sensors = 0;
  int n_blocks = 0;  // N_c for full, m for compressed

  void check_shape() const {
    if (values.size() != static_cast<Eigen::Index>(n_blocks) * n_sensors)
      throw std::invalid_argument("MeasurementSet: length does not match layout");
  }
};

// b = L n + xi with the noise rescaled so the realized SNR matches snr_db
// exactly. snr_db may be +infinity (noiseless).
MeasurementSet simulate_data(const LeadField& lead_field, const ConcentrationImage& n,
                             double snr_db, std::uint64_t seed);

// Adds exactly calibrated Gaussian noise to an arbitrary clean vector.
Eigen::VectorXd add_noise(const Eigen::VectorXd& clean, double snr_db, std::uint64_t seed);

}  // namespace memrx
