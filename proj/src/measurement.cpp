#include "memrx/measurement.hpp"

#include "memrx/random.hpp"

namespace memrx {

Eigen::VectorXd add_noise(const Eigen::VectorXd& clean, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db)) return clean;
  if (!(snr_db > 0.0)) throw std::invalid_argument("add_noise: snr_db must be positive");
  const double clean_norm = clean.norm();
  if (clean_norm == 0.0)
    throw std::invalid_argument("add_noise: clean signal is zero, SNR undefined");
  Rng rng(seed);
  Eigen::VectorXd xi = rng.gaussian_vector(clean.size());
  const double xi_norm = xi.norm();
  if (xi_norm == 0.0) throw std::runtime_error("add_noise: degenerate noise draw");
  // Exact rescaling: 20 log10(|clean| / |xi|) == snr_db.
  xi *= clean_norm * std::pow(10.0, -snr_db / 20.0) / xi_norm;
  return clean + xi;
}

MeasurementSet simulate_data(const LeadField& lead_field, const ConcentrationImage& n,
                             double snr_db, std::uint64_t seed) {
  n.validate();
  if (lead_field.matrix.cols() != n.values.size())
    throw std::invalid_argument("simulate_data: image does not match lead field grid");
  MeasurementSet ms;
  ms.values = add_noise(lead_field.matrix * n.values, snr_db, seed);
  ms.noise_snr_db = snr_db;
  ms.seed = seed;
  ms.layout = MeasurementLayout::Full;
  ms.n_sensors = lead_field.n_sensors;
  ms.n_blocks = lead_field.n_coils;
  ms.check_shape();
  return ms;
}

}  // namespace memrx
