#include "memrx/sensing.hpp"

#include "memrx/random.hpp"

#include <vector>

namespace memrx {

ActivationScheme activation_scheme_from_string(const std::string& name) {
  if (name == "gaussian") return ActivationScheme::Gaussian;
  if (name == "bernoulli") return ActivationScheme::Bernoulli;
  if (name == "deterministic") return ActivationScheme::Deterministic;
  throw std::invalid_argument("unknown activation scheme: " + name);
}

std::string to_string(ActivationScheme scheme) {
  switch (scheme) {
    case ActivationScheme::Gaussian: return "gaussian";
    case ActivationScheme::Bernoulli: return "bernoulli";
    case ActivationScheme::Deterministic: return "deterministic";
  }
  throw std::invalid_argument("unknown activation scheme");
}

ActivationMatrix make_activation(ActivationScheme scheme, int m, int n_coils,
                                 std::uint64_t seed) {
  if (m < 1 || m > n_coils)
    throw std::invalid_argument("make_activation: need 1 <= m <= n_coils");
  ActivationMatrix a;
  a.scheme = scheme;
  a.seed = seed;
  a.matrix = Eigen::MatrixXd::Zero(m, n_coils);
  switch (scheme) {
    case ActivationScheme::Gaussian: {
      Rng rng(seed);
      for (int j = 0; j < m; ++j)
        for (int c = 0; c < n_coils; ++c) a.matrix(j, c) = rng.gaussian();
      break;
    }
    case ActivationScheme::Bernoulli: {
      Rng rng(seed);
      for (int j = 0; j < m; ++j)
        for (int c = 0; c < n_coils; ++c) a.matrix(j, c) = rng.sign();
      break;
    }
    case ActivationScheme::Deterministic: {
      // Row j selects coil round(j * n_coils / m); collisions advance to the
      // next free index.
      std::vector<bool> used(n_coils, false);
      for (int j = 0; j < m; ++j) {
        int idx = static_cast<int>(std::lround(static_cast<double>(j) * n_coils / m));
        idx = std::min(idx, n_coils - 1);
        while (used[idx]) idx = (idx + 1) % n_coils;
        used[idx] = true;
        a.matrix(j, idx) = 1.0;
      }
      break;
    }
  }
  return a;
}

MeasurementSet compress_data(const MeasurementSet& full, const ActivationMatrix& a) {
  full.check_shape();
  if (full.layout != MeasurementLayout::Full)
    throw std::invalid_argument("compress_data: input must have full layout");
  if (full.n_blocks != a.n_coils())
    throw std::invalid_argument("compress_data: coil count mismatch");
  // Y = A mat(b), row block j of the output = pattern j over all sensors.
  const Eigen::MatrixXd b_mat = reshape_mat(full.values, full.n_sensors);
  MeasurementSet cs;
  cs.values = reshape_vec(a.matrix * b_mat);
  cs.noise_snr_db = full.noise_snr_db;
  cs.seed = full.seed;
  cs.layout = MeasurementLayout::Compressed;
  cs.n_sensors = full.n_sensors;
  cs.n_blocks = a.m();
  return cs;
}

CsOperator compose_operator(const LeadField& lead, const ActivationMatrix& a) {
  if (a.n_coils() != lead.n_coils)
    throw std::invalid_argument("compose_operator: coil count mismatch");
  const int n_s = lead.n_sensors;
  const Eigen::Index n_v = lead.matrix.cols();
  CsOperator op;
  op.n_sensors = n_s;
  op.m = a.m();
  op.matrix.resize(static_cast<Eigen::Index>(a.m()) * n_s, n_v);
  // Block row j = sum_c A(j,c) * (coil block c of L).
  for (int j = 0; j < a.m(); ++j) {
    auto out = op.matrix.middleRows(static_cast<Eigen::Index>(j) * n_s, n_s);
    out.setZero();
    for (int c = 0; c < a.n_coils(); ++c)
      out += a.matrix(j, c) * lead.matrix.middleRows(static_cast<Eigen::Index>(c) * n_s, n_s);
  }
  op.scale = spectral_norm(op.matrix);
  if (op.scale <= 0.0) throw std::runtime_error("compose_operator: zero operator");
  op.matrix /= op.scale;
  return op;
}

Eigen::MatrixXd reshape_mat(const Eigen::VectorXd& v, int n_sensors) {
  if (n_sensors < 1 || v.size() % n_sensors != 0)
    throw std::invalid_argument("reshape_mat: length not divisible by n_sensors");
  const Eigen::Index k = v.size() / n_sensors;
  Eigen::MatrixXd x(k, n_sensors);
  for (Eigen::Index i = 0; i < k; ++i)
    x.row(i) = v.segment(i * n_sensors, n_sensors).transpose();
  return x;
}

Eigen::VectorXd reshape_vec(const Eigen::MatrixXd& x) {
  Eigen::VectorXd v(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    v.segment(i * x.cols(), x.cols()) = x.row(i).transpose();
  return v;
}

}  // namespace memrx
