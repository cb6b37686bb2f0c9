#include "memrx/leadfield.hpp"

#include "memrx/field.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace memrx {

double spectral_norm(const Eigen::MatrixXd& m, double rel_tol, int max_iter) {
  if (m.size() == 0) throw std::invalid_argument("spectral_norm: empty matrix");
  const bool tall = m.rows() >= m.cols();
  const Eigen::Index n = tall ? m.cols() : m.rows();
  // Block power iteration with Rayleigh-Ritz extraction; the block absorbs
  // clustered top singular values that stall a single-vector iteration.
  const Eigen::Index block = std::min<Eigen::Index>(16, n);
  Eigen::MatrixXd v(n, block);
  std::mt19937_64 gen(0x5eed5eed5eed5eedull);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      v(i, j) = static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
  v = Eigen::HouseholderQR<Eigen::MatrixXd>(v).householderQ() *
      Eigen::MatrixXd::Identity(n, block);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd w;
    if (tall) w = m.transpose() * (m * v);
    else w = m * (m.transpose() * v);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v.transpose() * w);
    const double next = es.eigenvalues().maxCoeff();
    if (next <= 0.0) return 0.0;
    v = Eigen::HouseholderQR<Eigen::MatrixXd>(w).householderQ() *
        Eigen::MatrixXd::Identity(n, block);
    if (it > 0 && std::abs(next - lambda) <= rel_tol * next) return std::sqrt(next);
    lambda = next;
  }
  return std::sqrt(lambda);
}

namespace {

void fill_coil_block(const Geometry& g, int c, Eigen::MatrixXd& out, Eigen::Index row0) {
  const int n_s = g.n_sensors();
  const int n_v = g.grid.n_voxels();
  for (int v = 0; v < n_v; ++v) {
    const Vec3 rv = g.grid.voxel_center(v);
    const Vec3 h = coil_field(g.coils[c], rv);
    for (int s = 0; s < n_s; ++s)
      out(row0 + s, v) = dipole_kernel_entry(g.sensors[s], rv, h);
  }
}

}  // namespace

Eigen::MatrixXd assemble_coil_block(const Geometry& geometry, int coil_index) {
  Eigen::MatrixXd block(geometry.n_sensors(), geometry.grid.n_voxels());
  fill_coil_block(geometry, coil_index, block, 0);
  return block;
}

Eigen::MatrixXd assemble_lead_field_raw(const Geometry& geometry, bool parallel) {
  geometry.validate();
  const int n_c = geometry.n_coils();
  const int n_s = geometry.n_sensors();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n_c) * n_s, geometry.grid.n_voxels());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_c; ++c)
      fill_coil_block(geometry, c, m, static_cast<Eigen::Index>(c) * n_s);
  } else {
    for (int c = 0; c < n_c; ++c)
      fill_coil_block(geometry, c, m, static_cast<Eigen::Index>(c) * n_s);
  }
  return m;
}

LeadField assemble_lead_field(const Geometry& geometry, bool parallel) {
  LeadField lf;
  lf.matrix = assemble_lead_field_raw(geometry, parallel);
  lf.scale = spectral_norm(lf.matrix);
  if (lf.scale <= 0.0) throw std::runtime_error("assemble_lead_field: zero operator");
  lf.matrix /= lf.scale;
  lf.n_sensors = geometry.n_sensors();
  lf.n_coils = geometry.n_coils();
  return lf;
}

}  // namespace memrx
