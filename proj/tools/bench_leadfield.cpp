// Benchmark: OpenMP lead field assembly against the serial reference.
#include "memrx/leadfield.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

using Clock = std::chrono::steady_clock;

int main(int argc, char** argv) {
  int grid = argc > 1 ? std::atoi(argv[1]) : 40;
  memrx::GeometryConfig cfg = memrx::desk_scale_geometry_config();
  cfg.grid.n_per_side = grid;
  const memrx::Geometry g = memrx::build_geometry(cfg);
  std::printf("grid %dx%d, %d sensors, %d coils -> %dx%d matrix\n", grid, grid,
              g.n_sensors(), g.n_coils(), g.n_coils() * g.n_sensors(),
              g.grid.n_voxels());

  auto t0 = Clock::now();
  const Eigen::MatrixXd serial = memrx::assemble_lead_field_raw(g, false);
  const double t_serial = std::chrono::duration<double>(Clock::now() - t0).count();

  t0 = Clock::now();
  const Eigen::MatrixXd parallel = memrx::assemble_lead_field_raw(g, true);
  const double t_parallel = std::chrono::duration<double>(Clock::now() - t0).count();

  const double max_diff = (serial - parallel).cwiseAbs().maxCoeff();
#ifdef _OPENMP
  std::printf("threads:  %d\n", omp_get_max_threads());
#else
  std::printf("threads:  1 (OpenMP disabled)\n");
#endif
  std::printf("serial:   %.3f s\n", t_serial);
  std::printf("parallel: %.3f s  (speedup %.2fx)\n", t_parallel, t_serial / t_parallel);
  std::printf("max |serial - parallel| = %g\n", max_diff);
  return max_diff == 0.0 ? 0 : 1;
}
