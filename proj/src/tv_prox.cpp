#include "memrx/tv_prox.hpp"

#include <stdexcept>
#include <vector>

namespace memrx {

void tv1d_denoise(const double* y, double* x, int n, double lambda) {
  if (n <= 0) return;
  if (n == 1 || lambda <= 0.0) {
    for (int i = 0; i < n; ++i) x[i] = y[i];
    return;
  }
  int k = 0, k0 = 0, km = 0, kp = 0;
  double vmin = y[0] - lambda, vmax = y[0] + lambda;
  double umin = lambda, umax = -lambda;
  for (;;) {
    if (k == n - 1) {
      if (umin < 0.0) {
        do x[k0++] = vmin; while (k0 <= km);
        k = km = k0;
        vmin = y[k];
        umin = lambda;
        umax = y[k] + lambda - vmax;
      } else if (umax > 0.0) {
        do x[k0++] = vmax; while (k0 <= kp);
        k = kp = k0;
        vmax = y[k];
        umax = -lambda;
        umin = y[k] - lambda - vmin;
      } else {
        vmin += umin / (k - k0 + 1);
        while (k0 <= k) x[k0++] = vmin;
        return;
      }
      if (k == n - 1) {
        // Re-entered on the last sample; resets above leave a single point.
        x[k] = vmin + umin;
        return;
      }
    }
    if (y[k + 1] + umin < vmin - lambda) {
      do x[k0++] = vmin; while (k0 <= km);
      k = km = kp = k0;
      vmin = y[k];
      vmax = y[k] + 2.0 * lambda;
      umin = lambda;
      umax = -lambda;
    } else if (y[k + 1] + umax > vmax + lambda) {
      do x[k0++] = vmax; while (k0 <= kp);
      k = km = kp = k0;
      vmin = y[k] - 2.0 * lambda;
      vmax = y[k];
      umin = lambda;
      umax = -lambda;
    } else {
      ++k;
      umin += y[k] - vmin;
      umax += y[k] - vmax;
      if (umin >= lambda) {
        vmin += (umin - lambda) / (k - k0 + 1);
        umin = lambda;
        km = k;
      }
      if (umax <= -lambda) {
        vmax += (umax + lambda) / (k - k0 + 1);
        umax = -lambda;
        kp = k;
      }
    }
  }
}

namespace {

// Row-wise 1D TV denoising (x-differences), in place over a copy.
Eigen::VectorXd denoise_rows(const Eigen::VectorXd& y, int rows, int cols, double lambda) {
  Eigen::VectorXd x(y.size());
  for (int r = 0; r < rows; ++r)
    tv1d_denoise(y.data() + static_cast<Eigen::Index>(r) * cols,
                 x.data() + static_cast<Eigen::Index>(r) * cols, cols, lambda);
  return x;
}

// Column-wise 1D TV denoising (y-differences).
Eigen::VectorXd denoise_cols(const Eigen::VectorXd& y, int rows, int cols, double lambda) {
  Eigen::VectorXd x(y.size());
  std::vector<double> col(rows), out(rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) col[r] = y(static_cast<Eigen::Index>(r) * cols + c);
    tv1d_denoise(col.data(), out.data(), rows, lambda);
    for (int r = 0; r < rows; ++r) x(static_cast<Eigen::Index>(r) * cols + c) = out[r];
  }
  return x;
}

Eigen::VectorXd clamp(const Eigen::VectorXd& v, double lo, double hi) {
  return v.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

Eigen::VectorXd tv_box_prox(const Eigen::VectorXd& v, double weight, int rows, int cols,
                            bool box_active, double n_max, int inner_iter) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("tv_box_prox: size does not match grid");
  if (weight < 0.0) throw std::invalid_argument("tv_box_prox: weight must be nonnegative");
  if (box_active && n_max <= 0.0)
    throw std::invalid_argument("tv_box_prox: n_max must be positive");

  if (weight == 0.0) return box_active ? clamp(v, 0.0, n_max) : v;

  // Splitting: A(z) = (1/2)|v-z|^2 + w|Dx z|_1, B(z) = w|Dy z|_1 + i_C.
  // Both proxes are exact: A via row-wise 1D TV of (u+v)/2 at weight w/2,
  // B via column-wise 1D TV at weight w followed by clipping (exact for
  // 1D TV with an interval constraint).
  Eigen::VectorXd u = box_active ? clamp(v, 0.0, n_max) : v;
  Eigen::VectorXd z = u;
  for (int it = 0; it < inner_iter; ++it) {
    const Eigen::VectorXd x = denoise_rows(0.5 * (u + v), rows, cols, 0.5 * weight);
    z = denoise_cols(2.0 * x - u, rows, cols, weight);
    if (box_active) z = clamp(z, 0.0, n_max);
    u += z - x;
  }
  return z;
}

}  // namespace memrx
