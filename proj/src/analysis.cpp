#include "memrx/analysis.hpp"

#include "memrx/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace memrx {

MetricsReport evaluate(const ConcentrationImage& truth, const ConcentrationImage& recon) {
  if (truth.values.size() != recon.values.size() ||
      truth.grid.n_per_side != recon.grid.n_per_side)
    throw std::invalid_argument("evaluate: images on different grids");
  const double truth_norm = truth.values.norm();
  if (truth_norm == 0.0) throw std::invalid_argument("evaluate: truth image is zero");

  MetricsReport rep;
  const double err = (truth.values - recon.values).norm();
  rep.relative_rmse = err / truth_norm;
  rep.snr_db = err == 0.0 ? kSnrCapDb
                          : std::min(kSnrCapDb, 20.0 * std::log10(truth_norm / err));

  const Eigen::VectorXd t = truth.values.array() - truth.values.mean();
  const Eigen::VectorXd r = recon.values.array() - recon.values.mean();
  const double denom = t.norm() * r.norm();
  if (denom > 0.0) rep.pearson = std::clamp(t.dot(r) / denom, -1.0, 1.0);
  return rep;
}

std::vector<LCurvePoint> l_curve(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                 const std::vector<double>& mu_grid) {
  if (mu_grid.size() < 3) throw std::invalid_argument("l_curve: need at least 3 mu values");
  if (!std::is_sorted(mu_grid.begin(), mu_grid.end()))
    throw std::invalid_argument("l_curve: mu_grid must be sorted ascending");
  std::vector<LCurvePoint> points;
  for (double mu : mu_grid) {
    LCurvePoint p;
    p.mu = mu;
    try {
      const Eigen::VectorXd n = quadratic_tikhonov(op, data, mu);
      p.log_residual = std::log10((op * n - data).squaredNorm());
      p.log_solution_norm = std::log10(n.norm());
    } catch (const std::exception&) {
      p.ok = false;  // point flagged, sweep continues
    }
    points.push_back(p);
  }
  return points;
}

Eigen::VectorXd singular_spectrum(const Eigen::MatrixXd& m) {
  if (m.size() == 0) throw std::invalid_argument("singular_spectrum: empty matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues();  // Eigen returns them descending
}

double k_term_error(const Eigen::VectorXd& x, int k) {
  if (k < 0) throw std::invalid_argument("k_term_error: negative k");
  std::vector<double> mags(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) mags[i] = std::abs(x(i));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double tail = 0.0;
  for (std::size_t i = k; i < mags.size(); ++i) tail += mags[i];
  return tail;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double rip_estimate(const Eigen::MatrixXd& m, int k) {
  const int cols = static_cast<int>(m.cols());
  if (k < 1 || k > std::min(12, cols))
    throw std::invalid_argument("rip_estimate: k out of the exhaustive regime");
  if (binomial(cols, k) > 1e6)
    throw std::invalid_argument("rip_estimate: combinatorial budget exceeded");

  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  double delta = 0.0;
  Eigen::MatrixXd sub(m.rows(), k);
  for (;;) {
    for (int i = 0; i < k; ++i) sub.col(i) = m.col(idx[i]);
    const Eigen::MatrixXd gram = sub.transpose() * sub;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    delta = std::max(delta, std::max(1.0 - lo, hi - 1.0));
    // Next combination in lexicographic order.
    int i = k - 1;
    while (i >= 0 && idx[i] == cols - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return delta;
}

}  // namespace memrx
