#include "memrx/solvers.hpp"

#include "memrx/leadfield.hpp"
#include "memrx/tv_prox.hpp"

#include <Eigen/Cholesky>
#include <chrono>

namespace memrx {

SolverMethod solver_method_from_string(const std::string& name) {
  if (name == "tikhonov") return SolverMethod::Tikhonov;
  if (name == "douglas_rachford") return SolverMethod::DouglasRachford;
  if (name == "forward_backward") return SolverMethod::ForwardBackward;
  throw std::invalid_argument("unknown solver method: " + name);
}

std::string to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::Tikhonov: return "tikhonov";
    case SolverMethod::DouglasRachford: return "douglas_rachford";
    case SolverMethod::ForwardBackward: return "forward_backward";
  }
  throw std::invalid_argument("unknown solver method");
}

namespace {

Eigen::LLT<Eigen::MatrixXd> shifted_gram_factor(const Eigen::MatrixXd& op, double mu) {
  Eigen::MatrixXd gram = op.transpose() * op;
  gram.diagonal().array() += mu;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "Cholesky factorization of M^T M + mu I failed; mu too small for "
        "conditioning at working precision");
  return llt;
}

double objective(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                 const GradientOperator& grad, double alpha, const Eigen::VectorXd& n) {
  return 0.5 * (op * n - data).squaredNorm() + alpha * grad.tv(n);
}

double box_violation(const Eigen::VectorXd& z, bool box_active, double n_max) {
  if (!box_active) return 0.0;
  double v = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    v = std::max(v, std::max(-z(i), z(i) - n_max));
  return v;
}

void check_dims(const Eigen::MatrixXd& op, const Eigen::VectorXd& data, int rows, int cols) {
  if (op.cols() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("solver: image dimensions do not match operator");
  if (op.rows() != data.size())
    throw std::invalid_argument("solver: data length does not match operator");
}

}  // namespace

Eigen::VectorXd quadratic_tikhonov(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                   double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("quadratic_tikhonov: mu must be positive");
  if (op.rows() != data.size())
    throw std::invalid_argument("quadratic_tikhonov: dimension mismatch");
  return shifted_gram_factor(op, mu).solve(op.transpose() * data);
}

ReconResult douglas_rachford_solve(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                   const SolverConfig& config, int rows, int cols) {
  config.validate();
  check_dims(op, data, rows, cols);
  const auto t0 = std::chrono::steady_clock::now();

  const GradientOperator grad(rows, cols);
  const auto llt = shifted_gram_factor(op, config.mu);
  const Eigen::VectorXd mty = op.transpose() * data;
  const double tv_weight = config.alpha / config.mu;

  ReconResult res;
  res.config = config;
  res.rows = rows;
  res.cols = cols;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(op.cols());
  Eigen::VectorXd n_prev;
  Eigen::VectorXd n, z_tilde;
  for (int k = 1; k <= config.n_iter; ++k) {
    n = llt.solve(mty + config.mu * z);
    const Eigen::VectorXd reflected = 2.0 * n - z;
    if (config.alpha == 0.0 && !config.box_active)
      z_tilde = reflected;  // prox of the zero functional
    else
      z_tilde = tv_box_prox(reflected, tv_weight, rows, cols, config.box_active,
                            config.n_max, config.inner_iter);
    z += config.s * (z_tilde - n);

    if (!n.allFinite() || !z.allFinite())
      throw std::runtime_error("douglas_rachford_solve: non-finite iterate at iteration " +
                               std::to_string(k));

    IterationRecord rec;
    rec.iteration = k;
    rec.objective = objective(op, data, grad, config.alpha, n);
    rec.relative_change =
        (k == 1 || n.norm() == 0.0) ? 0.0 : (n - n_prev).norm() / n.norm();
    rec.feasibility_violation = box_violation(z_tilde, config.box_active, config.n_max);
    res.trace.push_back(rec);
    n_prev = n;
    if (config.tolerance > 0.0 && k > 1 && rec.relative_change < config.tolerance) break;
  }
  res.reconstruction = z_tilde;
  res.n_final = n;
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

ReconResult forward_backward_solve(const Eigen::MatrixXd& op, const Eigen::VectorXd& data,
                                   const SolverConfig& config, int rows, int cols) {
  config.validate();
  check_dims(op, data, rows, cols);
  if (spectral_norm(op, 1e-6, 1000) > 1.0 + 1e-6)
    throw std::invalid_argument("forward_backward_solve: operator norm must be <= 1");
  const auto t0 = std::chrono::steady_clock::now();

  const GradientOperator grad(rows, cols);
  ReconResult res;
  res.config = config;
  res.rows = rows;
  res.cols = cols;

  Eigen::VectorXd n = Eigen::VectorXd::Zero(op.cols());
  Eigen::VectorXd n_prev;
  for (int k = 1; k <= config.n_iter; ++k) {
    const Eigen::VectorXd z = n - op.transpose() * (op * n - data);
    if (config.alpha == 0.0 && !config.box_active)
      n = z;  // Landweber step
    else
      n = tv_box_prox(z, config.alpha, rows, cols, config.box_active, config.n_max,
                      config.inner_iter);

    if (!n.allFinite())
      throw std::runtime_error("forward_backward_solve: non-finite iterate at iteration " +
                               std::to_string(k));

    IterationRecord rec;
    rec.iteration = k;
    rec.objective = objective(op, data, grad, config.alpha, n);
    rec.relative_change =
        (k == 1 || n.norm() == 0.0) ? 0.0 : (n - n_prev).norm() / n.norm();
    rec.feasibility_violation = box_violation(n, config.box_active, config.n_max);
    res.trace.push_back(rec);
    n_prev = n;
    if (config.tolerance > 0.0 && k > 1 && rec.relative_change < config.tolerance) break;
  }
  res.reconstruction = n;
  res.n_final = n;
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace memrx
