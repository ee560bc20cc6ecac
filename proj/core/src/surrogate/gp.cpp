#include "rdo/surrogate/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "rdo/errors.hpp"

namespace rdo {

double squared_exponential(std::span<const double> a, std::span<const double> b,
                           const KernelSettings& k) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = (a[i] - b[i]) / k.length_scales[static_cast<Eigen::Index>(i)];
    r2 += t * t;
  }
  return k.signal_variance * std::exp(-0.5 * r2);
}

KernelSettings default_kernel(const Eigen::VectorXd& y, Eigen::Index dimension,
                              double length_scale) {
  KernelSettings k;
  k.length_scales = Eigen::VectorXd::Constant(dimension, length_scale);
  double sd = 0.0;
  if (y.size() > 1) {
    const double mean = y.mean();
    sd = std::sqrt((y.array() - mean).square().sum() / static_cast<double>(y.size()));
  }
  if (!(sd > 0.0) || !std::isfinite(sd)) sd = 1.0;
  k.signal_variance = sd * sd;
  k.noise_variance = (1e-6 * sd) * (1e-6 * sd);
  return k;
}

namespace {

Eigen::MatrixXd gram(const Eigen::MatrixXd& X, const KernelSettings& k) {
  const auto n = X.rows();
  Eigen::MatrixXd K(n, n);
  std::vector<double> a(static_cast<std::size_t>(X.cols()));
  std::vector<double> b(a.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      Eigen::VectorXd::Map(a.data(), X.cols()) = X.row(i);
      Eigen::VectorXd::Map(b.data(), X.cols()) = X.row(j);
      K(i, j) = K(j, i) = squared_exponential(a, b, k);
    }
  }
  return K;
}

} // namespace

GPModel GPModel::fit(Eigen::MatrixXd X, Eigen::VectorXd y, KernelSettings kernel,
                     int max_jitter_steps) {
  if (X.rows() < 2) throw FitError("gp_fit: need at least two training points");
  if (X.rows() != y.size()) throw ContractViolation("gp_fit: X rows and y length differ");
  if (kernel.length_scales.size() != X.cols()) {
    throw ContractViolation("gp_fit: length scale count differs from input dimension");
  }
  if (!y.allFinite() || !X.allFinite()) throw ContractViolation("gp_fit: non-finite training data");

  GPModel m;
  m.mean_ = y.mean();
  const Eigen::MatrixXd K = gram(X, kernel);
  const Eigen::VectorXd centered = y.array() - m.mean_;
  for (int step = 0; step <= max_jitter_steps; ++step) {
    Eigen::MatrixXd Ky = K;
    Ky.diagonal().array() += kernel.noise_variance;
    m.chol_.compute(Ky);
    if (m.chol_.info() == Eigen::Success) {
      m.alpha_ = m.chol_.solve(centered);
      if (m.alpha_.allFinite()) {
        m.X_ = std::move(X);
        m.y_ = std::move(y);
        m.kernel_ = std::move(kernel);
        m.jitter_steps_ = step;
        return m;
      }
    }
    kernel.noise_variance *= 10.0;
  }
  throw FitError("gp_fit: kernel matrix not positive definite after jitter escalation");
}

GpPrediction GPModel::predict(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) != X_.cols()) {
    throw ContractViolation("gp_predict: input dimension mismatch");
  }
  const auto n = X_.rows();
  Eigen::VectorXd kstar(n);
  std::vector<double> row(static_cast<std::size_t>(X_.cols()));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd::Map(row.data(), X_.cols()) = X_.row(i);
    kstar[i] = squared_exponential(row, x, kernel_);
  }
  const Eigen::VectorXd v = chol_.matrixL().solve(kstar);
  const double var = kernel_.signal_variance - v.squaredNorm();
  return {mean_ + kstar.dot(alpha_), std::sqrt(std::max(var, 0.0))};
}

double log_marginal_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const KernelSettings& kernel) {
  Eigen::MatrixXd K = gram(X, kernel);
  K.diagonal().array() += kernel.noise_variance;
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd centered = y.array() - y.mean();
  const Eigen::VectorXd alpha = llt.solve(centered);
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * centered.dot(alpha) - 0.5 * log_det -
         0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
}

KernelSettings tune_length_scale(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 KernelSettings start) {
  double lo = std::log(0.02);
  double hi = std::log(3.0);
  int points = 15;
  double best_log = std::log(start.length_scales[0]);
  double best = -std::numeric_limits<double>::infinity();
  for (int round = 0; round < 3; ++round) {
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
      const double l = lo + step * i;
      KernelSettings k = start;
      k.length_scales.setConstant(std::exp(l));
      const double ll = log_marginal_likelihood(X, y, k);
      if (ll > best) {
        best = ll;
        best_log = l;
      }
    }
    lo = best_log - step;
    hi = best_log + step;
    points = 9;
  }
  start.length_scales.setConstant(std::exp(best_log));
  return start;
}

} // namespace rdo
