#include "rdo/rom/schwartz.hpp"

#include <cmath>
#include <limits>

#include "rdo/errors.hpp"

namespace rdo {

Vector SchwartzParams::packed() const {
  Vector b = delta;
  b.insert(b.end(), gamma.begin(), gamma.end());
  return b;
}

SchwartzParams SchwartzParams::unpack(std::span<const double> b) {
  if (b.empty() || b.size() % 2 != 0) throw_contract("SchwartzParams: packed length must be 2n");
  const auto n = b.size() / 2;
  return {Vector(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n)),
          Vector(b.begin() + static_cast<std::ptrdiff_t>(n), b.end())};
}

namespace {

Vector complements(const SchwartzParams& p) {
  if (p.delta.empty()) throw_contract("Schwartz system: order must be >= 1");
  if (p.gamma.size() != p.delta.size()) throw_contract("Schwartz system: delta/gamma length differ");
  Vector d(p.delta.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(std::abs(p.delta[i]) < 1.0)) {
      throw DomainError("Schwartz system: |delta_" + std::to_string(i + 1) + "| must be < 1");
    }
    d[i] = std::sqrt(1.0 - p.delta[i] * p.delta[i]);
  }
  return d;
}

} // namespace

DiscreteStateSpace build_schwartz_system(const SchwartzParams& p) {
  const Vector d = complements(p);
  const auto& D = p.delta;
  const auto n = static_cast<Eigen::Index>(D.size());
  DiscreteStateSpace ss{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n),
                        Eigen::RowVectorXd::Zero(n)};
  // Zero-based: row 0 entry j = (prod_{k<j} d_k) D_j.
  double prod = 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    ss.A(0, j) = prod * D[static_cast<std::size_t>(j)];
    prod *= d[static_cast<std::size_t>(j)];
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    ss.A(i, i - 1) = d[iu - 1];
    double chain = 1.0;
    for (Eigen::Index j = i; j < n; ++j) {
      ss.A(i, j) = -D[iu - 1] * chain * D[static_cast<std::size_t>(j)];
      chain *= d[static_cast<std::size_t>(j)];
    }
  }
  ss.B[0] = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) ss.B[i] = -D[static_cast<std::size_t>(i) - 1];
  for (Eigen::Index i = 0; i < n; ++i) ss.C[i] = p.gamma[static_cast<std::size_t>(i)];
  return ss;
}

DiscreteStateSpace build_schwartz_system_as_printed(const SchwartzParams& p) {
  if (p.order() != 4) throw_contract("as-printed Schwartz system is defined for order 4 only");
  auto ss = build_schwartz_system(p);
  ss.A(3, 2) = -ss.A(3, 2);
  return ss;
}

Vector simulate_discrete(const DiscreteStateSpace& ss, std::span<const double> u,
                         const Eigen::VectorXd& x0) {
  if (x0.size() != ss.order()) throw_contract("simulate_discrete: x0 has wrong dimension");
  Vector y(u.size());
  Eigen::VectorXd x = x0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    y[k] = ss.C.dot(x);
    x = ss.A * x + ss.B * u[k];
  }
  return y;
}

Vector simulate_discrete(const DiscreteStateSpace& ss, std::span<const double> u) {
  return simulate_discrete(ss, u, Eigen::VectorXd::Zero(ss.order()));
}

Eigen::MatrixXd state_trajectory(const DiscreteStateSpace& ss, std::span<const double> u) {
  const auto K = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd X(K, ss.order());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(ss.order());
  for (Eigen::Index k = 0; k < K; ++k) {
    X.row(k) = x.transpose();
    x = ss.A * x + ss.B * u[static_cast<std::size_t>(k)];
  }
  return X;
}

double identification_objective(const SchwartzParams& b, std::span<const double> u,
                                std::span<const double> t_ref) {
  if (u.size() != t_ref.size()) throw_contract("identification_objective: sequence lengths differ");
  for (double D : b.delta) {
    if (!(std::abs(D) < 1.0)) return std::numeric_limits<double>::infinity();
  }
  const Vector t = simulate_discrete(build_schwartz_system(b), u);
  double worst = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double e = std::abs(t_ref[k] - t[k]);
    if (std::isnan(e)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, e);
  }
  return worst;
}

} // namespace rdo
