#include "rdo/rom/state_space.hpp"

#include <cmath>

#include <Eigen/LU>

#include "rdo/errors.hpp"

namespace rdo {

void FirstOrderSystem::validate() const {
  const auto n = M.rows();
  if (M.cols() != n || S.rows() != n || S.cols() != n || F0.rows() != n) {
    throw_contract("FirstOrderSystem: inconsistent matrix dimensions");
  }
  for (auto o : outputs) {
    if (static_cast<Eigen::Index>(o) >= n) throw_contract("FirstOrderSystem: output node out of range");
  }
}

namespace {

Eigen::MatrixXd selector(const std::vector<std::size_t>& outputs, Eigen::Index n) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outputs.size()), n);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(outputs[i])) = 1.0;
  }
  return C;
}

} // namespace

ContinuousStateSpace full_state_space(const FirstOrderSystem& sys) {
  sys.validate();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.M);
  return {lu.solve(sys.S), lu.solve(sys.F0), selector(sys.outputs, sys.size())};
}

Vector uniform_grid(double t_end, std::size_t steps) {
  Vector t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    t[k] = t_end * static_cast<double>(k) / static_cast<double>(steps);
  }
  return t;
}

Trajectory simulate_continuous(const ContinuousStateSpace& ss, const Eigen::MatrixXd& u,
                               std::span<const double> t, const Eigen::VectorXd& x0,
                               bool keep_states) {
  const auto r = ss.order();
  if (t.size() < 2) throw_contract("simulate_continuous: need at least two grid points");
  if (u.rows() != static_cast<Eigen::Index>(t.size()) || u.cols() != ss.B.cols()) {
    throw_contract("simulate_continuous: input samples do not match grid or input count");
  }
  if (x0.size() != r) throw_contract("simulate_continuous: x0 has wrong dimension");
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw_contract("simulate_continuous: grid must increase");
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-9 * std::max(1.0, std::abs(t[k]))) {
      throw_contract("simulate_continuous: grid must be uniform");
    }
  }

  const Eigen::MatrixXd step_matrix = Eigen::MatrixXd::Identity(r, r) + dt * ss.A;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(step_matrix);

  Trajectory out;
  out.t.assign(t.begin(), t.end());
  const auto K = static_cast<Eigen::Index>(t.size());
  out.outputs.resize(K, ss.C.rows());
  if (keep_states) out.states.resize(r, K);

  Eigen::VectorXd x = x0;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (k > 0) {
      x = lu.solve(x + dt * ss.B * u.row(k).transpose());
      if (!x.allFinite()) {
        throw IntegrationError("simulate_continuous: non-finite state at step " + std::to_string(k));
      }
    }
    out.outputs.row(k) = (ss.C * x).transpose();
    if (keep_states) out.states.col(k) = x;
  }
  return out;
}

} // namespace rdo
