#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "rdo/problem.hpp"

namespace rdo {

/// Continuous linear system  x' = -A x + B u,  y = C x.
/// A is kept with the sign of the dissipative operator (positive
/// semi-definite for the thermal models here).
struct ContinuousStateSpace {
  Eigen::MatrixXd A; // r x r
  Eigen::MatrixXd B; // r x m
  Eigen::MatrixXd C; // p x r

  Eigen::Index order() const noexcept { return A.rows(); }
};

/// M y' + S y = F0 u(t), with measurable outputs at selected nodes.
struct FirstOrderSystem {
  Eigen::MatrixXd M;
  Eigen::MatrixXd S;
  Eigen::MatrixXd F0; // n x m
  std::vector<std::size_t> outputs;

  Eigen::Index size() const noexcept { return M.rows(); }
  void validate() const;
};

// The full system in state-space form: A = M^-1 S, B = M^-1 F0, C selects
// the output nodes.
ContinuousStateSpace full_state_space(const FirstOrderSystem& sys);

struct Trajectory {
  Vector t;
  Eigen::MatrixXd outputs; // (K+1) x p
  Eigen::MatrixXd states;  // r x (K+1); empty unless requested
};

/// Implicit-Euler integration on a uniform grid t_0..t_K with inputs sampled
/// on the same grid (rows of `u`). Throws IntegrationError naming the step on
/// the first non-finite state.
Trajectory simulate_continuous(const ContinuousStateSpace& ss, const Eigen::MatrixXd& u,
                               std::span<const double> t, const Eigen::VectorXd& x0,
                               bool keep_states = false);

Vector uniform_grid(double t_end, std::size_t steps);

} // namespace rdo
