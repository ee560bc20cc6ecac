#pragma once

#include <span>

#include <Eigen/Core>

#include "rdo/problem.hpp"

namespace rdo {

// Lattice coefficients of an n-th order Schwartz-form system. The packed
// identification vector is b = [delta_1..delta_n, gamma_1..gamma_n].
struct SchwartzParams {
  Vector delta;
  Vector gamma;

  std::size_t order() const noexcept { return delta.size(); }
  Vector packed() const;
  static SchwartzParams unpack(std::span<const double> b);
};

struct DiscreteStateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;

  Eigen::Index order() const noexcept { return A.rows(); }
};

/// Schwartz-form realization for any order n >= 1:
///   row 1:   A(1,j) = (prod_{k<j} d_k) D_j
///   row i>1: A(i,i-1) = d_{i-1},  A(i,j>=i) = -D_{i-1} (prod_{i<=k<j} d_k) D_j
///   B = [1, -D_1, ..., -D_{n-1}]^T,  C = gamma
/// with d_k = sqrt(1 - D_k^2). Throws DomainError unless every |D_k| < 1.
DiscreteStateSpace build_schwartz_system(const SchwartzParams& p);

// Fourth-order matrix with the (4,3) entry carrying -d_3, exactly as the
// form is commonly printed. Only n = 4 is accepted.
DiscreteStateSpace build_schwartz_system_as_printed(const SchwartzParams& p);

// y_k = C x_k, then x_{k+1} = A x_k + B u_k.
Vector simulate_discrete(const DiscreteStateSpace& ss, std::span<const double> u,
                         const Eigen::VectorXd& x0);
Vector simulate_discrete(const DiscreteStateSpace& ss, std::span<const double> u);

// States x_0..x_{K-1} as rows (K x n), starting from zero.
Eigen::MatrixXd state_trajectory(const DiscreteStateSpace& ss, std::span<const double> u);

// max_k |T_ref,k - T_k| for the zero-state response of the Schwartz system.
// Returns +infinity when some |delta_i| >= 1.
double identification_objective(const SchwartzParams& b, std::span<const double> u,
                                 std::span<const double> t_ref);

} // namespace rdo
