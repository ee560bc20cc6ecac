#pragma once

#include <Eigen/Core>

#include "rdo/problem.hpp"
#include "rdo/rom/state_space.hpp"

namespace rdo {

// Columns are full solutions at increasing time stamps.
struct SnapshotMatrix {
  Eigen::MatrixXd U;
  Vector times;

  void validate() const;
};

struct PodBasis {
  Eigen::MatrixXd modes;          // n x r, orthonormal columns
  Eigen::VectorXd eigenvalues;    // all computed eigenvalues, descending
  Vector energy_fractions;        // eigenvalue_i / sum, per mode
  double captured_energy = 0.0;   // fraction carried by the first r modes
  std::size_t padded = 0;         // modes taken from the orthogonal complement
};

/// Eigen-decomposition of the spatial correlation matrix U U^T / m, sorted by
/// descending eigenvalue. When m < n the smaller m x m snapshot correlation is
/// decomposed and its eigenvectors lifted. Requests beyond the numerical rank
/// are padded with orthonormal complement vectors of eigenvalue zero.
PodBasis pod_modes(const SnapshotMatrix& snap, std::size_t r);

/// Galerkin projection onto the columns of E:
///   A = (E^T M E)^-1 E^T S E,  B = (E^T M E)^-1 E^T F0,  C = E(outputs, :).
/// Throws ReductionError when E^T M E is numerically singular.
ContinuousStateSpace pod_reduce(const FirstOrderSystem& sys, const Eigen::MatrixXd& E);

} // namespace rdo
