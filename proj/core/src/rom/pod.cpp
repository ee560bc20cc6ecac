#include "rdo/rom/pod.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "rdo/errors.hpp"

namespace rdo {

void SnapshotMatrix::validate() const {
  if (U.cols() != static_cast<Eigen::Index>(times.size())) {
    throw_contract("SnapshotMatrix: column count differs from number of time stamps");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw_contract("SnapshotMatrix: time stamps must increase");
  }
}

PodBasis pod_modes(const SnapshotMatrix& snap, std::size_t r) {
  snap.validate();
  const auto n = snap.U.rows();
  const auto m = snap.U.cols();
  if (r == 0 || static_cast<Eigen::Index>(r) > std::min(n, m)) {
    throw_contract("pod_modes: r must lie in [1, min(rows, columns)]");
  }
  const double scale = 1.0 / static_cast<double>(m);

  Eigen::VectorXd lambda;
  Eigen::MatrixXd vectors;
  const bool snapshot_method = m < n;
  if (snapshot_method) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scale * snap.U.transpose() * snap.U);
    lambda = es.eigenvalues().reverse();
    vectors = es.eigenvectors().rowwise().reverse();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scale * snap.U * snap.U.transpose());
    lambda = es.eigenvalues().reverse();
    vectors = es.eigenvectors().rowwise().reverse();
  }
  lambda = lambda.cwiseMax(0.0);

  const double tol = lambda.size() > 0 ? 1e-12 * lambda[0] : 0.0;
  Eigen::Index rank = 0;
  while (rank < lambda.size() && lambda[rank] > tol && lambda[rank] > 0.0) ++rank;
  // Below the rank tolerance an eigenvalue is round-off.
  lambda.tail(lambda.size() - rank).setZero();

  PodBasis basis;
  basis.eigenvalues = lambda;
  const double total = lambda.sum();
  basis.energy_fractions.resize(static_cast<std::size_t>(lambda.size()), 0.0);
  if (total > 0.0) {
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      basis.energy_fractions[static_cast<std::size_t>(i)] = lambda[i] / total;
    }
  }

  const auto kept = std::min<Eigen::Index>(rank, static_cast<Eigen::Index>(r));

  basis.modes.resize(n, static_cast<Eigen::Index>(r));
  for (Eigen::Index i = 0; i < kept; ++i) {
    if (snapshot_method) {
      basis.modes.col(i) = snap.U * vectors.col(i) / std::sqrt(static_cast<double>(m) * lambda[i]);
    } else {
      basis.modes.col(i) = vectors.col(i);
    }
  }
  if (kept < static_cast<Eigen::Index>(r)) {
    Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
    if (kept > 0) {
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis.modes.leftCols(kept));
      Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    }
    for (Eigen::Index i = kept; i < static_cast<Eigen::Index>(r); ++i) basis.modes.col(i) = Q.col(i);
    basis.padded = r - static_cast<std::size_t>(kept);
  }

  double captured = 0.0;
  for (std::size_t i = 0; i < r && i < basis.energy_fractions.size(); ++i) {
    captured += basis.energy_fractions[i];
  }
  basis.captured_energy = captured;
  return basis;
}

ContinuousStateSpace pod_reduce(const FirstOrderSystem& sys, const Eigen::MatrixXd& E) {
  sys.validate();
  if (E.rows() != sys.size()) throw_contract("pod_reduce: mode length differs from system size");
  const Eigen::MatrixXd Mr = E.transpose() * sys.M * E;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Mr);
  const auto& sv = svd.singularValues();
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  if (!(smin > 1e-12 * smax)) {
    std::ostringstream os;
    os << "pod_reduce: E^T M E is singular (condition number "
       << (smin > 0.0 ? smax / smin : INFINITY) << ")";
    throw ReductionError(os.str());
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Mr);
  ContinuousStateSpace ss;
  ss.A = lu.solve(E.transpose() * sys.S * E);
  ss.B = lu.solve(E.transpose() * sys.F0);
  ss.C.resize(static_cast<Eigen::Index>(sys.outputs.size()), E.cols());
  for (std::size_t i = 0; i < sys.outputs.size(); ++i) {
    ss.C.row(static_cast<Eigen::Index>(i)) = E.row(static_cast<Eigen::Index>(sys.outputs[i]));
  }
  return ss;
}

} // namespace rdo
