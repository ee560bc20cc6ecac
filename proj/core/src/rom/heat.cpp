#include "rdo/rom/heat.hpp"

#include "rdo/errors.hpp"

namespace rdo {

FirstOrderSystem heat_fd_model(const HeatRodConfig& cfg) {
  if (cfg.n_nodes < 3) throw DomainError("heat_fd_model: need at least 3 nodes");
  if (!(cfg.conductivity > 0.0) || !(cfg.density > 0.0) || !(cfg.heat_capacity > 0.0) ||
      !(cfg.element_length > 0.0)) {
    throw DomainError("heat_fd_model: material constants and element length must be positive");
  }
  if (!(cfg.end_conductance >= 0.0)) throw DomainError("heat_fd_model: negative end conductance");
  if (cfg.input_node >= cfg.n_nodes) throw DomainError("heat_fd_model: input node out of range");
  for (auto p : cfg.probe_nodes) {
    if (p >= cfg.n_nodes) throw DomainError("heat_fd_model: probe node out of range");
  }

  const auto n = static_cast<Eigen::Index>(cfg.n_nodes);
  const double dx = cfg.element_length;
  const double g = cfg.conductivity / dx;

  FirstOrderSystem sys;
  sys.M = (cfg.density * cfg.heat_capacity * dx) * Eigen::MatrixXd::Identity(n, n);
  sys.S = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    sys.S(i, i) += g;
    sys.S(i + 1, i + 1) += g;
    sys.S(i, i + 1) -= g;
    sys.S(i + 1, i) -= g;
  }
  sys.S(n - 1, n - 1) += cfg.end_conductance;
  sys.F0 = Eigen::MatrixXd::Zero(n, 1);
  sys.F0(static_cast<Eigen::Index>(cfg.input_node), 0) = 1.0;
  sys.outputs = cfg.probe_nodes;
  return sys;
}

} // namespace rdo
