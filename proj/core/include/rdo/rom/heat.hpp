#pragma once

#include <vector>

#include "rdo/rom/state_space.hpp"

namespace rdo {

struct HeatRodConfig {
  std::size_t n_nodes = 50;
  double conductivity = 1.0;   // lambda, W/(m K)
  double density = 1.0;        // rho, kg/m^3
  double heat_capacity = 1.0;  // c_p, J/(kg K)
  double element_length = 0.02;
  std::size_t input_node = 0;
  std::vector<std::size_t> probe_nodes{0, 24, 49};
  // Heat-transfer conductance from the last node to a 0 K ambient; 0 keeps
  // both ends insulated.
  double end_conductance = 0.0;

  double rod_length() const noexcept { return static_cast<double>(n_nodes) * element_length; }
};

/// Central-difference 1-D rod of unit cross-section: lumped mass
/// M = rho c_p dx I, stiffness lambda/dx times the Neumann Laplacian, and
/// a unit load at the input node (u is injected power in W).
FirstOrderSystem heat_fd_model(const HeatRodConfig& cfg);

} // namespace rdo
