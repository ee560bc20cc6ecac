#pragma once

#include <array>
#include <span>
#include <vector>

#include "rdo/problem.hpp"
#include "rdo/team/field.hpp"

namespace rdo {

struct ControlRegion {
  std::vector<std::array<double, 2>> points; // (r, z) in metres
  double b0 = 2e-4;                          // target |B| in tesla

  void validate() const;
  // n points spaced evenly along the boundary of [r0,r1] x [z0,z1], starting
  // at (r0, z0) and running counter-clockwise.
  static ControlRegion rectangle_boundary(double r0, double r1, double z0, double z1,
                                          std::size_t n, double b0);
};

/// Coil benchmark: n turns stacked along z, each with a fixed radial
/// thickness, axial extent and current; the design variables are the radial
/// midpoints of the turns.
struct BenchmarkConfig {
  std::size_t n_turns = 10;
  Vector r_lower;  // per-turn midpoint bounds (m)
  Vector r_upper;
  double width = 1e-3; // radial thickness (m)
  Vector z_lower;  // per-turn axial extents (m)
  Vector z_upper;
  Vector currents; // A
  ControlRegion region;
  FieldOptions field;
  double delta_r = 5e-4;

  // Shipped defaults: 10 turns of 1 mm x 1.5 mm stacked symmetrically about
  // z = 0, 1 A each, radii in [7 mm, 25 mm], 21 control points on the
  // boundary of [0, 5 mm] x [0, 5 mm], B0 = 0.2 mT.
  static BenchmarkConfig defaults();
  void validate() const;
  Vector mid_radii() const;
};

// Throws DomainError when a resulting inner radius is not positive.
std::vector<Turn> build_turns(std::span<const double> radii, const BenchmarkConfig& cfg);

// max_q | |B(r_q, z_q)| - B0 |; +infinity for invalid geometry.
double objective_f1(std::span<const double> radii, const BenchmarkConfig& cfg);

// max_q ( ||B(r_q,z_q)| - |B(r_q+dr,z_q)|| + ||B(r_q,z_q)| - |B(r_q-dr,z_q)|| );
// +infinity when a geometry or evaluation point is invalid.
double objective_f2(std::span<const double> radii, const BenchmarkConfig& cfg);

// Both objectives from one pass over the control points.
Vector team_objectives(std::span<const double> radii, const BenchmarkConfig& cfg);

// Two-objective problem (F1, F2) over the turn radii.
ProblemSpec team_problem(const BenchmarkConfig& cfg);

} // namespace rdo
