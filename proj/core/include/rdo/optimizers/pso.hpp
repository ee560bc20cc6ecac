#pragma once

#include <cstdint>
#include <vector>

#include "rdo/evaluator.hpp"
#include "rdo/problem.hpp"

namespace rdo {

struct PsoConfig {
  std::size_t swarm_size = 30;
  std::size_t iterations = 200;
  double inertia = 0.729;
  double cognitive = 1.494;
  double social = 1.494;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PsoResult {
  Individual best;
  // Global-best cost after initialization and after every iteration.
  std::vector<double> best_history;
  // Particle positions after every iteration (decision space).
  std::vector<std::vector<Vector>> positions;
  std::size_t requests = 0;
};

PsoResult pso_run(const ProblemSpec& spec, const PsoConfig& cfg, Evaluator& eval);

} // namespace rdo
