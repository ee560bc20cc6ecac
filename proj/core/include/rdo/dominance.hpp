#pragma once

#include <array>
#include <span>
#include <vector>

#include "rdo/problem.hpp"

namespace rdo {

/// Pareto dominance under minimization: a <= b componentwise with at least
/// one strict improvement. A cost vector containing NaN is infeasible; it
/// dominates nothing and is dominated by every finite-cost vector.
bool dominates(std::span<const double> a, std::span<const double> b);

// Members dominated by no other member, in input order.
std::vector<Individual> pareto_front(std::span<const Individual> members);
std::vector<std::size_t> pareto_indices(std::span<const Vector> costs);

// Area dominated by a two-objective point set and bounded by `reference`.
// Points not strictly better than the reference in both objectives add nothing.
double hypervolume_2d(std::span<const Vector> costs, std::array<double, 2> reference);

} // namespace rdo
