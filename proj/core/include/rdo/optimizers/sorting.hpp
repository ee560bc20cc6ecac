#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rdo/problem.hpp"

namespace rdo {

using Front = std::vector<std::size_t>;

// Partitions cost vectors into successive non-dominated fronts. Indices within
// a front are ascending.
std::vector<Front> fast_non_dominated_sort(std::span<const Vector> costs);
std::vector<Front> fast_non_dominated_sort(const Population& pop);

// Crowding distance of each member of `front` (any set of cost vectors).
// Boundary members of each non-degenerate objective get +infinity; sets of
// size <= 2 are all +infinity.
std::vector<double> crowding_distance(std::span<const Vector> front);

} // namespace rdo
