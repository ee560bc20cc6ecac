#include "rdo/optimizers/sorting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rdo/dominance.hpp"
#include "rdo/errors.hpp"

namespace rdo {

std::vector<Front> fast_non_dominated_sort(std::span<const Vector> costs) {
  const std::size_t n = costs.size();
  std::vector<Front> fronts;
  if (n == 0) return fronts;
  for (const auto& c : costs) {
    if (c.size() != costs.front().size()) throw_contract("fast_non_dominated_sort: cost arity");
  }

  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  Front current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (dominates(costs[p], costs[q])) {
        dominated_by[p].push_back(q);
        ++domination_count[q];
      } else if (dominates(costs[q], costs[p])) {
        dominated_by[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    Front next;
    for (auto p : current) {
      for (auto q : dominated_by[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<Front> fast_non_dominated_sort(const Population& pop) {
  std::vector<Vector> costs;
  costs.reserve(pop.members.size());
  for (const auto& m : pop.members) costs.push_back(m.f);
  return fast_non_dominated_sort(costs);
}

std::vector<double> crowding_distance(std::span<const Vector> front) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = front.size();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), inf);
    return distance;
  }
  const std::size_t m = front.front().size();
  std::vector<std::size_t> order(n);
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // NaN sorts last and takes no part in this objective.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double fa = front[a][obj];
      const double fb = front[b][obj];
      if (std::isnan(fb)) return !std::isnan(fa);
      return fa < fb;
    });
    std::size_t count = n;
    while (count > 0 && std::isnan(front[order[count - 1]][obj])) --count;
    if (count == 0) continue;
    const double lo = front[order.front()][obj];
    const double hi = front[order[count - 1]][obj];
    const double range = hi - lo;
    if (!(range > 0.0)) continue;
    distance[order.front()] = inf;
    distance[order[count - 1]] = inf;
    if (!std::isfinite(range)) continue;
    for (std::size_t k = 1; k + 1 < count; ++k) {
      const double gap = front[order[k + 1]][obj] - front[order[k - 1]][obj];
      if (std::isfinite(gap)) distance[order[k]] += gap / range;
    }
  }
  return distance;
}

} // namespace rdo
