#include "rdo/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdo/errors.hpp"

namespace rdo {

namespace {

bool has_nan(std::span<const double> v) {
  return std::any_of(v.begin(), v.end(), [](double d) { return std::isnan(d); });
}

} // namespace

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw_contract("dominates: cost vectors differ in length");
  const bool a_nan = has_nan(a);
  const bool b_nan = has_nan(b);
  if (a_nan) return false;
  if (b_nan) return true;
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

std::vector<std::size_t> pareto_indices(std::span<const Vector> costs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < costs.size() && !dominated; ++j) {
      dominated = j != i && dominates(costs[j], costs[i]);
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

std::vector<Individual> pareto_front(std::span<const Individual> members) {
  std::vector<Vector> costs;
  costs.reserve(members.size());
  for (const auto& m : members) costs.push_back(m.f);
  std::vector<Individual> out;
  for (auto i : pareto_indices(costs)) out.push_back(members[i]);
  return out;
}

double hypervolume_2d(std::span<const Vector> costs, std::array<double, 2> reference) {
  std::vector<std::array<double, 2>> pts;
  for (const auto& c : costs) {
    if (c.size() != 2) throw_contract("hypervolume_2d: expects two objectives");
    if (c[0] < reference[0] && c[1] < reference[1]) pts.push_back({c[0], c[1]});
  }
  std::sort(pts.begin(), pts.end());
  // Sweep along f0; only points that lower the running f1 minimum add area.
  double volume = 0.0;
  double best_f1 = reference[1];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i][1] >= best_f1) continue;
    double next_f0 = reference[0];
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[j][1] < pts[i][1]) {
        next_f0 = pts[j][0];
        break;
      }
    }
    volume += (next_f0 - pts[i][0]) * (reference[1] - pts[i][1]);
    best_f1 = pts[i][1];
  }
  return volume;
}

} // namespace rdo
