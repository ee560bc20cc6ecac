#include "rdo/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rdo/errors.hpp"
#include "rdo/evaluator.hpp"

namespace rdo {

Vector gradient_fd(const ScalarObjective& f, std::span<const double> x, double h,
                   std::span<const double> lower, std::span<const double> upper) {
  if (lower.size() != x.size() || upper.size() != x.size()) {
    throw_contract("gradient_fd: bounds and point differ in length");
  }
  if (!(h > 0.0)) throw_contract("gradient_fd: step must be positive");
  Vector grad(x.size());
  Vector probe(x.begin(), x.end());
  auto sample = [&](std::size_t i, double xi) {
    probe[i] = xi;
    const double v = f(probe);
    probe[i] = x[i];
    if (!std::isfinite(v)) {
      throw EvaluationError("gradient_fd: objective not finite along coordinate " + std::to_string(i));
    }
    return v;
  };
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double step = h * (upper[i] - lower[i]);
    const bool back_ok = x[i] - step >= lower[i];
    const bool fwd_ok = x[i] + step <= upper[i];
    if (back_ok && fwd_ok) {
      grad[i] = (sample(i, x[i] + step) - sample(i, x[i] - step)) / (2.0 * step);
    } else if (fwd_ok) {
      grad[i] = (sample(i, x[i] + step) - sample(i, x[i])) / step;
    } else {
      grad[i] = (sample(i, x[i]) - sample(i, x[i] - step)) / step;
    }
  }
  return grad;
}

SensitivityReport robustness_rank(std::span<const Individual> front,
                                  const std::vector<ScalarObjective>& objectives, double h,
                                  std::span<const double> lower, std::span<const double> upper,
                                  unsigned threads) {
  if (front.empty()) throw_contract("robustness_rank: empty front");
  if (objectives.empty()) throw_contract("robustness_rank: no objectives");
  SensitivityReport report;
  report.members.resize(front.size());
  parallel_for(front.size(), threads, [&](std::size_t m) {
    auto& entry = report.members[m];
    try {
      for (const auto& f : objectives) {
        const auto g = gradient_fd(f, front[m].x, h, lower, upper);
        double norm2 = 0.0;
        for (double v : g) norm2 += v * v;
        entry.s.push_back(std::sqrt(norm2));
      }
      entry.combined = *std::max_element(entry.s.begin(), entry.s.end());
    } catch (const std::exception& e) {
      entry.ranked = false;
      entry.error = e.what();
      entry.s.clear();
      entry.combined = 0.0;
    }
  });

  std::vector<std::size_t> ranked;
  std::vector<std::size_t> unranked;
  for (std::size_t m = 0; m < front.size(); ++m) {
    (report.members[m].ranked ? ranked : unranked).push_back(m);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    return report.members[a].combined < report.members[b].combined;
  });
  report.order = std::move(ranked);
  report.order.insert(report.order.end(), unranked.begin(), unranked.end());
  return report;
}

SensitivityReport robustness_rank(std::span<const Individual> front, const ProblemSpec& spec,
                                  double h, unsigned threads) {
  std::vector<ScalarObjective> objectives;
  for (std::size_t j = 0; j < spec.n_objectives(); ++j) {
    objectives.push_back([&spec, j](std::span<const double> x) { return spec.evaluate(x)[j]; });
  }
  const auto lo = spec.lower();
  const auto hi = spec.upper();
  return robustness_rank(front, objectives, h, lo, hi, threads);
}

} // namespace rdo
