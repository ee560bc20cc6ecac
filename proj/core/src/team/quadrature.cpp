#include "rdo/team/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace rdo {

namespace {

GaussRule compute_rule(std::size_t n) {
  GaussRule rule{Vector(n), Vector(n)};
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        const auto kd = static_cast<double>(k);
        p0 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p2) / kd;
      }
      dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

} // namespace

const GaussRule& gauss_legendre(std::size_t order) {
  if (order == 0) throw ContractViolation("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(compute_rule(order));
  return *slot;
}

} // namespace rdo
