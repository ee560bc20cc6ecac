#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "rdo/errors.hpp"
#include "rdo/problem.hpp"

namespace rdo {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  Vector nodes;
  Vector weights;
};

// Cached per order; safe to call from several threads.
const GaussRule& gauss_legendre(std::size_t order);

/// Gauss-Legendre rule of the given order mapped onto [0, 2*pi]. Throws
/// IntegrationError when the integrand returns a non-finite sample.
template <class F>
double quad_phi(F&& f, std::size_t order) {
  if (order < 2) throw ContractViolation("quad_phi: order must be >= 2");
  const auto& rule = gauss_legendre(order);
  constexpr double half = std::numbers::pi;
  double sum = 0.0;
  for (std::size_t i = 0; i < order; ++i) {
    const double phi = half * (rule.nodes[i] + 1.0);
    const double v = f(phi);
    if (!std::isfinite(v)) {
      throw IntegrationError("quad_phi: non-finite integrand at phi = " + std::to_string(phi));
    }
    sum += rule.weights[i] * v;
  }
  return half * sum;
}

} // namespace rdo
