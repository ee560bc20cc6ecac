#include "rdo/optimizers/operators.hpp"

#include <algorithm>
#include <cmath>

#include "rdo/errors.hpp"

namespace rdo {

double sbx_spread(double u, double eta_c) {
  const double exponent = 1.0 / (eta_c + 1.0);
  if (u <= 0.5) return std::pow(2.0 * u, exponent);
  return std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
}

std::pair<Vector, Vector> sbx_blend(std::span<const double> p1, std::span<const double> p2,
                                    std::span<const double> u, double eta_c) {
  if (p1.size() != p2.size() || u.size() != p1.size()) throw_contract("sbx_blend: length mismatch");
  Vector c1(p1.size());
  Vector c2(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    const double beta = sbx_spread(u[i], eta_c);
    c1[i] = 0.5 * ((1.0 + beta) * p1[i] + (1.0 - beta) * p2[i]);
    c2[i] = 0.5 * ((1.0 - beta) * p1[i] + (1.0 + beta) * p2[i]);
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                        double eta_c, Rng& rng) {
  Vector u(p1.size());
  for (auto& v : u) v = uniform01(rng);
  auto children = sbx_blend(p1, p2, u, eta_c);
  for (auto* c : {&children.first, &children.second}) {
    for (auto& v : *c) v = std::clamp(v, 0.0, 1.0);
  }
  return children;
}

double polynomial_perturb(double x, double eta_m, double u) {
  const double power = 1.0 / (eta_m + 1.0);
  double delta_q = 0.0;
  if (u <= 0.5) {
    const double xy = 1.0 - x;
    const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta_m + 1.0);
    delta_q = std::pow(val, power) - 1.0;
  } else {
    const double xy = x;
    const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta_m + 1.0);
    delta_q = 1.0 - std::pow(val, power);
  }
  return std::clamp(x + delta_q, 0.0, 1.0);
}

Vector polynomial_mutation(std::span<const double> x, double eta_m, double per_gene_prob,
                           Rng& rng) {
  Vector out(x.begin(), x.end());
  for (auto& v : out) {
    // Both draws are taken unconditionally so the stream position does not
    // depend on which genes mutate.
    const double gate = uniform01(rng);
    const double u = uniform01(rng);
    if (gate < per_gene_prob) v = polynomial_perturb(v, eta_m, u);
  }
  return out;
}

} // namespace rdo
