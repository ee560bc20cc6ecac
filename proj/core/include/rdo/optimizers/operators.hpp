#pragma once

#include <span>
#include <utility>

#include "rdo/problem.hpp"
#include "rdo/random.hpp"

namespace rdo {

// Spread factor of simulated binary crossover for a uniform draw u in [0,1).
double sbx_spread(double u, double eta_c);

// SBX children before clipping, one draw per coordinate. The children's mean
// equals the parents' mean coordinatewise.
std::pair<Vector, Vector> sbx_blend(std::span<const double> p1, std::span<const double> p2,
                                    std::span<const double> u, double eta_c);

// Unit-cube SBX: draws u per coordinate, blends, clips to [0,1].
std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                        double eta_c, Rng& rng);

// Bounded polynomial mutation in the unit cube; each coordinate mutates with
// probability per_gene_prob.
Vector polynomial_mutation(std::span<const double> x, double eta_m, double per_gene_prob,
                           Rng& rng);

// Single-coordinate polynomial perturbation for a given uniform draw.
double polynomial_perturb(double x, double eta_m, double u);

} // namespace rdo
