#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rdo/rom/schwartz.hpp"

namespace rdo {

struct IdentifyConfig {
  std::size_t restarts = 8;
  std::size_t max_iters = 4000;    // per Nelder-Mead stage
  double bound_margin = 1e-3;      // delta in (-1 + margin, 1 - margin)
  double gamma_scale = 10.0;       // |gamma| <= gamma_scale * max|T_ref|
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
};

struct IdentifyResult {
  SchwartzParams params;
  double objective = 0.0;
  std::size_t evaluations = 0;
  std::vector<double> restart_objectives;
  std::size_t best_restart = 0;
};

// Output weights minimizing the squared error for fixed lattice coefficients,
// clipped to the gamma box.
Vector least_squares_gamma(std::span<const double> delta, std::span<const double> u,
                           std::span<const double> t_ref, double gamma_bound);

/// Fits an n-th order Schwartz system to (u, T_ref) by Nelder-Mead restarts
/// from Latin-hypercube starts in delta. Each restart first searches delta
/// alone with gamma eliminated by least squares (RMS residual), then polishes the full
/// 2n-vector on the max-abs objective. The result is the best point any stage
/// ever evaluated; ties go to the lower restart index.
IdentifyResult identify(std::span<const double> t_ref, std::span<const double> u,
                        std::size_t order, const IdentifyConfig& cfg = {});

} // namespace rdo
