#pragma once

#include <functional>
#include <optional>
#include <span>

#include "rdo/problem.hpp"

namespace rdo {

struct NelderMeadConfig {
  Vector x0;
  std::size_t max_iters = 1000;
  double f_tol = 1e-10;
  double x_tol = 1e-10;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  // Initial simplex edge per coordinate, relative to the bound range when
  // bounds are given, else to max(|x0_i|, 1).
  double initial_step = 0.05;
  std::optional<Vector> lower;
  std::optional<Vector> upper;

  void validate() const;
};

struct NelderMeadResult {
  Vector x;
  double f = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using ScalarObjective = std::function<double(std::span<const double>)>;

// Classic reflect/expand/contract/shrink simplex search. Stops once both the
// function spread across the simplex is <= f_tol and its diameter is <= x_tol,
// or after max_iters. NaN values away from x0 are treated as +infinity.
NelderMeadResult nelder_mead_run(const ScalarObjective& objective, const NelderMeadConfig& cfg);

} // namespace rdo
