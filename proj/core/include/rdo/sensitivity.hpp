#pragma once

#include <span>
#include <string>
#include <vector>

#include "rdo/optimizers/nelder_mead.hpp"
#include "rdo/problem.hpp"

namespace rdo {

/// Finite-difference gradient with absolute step h * (upper_i - lower_i) per
/// coordinate: central where the stencil fits inside the box, one-sided at the
/// bounds. Throws EvaluationError naming the coordinate when f is not finite
/// at a stencil point.
Vector gradient_fd(const ScalarObjective& f, std::span<const double> x, double h,
                   std::span<const double> lower, std::span<const double> upper);

struct MemberSensitivity {
  Vector s;              // gradient norm per objective
  double combined = 0.0; // max over objectives
  bool ranked = true;
  std::string error;     // set when ranked is false
};

struct SensitivityReport {
  std::vector<MemberSensitivity> members; // input order
  // Member indices, ascending by combined sensitivity (ties by index);
  // unranked members follow in index order.
  std::vector<std::size_t> order;
};

inline constexpr double kDefaultSensitivityStep = 1e-3;

SensitivityReport robustness_rank(std::span<const Individual> front,
                                  const std::vector<ScalarObjective>& objectives, double h,
                                  std::span<const double> lower, std::span<const double> upper,
                                  unsigned threads = 1);

// Convenience overload: one scalar objective per component of the spec's cost.
SensitivityReport robustness_rank(std::span<const Individual> front, const ProblemSpec& spec,
                                  double h = kDefaultSensitivityStep, unsigned threads = 1);

} // namespace rdo
