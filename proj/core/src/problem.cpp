#include "rdo/problem.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "rdo/errors.hpp"

namespace rdo {

ProblemSpec::ProblemSpec(std::vector<Parameter> parameters, std::size_t n_objectives,
                         std::string evaluator_id, CostFunction cost)
    : parameters_(std::move(parameters)), n_objectives_(n_objectives),
      evaluator_id_(std::move(evaluator_id)), cost_(std::move(cost)) {
  if (parameters_.empty()) throw_contract("ProblemSpec: no parameters");
  if (n_objectives_ == 0) throw_contract("ProblemSpec: n_objectives must be >= 1");
  if (!cost_) throw_contract("ProblemSpec: no cost function bound");
  std::set<std::string> names;
  for (const auto& p : parameters_) {
    if (!(p.lower < p.upper)) {
      throw_contract("ProblemSpec: parameter '" + p.name + "' needs lower < upper");
    }
    if (!names.insert(p.name).second) {
      throw_contract("ProblemSpec: duplicate parameter name '" + p.name + "'");
    }
  }
}

Vector ProblemSpec::lower() const {
  Vector v;
  v.reserve(parameters_.size());
  for (const auto& p : parameters_) v.push_back(p.lower);
  return v;
}

Vector ProblemSpec::upper() const {
  Vector v;
  v.reserve(parameters_.size());
  for (const auto& p : parameters_) v.push_back(p.upper);
  return v;
}

bool ProblemSpec::contains(std::span<const double> x) const noexcept {
  if (x.size() != parameters_.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= parameters_[i].lower && x[i] <= parameters_[i].upper)) return false;
  }
  return true;
}

Vector ProblemSpec::evaluate(std::span<const double> x) const {
  if (x.size() != parameters_.size()) throw_contract("evaluate: decision vector length mismatch");
  Vector f = cost_(x);
  if (f.size() != n_objectives_) {
    std::ostringstream os;
    os << "evaluator '" << evaluator_id_ << "' returned " << f.size() << " costs, expected "
       << n_objectives_;
    throw EvaluationError(os.str());
  }
  return f;
}

const char* to_string(Provenance p) noexcept {
  return p == Provenance::Evaluated ? "evaluated" : "predicted";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "evaluated") return Provenance::Evaluated;
  if (s == "predicted") return Provenance::Predicted;
  throw ContractViolation("unknown provenance '" + s + "'");
}

void Individual::validate(const ProblemSpec& spec) const {
  if (!spec.contains(x)) throw_contract("Individual: x outside parameter bounds");
  if (f.size() != spec.n_objectives()) throw_contract("Individual: cost arity mismatch");
  const bool predicted = provenance == Provenance::Predicted;
  if (predicted != predicted_std.has_value()) {
    throw_contract("Individual: predicted_std must be present iff provenance is predicted");
  }
  if (predicted_std) {
    if (predicted_std->size() != f.size()) throw_contract("Individual: predicted_std arity");
    for (double s : *predicted_std) {
      if (!(s >= 0.0)) throw_contract("Individual: negative predicted_std");
    }
  }
}

bool Population::consistent() const noexcept {
  if (members.empty()) return true;
  const auto nx = members.front().x.size();
  const auto nf = members.front().f.size();
  return std::all_of(members.begin(), members.end(), [&](const Individual& m) {
    return m.x.size() == nx && m.f.size() == nf;
  });
}

Vector normalize(std::span<const double> x, const ProblemSpec& spec) {
  if (x.size() != spec.dimension()) throw_contract("normalize: length mismatch");
  Vector u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& p = spec.parameters()[i];
    if (!(x[i] >= p.lower && x[i] <= p.upper)) {
      throw_contract("normalize: coordinate " + std::to_string(i) + " outside bounds");
    }
    u[i] = (x[i] - p.lower) / p.range();
  }
  return u;
}

Vector denormalize(std::span<const double> u, const ProblemSpec& spec) {
  if (u.size() != spec.dimension()) throw_contract("denormalize: length mismatch");
  Vector x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] >= 0.0 && u[i] <= 1.0)) {
      throw_contract("denormalize: coordinate " + std::to_string(i) + " outside [0,1]");
    }
    const auto& p = spec.parameters()[i];
    // Endpoints map exactly onto the bounds.
    x[i] = u[i] == 1.0 ? p.upper : p.lower + u[i] * p.range();
  }
  return x;
}

} // namespace rdo
