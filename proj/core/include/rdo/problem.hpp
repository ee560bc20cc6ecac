#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rdo {

using Vector = std::vector<double>;

struct Parameter {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;

  double range() const noexcept { return upper - lower; }
};

// Maps a decision vector to a cost vector. All objectives are minimized;
// maximization problems negate at this boundary. A NaN component marks the
// point infeasible.
using CostFunction = std::function<Vector(std::span<const double>)>;

/// Problem definition kept separate from any algorithm: box-bounded
/// parameters, objective arity and the cost-function binding.
class ProblemSpec {
public:
  ProblemSpec(std::vector<Parameter> parameters, std::size_t n_objectives,
              std::string evaluator_id, CostFunction cost);

  const std::vector<Parameter>& parameters() const noexcept { return parameters_; }
  std::size_t dimension() const noexcept { return parameters_.size(); }
  std::size_t n_objectives() const noexcept { return n_objectives_; }
  const std::string& evaluator_id() const noexcept { return evaluator_id_; }

  Vector lower() const;
  Vector upper() const;
  bool contains(std::span<const double> x) const noexcept;

  // Evaluates the bound cost function and checks the returned arity.
  Vector evaluate(std::span<const double> x) const;

private:
  std::vector<Parameter> parameters_;
  std::size_t n_objectives_;
  std::string evaluator_id_;
  CostFunction cost_;
};

enum class Provenance { Evaluated, Predicted };

const char* to_string(Provenance p) noexcept;
Provenance provenance_from_string(const std::string& s);

struct Individual {
  Vector x;
  Vector f;
  Provenance provenance = Provenance::Evaluated;
  std::optional<Vector> predicted_std;
  std::size_t generation = 0;

  // Throws ContractViolation if the provenance/std pairing or bounds are off.
  void validate(const ProblemSpec& spec) const;

  friend bool operator==(const Individual&, const Individual&) = default;
};

struct Population {
  std::size_t generation = 0;
  std::vector<Individual> members;

  bool consistent() const noexcept;
};

// Affine map of the parameter box onto the unit cube and back.
Vector normalize(std::span<const double> x, const ProblemSpec& spec);
Vector denormalize(std::span<const double> u, const ProblemSpec& spec);

} // namespace rdo
