#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rdo/problem.hpp"

namespace rdo {

struct Evaluation {
  Vector f;
  Provenance provenance = Provenance::Evaluated;
  std::optional<Vector> predicted_std;
};

// Evaluation channel between an algorithm and a problem. A batch is one
// generation; implementations may evaluate its members concurrently but must
// return results in request order.
class Evaluator {
public:
  virtual ~Evaluator() = default;
  virtual std::vector<Evaluation> evaluate(std::span<const Vector> xs) = 0;
  virtual std::size_t requests_served() const noexcept = 0;
};

// Runs a std::function over [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// True evaluation of a ProblemSpec, optionally multi-threaded.
class DirectEvaluator final : public Evaluator {
public:
  explicit DirectEvaluator(const ProblemSpec& spec, unsigned threads = 1);

  std::vector<Evaluation> evaluate(std::span<const Vector> xs) override;
  std::size_t requests_served() const noexcept override { return served_; }

private:
  const ProblemSpec* spec_;
  unsigned threads_;
  std::size_t served_ = 0;
};

} // namespace rdo
