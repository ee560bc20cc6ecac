#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rdo/evaluator.hpp"
#include "rdo/surrogate/gp.hpp"

namespace rdo {

struct SurrogateConfig {
  // True evaluations between (re)fits; the first model is built after this many.
  std::size_t train_step = 30;
  // A request is answered by the model when every objective's predicted std is
  // at most sigma_gate times that objective's target range in the training set.
  double sigma_gate = 0.05;
  bool enabled = true;
  std::size_t max_training = 512;
  double length_scale = 0.3;
  bool tune_length_scale = false;

  void validate() const;
};

struct SurrogateCounters {
  std::size_t n_predicted = 0;
  std::size_t n_evaluated = 0;

  std::size_t total() const noexcept { return n_predicted + n_evaluated; }
};

/// Evaluation channel that answers from per-objective Gaussian processes when
/// they are confident and falls back to the wrapped true evaluator otherwise.
///
/// Requests are processed in order. True evaluations accumulate until the
/// next multiple of train_step is reached, then run as one batch on the inner
/// evaluator (which may be parallel) and are appended to the training set in
/// request order before the models are refit. Predicted costs never enter the
/// training set. Non-finite true costs are served but not trained on.
class SurrogateManager final : public Evaluator {
public:
  SurrogateManager(const ProblemSpec& spec, Evaluator& truth, SurrogateConfig cfg);

  std::vector<Evaluation> evaluate(std::span<const Vector> xs) override;
  std::size_t requests_served() const noexcept override { return counters_.total(); }

  const SurrogateCounters& counters() const noexcept { return counters_; }
  const SurrogateConfig& config() const noexcept { return cfg_; }
  // n_evaluated at every fit attempt, successful or not.
  const std::vector<std::size_t>& fit_trace() const noexcept { return fit_trace_; }
  std::size_t fit_failures() const noexcept { return fit_failures_; }
  bool has_model() const noexcept { return !models_.empty(); }
  std::size_t training_size() const noexcept { return train_x_.size(); }
  const std::vector<Vector>& training_inputs() const noexcept { return train_x_; }

private:
  void flush(std::span<const Vector> xs, std::span<const std::size_t> slots,
             std::vector<Evaluation>& out);
  void refit();
  std::optional<Evaluation> try_predict(const Vector& x) const;

  const ProblemSpec* spec_;
  Evaluator* truth_;
  SurrogateConfig cfg_;
  SurrogateCounters counters_;
  std::vector<Vector> train_x_; // unit cube
  std::vector<Vector> train_f_;
  std::vector<GPModel> models_;
  std::vector<double> gate_;
  std::vector<std::size_t> fit_trace_;
  std::size_t fit_failures_ = 0;
};

} // namespace rdo
