#include "rdo/surrogate/manager.hpp"

#include <algorithm>
#include <cmath>

#include "rdo/errors.hpp"

namespace rdo {

void SurrogateConfig::validate() const {
  if (train_step == 0) throw ConfigError("surrogate: train_step must be positive");
  if (!(sigma_gate > 0.0 && sigma_gate < 1.0)) {
    throw ConfigError("surrogate: sigma_gate must lie in (0,1)");
  }
  if (max_training < 2) throw ConfigError("surrogate: max_training must be >= 2");
  if (!(length_scale > 0.0)) throw ConfigError("surrogate: length_scale must be > 0");
}

SurrogateManager::SurrogateManager(const ProblemSpec& spec, Evaluator& truth, SurrogateConfig cfg)
    : spec_(&spec), truth_(&truth), cfg_(cfg) {
  cfg_.validate();
}

std::optional<Evaluation> SurrogateManager::try_predict(const Vector& x) const {
  if (models_.empty()) return std::nullopt;
  const Vector u = normalize(x, *spec_);
  Evaluation e;
  e.provenance = Provenance::Predicted;
  e.predicted_std.emplace();
  for (std::size_t j = 0; j < models_.size(); ++j) {
    const auto p = models_[j].predict(u);
    if (!(p.std <= gate_[j])) return std::nullopt;
    e.f.push_back(p.mean);
    e.predicted_std->push_back(p.std);
  }
  return e;
}

std::vector<Evaluation> SurrogateManager::evaluate(std::span<const Vector> xs) {
  std::vector<Evaluation> out(xs.size());
  if (!cfg_.enabled) {
    out = truth_->evaluate(xs);
    counters_.n_evaluated += xs.size();
    return out;
  }

  std::vector<Vector> pending;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (auto predicted = try_predict(xs[i])) {
      out[i] = std::move(*predicted);
      ++counters_.n_predicted;
      continue;
    }
    pending.push_back(xs[i]);
    slots.push_back(i);
    if ((counters_.n_evaluated + pending.size()) % cfg_.train_step == 0) {
      flush(pending, slots, out);
      pending.clear();
      slots.clear();
    }
  }
  if (!pending.empty()) flush(pending, slots, out);
  return out;
}

void SurrogateManager::flush(std::span<const Vector> xs, std::span<const std::size_t> slots,
                             std::vector<Evaluation>& out) {
  auto results = truth_->evaluate(xs);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto& f = results[k].f;
    if (std::all_of(f.begin(), f.end(), [](double v) { return std::isfinite(v); })) {
      train_x_.push_back(normalize(xs[k], *spec_));
      train_f_.push_back(f);
    }
    out[slots[k]] = std::move(results[k]);
  }
  counters_.n_evaluated += xs.size();
  if (train_x_.size() > cfg_.max_training) {
    const auto excess = static_cast<std::ptrdiff_t>(train_x_.size() - cfg_.max_training);
    train_x_.erase(train_x_.begin(), train_x_.begin() + excess);
    train_f_.erase(train_f_.begin(), train_f_.begin() + excess);
  }
  if (counters_.n_evaluated % cfg_.train_step == 0) refit();
}

void SurrogateManager::refit() {
  fit_trace_.push_back(counters_.n_evaluated);
  models_.clear();
  gate_.clear();
  const auto n = static_cast<Eigen::Index>(train_x_.size());
  const auto d = static_cast<Eigen::Index>(spec_->dimension());
  if (n < 2) {
    ++fit_failures_;
    return;
  }
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) X(i, c) = train_x_[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  }
  std::vector<GPModel> models;
  std::vector<double> gate;
  try {
    for (std::size_t j = 0; j < spec_->n_objectives(); ++j) {
      Eigen::VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i) y[i] = train_f_[static_cast<std::size_t>(i)][j];
      auto kernel = default_kernel(y, d, cfg_.length_scale);
      if (cfg_.tune_length_scale) kernel = tune_length_scale(X, y, kernel);
      models.push_back(GPModel::fit(X, y, kernel));
      gate.push_back(cfg_.sigma_gate * (y.maxCoeff() - y.minCoeff()));
    }
  } catch (const FitError&) {
    // Pass-through until the next scheduled refit.
    ++fit_failures_;
    return;
  }
  models_ = std::move(models);
  gate_ = std::move(gate);
}

} // namespace rdo
