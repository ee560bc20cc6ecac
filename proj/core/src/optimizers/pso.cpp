#include "rdo/optimizers/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdo/errors.hpp"
#include "rdo/random.hpp"

namespace rdo {

void PsoConfig::validate() const {
  if (swarm_size < 2) throw ConfigError("pso: swarm_size must be >= 2");
  if (iterations == 0) throw ConfigError("pso: iterations must be positive");
  if (!(cognitive >= 0.0) || !(social >= 0.0)) {
    throw ConfigError("pso: cognitive and social weights must be >= 0");
  }
}

namespace {

double comparable(double f) { return std::isnan(f) ? std::numeric_limits<double>::infinity() : f; }

} // namespace

PsoResult pso_run(const ProblemSpec& spec, const PsoConfig& cfg, Evaluator& eval) {
  cfg.validate();
  if (spec.n_objectives() != 1) {
    throw ConfigError("pso: requires a single-objective problem, got " +
                      std::to_string(spec.n_objectives()) + " objectives");
  }
  const std::size_t d = spec.dimension();
  const std::size_t n = cfg.swarm_size;

  std::vector<Vector> pos(n, Vector(d));
  std::vector<Vector> vel(n, Vector(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = make_stream(cfg.seed, 0, i);
    for (auto& v : pos[i]) v = uniform01(rng);
  }

  PsoResult result;
  auto evaluate = [&](std::size_t iteration) {
    std::vector<Vector> xs;
    for (const auto& u : pos) xs.push_back(denormalize(u, spec));
    auto evals = eval.evaluate(xs);
    result.requests += xs.size();
    std::vector<Individual> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(Individual{std::move(xs[i]), std::move(evals[i].f), evals[i].provenance,
                               std::move(evals[i].predicted_std), iteration});
    }
    return out;
  };

  auto current = evaluate(0);
  std::vector<Vector> pbest = pos;
  std::vector<double> pbest_f(n);
  for (std::size_t i = 0; i < n; ++i) pbest_f[i] = comparable(current[i].f[0]);
  std::size_t g = static_cast<std::size_t>(
      std::min_element(pbest_f.begin(), pbest_f.end()) - pbest_f.begin());
  Vector gbest = pbest[g];
  double gbest_f = pbest_f[g];
  result.best = current[g];
  result.best_history.push_back(gbest_f);

  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      auto rng = make_stream(cfg.seed, it, i);
      for (std::size_t k = 0; k < d; ++k) {
        const double r1 = uniform01(rng);
        const double r2 = uniform01(rng);
        vel[i][k] = cfg.inertia * vel[i][k] + cfg.cognitive * r1 * (pbest[i][k] - pos[i][k]) +
                    cfg.social * r2 * (gbest[k] - pos[i][k]);
        pos[i][k] = std::clamp(pos[i][k] + vel[i][k], 0.0, 1.0);
      }
    }
    current = evaluate(it);
    for (std::size_t i = 0; i < n; ++i) {
      const double f = comparable(current[i].f[0]);
      if (f < pbest_f[i]) {
        pbest_f[i] = f;
        pbest[i] = pos[i];
      }
    }
    // Synchronous global-best update after the whole swarm moved.
    for (std::size_t i = 0; i < n; ++i) {
      if (pbest_f[i] < gbest_f) {
        gbest_f = pbest_f[i];
        gbest = pbest[i];
        result.best = current[i];
      }
    }
    result.best_history.push_back(gbest_f);
    std::vector<Vector> snapshot;
    for (const auto& c : current) snapshot.push_back(c.x);
    result.positions.push_back(std::move(snapshot));
  }
  return result;
}

} // namespace rdo
