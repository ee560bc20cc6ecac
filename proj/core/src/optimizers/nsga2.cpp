#include "rdo/optimizers/nsga2.hpp"

#include <algorithm>
#include <numeric>

#include "rdo/errors.hpp"
#include "rdo/optimizers/operators.hpp"
#include "rdo/optimizers/sorting.hpp"
#include "rdo/random.hpp"

namespace rdo {

void Nsga2Config::validate() const {
  if (population_size == 0 || population_size % 2 != 0) {
    throw ConfigError("nsga2: population_size must be a positive even number");
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw ConfigError("nsga2: crossover_prob must lie in [0,1]");
  }
  if (!(eta_crossover > 0.0)) throw ConfigError("nsga2: eta_crossover must be > 0");
  if (!(eta_mutation > 0.0)) throw ConfigError("nsga2: eta_mutation must be > 0");
  if (mutation_prob && !(*mutation_prob >= 0.0 && *mutation_prob <= 1.0)) {
    throw ConfigError("nsga2: mutation_prob must lie in [0,1]");
  }
}

namespace {

struct Member {
  Individual ind;
  Vector unit;
};

struct Ranking {
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
};

Ranking rank_members(std::span<const Vector> costs) {
  Ranking r{std::vector<std::size_t>(costs.size(), 0), std::vector<double>(costs.size(), 0.0)};
  const auto fronts = fast_non_dominated_sort(costs);
  for (std::size_t k = 0; k < fronts.size(); ++k) {
    std::vector<Vector> front_costs;
    front_costs.reserve(fronts[k].size());
    for (auto i : fronts[k]) front_costs.push_back(costs[i]);
    const auto cd = crowding_distance(front_costs);
    for (std::size_t j = 0; j < fronts[k].size(); ++j) {
      r.rank[fronts[k][j]] = k;
      r.crowding[fronts[k][j]] = cd[j];
    }
  }
  return r;
}

// true if a beats b: lower rank, then larger crowding, then lower index.
bool better(const Ranking& r, std::size_t a, std::size_t b) {
  if (r.rank[a] != r.rank[b]) return r.rank[a] < r.rank[b];
  if (r.crowding[a] != r.crowding[b]) return r.crowding[a] > r.crowding[b];
  return a < b;
}

std::size_t tournament(const Ranking& r, std::size_t n, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const auto a = pick(rng);
  const auto b = pick(rng);
  return better(r, a, b) ? a : b;
}

std::vector<Member> evaluate_batch(const ProblemSpec& spec, Evaluator& eval,
                                   std::vector<Vector> units, std::size_t generation) {
  std::vector<Vector> xs;
  xs.reserve(units.size());
  for (const auto& u : units) xs.push_back(denormalize(u, spec));
  auto results = eval.evaluate(xs);
  if (results.size() != xs.size()) throw EvaluationError("evaluator returned wrong batch size");
  std::vector<Member> batch;
  batch.reserve(units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (results[i].f.size() != spec.n_objectives()) {
      throw EvaluationError("evaluator returned wrong cost arity");
    }
    Individual ind{std::move(xs[i]), std::move(results[i].f), results[i].provenance,
                   std::move(results[i].predicted_std), generation};
    batch.push_back(Member{std::move(ind), std::move(units[i])});
  }
  return batch;
}

Population as_population(const std::vector<Member>& members, std::size_t generation) {
  Population pop{generation, {}};
  pop.members.reserve(members.size());
  for (const auto& m : members) pop.members.push_back(m.ind);
  return pop;
}

} // namespace

std::vector<std::size_t> elitist_truncation(std::span<const Vector> costs, std::size_t keep) {
  std::vector<std::size_t> chosen;
  chosen.reserve(keep);
  for (const auto& front : fast_non_dominated_sort(costs)) {
    if (chosen.size() >= keep) break;
    if (chosen.size() + front.size() <= keep) {
      chosen.insert(chosen.end(), front.begin(), front.end());
      continue;
    }
    std::vector<Vector> front_costs;
    for (auto i : front) front_costs.push_back(costs[i]);
    const auto cd = crowding_distance(front_costs);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
    for (std::size_t k = 0; chosen.size() < keep; ++k) chosen.push_back(front[order[k]]);
  }
  return chosen;
}

Nsga2Result nsga2_run(const ProblemSpec& spec, const Nsga2Config& cfg, Evaluator& eval,
                      const GenerationObserver& observer) {
  cfg.validate();
  const std::size_t d = spec.dimension();
  const std::size_t n = cfg.population_size;
  const double pm = cfg.mutation_prob.value_or(1.0 / static_cast<double>(d));

  Nsga2Result result;
  auto record = [&](const std::vector<Member>& batch, std::size_t generation) {
    for (const auto& m : batch) result.archive.push_back(m.ind);
    result.requests += batch.size();
    if (observer) observer(as_population(batch, generation));
  };

  std::vector<Vector> init(n, Vector(d));
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = make_stream(cfg.seed, 0, i);
    for (auto& v : init[i]) v = uniform01(rng);
  }
  auto parents = evaluate_batch(spec, eval, std::move(init), 0);
  record(parents, 0);

  for (std::size_t gen = 1; gen < cfg.generations; ++gen) {
    std::vector<Vector> parent_costs;
    for (const auto& m : parents) parent_costs.push_back(m.ind.f);
    const auto ranking = rank_members(parent_costs);

    std::vector<Vector> children;
    children.reserve(n);
    for (std::size_t pair = 0; pair < n / 2; ++pair) {
      auto rng = make_stream(cfg.seed, gen, pair);
      const auto a = tournament(ranking, n, rng);
      const auto b = tournament(ranking, n, rng);
      Vector c1 = parents[a].unit;
      Vector c2 = parents[b].unit;
      if (uniform01(rng) < cfg.crossover_prob) {
        std::tie(c1, c2) = sbx_crossover(parents[a].unit, parents[b].unit, cfg.eta_crossover, rng);
      }
      children.push_back(polynomial_mutation(c1, cfg.eta_mutation, pm, rng));
      children.push_back(polynomial_mutation(c2, cfg.eta_mutation, pm, rng));
    }
    auto offspring = evaluate_batch(spec, eval, std::move(children), gen);
    record(offspring, gen);

    std::vector<Member> combined = std::move(parents);
    combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
    std::vector<Vector> combined_costs;
    for (const auto& m : combined) combined_costs.push_back(m.ind.f);
    parents.clear();
    for (auto i : elitist_truncation(combined_costs, n)) parents.push_back(combined[i]);
  }

  const std::size_t last = cfg.generations > 0 ? cfg.generations - 1 : 0;
  result.final_population = as_population(parents, last);
  return result;
}

} // namespace rdo
