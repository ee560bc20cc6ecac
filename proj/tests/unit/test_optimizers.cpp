#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rdo/dominance.hpp"
#include "rdo/errors.hpp"
#include "rdo/evaluator.hpp"
#include "rdo/optimizers/nelder_mead.hpp"
#include "rdo/optimizers/nsga2.hpp"
#include "rdo/optimizers/operators.hpp"
#include "rdo/optimizers/pso.hpp"
#include "rdo/optimizers/sorting.hpp"
#include "rdo/random.hpp"
#include "rdo/team/benchmark.hpp"

using namespace rdo;

namespace {

ProblemSpec zdt1(std::size_t d) {
  std::vector<Parameter> params;
  for (std::size_t i = 0; i < d; ++i) params.push_back({"x" + std::to_string(i), 0.0, 1.0});
  return ProblemSpec(std::move(params), 2, "zdt1", [](std::span<const double> x) {
    double g = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) g += x[i];
    g = 1.0 + 9.0 * g / static_cast<double>(x.size() - 1);
    return Vector{x[0], g * (1.0 - std::sqrt(x[0] / g))};
  });
}

ProblemSpec sphere(std::size_t d) {
  std::vector<Parameter> params;
  for (std::size_t i = 0; i < d; ++i) params.push_back({"x" + std::to_string(i), -5.0, 5.0});
  return ProblemSpec(std::move(params), 1, "sphere", [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return Vector{s};
  });
}

std::vector<Vector> archive_costs(const Nsga2Result& r) {
  std::vector<Vector> out;
  for (const auto& ind : r.archive) out.push_back(ind.f);
  return out;
}

} // namespace

TEST_CASE("fast_non_dominated_sort examples") {
  std::vector<Vector> c{{1, 2}, {2, 1}, {3, 3}};
  auto fronts = fast_non_dominated_sort(c);
  REQUIRE(fronts.size() == 2);
  CHECK(fronts[0] == Front{0, 1});
  CHECK(fronts[1] == Front{2});

  std::vector<Vector> same(5, Vector{1.0, 1.0});
  fronts = fast_non_dominated_sort(same);
  REQUIRE(fronts.size() == 1);
  CHECK(fronts[0].size() == 5);

  CHECK(fast_non_dominated_sort(std::vector<Vector>{}).empty());
}

TEST_CASE("fast_non_dominated_sort equals brute-force peeling") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> coarse(0, 9);
  std::uniform_real_distribution<double> fine(0.0, 1.0);
  for (std::size_t m : {2u, 3u}) {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 1 + (trial * 37) % 200;
      std::vector<Vector> c(n, Vector(m));
      for (auto& v : c) {
        for (auto& e : v) e = trial % 2 ? fine(rng) : coarse(rng);
      }
      const auto fronts = fast_non_dominated_sort(c);
      const auto expected = oracle::peel_fronts(c);
      REQUIRE(fronts.size() == expected.size());
      std::size_t total = 0;
      for (std::size_t k = 0; k < fronts.size(); ++k) {
        CHECK(fronts[k] == expected[k]);
        total += fronts[k].size();
      }
      CHECK(total == n);
    }
  }
}

TEST_CASE("crowding distance") {
  const double inf = std::numeric_limits<double>::infinity();
  auto two = crowding_distance(std::vector<Vector>{{0, 1}, {1, 0}});
  CHECK(two == std::vector<double>{inf, inf});

  auto three = crowding_distance(std::vector<Vector>{{0, 2}, {1, 1}, {2, 0}});
  CHECK(three[0] == inf);
  CHECK(three[2] == inf);
  CHECK(three[1] == doctest::Approx(2.0));

  // Second objective is flat: contributes nothing.
  auto flat = crowding_distance(std::vector<Vector>{{0, 5}, {1, 5}, {3, 5}, {4, 5}});
  CHECK(flat[0] == inf);
  CHECK(flat[3] == inf);
  CHECK(flat[1] == doctest::Approx(3.0 / 4.0));
  CHECK(flat[2] == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("SBX fixed point at u = 0.5") {
  CHECK(sbx_spread(0.5, 15.0) == doctest::Approx(1.0));
  Vector p1{0.2, 0.7}, p2{0.6, 0.1};
  Vector u{0.5, 0.5};
  auto [c1, c2] = sbx_blend(p1, p2, u, 15.0);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(c1[i] == doctest::Approx(p1[i]));
    CHECK(c2[i] == doctest::Approx(p2[i]));
  }
}

TEST_CASE("SBX preserves the parent mean before clipping") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    Vector p1(4), p2(4), u(4);
    for (int i = 0; i < 4; ++i) {
      p1[i] = unif(rng);
      p2[i] = unif(rng);
      u[i] = unif(rng);
    }
    auto [c1, c2] = sbx_blend(p1, p2, u, 15.0);
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(0.5 * (c1[i] + c2[i]) - 0.5 * (p1[i] + p2[i])));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("SBX children stay in the unit cube") {
  Rng rng = make_stream(9, 0, 0);
  for (int trial = 0; trial < 2000; ++trial) {
    Vector p1{uniform01(rng), 0.0, 1.0}, p2{uniform01(rng), 1.0, 0.999};
    auto [c1, c2] = sbx_crossover(p1, p2, 2.0, rng);
    for (double v : c1) CHECK((v >= 0.0 && v <= 1.0));
    for (double v : c2) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("SBX spread distribution matches the beta CDF") {
  const double eta = 15.0;
  Rng rng = make_stream(12, 0, 0);
  const int n = 100000;
  std::vector<double> betas(n);
  for (auto& b : betas) b = sbx_spread(uniform01(rng), eta);
  for (double q : {0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.3}) {
    const double emp = static_cast<double>(std::count_if(betas.begin(), betas.end(), [&](double b) { return b <= q; })) / n;
    CHECK(std::abs(emp - oracle::sbx_beta_cdf(q, eta)) < 0.01);
  }

  // |c - p| > 0.25 for parents 0.2 / 0.8: |c1 - p1| = |beta - 1| * 0.3.
  const double p1 = 0.2, p2 = 0.8;
  int count = 0;
  Rng rng2 = make_stream(13, 0, 0);
  for (int i = 0; i < n; ++i) {
    Vector u{uniform01(rng2)};
    auto [c1, c2] = sbx_blend(Vector{p1}, Vector{p2}, u, eta);
    if (std::abs(c1[0] - p1) > 0.25) ++count;
  }
  const double threshold = 0.25 / (0.5 * (p2 - p1));
  const double expected = (1.0 - oracle::sbx_beta_cdf(1.0 + threshold, eta)) +
                          oracle::sbx_beta_cdf(std::max(0.0, 1.0 - threshold), eta);
  CHECK(std::abs(static_cast<double>(count) / n - expected) < 0.01);
}

TEST_CASE("polynomial mutation") {
  Rng rng = make_stream(1, 2, 3);
  Vector x{0.0, 0.3, 1.0};
  CHECK(polynomial_mutation(x, 20.0, 0.0, rng) == x);

  for (int i = 0; i < 10000; ++i) {
    const double y = polynomial_perturb(0.0, 20.0, uniform01(rng));
    CHECK(y >= 0.0);
    auto m = polynomial_mutation(x, 5.0, 1.0, rng);
    for (double v : m) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("mutation displacement shrinks with eta") {
  auto mean_disp = [](double eta) {
    Rng rng = make_stream(77, 0, 0);
    double s = 0.0;
    for (int i = 0; i < 100000; ++i) s += std::abs(polynomial_perturb(0.5, eta, uniform01(rng)) - 0.5);
    return s / 100000.0;
  };
  const double d20 = mean_disp(20.0);
  const double d200 = mean_disp(200.0);
  CHECK(d200 < d20);
  // Interior point: |delta| has mean 1/(eta + 2) in the unbounded limit.
  CHECK(d20 == doctest::Approx(0.5 / 22.0 * 2.0).epsilon(0.05));
}

TEST_CASE("NSGA-II with zero generations returns the initial population") {
  auto spec = zdt1(4);
  DirectEvaluator eval(spec);
  Nsga2Config cfg;
  cfg.generations = 0;
  auto r = nsga2_run(spec, cfg, eval);
  CHECK(r.requests == cfg.population_size);
  CHECK(r.archive.size() == cfg.population_size);
  CHECK(r.final_population.members.size() == cfg.population_size);
  CHECK(r.final_population.generation == 0);
}

TEST_CASE("NSGA-II request count: 80 populations of 20") {
  auto spec = zdt1(6);
  DirectEvaluator eval(spec);
  Nsga2Config cfg;
  auto r = nsga2_run(spec, cfg, eval);
  CHECK(r.requests == 1600);
  CHECK(r.archive.size() == 1600);
  CHECK(eval.requests_served() == 1600);
  for (const auto& ind : r.archive) CHECK_NOTHROW(ind.validate(spec));
}

TEST_CASE("NSGA-II configuration checks") {
  auto spec = zdt1(3);
  DirectEvaluator eval(spec);
  Nsga2Config cfg;
  cfg.population_size = 7;
  CHECK_THROWS_AS(nsga2_run(spec, cfg, eval), ConfigError);
  cfg = {};
  cfg.crossover_prob = 1.5;
  CHECK_THROWS_AS(nsga2_run(spec, cfg, eval), ConfigError);
}

TEST_CASE("elitist truncation keeps front 0 when it fits") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vector> c(40, Vector(2));
    for (auto& v : c) v = {unif(rng), unif(rng)};
    const auto fronts = oracle::peel_fronts(c);
    const auto kept = elitist_truncation(c, 20);
    CHECK(kept.size() == 20);
    if (fronts[0].size() <= 20) {
      for (auto i : fronts[0]) CHECK(std::find(kept.begin(), kept.end(), i) != kept.end());
    }
  }
}

TEST_CASE("NSGA-II is deterministic and independent of evaluation threads") {
  auto spec = zdt1(5);
  Nsga2Config cfg;
  cfg.generations = 15;
  cfg.seed = 99;
  DirectEvaluator e1(spec, 1), e2(spec, 1), e4(spec, 4);
  auto a = nsga2_run(spec, cfg, e1);
  auto b = nsga2_run(spec, cfg, e2);
  auto c = nsga2_run(spec, cfg, e4);
  CHECK(a.archive == b.archive);
  CHECK(a.archive == c.archive);
  cfg.seed = 100;
  DirectEvaluator e5(spec, 1);
  CHECK_FALSE(nsga2_run(spec, cfg, e5).archive == a.archive);
}

TEST_CASE("NSGA-II archive hypervolume never decreases") {
  auto check_problem = [](const ProblemSpec& spec, std::size_t generations, std::array<double, 2> ref) {
    Nsga2Config cfg;
    cfg.generations = generations;
    DirectEvaluator eval(spec, 2);
    std::vector<Vector> seen;
    double last = -1.0;
    nsga2_run(spec, cfg, eval, [&](const Population& batch) {
      for (const auto& ind : batch.members) seen.push_back(ind.f);
      const auto idx = pareto_indices(seen);
      std::vector<Vector> front;
      for (auto i : idx) front.push_back(seen[i]);
      const double hv = hypervolume_2d(front, ref);
      CHECK(hv >= last);
      if (front.size() <= 14) CHECK(hv == doctest::Approx(oracle::hypervolume_inclusion_exclusion(front, ref)));
      last = hv;
    });
    CHECK(last > 0.0);
  };
  check_problem(zdt1(5), 30, {1.1, 10.0});
  check_problem(team_problem(BenchmarkConfig::defaults()), 6, {1e-3, 1e-4});
}

TEST_CASE("PSO converges on the sphere") {
  auto spec = sphere(5);
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    PsoConfig cfg;
    cfg.seed = seed;
    DirectEvaluator eval(spec);
    auto r = pso_run(spec, cfg, eval);
    total += r.best.f[0];
    CHECK(r.requests == cfg.swarm_size * (cfg.iterations + 1));
    for (std::size_t k = 1; k < r.best_history.size(); ++k) CHECK(r.best_history[k] <= r.best_history[k - 1]);
  }
  CHECK(total / 5.0 < 1e-4);
}

TEST_CASE("PSO swarm freezes with zero coefficients") {
  auto spec = sphere(3);
  PsoConfig cfg;
  cfg.inertia = 0.0;
  cfg.cognitive = 0.0;
  cfg.social = 0.0;
  cfg.iterations = 5;
  DirectEvaluator eval(spec);
  auto r = pso_run(spec, cfg, eval);
  REQUIRE(r.positions.size() == 5);
  for (std::size_t k = 1; k < r.positions.size(); ++k) CHECK(r.positions[k] == r.positions[0]);
}

TEST_CASE("PSO rejects multi-objective problems") {
  auto spec = zdt1(3);
  DirectEvaluator eval(spec);
  CHECK_THROWS_AS(pso_run(spec, PsoConfig{}, eval), ConfigError);
  auto one = sphere(2);
  PsoConfig bad;
  bad.swarm_size = 1;
  CHECK_THROWS_AS(pso_run(one, bad, eval), ConfigError);
}

TEST_CASE("Nelder-Mead on a 1-D quadratic") {
  NelderMeadConfig cfg;
  cfg.x0 = {0.0};
  auto r = nelder_mead_run([](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); }, cfg);
  CHECK(std::abs(r.x[0] - 3.0) < 1e-6);
  CHECK(r.f <= 9.0);
  CHECK(r.converged);
}

TEST_CASE("Nelder-Mead returns immediately from a converged simplex") {
  NelderMeadConfig cfg;
  cfg.x0 = {1.0, 1.0};
  cfg.initial_step = 1e-14;
  cfg.f_tol = 1e-6;
  cfg.x_tol = 1e-6;
  auto r = nelder_mead_run([](std::span<const double> x) { return x[0] + x[1]; }, cfg);
  CHECK(r.iterations == 0);
  CHECK(r.converged);
  CHECK(r.evaluations == 3);
}

TEST_CASE("Nelder-Mead on Rosenbrock") {
  NelderMeadConfig cfg;
  cfg.x0 = {-1.2, 1.0};
  cfg.max_iters = 500;
  auto r = nelder_mead_run(
      [](std::span<const double> x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
      },
      cfg);
  CHECK(r.f < 1e-6);
  CHECK(r.iterations <= 500);
}

TEST_CASE("Nelder-Mead errors") {
  NelderMeadConfig cfg;
  cfg.x0 = {0.0};
  CHECK_THROWS_AS(nelder_mead_run([](std::span<const double>) { return std::nan(""); }, cfg), EvaluationError);
  cfg.expansion = 0.5;
  CHECK_THROWS_AS(nelder_mead_run([](std::span<const double> x) { return x[0]; }, cfg), ConfigError);

  // NaN away from x0 is treated as +inf.
  NelderMeadConfig ok;
  ok.x0 = {0.5};
  auto r = nelder_mead_run([](std::span<const double> x) { return x[0] < 0.0 ? std::nan("") : (x[0] - 0.2) * (x[0] - 0.2); }, ok);
  CHECK(r.x[0] == doctest::Approx(0.2).epsilon(1e-4));
}

TEST_CASE("Nelder-Mead respects bounds") {
  NelderMeadConfig cfg;
  cfg.x0 = {0.5};
  cfg.lower = Vector{0.0};
  cfg.upper = Vector{1.0};
  auto r = nelder_mead_run([](std::span<const double> x) { return x[0]; }, cfg);
  CHECK(r.x[0] >= 0.0);
  CHECK(r.x[0] < 1e-6);
}
