#include <benchmark/benchmark.h>

#include <random>

#include "rdo/evaluator.hpp"
#include "rdo/optimizers/nsga2.hpp"
#include "rdo/optimizers/sorting.hpp"
#include "rdo/rom/heat.hpp"
#include "rdo/rom/pod.hpp"
#include "rdo/rom/state_space.hpp"
#include "rdo/surrogate/gp.hpp"
#include "rdo/team/benchmark.hpp"
#include "rdo/team/field.hpp"

using namespace rdo;

namespace {

void BM_TurnField(benchmark::State& state) {
  const Turn turn{9e-3, 10e-3, 1e-3, 2.5e-3, 1.0};
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(turn_field(turn, 4e-3, 3e-3, order));
}
BENCHMARK(BM_TurnField)->Arg(32)->Arg(64)->Arg(128);

void BM_TeamObjectives(benchmark::State& state) {
  const auto spec = team_problem(BenchmarkConfig::defaults());
  const auto x = BenchmarkConfig::defaults().mid_radii();
  for (auto _ : state) benchmark::DoNotOptimize(spec.evaluate(x));
}
BENCHMARK(BM_TeamObjectives);

void BM_NonDominatedSort(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> costs(static_cast<std::size_t>(state.range(0)), Vector(2));
  for (auto& c : costs) c = {u(rng), u(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(fast_non_dominated_sort(costs));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NonDominatedSort)->RangeMultiplier(2)->Range(40, 640)->Complexity();

void BM_GpFit(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd X(n, 10);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < 10; ++j) X(i, j) = u(rng);
    y[i] = X.row(i).squaredNorm();
  }
  const auto kernel = default_kernel(y, 10, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(GPModel::fit(X, y, kernel));
}
BENCHMARK(BM_GpFit)->Arg(30)->Arg(120)->Arg(512);

void BM_Nsga2Team(benchmark::State& state) {
  const auto spec = team_problem(BenchmarkConfig::defaults());
  Nsga2Config cfg;
  cfg.generations = 10;
  for (auto _ : state) {
    DirectEvaluator eval(spec, 1);
    benchmark::DoNotOptimize(nsga2_run(spec, cfg, eval));
  }
}
BENCHMARK(BM_Nsga2Team)->Unit(benchmark::kMillisecond);

void BM_HeatPod(benchmark::State& state) {
  const auto sys = heat_fd_model(HeatRodConfig{});
  const auto t = uniform_grid(1.0, 200);
  const Eigen::MatrixXd u = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(t.size()), 1);
  const auto traj = simulate_continuous(full_state_space(sys), u, t, Eigen::VectorXd::Zero(sys.size()), true);
  SnapshotMatrix snap;
  snap.U = traj.states.rightCols(200);
  snap.times.assign(t.begin() + 1, t.end());
  for (auto _ : state) benchmark::DoNotOptimize(pod_reduce(sys, pod_modes(snap, 4).modes));
}
BENCHMARK(BM_HeatPod)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
