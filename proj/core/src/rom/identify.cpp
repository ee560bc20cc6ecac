#include "rdo/rom/identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/QR>

#include "rdo/errors.hpp"
#include "rdo/evaluator.hpp"
#include "rdo/optimizers/nelder_mead.hpp"
#include "rdo/random.hpp"

namespace rdo {

void IdentifyConfig::validate() const {
  if (restarts == 0) throw ConfigError("identify: restarts must be positive");
  if (max_iters == 0) throw ConfigError("identify: max_iters must be positive");
  if (!(bound_margin > 0.0 && bound_margin < 1.0)) throw ConfigError("identify: bound_margin in (0,1)");
  if (!(gamma_scale > 0.0)) throw ConfigError("identify: gamma_scale must be > 0");
}

Vector least_squares_gamma(std::span<const double> delta, std::span<const double> u,
                           std::span<const double> t_ref, double gamma_bound) {
  SchwartzParams p{Vector(delta.begin(), delta.end()), Vector(delta.size(), 0.0)};
  const Eigen::MatrixXd X = state_trajectory(build_schwartz_system(p), u);
  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(t_ref.data(),
                                                                  static_cast<Eigen::Index>(t_ref.size()));
  const Eigen::VectorXd g = X.colPivHouseholderQr().solve(target);
  Vector gamma(delta.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const double v = g[static_cast<Eigen::Index>(i)];
    gamma[i] = std::isfinite(v) ? std::clamp(v, -gamma_bound, gamma_bound) : 0.0;
  }
  return gamma;
}

namespace {

struct Candidate {
  SchwartzParams params;
  double objective = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;

  void offer(const SchwartzParams& p, double f) {
    ++evaluations;
    if (f < objective) {
      objective = f;
      params = p;
    }
  }
};

constexpr std::size_t kPolishRounds = 3;

Candidate run_restart(std::span<const double> t_ref, std::span<const double> u, std::size_t n,
                      const Vector& delta0, double gamma_bound, const IdentifyConfig& cfg) {
  const double lo = -1.0 + cfg.bound_margin;
  const double hi = 1.0 - cfg.bound_margin;
  const double scale = *std::max_element(t_ref.begin(), t_ref.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  Candidate best;

  // Stage 1: lattice coefficients only, output weights by least squares, on
  // the RMS residual. The max-abs value of every iterate is still recorded.
  NelderMeadConfig stage1;
  stage1.x0 = delta0;
  stage1.lower = Vector(n, lo);
  stage1.upper = Vector(n, hi);
  stage1.max_iters = cfg.max_iters;
  stage1.f_tol = 1e-12 * std::abs(scale);
  stage1.x_tol = 1e-10;
  stage1.initial_step = 0.05;
  auto projected = [&](std::span<const double> delta) {
    SchwartzParams p{Vector(delta.begin(), delta.end()),
                     least_squares_gamma(delta, u, t_ref, gamma_bound)};
    const auto y = simulate_discrete(build_schwartz_system(p), u);
    double ss = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double e = t_ref[k] - y[k];
      ss += e * e;
      worst = std::max(worst, std::abs(e));
    }
    best.offer(p, worst);
    return std::sqrt(ss / static_cast<double>(y.size()));
  };
  nelder_mead_run(projected, stage1);

  // Stage 2: polish the full packed vector on the max-abs objective.
  NelderMeadConfig stage2;
  stage2.lower = Vector(n, lo);
  stage2.upper = Vector(n, hi);
  stage2.lower->resize(2 * n, -gamma_bound);
  stage2.upper->resize(2 * n, gamma_bound);
  stage2.max_iters = cfg.max_iters;
  stage2.f_tol = stage1.f_tol;
  stage2.x_tol = 1e-12;
  stage2.initial_step = 1e-3;
  auto full = [&](std::span<const double> b) {
    const auto p = SchwartzParams::unpack(b);
    const double f = identification_objective(p, u, t_ref);
    best.offer(p, f);
    return f;
  };
  for (std::size_t round = 0; round < kPolishRounds; ++round) {
    stage2.x0 = best.params.packed();
    for (std::size_t i = 0; i < 2 * n; ++i) {
      stage2.x0[i] = std::clamp(stage2.x0[i], (*stage2.lower)[i], (*stage2.upper)[i]);
    }
    nelder_mead_run(full, stage2);
    stage2.initial_step *= 0.1;
  }
  return best;
}

} // namespace

IdentifyResult identify(std::span<const double> t_ref, std::span<const double> u,
                        std::size_t order, const IdentifyConfig& cfg) {
  cfg.validate();
  if (order == 0) throw_contract("identify: order must be >= 1");
  if (t_ref.size() != u.size() || t_ref.empty()) {
    throw_contract("identify: T_ref and u must be non-empty and of equal length");
  }
  double peak = 0.0;
  for (double v : t_ref) {
    if (!std::isfinite(v)) throw_contract("identify: non-finite reference sample");
    peak = std::max(peak, std::abs(v));
  }

  IdentifyResult result;
  if (peak == 0.0) {
    result.params = {Vector(order, 0.0), Vector(order, 0.0)};
    result.objective = identification_objective(result.params, u, t_ref);
    result.evaluations = 1;
    result.restart_objectives = {result.objective};
    return result;
  }
  const double gamma_bound = cfg.gamma_scale * peak;
  const double lo = -1.0 + cfg.bound_margin;
  const double hi = 1.0 - cfg.bound_margin;

  // Latin hypercube over delta: one stratum per restart in every dimension.
  const std::size_t R = cfg.restarts;
  std::vector<Vector> starts(R, Vector(order));
  for (std::size_t i = 0; i < order; ++i) {
    std::vector<std::size_t> strata(R);
    std::iota(strata.begin(), strata.end(), std::size_t{0});
    auto perm_rng = make_stream(cfg.seed, 1, i);
    std::shuffle(strata.begin(), strata.end(), perm_rng);
    for (std::size_t r = 0; r < R; ++r) {
      auto rng = make_stream(cfg.seed, 2, r * order + i);
      const double cell = (static_cast<double>(strata[r]) + uniform01(rng)) / static_cast<double>(R);
      starts[r][i] = lo + cell * (hi - lo);
    }
  }

  std::vector<Candidate> outcomes(R);
  parallel_for(R, cfg.threads, [&](std::size_t r) {
    outcomes[r] = run_restart(t_ref, u, order, starts[r], gamma_bound, cfg);
  });

  std::size_t best = R;
  for (std::size_t r = 0; r < R; ++r) {
    result.restart_objectives.push_back(outcomes[r].objective);
    result.evaluations += outcomes[r].evaluations;
    if (std::isfinite(outcomes[r].objective) &&
        (best == R || outcomes[r].objective < outcomes[best].objective)) {
      best = r;
    }
  }
  if (best == R) throw IdentificationError("identify: every restart ended infeasible");
  result.params = outcomes[best].params;
  result.objective = outcomes[best].objective;
  result.best_restart = best;
  return result;
}

} // namespace rdo
