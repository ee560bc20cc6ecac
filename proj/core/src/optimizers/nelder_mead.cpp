#include "rdo/optimizers/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rdo/errors.hpp"

namespace rdo {

void NelderMeadConfig::validate() const {
  if (x0.empty()) throw ConfigError("nelder_mead: empty x0");
  if (max_iters == 0) throw ConfigError("nelder_mead: max_iters must be positive");
  if (!(f_tol > 0.0) || !(x_tol > 0.0)) throw ConfigError("nelder_mead: tolerances must be > 0");
  if (!(reflection > 0.0)) throw ConfigError("nelder_mead: reflection must be > 0");
  if (!(expansion > 1.0)) throw ConfigError("nelder_mead: expansion must be > 1");
  if (!(contraction > 0.0 && contraction < 1.0)) {
    throw ConfigError("nelder_mead: contraction must lie in (0,1)");
  }
  if (!(shrink > 0.0 && shrink < 1.0)) throw ConfigError("nelder_mead: shrink must lie in (0,1)");
  if (!(initial_step > 0.0)) throw ConfigError("nelder_mead: initial_step must be > 0");
  if (lower.has_value() != upper.has_value()) {
    throw ConfigError("nelder_mead: give both lower and upper bounds or neither");
  }
  if (lower) {
    if (lower->size() != x0.size() || upper->size() != x0.size()) {
      throw ConfigError("nelder_mead: bound length mismatch");
    }
    for (std::size_t i = 0; i < x0.size(); ++i) {
      if (!((*lower)[i] < (*upper)[i])) throw ConfigError("nelder_mead: lower must be < upper");
      if (x0[i] < (*lower)[i] || x0[i] > (*upper)[i]) throw ConfigError("nelder_mead: x0 out of bounds");
    }
  }
}

NelderMeadResult nelder_mead_run(const ScalarObjective& objective, const NelderMeadConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.x0.size();
  const bool bounded = cfg.lower.has_value();
  NelderMeadResult result;

  auto project = [&](Vector& x) {
    if (!bounded) return;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], (*cfg.lower)[i], (*cfg.upper)[i]);
  };
  auto eval = [&](const Vector& x) {
    ++result.evaluations;
    const double f = objective(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };

  const double f0 = objective(cfg.x0);
  ++result.evaluations;
  if (std::isnan(f0)) throw EvaluationError("nelder_mead: objective is NaN at x0");

  std::vector<Vector> simplex{cfg.x0};
  std::vector<double> values{f0};
  for (std::size_t i = 0; i < n; ++i) {
    Vector x = cfg.x0;
    double step = bounded ? cfg.initial_step * ((*cfg.upper)[i] - (*cfg.lower)[i])
                          : cfg.initial_step * std::max(std::abs(cfg.x0[i]), 1.0);
    if (bounded && x[i] + step > (*cfg.upper)[i]) step = -step;
    x[i] += step;
    project(x);
    values.push_back(eval(x));
    simplex.push_back(std::move(x));
  }

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Vector> s;
    std::vector<double> v;
    for (auto k : order) {
      s.push_back(std::move(simplex[k]));
      v.push_back(values[k]);
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto converged = [&] {
    const double spread = values.back() - values.front();
    double diameter = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[0][i]));
      }
    }
    return spread <= cfg.f_tol && diameter <= cfg.x_tol;
  };
  auto along = [&](const Vector& from, const Vector& to, double t) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = from[i] + t * (to[i] - from[i]);
    project(x);
    return x;
  };

  sort_simplex();
  while (result.iterations < cfg.max_iters) {
    if (converged()) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    Vector centroid(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
    }
    const Vector& worst = simplex[n];
    const Vector xr = along(centroid, worst, -cfg.reflection);
    const double fr = eval(xr);

    bool do_shrink = false;
    if (fr < values[0]) {
      const Vector xe = along(centroid, xr, cfg.expansion);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else if (fr < values[n]) {
      const Vector xc = along(centroid, xr, cfg.contraction);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        do_shrink = true;
      }
    } else {
      const Vector xc = along(centroid, worst, cfg.contraction);
      const double fc = eval(xc);
      if (fc < values[n]) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        do_shrink = true;
      }
    }
    if (do_shrink) {
      for (std::size_t k = 1; k <= n; ++k) {
        simplex[k] = along(simplex[0], simplex[k], cfg.shrink);
        values[k] = eval(simplex[k]);
      }
    }
    sort_simplex();
  }
  if (!result.converged) result.converged = converged();
  result.x = simplex[0];
  result.f = values[0];
  return result;
}

} // namespace rdo
