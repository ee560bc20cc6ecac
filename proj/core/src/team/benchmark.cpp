#include "rdo/team/benchmark.hpp"

#include <cmath>
#include <limits>

#include "rdo/errors.hpp"

namespace rdo {

void ControlRegion::validate() const {
  if (points.empty()) throw ConfigError("control region: needs at least one point");
  if (!(b0 > 0.0)) throw ConfigError("control region: B0 must be positive");
}

ControlRegion ControlRegion::rectangle_boundary(double r0, double r1, double z0, double z1,
                                                std::size_t n, double b0) {
  if (!(r1 > r0) || !(z1 > z0) || n == 0) throw ConfigError("control region: degenerate rectangle");
  const double w = r1 - r0;
  const double h = z1 - z0;
  const double perimeter = 2.0 * (w + h);
  ControlRegion region;
  region.b0 = b0;
  for (std::size_t k = 0; k < n; ++k) {
    double s = perimeter * static_cast<double>(k) / static_cast<double>(n);
    if (s < w) {
      region.points.push_back({r0 + s, z0});
    } else if ((s -= w) < h) {
      region.points.push_back({r1, z0 + s});
    } else if ((s -= h) < w) {
      region.points.push_back({r1 - s, z1});
    } else {
      s -= w;
      region.points.push_back({r0, z1 - s});
    }
  }
  return region;
}

BenchmarkConfig BenchmarkConfig::defaults() {
  BenchmarkConfig cfg;
  cfg.n_turns = 10;
  cfg.width = 1e-3;
  const double height = 1.5e-3;
  for (std::size_t k = 0; k < cfg.n_turns; ++k) {
    const double z0 = -0.5 * height * static_cast<double>(cfg.n_turns) + height * static_cast<double>(k);
    cfg.z_lower.push_back(z0);
    cfg.z_upper.push_back(z0 + height);
    cfg.r_lower.push_back(7e-3);
    cfg.r_upper.push_back(25e-3);
    cfg.currents.push_back(1.0);
  }
  cfg.region = ControlRegion::rectangle_boundary(0.0, 5e-3, 0.0, 5e-3, 21, 2e-4);
  cfg.delta_r = 5e-4;
  return cfg;
}

void BenchmarkConfig::validate() const {
  const auto n = n_turns;
  if (n == 0) throw ConfigError("team: n_turns must be positive");
  if (r_lower.size() != n || r_upper.size() != n || z_lower.size() != n || z_upper.size() != n ||
      currents.size() != n) {
    throw ConfigError("team: per-turn arrays must all have n_turns entries");
  }
  if (!(width > 0.0)) throw ConfigError("team: width must be positive");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(r_lower[k] < r_upper[k])) throw ConfigError("team: r_lower must be < r_upper");
    if (!(r_lower[k] - 0.5 * width > 0.0)) throw ConfigError("team: inner radius must stay positive");
    if (!(z_lower[k] < z_upper[k])) throw ConfigError("team: z_lower must be < z_upper");
  }
  if (field.order < 2) throw ConfigError("team: quadrature order must be >= 2");
  if (!(delta_r >= 0.0)) throw ConfigError("team: delta_r must be >= 0");
  region.validate();
}

Vector BenchmarkConfig::mid_radii() const {
  Vector r(n_turns);
  for (std::size_t k = 0; k < n_turns; ++k) r[k] = 0.5 * (r_lower[k] + r_upper[k]);
  return r;
}

std::vector<Turn> build_turns(std::span<const double> radii, const BenchmarkConfig& cfg) {
  if (radii.size() != cfg.n_turns) throw ContractViolation("build_turns: expected one radius per turn");
  std::vector<Turn> turns;
  turns.reserve(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    Turn t{radii[k] - 0.5 * cfg.width, radii[k] + 0.5 * cfg.width, cfg.z_lower[k], cfg.z_upper[k],
           cfg.currents[k]};
    t.validate();
    turns.push_back(t);
  }
  return turns;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sweep {
  double f1 = 0.0;
  double f2 = 0.0;
};

Sweep sweep(std::span<const double> radii, const BenchmarkConfig& cfg, bool want_f1, bool want_f2) {
  const auto turns = build_turns(radii, cfg);
  Sweep s;
  for (const auto& [r, z] : cfg.region.points) {
    const double b = total_field(turns, r, z, cfg.field).magnitude();
    if (want_f1) s.f1 = std::max(s.f1, std::abs(b - cfg.region.b0));
    if (want_f2) {
      if (cfg.delta_r == 0.0) continue;
      const double plus = total_field(turns, r + cfg.delta_r, z, cfg.field).magnitude();
      const double minus = total_field(turns, r - cfg.delta_r, z, cfg.field).magnitude();
      s.f2 = std::max(s.f2, std::abs(b - plus) + std::abs(b - minus));
    }
  }
  return s;
}

} // namespace

double objective_f1(std::span<const double> radii, const BenchmarkConfig& cfg) {
  try {
    return sweep(radii, cfg, true, false).f1;
  } catch (const DomainError&) {
    return kInf;
  }
}

double objective_f2(std::span<const double> radii, const BenchmarkConfig& cfg) {
  try {
    return sweep(radii, cfg, false, true).f2;
  } catch (const DomainError&) {
    return kInf;
  }
}

Vector team_objectives(std::span<const double> radii, const BenchmarkConfig& cfg) {
  try {
    const auto s = sweep(radii, cfg, true, true);
    return {s.f1, s.f2};
  } catch (const DomainError&) {
    return {kInf, kInf};
  }
}

ProblemSpec team_problem(const BenchmarkConfig& cfg) {
  cfg.validate();
  std::vector<Parameter> params;
  for (std::size_t k = 0; k < cfg.n_turns; ++k) {
    params.push_back({"r" + std::to_string(k + 1), cfg.r_lower[k], cfg.r_upper[k]});
  }
  return ProblemSpec(std::move(params), 2, "team",
                     [cfg](std::span<const double> r) { return team_objectives(r, cfg); });
}

} // namespace rdo
