#include "rdo_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "rdo/dominance.hpp"
#include "rdo/errors.hpp"
#include "rdo/evaluator.hpp"
#include "rdo/results_log.hpp"
#include "rdo/rom/io.hpp"
#include "rdo/rom/pod.hpp"
#include "rdo/rom/schwartz.hpp"
#include "rdo/rom/state_space.hpp"
#include "rdo/sensitivity.hpp"

namespace rdo::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_text(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(17);
  return out;
}

void write_json(const fs::path& path, const json& j) {
  auto out = open_text(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void prepare_output(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());
  write_json(cfg.output_dir / "config.echo.json", to_json(cfg));
}

void require_file(const fs::path& p, const std::string& field) {
  if (p.empty()) throw ConfigError(field + ": no file given");
  if (!fs::is_regular_file(p)) throw ConfigError(field + ": file not found: '" + p.string() + "'");
}

std::string run_id(const RunConfig& cfg) {
  return cfg.problem.id + "-" + cfg.algorithm.name + "-" + std::to_string(cfg.seed);
}

// Decorator that appends every answered request to the results log. Batch k
// is logged as generation k.
class LoggingEvaluator final : public Evaluator {
public:
  LoggingEvaluator(Evaluator& inner, ResultsLog& log) : inner_(&inner), log_(&log) {}

  std::vector<Evaluation> evaluate(std::span<const Vector> xs) override {
    auto out = inner_->evaluate(xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      log_->append(LogRecord{log_->run_id(), batch_, xs[i], out[i].f, out[i].provenance,
                             out[i].predicted_std, log_->elapsed_s()});
    }
    ++batch_;
    return out;
  }
  std::size_t requests_served() const noexcept override { return inner_->requests_served(); }

private:
  Evaluator* inner_;
  ResultsLog* log_;
  std::size_t batch_ = 0;
};

void write_front(const fs::path& path, const ProblemSpec& spec, std::span<const Individual> front) {
  auto out = open_text(path);
  for (const auto& p : spec.parameters()) out << p.name << ',';
  for (std::size_t j = 0; j < spec.n_objectives(); ++j) out << 'f' << (j + 1) << ',';
  out << "provenance\n";
  for (const auto& ind : front) {
    for (double v : ind.x) out << v << ',';
    for (double v : ind.f) out << v << ',';
    out << to_string(ind.provenance) << '\n';
  }
}

Vector signal_from_heat(const RunConfig& cfg, Vector& t_out, Vector& u_out) {
  const auto sys = heat_fd_model(cfg.rom.heat);
  const auto t = uniform_grid(cfg.rom.t_end, cfg.rom.steps);
  const auto K = static_cast<Eigen::Index>(t.size());
  const Eigen::MatrixXd u = Eigen::MatrixXd::Constant(K, 1, cfg.rom.input);
  const auto traj = simulate_continuous(full_state_space(sys), u, t, Eigen::VectorXd::Zero(sys.size()));
  Vector y(t.size());
  for (Eigen::Index k = 0; k < K; ++k) y[static_cast<std::size_t>(k)] = traj.outputs(k, static_cast<Eigen::Index>(cfg.rom.probe));
  t_out = t;
  u_out.assign(t.size(), cfg.rom.input);
  return y;
}

} // namespace

json cmd_optimize(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const auto spec = build_problem(cfg.problem);
  const auto& alg = cfg.algorithm.name;
  if (alg != "nsga2" && spec.n_objectives() != 1) {
    throw ConfigError("algorithm.name: " + alg + " needs a single-objective problem, '" + cfg.problem.id +
                      "' has " + std::to_string(spec.n_objectives()));
  }
  NelderMeadConfig nm = cfg.algorithm.nelder_mead;
  if (alg == "nelder_mead") {
    if (nm.x0.empty()) {
      nm.x0 = spec.lower();
      const auto hi = spec.upper();
      for (std::size_t i = 0; i < nm.x0.size(); ++i) nm.x0[i] = 0.5 * (nm.x0[i] + hi[i]);
    }
    if (nm.x0.size() != spec.dimension() || !spec.contains(nm.x0)) {
      throw ConfigError("algorithm.nelder_mead.x0: must have " + std::to_string(spec.dimension()) +
                        " entries inside the parameter bounds");
    }
    nm.lower = spec.lower();
    nm.upper = spec.upper();
    try {
      nm.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("algorithm.nelder_mead: ") + e.what());
    }
  }

  prepare_output(cfg);
  fs::remove(cfg.output_dir / "log.jsonl");
  ResultsLog log(cfg.output_dir / "log.jsonl", run_id(cfg));
  DirectEvaluator direct(spec, cfg.threads);
  std::optional<SurrogateManager> manager;
  Evaluator* channel = &direct;
  if (cfg.surrogate.enabled) {
    manager.emplace(spec, direct, cfg.surrogate);
    channel = &*manager;
  }
  LoggingEvaluator logged(*channel, log);

  std::vector<Individual> front;
  std::size_t requests = 0;
  if (alg == "nsga2") {
    auto c = cfg.algorithm.nsga2;
    c.seed = cfg.seed;
    const auto result = nsga2_run(spec, c, logged);
    front = pareto_front(result.final_population.members);
    requests = result.requests;
  } else if (alg == "pso") {
    auto c = cfg.algorithm.pso;
    c.seed = cfg.seed;
    const auto result = pso_run(spec, c, logged);
    front = {result.best};
    requests = result.requests;
  } else {
    std::optional<Individual> best;
    const auto result = nelder_mead_run(
        [&](std::span<const double> x) {
          const Vector xv(x.begin(), x.end());
          auto e = logged.evaluate(std::span<const Vector>(&xv, 1));
          ++requests;
          const double f = e[0].f[0];
          if (std::isfinite(f) && (!best || f < best->f[0])) {
            best = Individual{xv, e[0].f, e[0].provenance, e[0].predicted_std, 0};
          }
          return f;
        },
        nm);
    if (best) {
      front = {*best};
    } else {
      front = {Individual{result.x, {result.f}, Provenance::Evaluated, std::nullopt, 0}};
    }
  }
  write_front(cfg.output_dir / "front.csv", spec, front);

  json summary;
  summary["command"] = "optimize";
  summary["problem"] = cfg.problem.id;
  summary["algorithm"] = alg;
  summary["seed"] = cfg.seed;
  summary["requests"] = requests;
  summary["n_predicted"] = manager ? manager->counters().n_predicted : 0;
  summary["n_evaluated"] = manager ? manager->counters().n_evaluated : direct.requests_served();
  summary["surrogate"] = cfg.surrogate.enabled;
  if (manager) {
    summary["fits"] = manager->fit_trace().size();
    summary["fit_failures"] = manager->fit_failures();
  }
  summary["front_size"] = front.size();
  summary["elapsed_s"] = seconds_since(t0);
  write_json(cfg.output_dir / "summary.json", summary);
  return summary;
}

json cmd_rom_identify(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  SignalTable table;
  if (cfg.rom.source == "file") {
    require_file(cfg.rom.reference, "rom.reference");
    table = read_signal_table(cfg.rom.reference);
  } else {
    table.y = signal_from_heat(cfg, table.t, table.u);
  }
  prepare_output(cfg);
  if (cfg.rom.source == "heat") write_signal_table(cfg.output_dir / "reference.csv", table);

  auto icfg = cfg.rom.identify;
  icfg.seed = cfg.seed;
  icfg.threads = cfg.threads;
  const auto result = identify(table.y, table.u, cfg.rom.order, icfg);
  write_identification(cfg.output_dir / "identification.json", result);

  const auto model = simulate_discrete(build_schwartz_system(result.params), table.u);
  double peak = 0.0;
  {
    auto out = open_text(cfg.output_dir / "response.csv");
    out << "t,u,y_ref,y_model,error\n";
    for (std::size_t k = 0; k < table.t.size(); ++k) {
      out << table.t[k] << ',' << table.u[k] << ',' << table.y[k] << ',' << model[k] << ','
          << table.y[k] - model[k] << '\n';
      peak = std::max(peak, std::abs(table.y[k]));
    }
  }
  json summary;
  summary["command"] = "rom identify";
  summary["source"] = cfg.rom.source;
  summary["order"] = cfg.rom.order;
  summary["samples"] = table.t.size();
  summary["objective"] = result.objective;
  summary["peak"] = peak;
  summary["relative_error"] = peak > 0.0 ? result.objective / peak : 0.0;
  summary["evaluations"] = result.evaluations;
  summary["elapsed_s"] = seconds_since(t0);
  write_json(cfg.output_dir / "summary.json", summary);
  return summary;
}

json cmd_rom_pod(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const auto sys = heat_fd_model(cfg.rom.heat);
  const auto t = uniform_grid(cfg.rom.t_end, cfg.rom.steps);
  const auto K = static_cast<Eigen::Index>(t.size());
  const Eigen::MatrixXd u = Eigen::MatrixXd::Constant(K, 1, cfg.rom.input);
  const auto full = simulate_continuous(full_state_space(sys), u, t, Eigen::VectorXd::Zero(sys.size()), true);

  SnapshotMatrix snap;
  if (!cfg.rom.snapshots.empty()) {
    require_file(cfg.rom.snapshots, "rom.snapshots");
    snap = read_snapshots(cfg.rom.snapshots);
    if (snap.U.rows() != sys.size()) {
      throw ConfigError("rom.snapshots: dimension mismatch, file has " + std::to_string(snap.U.rows()) +
                        " rows but the model has " + std::to_string(sys.size()) + " nodes");
    }
  } else {
    snap.U = full.states.rightCols(K - 1);
    snap.times.assign(t.begin() + 1, t.end());
  }
  const auto max_modes = static_cast<std::size_t>(std::min(snap.U.rows(), snap.U.cols()));
  if (cfg.rom.modes > max_modes) {
    throw ConfigError("rom.modes: " + std::to_string(cfg.rom.modes) + " exceeds the snapshot dimensions (max " +
                      std::to_string(max_modes) + ")");
  }
  prepare_output(cfg);

  const auto basis = pod_modes(snap, cfg.rom.modes);
  const auto reduced_ss = pod_reduce(sys, basis.modes);
  const auto reduced = simulate_continuous(reduced_ss, u, t, Eigen::VectorXd::Zero(reduced_ss.order()));
  write_state_space(cfg.output_dir / "pod.json", reduced_ss, basis);
  {
    auto out = open_text(cfg.output_dir / "modes.csv");
    for (Eigen::Index c = 0; c < basis.modes.cols(); ++c) out << (c ? "," : "") << "mode" << (c + 1);
    out << '\n';
    for (Eigen::Index r = 0; r < basis.modes.rows(); ++r) {
      for (Eigen::Index c = 0; c < basis.modes.cols(); ++c) out << (c ? "," : "") << basis.modes(r, c);
      out << '\n';
    }
  }

  const auto& probes = cfg.rom.heat.probe_nodes;
  const auto P = static_cast<Eigen::Index>(probes.size());
  json per_probe = json::array();
  {
    auto out = open_text(cfg.output_dir / "comparison.csv");
    out << 't';
    for (auto p : probes) out << ",full_" << p << ",reduced_" << p << ",error_" << p;
    out << '\n';
    for (Eigen::Index k = 0; k < K; ++k) {
      out << t[static_cast<std::size_t>(k)];
      for (Eigen::Index j = 0; j < P; ++j) {
        const double a = full.outputs(k, j);
        const double b = reduced.outputs(k, j);
        out << ',' << a << ',' << b << ',' << std::abs(a - b);
      }
      out << '\n';
    }
  }
  double worst = 0.0;
  for (Eigen::Index j = 0; j < P; ++j) {
    const double err = (full.outputs.col(j) - reduced.outputs.col(j)).cwiseAbs().maxCoeff();
    const double peak = full.outputs.col(j).cwiseAbs().maxCoeff();
    const double rel = peak > 0.0 ? err / peak : err;
    worst = std::max(worst, rel);
    per_probe.push_back({{"node", probes[static_cast<std::size_t>(j)]}, {"max_abs_error", err}, {"max_rel_error", rel}});
  }

  json summary;
  summary["command"] = "rom pod";
  summary["modes"] = cfg.rom.modes;
  summary["snapshots"] = snap.U.cols();
  summary["captured_energy"] = basis.captured_energy;
  summary["padded_modes"] = basis.padded;
  summary["probes"] = per_probe;
  summary["max_rel_error"] = worst;
  summary["elapsed_s"] = seconds_since(t0);
  write_json(cfg.output_dir / "summary.json", summary);
  return summary;
}

json cmd_team_eval(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const auto& team = cfg.problem.team;
  const auto radii = cfg.team_eval.radii ? *cfg.team_eval.radii : team.mid_radii();
  std::vector<Turn> turns;
  try {
    turns = build_turns(radii, team);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("team_eval.radii: ") + e.what());
  }
  prepare_output(cfg);

  const auto& g = cfg.team_eval;
  auto axis = [](double a, double b, std::size_t n, std::size_t i) {
    return n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  const std::size_t n = g.nr * g.nz;
  std::vector<FieldValue> values(n);
  std::vector<char> inside(n, 0);
  parallel_for(n, cfg.threads, [&](std::size_t k) {
    const double R = axis(g.r0, g.r1, g.nr, k % g.nr);
    const double Z = axis(g.z0, g.z1, g.nz, k / g.nr);
    for (const auto& t : turns) {
      if (t.contains(R, Z)) {
        inside[k] = 1;
        values[k] = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        return;
      }
    }
    values[k] = total_field(turns, R, Z, team.field);
  });
  std::size_t n_inside = 0;
  {
    auto out = open_text(cfg.output_dir / "field_map.csv");
    out << "R,Z,Br,Bz\n";
    for (std::size_t k = 0; k < n; ++k) {
      out << axis(g.r0, g.r1, g.nr, k % g.nr) << ',' << axis(g.z0, g.z1, g.nz, k / g.nr) << ',' << values[k].br
          << ',' << values[k].bz << '\n';
      n_inside += static_cast<std::size_t>(inside[k]);
    }
  }
  json summary;
  summary["command"] = "team eval";
  summary["n_points"] = n;
  summary["n_inside_conductor"] = n_inside;
  summary["radii"] = radii;
  summary["elapsed_s"] = seconds_since(t0);
  write_json(cfg.output_dir / "summary.json", summary);
  return summary;
}

json cmd_rank(const RunConfig& cfg) {
  const auto t0 = Clock::now();
  const auto log_path = cfg.rank.log.empty() ? cfg.output_dir / "log.jsonl" : cfg.rank.log;
  require_file(log_path, "rank.log");
  const auto spec = build_problem(cfg.problem);
  const auto records = read_log(log_path);
  if (records.empty()) throw ConfigError("rank.log: '" + log_path.string() + "' holds no records");

  // The final front is the non-dominated set of everything the most recent
  // run in the log evaluated or predicted; repeated points are kept once.
  const std::string& run = records.back().run_id;
  std::size_t last = 0;
  std::set<Vector> seen;
  std::vector<Individual> candidates;
  for (const auto& r : records) {
    if (r.run_id != run) continue;
    if (r.x.size() != spec.dimension() || r.f.size() != spec.n_objectives()) {
      throw ConfigError("rank.log: record arity does not match problem '" + cfg.problem.id + "'");
    }
    last = std::max(last, r.generation);
    if (!seen.insert(r.x).second) continue;
    candidates.push_back(Individual{r.x, r.f, r.provenance, r.predicted_std, r.generation});
  }
  const auto front = pareto_front(candidates);
  const auto report = robustness_rank(front, spec, cfg.rank.h, cfg.threads);

  prepare_output(cfg);
  std::size_t unranked = 0;
  {
    auto out = open_text(cfg.output_dir / "ranking.csv");
    out << "rank,member,";
    for (const auto& p : spec.parameters()) out << p.name << ',';
    for (std::size_t j = 0; j < spec.n_objectives(); ++j) out << 'f' << (j + 1) << ',';
    for (std::size_t j = 0; j < spec.n_objectives(); ++j) out << 's' << (j + 1) << ',';
    out << "combined,ranked\n";
    for (std::size_t pos = 0; pos < report.order.size(); ++pos) {
      const auto i = report.order[pos];
      const auto& m = report.members[i];
      out << pos + 1 << ',' << i << ',';
      for (double v : front[i].x) out << v << ',';
      for (double v : front[i].f) out << v << ',';
      for (std::size_t j = 0; j < spec.n_objectives(); ++j) {
        out << (m.ranked ? m.s[j] : std::numeric_limits<double>::quiet_NaN()) << ',';
      }
      out << (m.ranked ? m.combined : std::numeric_limits<double>::quiet_NaN()) << ',' << (m.ranked ? 1 : 0)
          << '\n';
      unranked += m.ranked ? 0 : 1;
    }
  }
  json summary;
  summary["command"] = "rank";
  summary["log"] = log_path.string();
  summary["run_id"] = run;
  summary["generation"] = last;
  summary["front_size"] = front.size();
  summary["unranked"] = unranked;
  summary["h"] = cfg.rank.h;
  summary["elapsed_s"] = seconds_since(t0);
  write_json(cfg.output_dir / "summary.json", summary);
  return summary;
}

} // namespace rdo::cli
