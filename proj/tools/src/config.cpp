#include "rdo_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "rdo/errors.hpp"

namespace rdo::cli {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class Reader {
public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    const auto& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::runtime_error("expected true or false");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw std::runtime_error("expected a non-negative integer");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v.is_number()) throw std::runtime_error("expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::runtime_error("expected a string");
      } else if constexpr (std::is_same_v<T, Vector>) {
        if (!v.is_array()) throw std::runtime_error("expected an array of numbers");
        for (const auto& e : v) {
          if (!e.is_number()) throw std::runtime_error("expected an array of numbers");
        }
      }
      out = v.get<T>();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(field(key), e.what());
    }
  }

  void get(const std::string& key, std::filesystem::path& out) {
    std::string s;
    if (!j_.contains(key)) return;
    get(key, s);
    out = s;
  }

  void get(const std::string& key, std::optional<double>& out) {
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      seen_.insert(key);
      out.reset();
      return;
    }
    double v = 0.0;
    get(key, v);
    out = v;
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    return Reader(j_.at(key), field(key));
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) fail(field(k), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void check(bool ok, const std::string& field, F&& message) {
  if (!ok) Reader::fail(field, message);
}

void read_team(Reader r, ProblemConfig& p) {
  auto& t = p.team;
  r.get("n_turns", t.n_turns);
  r.get("r_lower", t.r_lower);
  r.get("r_upper", t.r_upper);
  r.get("width", t.width);
  r.get("z_lower", t.z_lower);
  r.get("z_upper", t.z_upper);
  r.get("currents", t.currents);
  r.get("delta_r", t.delta_r);
  r.get("quadrature_order", t.field.order);
  r.get("refine_near", t.field.refine_near);
  if (r.has("control")) {
    auto c = r.child("control");
    double b0 = t.region.b0;
    std::size_t n = t.region.points.size();
    c.get("r0", p.control_r0);
    c.get("r1", p.control_r1);
    c.get("z0", p.control_z0);
    c.get("z1", p.control_z1);
    c.get("n_points", n);
    c.get("b0", b0);
    c.finish();
    try {
      t.region = ControlRegion::rectangle_boundary(p.control_r0, p.control_r1, p.control_z0, p.control_z1, n, b0);
    } catch (const ConfigError& e) {
      Reader::fail(r.field("control"), e.what());
    }
  }
  r.finish();
  try {
    t.validate();
  } catch (const ConfigError& e) {
    Reader::fail("problem.team", e.what());
  }
}

void read_heat(Reader r, HeatRodConfig& h) {
  r.get("n_nodes", h.n_nodes);
  r.get("conductivity", h.conductivity);
  r.get("density", h.density);
  r.get("heat_capacity", h.heat_capacity);
  r.get("element_length", h.element_length);
  r.get("input_node", h.input_node);
  r.get("end_conductance", h.end_conductance);
  if (r.has("probe_nodes")) {
    Vector probes;
    r.get("probe_nodes", probes);
    h.probe_nodes.clear();
    for (double p : probes) {
      check(p >= 0.0 && p == std::floor(p), r.field("probe_nodes"), "expected node indices");
      h.probe_nodes.push_back(static_cast<std::size_t>(p));
    }
  }
  r.finish();
  check(h.n_nodes >= 3, r.field("n_nodes"), "must be >= 3");
  check(h.input_node < h.n_nodes, r.field("input_node"), "out of range");
  check(!h.probe_nodes.empty(), r.field("probe_nodes"), "needs at least one node");
  for (auto p : h.probe_nodes) check(p < h.n_nodes, r.field("probe_nodes"), "node index out of range");
  check(h.conductivity > 0.0 && h.density > 0.0 && h.heat_capacity > 0.0 && h.element_length > 0.0,
        r.field("material"), "material constants and element length must be positive");
  check(h.end_conductance >= 0.0, r.field("end_conductance"), "must be >= 0");
}

template <class Cfg>
void validated(const Cfg& c, const std::string& field) {
  try {
    c.validate();
  } catch (const ConfigError& e) {
    Reader::fail(field, e.what());
  }
}

json vec(const Vector& v) { return json(v); }

} // namespace

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  Reader root(j, "");
  root.get("seed", cfg.seed);
  root.get("threads", cfg.threads);
  root.get("output_dir", cfg.output_dir);

  if (root.has("problem")) {
    auto p = root.child("problem");
    p.get("id", cfg.problem.id);
    p.get("dimension", cfg.problem.dimension);
    if (p.has("team")) read_team(p.child("team"), cfg.problem);
    p.finish();
  }
  check(cfg.problem.id == "team" || cfg.problem.id == "sphere" || cfg.problem.id == "rosenbrock",
        "problem.id", "expected one of team, sphere, rosenbrock");
  check(cfg.problem.dimension >= 1 && (cfg.problem.id != "rosenbrock" || cfg.problem.dimension >= 2),
        "problem.dimension", "too small for this problem");

  if (root.has("algorithm")) {
    auto a = root.child("algorithm");
    a.get("name", cfg.algorithm.name);
    if (a.has("nsga2")) {
      auto n = a.child("nsga2");
      auto& c = cfg.algorithm.nsga2;
      n.get("population_size", c.population_size);
      n.get("generations", c.generations);
      n.get("crossover_prob", c.crossover_prob);
      n.get("eta_crossover", c.eta_crossover);
      n.get("mutation_prob", c.mutation_prob);
      n.get("eta_mutation", c.eta_mutation);
      n.finish();
    }
    if (a.has("pso")) {
      auto n = a.child("pso");
      auto& c = cfg.algorithm.pso;
      n.get("swarm_size", c.swarm_size);
      n.get("iterations", c.iterations);
      n.get("inertia", c.inertia);
      n.get("cognitive", c.cognitive);
      n.get("social", c.social);
      n.finish();
    }
    if (a.has("nelder_mead")) {
      auto n = a.child("nelder_mead");
      auto& c = cfg.algorithm.nelder_mead;
      n.get("x0", c.x0);
      n.get("max_iters", c.max_iters);
      n.get("f_tol", c.f_tol);
      n.get("x_tol", c.x_tol);
      n.get("reflection", c.reflection);
      n.get("expansion", c.expansion);
      n.get("contraction", c.contraction);
      n.get("shrink", c.shrink);
      n.get("initial_step", c.initial_step);
      n.finish();
    }
    a.finish();
  }
  const auto& alg = cfg.algorithm.name;
  check(alg == "nsga2" || alg == "pso" || alg == "nelder_mead", "algorithm.name",
        "expected one of nsga2, pso, nelder_mead");
  validated(cfg.algorithm.nsga2, "algorithm.nsga2");
  validated(cfg.algorithm.pso, "algorithm.pso");

  if (root.has("surrogate")) {
    auto s = root.child("surrogate");
    auto& c = cfg.surrogate;
    s.get("enabled", c.enabled);
    s.get("train_step", c.train_step);
    s.get("sigma_gate", c.sigma_gate);
    s.get("max_training", c.max_training);
    s.get("length_scale", c.length_scale);
    s.get("tune_length_scale", c.tune_length_scale);
    s.finish();
  }
  validated(cfg.surrogate, "surrogate");

  if (root.has("rom")) {
    auto r = root.child("rom");
    auto& c = cfg.rom;
    r.get("source", c.source);
    r.get("reference", c.reference);
    r.get("snapshots", c.snapshots);
    r.get("order", c.order);
    r.get("t_end", c.t_end);
    r.get("steps", c.steps);
    r.get("probe", c.probe);
    r.get("input", c.input);
    r.get("modes", c.modes);
    if (r.has("identify")) {
      auto i = r.child("identify");
      i.get("restarts", c.identify.restarts);
      i.get("max_iters", c.identify.max_iters);
      i.get("bound_margin", c.identify.bound_margin);
      i.get("gamma_scale", c.identify.gamma_scale);
      i.finish();
    }
    if (r.has("heat")) read_heat(r.child("heat"), c.heat);
    r.finish();
    check(c.source == "heat" || c.source == "file", "rom.source", "expected heat or file");
    check(c.order >= 1, "rom.order", "must be >= 1");
    check(c.t_end > 0.0, "rom.t_end", "must be > 0");
    check(c.steps >= 1, "rom.steps", "must be >= 1");
    check(c.modes >= 1, "rom.modes", "must be >= 1");
    check(c.probe < c.heat.probe_nodes.size(), "rom.probe", "index into rom.heat.probe_nodes out of range");
    validated(c.identify, "rom.identify");
  }

  if (root.has("team_eval")) {
    auto t = root.child("team_eval");
    auto& c = cfg.team_eval;
    t.get("r0", c.r0);
    t.get("r1", c.r1);
    t.get("nr", c.nr);
    t.get("z0", c.z0);
    t.get("z1", c.z1);
    t.get("nz", c.nz);
    if (t.has("radii")) {
      Vector radii;
      t.get("radii", radii);
      c.radii = radii;
    }
    t.finish();
    check(c.nr >= 1 && c.nz >= 1, "team_eval", "nr and nz must be >= 1");
    check(c.r1 >= c.r0 && c.z1 >= c.z0, "team_eval", "grid bounds must be ordered");
    if (c.radii) {
      check(c.radii->size() == cfg.problem.team.n_turns, "team_eval.radii", "expected one radius per turn");
    }
  }

  if (root.has("rank")) {
    auto r = root.child("rank");
    r.get("log", cfg.rank.log);
    r.get("h", cfg.rank.h);
    r.finish();
    check(cfg.rank.h > 0.0 && cfg.rank.h < 0.5, "rank.h", "must lie in (0, 0.5)");
  }
  root.finish();
  check(!j.contains("threads") || cfg.threads >= 1, "threads", "must be >= 1");
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError("line " + std::to_string(line) + ": " + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const Overrides& ov) {
  RunConfig cfg;
  if (ov.config) {
    std::ifstream in(*ov.config);
    if (!in) throw ConfigError("cannot read config file '" + ov.config->string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config_text(ss.str());
    // Input files named in a config are relative to the config itself.
    const auto base = ov.config->parent_path();
    for (auto* p : {&cfg.rom.reference, &cfg.rom.snapshots, &cfg.rank.log}) {
      if (!p->empty() && p->is_relative()) *p = std::filesystem::absolute(base / *p).lexically_normal();
    }
  }
  if (cfg.threads == 0) cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  if (ov.seed) cfg.seed = *ov.seed;
  if (ov.out) cfg.output_dir = *ov.out;
  if (ov.threads) {
    check(*ov.threads >= 1, "--threads", "must be >= 1");
    cfg.threads = *ov.threads;
  }
  if (ov.surrogate) cfg.surrogate.enabled = *ov.surrogate;
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["output_dir"] = cfg.output_dir.string();

  const auto& t = cfg.problem.team;
  json team;
  team["n_turns"] = t.n_turns;
  team["r_lower"] = vec(t.r_lower);
  team["r_upper"] = vec(t.r_upper);
  team["width"] = t.width;
  team["z_lower"] = vec(t.z_lower);
  team["z_upper"] = vec(t.z_upper);
  team["currents"] = vec(t.currents);
  team["delta_r"] = t.delta_r;
  team["quadrature_order"] = t.field.order;
  team["refine_near"] = t.field.refine_near;
  const auto& p = cfg.problem;
  team["control"] = {{"r0", p.control_r0}, {"r1", p.control_r1}, {"z0", p.control_z0}, {"z1", p.control_z1},
                     {"n_points", t.region.points.size()}, {"b0", t.region.b0}};
  j["problem"] = {{"id", cfg.problem.id}, {"dimension", cfg.problem.dimension}, {"team", team}};

  const auto& a = cfg.algorithm;
  json alg;
  alg["name"] = a.name;
  alg["nsga2"] = {{"population_size", a.nsga2.population_size},
                  {"generations", a.nsga2.generations},
                  {"crossover_prob", a.nsga2.crossover_prob},
                  {"eta_crossover", a.nsga2.eta_crossover},
                  {"mutation_prob", a.nsga2.mutation_prob ? json(*a.nsga2.mutation_prob) : json(nullptr)},
                  {"eta_mutation", a.nsga2.eta_mutation}};
  alg["pso"] = {{"swarm_size", a.pso.swarm_size}, {"iterations", a.pso.iterations}, {"inertia", a.pso.inertia},
                {"cognitive", a.pso.cognitive},   {"social", a.pso.social}};
  const auto& nm = a.nelder_mead;
  alg["nelder_mead"] = {{"x0", vec(nm.x0)},
                        {"max_iters", nm.max_iters},
                        {"f_tol", nm.f_tol},
                        {"x_tol", nm.x_tol},
                        {"reflection", nm.reflection},
                        {"expansion", nm.expansion},
                        {"contraction", nm.contraction},
                        {"shrink", nm.shrink},
                        {"initial_step", nm.initial_step}};
  j["algorithm"] = alg;

  const auto& s = cfg.surrogate;
  j["surrogate"] = {{"enabled", s.enabled},           {"train_step", s.train_step},
                    {"sigma_gate", s.sigma_gate},     {"max_training", s.max_training},
                    {"length_scale", s.length_scale}, {"tune_length_scale", s.tune_length_scale}};

  const auto& r = cfg.rom;
  json probes = json::array();
  for (auto p : r.heat.probe_nodes) probes.push_back(p);
  j["rom"] = {{"source", r.source},
              {"reference", r.reference.string()},
              {"snapshots", r.snapshots.string()},
              {"order", r.order},
              {"t_end", r.t_end},
              {"steps", r.steps},
              {"probe", r.probe},
              {"input", r.input},
              {"modes", r.modes},
              {"identify",
               {{"restarts", r.identify.restarts},
                {"max_iters", r.identify.max_iters},
                {"bound_margin", r.identify.bound_margin},
                {"gamma_scale", r.identify.gamma_scale}}},
              {"heat",
               {{"n_nodes", r.heat.n_nodes},
                {"conductivity", r.heat.conductivity},
                {"density", r.heat.density},
                {"heat_capacity", r.heat.heat_capacity},
                {"element_length", r.heat.element_length},
                {"input_node", r.heat.input_node},
                {"probe_nodes", probes},
                {"end_conductance", r.heat.end_conductance}}}};

  const auto& te = cfg.team_eval;
  j["team_eval"] = {{"r0", te.r0}, {"r1", te.r1}, {"nr", te.nr}, {"z0", te.z0}, {"z1", te.z1}, {"nz", te.nz}};
  if (te.radii) j["team_eval"]["radii"] = vec(*te.radii);
  j["rank"] = {{"log", cfg.rank.log.string()}, {"h", cfg.rank.h}};
  return j;
}

ProblemSpec build_problem(const ProblemConfig& cfg) {
  if (cfg.id == "team") return team_problem(cfg.team);
  std::vector<Parameter> params;
  const double bound = cfg.id == "sphere" ? 5.0 : 2.0;
  for (std::size_t i = 0; i < cfg.dimension; ++i) params.push_back({"x" + std::to_string(i + 1), -bound, bound});
  if (cfg.id == "sphere") {
    return ProblemSpec(std::move(params), 1, "sphere", [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return Vector{s};
    });
  }
  if (cfg.id == "rosenbrock") {
    return ProblemSpec(std::move(params), 1, "rosenbrock", [](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = 1.0 - x[i];
        const double b = x[i + 1] - x[i] * x[i];
        s += a * a + 100.0 * b * b;
      }
      return Vector{s};
    });
  }
  throw ConfigError("problem.id: unknown problem '" + cfg.id + "'");
}

} // namespace rdo::cli
