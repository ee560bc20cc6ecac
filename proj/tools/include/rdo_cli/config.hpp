#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "rdo/optimizers/nelder_mead.hpp"
#include "rdo/optimizers/nsga2.hpp"
#include "rdo/optimizers/pso.hpp"
#include "rdo/problem.hpp"
#include "rdo/rom/heat.hpp"
#include "rdo/rom/identify.hpp"
#include "rdo/surrogate/manager.hpp"
#include "rdo/team/benchmark.hpp"

namespace rdo::cli {

struct ProblemConfig {
  std::string id = "team"; // team | sphere | rosenbrock
  std::size_t dimension = 5;
  BenchmarkConfig team = BenchmarkConfig::defaults();
  // Rectangle whose boundary carries team.region's points.
  double control_r0 = 0.0, control_r1 = 5e-3;
  double control_z0 = 0.0, control_z1 = 5e-3;
};

struct AlgorithmConfig {
  std::string name = "nsga2"; // nsga2 | pso | nelder_mead
  Nsga2Config nsga2;
  PsoConfig pso;
  NelderMeadConfig nelder_mead; // x0 empty means the box centre
};

struct RomConfig {
  std::string source = "heat"; // heat | file
  std::filesystem::path reference;  // t,u,y table for identify
  std::filesystem::path snapshots;  // optional snapshot file for pod
  std::size_t order = 4;
  IdentifyConfig identify;
  HeatRodConfig heat;
  double t_end = 1.0;
  std::size_t steps = 200;
  std::size_t probe = 1; // index into heat.probe_nodes used by identify
  double input = 1.0;    // step amplitude
  std::size_t modes = 4;
};

struct TeamEvalConfig {
  double r0 = 0.0, r1 = 5e-3;
  std::size_t nr = 11;
  double z0 = 0.0, z1 = 5e-3;
  std::size_t nz = 11;
  std::optional<Vector> radii; // unset means mid radii
};

struct RankConfig {
  std::filesystem::path log; // empty means <output_dir>/log.jsonl
  double h = 1e-3;
};

struct RunConfig {
  ProblemConfig problem;
  AlgorithmConfig algorithm;
  SurrogateConfig surrogate{.enabled = false};
  std::uint64_t seed = 1;
  unsigned threads = 0; // 0 resolves to the machine's parallelism
  std::filesystem::path output_dir = "out";
  RomConfig rom;
  TeamEvalConfig team_eval;
  RankConfig rank;
};

// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> threads;
  std::optional<bool> surrogate;
};

/// Strict parse: unknown keys and ill-typed values throw ConfigError naming
/// the field path (and the line for syntax errors).
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const Overrides& ov);

// Fully resolved configuration with every default written out.
nlohmann::json to_json(const RunConfig& cfg);

ProblemSpec build_problem(const ProblemConfig& cfg);

} // namespace rdo::cli
