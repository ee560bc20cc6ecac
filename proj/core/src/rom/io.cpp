#include "rdo/rom/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "rdo/errors.hpp"

namespace rdo {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << std::setprecision(17);
  return out;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace

SnapshotMatrix read_snapshots(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  SnapshotMatrix snap;
  std::vector<Vector> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Vector values;
    for (const auto& f : split_fields(line)) values.push_back(parse_double(f, path, lineno));
    if (snap.times.empty()) {
      snap.times = std::move(values);
      continue;
    }
    if (values.size() != snap.times.size()) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(snap.times.size()) + " columns");
    }
    rows.push_back(std::move(values));
  }
  if (snap.times.empty() || rows.empty()) throw IoError("'" + path.string() + "' holds no snapshots");
  snap.U.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(snap.times.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      snap.U(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  snap.validate();
  return snap;
}

void write_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snap) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < snap.times.size(); ++j) out << (j ? "," : "") << snap.times[j];
  out << '\n';
  for (Eigen::Index i = 0; i < snap.U.rows(); ++i) {
    for (Eigen::Index j = 0; j < snap.U.cols(); ++j) out << (j ? "," : "") << snap.U(i, j);
    out << '\n';
  }
}

SignalTable read_signal_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path.string() + "' is empty");
  const auto header = split_fields(line);
  if (header != std::vector<std::string>{"t", "u", "y"}) {
    throw IoError(path.string() + ":1: header must be 't,u,y'");
  }
  SignalTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_fields(line);
    if (f.size() != 3) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 3 columns");
    table.t.push_back(parse_double(f[0], path, lineno));
    table.u.push_back(parse_double(f[1], path, lineno));
    table.y.push_back(parse_double(f[2], path, lineno));
  }
  if (table.t.empty()) throw IoError("'" + path.string() + "' holds no samples");
  return table;
}

void write_signal_table(const std::filesystem::path& path, const SignalTable& table) {
  auto out = open_out(path);
  out << "t,u,y\n";
  for (std::size_t k = 0; k < table.t.size(); ++k) {
    out << table.t[k] << ',' << table.u[k] << ',' << table.y[k] << '\n';
  }
}

void write_identification(const std::filesystem::path& path, const IdentifyResult& result) {
  nlohmann::json j;
  j["order"] = result.params.order();
  j["delta"] = result.params.delta;
  j["gamma"] = result.params.gamma;
  j["objective"] = result.objective;
  j["evaluations"] = result.evaluations;
  j["restart_objectives"] = result.restart_objectives;
  j["best_restart"] = result.best_restart;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_state_space(const std::filesystem::path& path, const ContinuousStateSpace& ss,
                       const PodBasis& basis) {
  nlohmann::json j;
  j["convention"] = "dx/dt = -A x + B u, y = C x";
  j["A"] = matrix_json(ss.A);
  j["B"] = matrix_json(ss.B);
  j["C"] = matrix_json(ss.C);
  j["eigenvalues"] = std::vector<double>(basis.eigenvalues.data(),
                                         basis.eigenvalues.data() + basis.eigenvalues.size());
  j["energy_fractions"] = basis.energy_fractions;
  j["captured_energy"] = basis.captured_energy;
  j["padded_modes"] = basis.padded;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

} // namespace rdo
