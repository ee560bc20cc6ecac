#include "rdo/results_log.hpp"

#include <cmath>
#include <iterator>
#include <limits>

#include <json.hpp>

#include "rdo/errors.hpp"

namespace rdo {

namespace {

using nlohmann::json;

// JSON has no NaN/inf; non-finite costs are written as strings.
json encode_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double decode_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

json encode_vector(const Vector& v) {
  json arr = json::array();
  for (double d : v) arr.push_back(encode_number(d));
  return arr;
}

Vector decode_vector(const json& j) {
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(decode_number(e));
  return v;
}

} // namespace

std::string to_json_line(const LogRecord& r) {
  json j;
  j["run_id"] = r.run_id;
  j["generation"] = r.generation;
  j["x"] = encode_vector(r.x);
  j["f"] = encode_vector(r.f);
  j["provenance"] = to_string(r.provenance);
  j["predicted_std"] = r.predicted_std ? encode_vector(*r.predicted_std) : json(nullptr);
  j["wall_time_s"] = r.wall_time_s;
  return j.dump();
}

LogRecord parse_json_line(const std::string& line) {
  const json j = json::parse(line);
  LogRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.generation = j.at("generation").get<std::size_t>();
  r.x = decode_vector(j.at("x"));
  r.f = decode_vector(j.at("f"));
  r.provenance = provenance_from_string(j.at("provenance").get<std::string>());
  if (!j.at("predicted_std").is_null()) r.predicted_std = decode_vector(j.at("predicted_std"));
  r.wall_time_s = j.at("wall_time_s").get<double>();
  return r;
}

ResultsLog::ResultsLog(std::filesystem::path path, std::string run_id)
    : path_(std::move(path)), run_id_(std::move(run_id)),
      start_(std::chrono::steady_clock::now()) {
  out_.open(path_, std::ios::out | std::ios::app);
  if (!out_) throw IoError("cannot open results log '" + path_.string() + "'");
}

double ResultsLog::elapsed_s() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void ResultsLog::append(const LogRecord& record) {
  const std::string line = to_json_line(record);
  std::lock_guard lock(mutex_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw IoError("write to results log '" + path_.string() + "' failed");
  ++written_;
}

void ResultsLog::append(const Individual& ind) {
  append(LogRecord{run_id_, ind.generation, ind.x, ind.f, ind.provenance, ind.predicted_std,
                   elapsed_s()});
}

std::vector<LogRecord> read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open results log '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<LogRecord> records;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos < text.size()) {
    ++lineno;
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      // Unterminated final line: keep it only if it happens to be complete.
      try {
        records.push_back(parse_json_line(text.substr(pos)));
      } catch (const std::exception&) {
      }
      break;
    }
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      records.push_back(parse_json_line(line));
    } catch (const std::exception& e) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

} // namespace rdo
