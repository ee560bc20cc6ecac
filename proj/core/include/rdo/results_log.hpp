#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rdo/problem.hpp"

namespace rdo {

// One line of the results log.
struct LogRecord {
  std::string run_id;
  std::size_t generation = 0;
  Vector x;
  Vector f;
  Provenance provenance = Provenance::Evaluated;
  std::optional<Vector> predicted_std;
  double wall_time_s = 0.0;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

std::string to_json_line(const LogRecord& record);
LogRecord parse_json_line(const std::string& line);

/// Append-only JSON-lines sink. Every append is flushed, so a run that dies
/// midway leaves all earlier records intact. Appends from several threads
/// are serialized.
class ResultsLog {
public:
  ResultsLog(std::filesystem::path path, std::string run_id);

  void append(const LogRecord& record);
  void append(const Individual& individual);

  const std::string& run_id() const noexcept { return run_id_; }
  const std::filesystem::path& path() const noexcept { return path_; }
  std::size_t records_written() const noexcept { return written_; }
  double elapsed_s() const;

private:
  std::filesystem::path path_;
  std::string run_id_;
  std::ofstream out_;
  std::mutex mutex_;
  std::size_t written_ = 0;
  std::chrono::steady_clock::time_point start_;
};

// Replays a log in write order. A trailing partial line (interrupted write)
// is skipped; any other malformed line throws IoError.
std::vector<LogRecord> read_log(const std::filesystem::path& path);

} // namespace rdo
