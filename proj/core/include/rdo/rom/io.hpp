#pragma once

#include <filesystem>

#include "rdo/rom/identify.hpp"
#include "rdo/rom/pod.hpp"

namespace rdo {

// Delimited snapshot file: a header row of time stamps, then one row per
// node; column j is the full solution at time j.
SnapshotMatrix read_snapshots(const std::filesystem::path& path);
void write_snapshots(const std::filesystem::path& path, const SnapshotMatrix& snap);

// Reference trajectory with header "t,u,y".
struct SignalTable {
  Vector t;
  Vector u;
  Vector y;
};

SignalTable read_signal_table(const std::filesystem::path& path);
void write_signal_table(const std::filesystem::path& path, const SignalTable& table);

void write_identification(const std::filesystem::path& path, const IdentifyResult& result);
void write_state_space(const std::filesystem::path& path, const ContinuousStateSpace& ss,
                       const PodBasis& basis);

} // namespace rdo
