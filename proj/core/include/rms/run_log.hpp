#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rms/mutation.hpp"
#include "rms/network.hpp"

namespace rms {

// One line of run.log. RMS writes one record per evaluated network (the
// initial network is update 0 and has no threshold); ES and NEAT-lite write
// one per iteration/generation with no threshold and accepted = true.
struct RunLogRecord {
  std::string algorithm;
  std::int64_t update_index = 0;
  std::int64_t env_steps_consumed = 0;  // cumulative, after this update
  double mean_return = 0.0;
  double return_std = 0.0;
  std::int64_t episodes = 0;
  std::int64_t n_connections = 0;
  double penalized = 0.0;
  // Threshold compared against (decayed incumbent score) and the incumbent
  // score after the decision. nullopt means no incumbent yet (-infinity).
  std::optional<double> threshold_before;
  std::optional<double> threshold_after;
  bool accepted = false;
  std::int64_t n_neurons = 0;
  KindCounts kinds;  // raw four-way split
  double wall_ms = 0.0;
  std::vector<MutationOp> ops;

  // Connection fractions with lateral folded into feedback.
  Composition composition() const;
};

// Compact single-line JSON with a fixed key order.
std::string to_json_line(const RunLogRecord& record);

// Throws std::runtime_error naming the field on malformed input.
RunLogRecord parse_run_log_line(std::string_view line);

std::vector<RunLogRecord> read_run_log(const std::filesystem::path& path);

// Append-only line writer.
class RunLogWriter {
 public:
  explicit RunLogWriter(const std::filesystem::path& path);
  void write(const RunLogRecord& record);

 private:
  std::ofstream out_;
};

struct AuditResult {
  std::size_t records = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> details;
};

// Recomputes every decayed threshold from the previous record's
// threshold_after and checks the accepted flags of an RMS log.
AuditResult audit_acceptance(const std::vector<RunLogRecord>& records,
                             double decay_rate);

}  // namespace rms
