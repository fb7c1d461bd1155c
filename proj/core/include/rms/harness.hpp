#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rms/config.hpp"
#include "rms/mlp.hpp"
#include "rms/network.hpp"
#include "rms/run_log.hpp"

namespace rms {

// Seed streams used by train():
//   rms        "env", "mutation"
//   es         "es:noise", "es:env:<iteration>:<pair>",
//              "es:action:<iteration>:<member>"
//   neat_lite  "neat:init", "neat:mutation", "neat:env:<generation>"
//   lifelong   "env:lifelong" unless lifelong.seed is given

struct TrainSummary {
  std::int64_t env_steps = 0;
  std::int64_t records = 0;
  double final_score = 0.0;
  std::int64_t env_resets = 0;
  std::int64_t state_resets = 0;
};

// Runs the configured algorithm and writes into cfg.out_dir:
//   run.log          one RunLogRecord per update / iteration / generation
//   config.resolved  the full configuration
//   snapshots/       the incumbent every snapshot_every updates
//   final.json       the final network (or MLP parameters for ES)
// ES records describe the population (mean and std of fitness); NEAT-lite
// records describe the generation's best individual, with return_std the
// population's fitness spread.
TrainSummary train(const RunConfig& cfg);

std::string serialize_mlp(const Mlp& mlp);
Mlp deserialize_mlp(std::string_view document);

// A trained policy file: a network document or an MLP document.
struct Policy {
  std::optional<Network> network;
  std::optional<Mlp> mlp;
  std::size_t input_size() const;
  std::size_t output_size() const;
};

Policy load_policy(const std::filesystem::path& path);

struct EvalOptions {
  EnvSpec env;
  int episodes = 10;
  std::uint64_t seed = 0;
  std::optional<int> impair_limb;     // quadpod family only, 0..3
  bool randomize_morphology = false;  // quadpod family only
};

struct EvalSummary {
  std::vector<double> returns;
  double mean = 0.0;
  double std = 0.0;  // population std
};

// Whole episodes on a fresh environment. Lifelong tasks are evaluated on the
// plain episodic quadpod. Throws ConfigError for invalid options and
// std::invalid_argument on an arity mismatch.
EvalSummary evaluate_policy(const Policy& policy, const EvalOptions& options);

// "%.4g ± %.4g"
std::string format_mean_std(double mean, double std);

// Integer percentages with largest-remainder rounding, so they sum to 100
// for any network with connections.
struct CompositionPercent {
  int feedforward = 0;
  int feedback = 0;  // lateral folded in
  int self_recurrent = 0;
};

CompositionPercent composition_percent(const KindCounts& kinds);

struct RunSummary {
  std::filesystem::path dir;
  std::string algorithm;
  std::string env;
  std::uint64_t seed = 0;
  std::int64_t connections = 0;
  CompositionPercent composition;
  double final_score = 0.0;
};

// Reads one run directory. The final entry is the last accepted record.
RunSummary summarize_run(const std::filesystem::path& dir);

struct PerformanceRow {
  std::string algorithm;
  std::string env;
  std::size_t runs = 0;
  double mean = 0.0;
  double std = 0.0;
};

struct Report {
  std::vector<RunSummary> runs;  // sorted by connection count
  std::vector<PerformanceRow> performance;
  std::vector<std::string> skipped;
};

// Unreadable runs are listed in skipped with the reason.
Report build_report(const std::vector<std::filesystem::path>& run_dirs);

std::string composition_table(const Report& report);
std::string performance_table(const Report& report);
std::string composition_csv(const Report& report);
std::string performance_csv(const Report& report);

}  // namespace rms
