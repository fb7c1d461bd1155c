#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rms/es.hpp"
#include "rms/lifelong.hpp"
#include "rms/neat_lite.hpp"
#include "rms/optimizer.hpp"

namespace rms {

// Invalid configuration; path() is the offending field, e.g. "rms.decay_rate".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Algorithm { kRms, kEs, kNeatLite };

std::string_view to_string(Algorithm algorithm);

struct EnvSpec {
  std::string name;
  // Overrides of the environment's documented parameter defaults.
  std::map<std::string, double> params;
};

struct RunConfig {
  Algorithm algorithm = Algorithm::kRms;
  EnvSpec env;
  std::uint64_t seed = 0;
  std::int64_t total_env_steps = 10'000'000;
  std::string out_dir;
  // Snapshot the incumbent every this many updates (0 disables; the final
  // network is always written).
  std::int64_t snapshot_every = 100;
  bool record_wall_time = false;
  int threads = 1;
  RmsConfig rms;
  EsConfig es;
  NeatConfig neat;
  LifelongConfig lifelong;
};

// RMS defaults for an environment: one mutation per update on swingup,
// U(1, 20) elsewhere.
RmsConfig default_rms_config(std::string_view env_name);

// Parses a JSON run configuration, filling defaults for absent fields.
// Throws ConfigError with the field path on any invalid or unknown field.
RunConfig parse_run_config(std::string_view json_text);

// Command-line values that replace fields of a config document.
struct ConfigOverrides {
  std::optional<std::string> algorithm;
  std::optional<std::string> env;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> total_env_steps;
  std::optional<std::string> out_dir;
  std::optional<std::int64_t> snapshot_every;
  std::optional<int> threads;
};

// Applies the overrides to a JSON document (empty text means {}) and
// parses the result. Changing env.name drops params of the old environment.
RunConfig parse_run_config(std::string_view json_text, const ConfigOverrides& overrides);

// Full configuration with every default materialized, as JSON text that
// parse_run_config accepts.
std::string resolved_config_json(const RunConfig& cfg);

// Cross-field checks (module invariants, known environment).
void validate(const RunConfig& cfg);

}  // namespace rms
