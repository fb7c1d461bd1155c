// Command-line front end: train, eval, report, validate-config.
//
// Exit status: 0 success, 1 runtime failure, 2 invalid configuration or
// arguments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rms/config.hpp"
#include "rms/env_registry.hpp"
#include "rms/harness.hpp"
#include "rms/lifelong.hpp"
#include "rms/network_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rms::ConfigError("config", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct TrainArgs {
  std::string config;
  std::string algo, env, out;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  std::int64_t snapshot_every = 0;
  int threads = 1;
};

int run_train(const TrainArgs& args, const CLI::App& cmd) {
  rms::ConfigOverrides o;
  if (cmd.count("--algo")) o.algorithm = args.algo;
  if (cmd.count("--env")) o.env = args.env;
  if (cmd.count("--seed")) o.seed = args.seed;
  if (cmd.count("--steps")) o.total_env_steps = args.steps;
  if (cmd.count("--out")) o.out_dir = args.out;
  if (cmd.count("--snapshot-every")) o.snapshot_every = args.snapshot_every;
  if (cmd.count("--threads")) o.threads = args.threads;
  const std::string text = args.config.empty() ? std::string() : read_file(args.config);
  const rms::RunConfig cfg = rms::parse_run_config(text, o);
  if (cfg.out_dir.empty()) throw rms::ConfigError("out_dir", "required (use --out)");
  const rms::TrainSummary s = rms::train(cfg);
  std::printf("%s on %s: %lld records, %lld env steps, final score %.6g\n",
              std::string(rms::to_string(cfg.algorithm)).c_str(), cfg.env.name.c_str(),
              static_cast<long long>(s.records), static_cast<long long>(s.env_steps),
              s.final_score);
  return 0;
}

struct EvalArgs {
  std::string file, env;
  int episodes = 10;
  std::uint64_t seed = 0;
  int impair_limb = -1;
  bool randomize_morphology = false;
  bool generalization = false;
};

int run_eval(const EvalArgs& args, const CLI::App& cmd) {
  const rms::Policy policy = rms::load_policy(args.file);
  rms::EvalOptions options;
  options.env.name = args.env;
  options.episodes = args.episodes;
  options.seed = args.seed;
  if (cmd.count("--impair-limb")) options.impair_limb = args.impair_limb;
  options.randomize_morphology = args.randomize_morphology;

  if (args.generalization) {
    if (!policy.network) {
      throw rms::ConfigError("generalization", "needs a network snapshot");
    }
    if (!rms::is_quadpod(args.env)) {
      throw rms::ConfigError("generalization", "only defined for quadpod tasks");
    }
    const auto report = rms::generalization_eval(*policy.network, args.episodes, args.seed);
    std::printf("%-16s %.6g\n", "plain", report.plain);
    for (int limb = 0; limb < rms::kQuadLimbs; ++limb) {
      std::printf("impaired_%-7d %.6g  (%s)\n", limb,
                  report.impaired_limb[static_cast<std::size_t>(limb)],
                  rms::kLimbNames[static_cast<std::size_t>(limb)]);
    }
    std::printf("%-16s %.6g\n", "morphology", report.randomized_morphology);
    return 0;
  }

  const rms::EvalSummary s = rms::evaluate_policy(policy, options);
  std::printf("%s over %d episodes: %s\n", args.env.c_str(), args.episodes,
              rms::format_mean_std(s.mean, s.std).c_str());
  return 0;
}

int run_report(const std::vector<std::string>& dirs, const std::string& csv_dir) {
  std::vector<fs::path> paths(dirs.begin(), dirs.end());
  const rms::Report report = rms::build_report(paths);
  for (const auto& why : report.skipped) std::fprintf(stderr, "warning: skipped %s\n", why.c_str());
  if (report.runs.empty()) {
    std::fprintf(stderr, "error: no readable runs\n");
    return kRuntimeError;
  }
  std::printf("Composition\n%s\nPerformance\n%s", rms::composition_table(report).c_str(),
              rms::performance_table(report).c_str());
  if (!csv_dir.empty()) {
    fs::create_directories(csv_dir);
    write_file(fs::path(csv_dir) / "composition.csv", rms::composition_csv(report));
    write_file(fs::path(csv_dir) / "performance.csv", rms::performance_csv(report));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random Mutation Search experiments"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Run one training job");
  train_cmd->add_option("--config", train.config, "JSON run configuration");
  train_cmd->add_option("--algo", train.algo, "rms, es or neat_lite");
  train_cmd->add_option("--env", train.env, "Environment name");
  train_cmd->add_option("--seed", train.seed, "Master seed");
  train_cmd->add_option("--steps", train.steps, "Total environment-step budget");
  train_cmd->add_option("--out", train.out, "Output directory");
  train_cmd->add_option("--snapshot-every", train.snapshot_every, "Snapshot period (0 = off)");
  train_cmd->add_option("--threads", train.threads, "Worker threads for ES / NEAT-lite");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a saved network or MLP");
  eval_cmd->add_option("file", eval.file, "Snapshot file")->required();
  eval_cmd->add_option("--env", eval.env, "Environment name")->required();
  eval_cmd->add_option("--episodes", eval.episodes, "Episodes")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "Evaluation seed");
  eval_cmd->add_option("--impair-limb", eval.impair_limb, "Disable one quadpod limb (0-3)")
      ->check(CLI::Range(0, 3));
  eval_cmd->add_flag("--randomize-morphology", eval.randomize_morphology,
                     "Resample quadpod limb morphology each episode");
  eval_cmd->add_flag("--generalization", eval.generalization,
                     "Print the six-condition quadpod report");

  std::vector<std::string> report_dirs;
  std::string csv_dir;
  auto* report_cmd = app.add_subcommand("report", "Composition and performance tables");
  report_cmd->add_option("runs", report_dirs, "Run directories")->required();
  report_cmd->add_option("--csv-dir", csv_dir, "Also write composition.csv and performance.csv");

  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate-config", "Check a configuration file");
  validate_cmd->add_option("file", validate_file, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*train_cmd) return run_train(train, *train_cmd);
    if (*eval_cmd) return run_eval(eval, *eval_cmd);
    if (*report_cmd) return run_report(report_dirs, csv_dir);
    if (*validate_cmd) {
      const rms::RunConfig cfg = rms::parse_run_config(read_file(validate_file));
      std::printf("%s", rms::resolved_config_json(cfg).c_str());
      return 0;
    }
  } catch (const rms::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
  return kConfigError;
}
