#include "rms/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rms/env_registry.hpp"
#include "rms/es.hpp"
#include "rms/neat_lite.hpp"
#include "rms/network_io.hpp"
#include "rms/optimizer.hpp"

namespace rms {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path snapshot_path(const fs::path& out_dir, std::int64_t index) {
  char name[32];
  std::snprintf(name, sizeof name, "%08lld.json", static_cast<long long>(index));
  return out_dir / "snapshots" / name;
}

bool snapshot_due(const RunConfig& cfg, std::int64_t index) {
  return cfg.snapshot_every > 0 && index % cfg.snapshot_every == 0;
}

std::string label(std::string_view stream, std::int64_t a, std::int64_t b) {
  return std::string(stream) + ":" + std::to_string(a) + ":" + std::to_string(b);
}

void mean_std(std::span<const double> xs, double& mean, double& std) {
  mean = 0.0;
  std = 0.0;
  if (xs.empty()) return;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  std = std::sqrt(var / static_cast<double>(xs.size()));
}

// Returns the episode return and adds the steps taken to `steps`.
template <typename Act>
double run_episode(Environment& env, std::int64_t max_steps, Act&& act,
                   std::int64_t& steps) {
  auto obs = env.reset();
  double total = 0.0;
  for (std::int64_t t = 0; t < max_steps; ++t) {
    auto result = env.step(act(obs));
    total += result.reward;
    ++steps;
    if (result.done) break;
    obs = std::move(result.observation);
  }
  return total;
}

TrainSummary train_rms(const RunConfig& cfg, RunLogWriter& log) {
  const std::uint64_t env_seed = derive_seed(cfg.seed, "env");
  EnvFactory factory = [&cfg, env_seed] {
    return make_environment(cfg.env, env_seed, cfg.lifelong);
  };
  Rng rng(derive_seed(cfg.seed, "mutation"));
  TrainSummary summary;
  RunHooks hooks;
  hooks.record_wall_time = cfg.record_wall_time;
  hooks.log = [&](const RunLogRecord& rec) {
    log.write(rec);
    ++summary.records;
  };
  hooks.on_update = [&](std::int64_t update, const Network& best) {
    if (snapshot_due(cfg, update)) save_network(best, snapshot_path(cfg.out_dir, update));
  };
  RmsResult result = run_rms(factory, cfg.rms, rng, hooks);
  save_network(result.best, fs::path(cfg.out_dir) / "final.json");
  summary.env_steps = result.stats.env_steps;
  summary.final_score = result.best_eval.mean_return;
  summary.env_resets = result.stats.env_resets;
  summary.state_resets = result.stats.state_resets;
  return summary;
}

TrainSummary train_es(const RunConfig& cfg, RunLogWriter& log) {
  auto probe = make_environment(cfg.env, 0, cfg.lifelong);
  const Mlp mlp(probe->observation_size(), cfg.es.hidden, probe->action_size());
  EsOptimizer es(std::vector<double>(mlp.parameter_count(), 0.0), cfg.es);
  Rng noise(derive_seed(cfg.seed, "es:noise"));
  TrainSummary summary;

  while (es.iteration() < cfg.es.iterations && summary.env_steps < cfg.total_env_steps) {
    const auto start = std::chrono::steady_clock::now();
    const std::int64_t it = es.iteration();
    auto fitness = [&](std::span<const double> params, std::size_t member) {
      const auto m = static_cast<std::int64_t>(member);
      auto env = make_environment(cfg.env, derive_seed(cfg.seed, label("es:env", it, m / 2)),
                                  cfg.lifelong);
      Rng action_rng(derive_seed(cfg.seed, label("es:action", it, m)));
      Evaluation eval;
      eval.fitness = run_episode(
          *env, cfg.rms.max_episode_steps,
          [&](const std::vector<double>& obs) {
            auto a = mlp.forward(params, obs);
            for (double& v : a) v += cfg.es.action_noise_std * action_rng.normal();
            return a;
          },
          eval.steps);
      return eval;
    };
    const EsUpdateStats stats = es.update(fitness, noise, cfg.threads);
    summary.env_steps += stats.steps;
    summary.env_resets += cfg.es.population_size;

    RunLogRecord rec;
    rec.algorithm = "es";
    rec.update_index = it + 1;
    rec.env_steps_consumed = summary.env_steps;
    rec.mean_return = stats.mean_fitness;
    rec.return_std = stats.fitness_std;
    rec.episodes = cfg.es.population_size;
    rec.n_connections = static_cast<std::int64_t>(mlp.weight_count());
    rec.penalized = stats.mean_fitness;
    rec.accepted = true;
    std::int64_t neurons = 0;
    for (std::size_t s : mlp.layer_sizes()) neurons += static_cast<std::int64_t>(s);
    rec.n_neurons = neurons;
    rec.kinds.feedforward = mlp.weight_count();
    if (cfg.record_wall_time) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
    log.write(rec);
    ++summary.records;
    summary.final_score = stats.mean_fitness;
    if (snapshot_due(cfg, it + 1)) {
      Mlp snap = mlp;
      snap.set_parameters(es.theta());
      write_text(snapshot_path(cfg.out_dir, it + 1), serialize_mlp(snap));
    }
  }
  Mlp final_mlp = mlp;
  final_mlp.set_parameters(es.theta());
  write_text(fs::path(cfg.out_dir) / "final.json", serialize_mlp(final_mlp));
  return summary;
}

TrainSummary train_neat(const RunConfig& cfg, RunLogWriter& log) {
  auto probe = make_environment(cfg.env, 0, cfg.lifelong);
  const int n_in = static_cast<int>(probe->observation_size());
  const int n_out = static_cast<int>(probe->action_size());
  Rng init(derive_seed(cfg.seed, "neat:init"));
  Rng rng(derive_seed(cfg.seed, "neat:mutation"));
  std::vector<Network> population = neat_lite_initial_population(n_in, n_out, cfg.neat, init);
  TrainSummary summary;
  Network best = population.front();

  for (std::int64_t gen = 0;
       gen < cfg.neat.iterations && summary.env_steps < cfg.total_env_steps; ++gen) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t env_seed = derive_seed(cfg.seed, "neat:env:" + std::to_string(gen));
    auto fitness = [&](const Network& individual, std::size_t) {
      auto env = make_environment(cfg.env, env_seed, cfg.lifelong);
      Network net = individual;
      Evaluation eval;
      double total = 0.0;
      for (int e = 0; e < cfg.neat.episodes_per_eval; ++e) {
        net.reset_state();
        total += run_episode(
            *env, cfg.rms.max_episode_steps,
            [&](const std::vector<double>& obs) { return net.forward(obs); }, eval.steps);
      }
      eval.fitness = total / cfg.neat.episodes_per_eval;
      return eval;
    };
    NeatGenerationStats stats;
    std::vector<Network> next =
        neat_lite_generation(population, fitness, cfg.neat, rng, &stats, cfg.threads);
    best = population[stats.best_index];
    summary.env_steps += stats.steps;
    summary.env_resets +=
        static_cast<std::int64_t>(cfg.neat.population_size) * cfg.neat.episodes_per_eval;

    RunLogRecord rec;
    rec.algorithm = "neat_lite";
    rec.update_index = gen + 1;
    rec.env_steps_consumed = summary.env_steps;
    rec.mean_return = stats.best_fitness;
    rec.return_std = stats.fitness_std;
    rec.episodes = cfg.neat.episodes_per_eval;
    rec.n_connections = static_cast<std::int64_t>(best.connections().size());
    rec.penalized = stats.best_fitness;
    rec.accepted = true;
    rec.n_neurons = static_cast<std::int64_t>(best.neurons().size());
    rec.kinds = count_kinds(best);
    if (cfg.record_wall_time) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
    log.write(rec);
    ++summary.records;
    summary.final_score = stats.best_fitness;
    if (snapshot_due(cfg, gen + 1)) save_network(best, snapshot_path(cfg.out_dir, gen + 1));
    population = std::move(next);
  }
  save_network(best, fs::path(cfg.out_dir) / "final.json");
  return summary;
}

}  // namespace

TrainSummary train(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.out_dir.empty()) throw ConfigError("out_dir", "required field is missing");
  const fs::path out(cfg.out_dir);
  fs::create_directories(out / "snapshots");
  write_text(out / "config.resolved", resolved_config_json(cfg));
  RunLogWriter log(out / "run.log");
  switch (cfg.algorithm) {
    case Algorithm::kRms: return train_rms(cfg, log);
    case Algorithm::kEs: return train_es(cfg, log);
    case Algorithm::kNeatLite: return train_neat(cfg, log);
  }
  return {};
}

std::string serialize_mlp(const Mlp& mlp) {
  json doc;
  doc["format"] = "mlp";
  doc["layer_sizes"] = mlp.layer_sizes();
  doc["parameters"] = std::vector<double>(mlp.parameters().begin(), mlp.parameters().end());
  return doc.dump(2) + "\n";
}

Mlp deserialize_mlp(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw NetworkFormatError("<root>", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != "mlp") {
    throw NetworkFormatError("format", "expected \"mlp\"");
  }
  std::vector<std::size_t> sizes;
  std::vector<double> params;
  try {
    sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
  } catch (const json::exception&) {
    throw NetworkFormatError("layer_sizes", "expected an array of positive integers");
  }
  try {
    params = doc.at("parameters").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw NetworkFormatError("parameters", "expected an array of numbers");
  }
  try {
    Mlp mlp(sizes);
    mlp.set_parameters(params);
    return mlp;
  } catch (const std::invalid_argument& e) {
    throw NetworkFormatError("parameters", e.what());
  }
}

std::size_t Policy::input_size() const {
  return network ? static_cast<std::size_t>(network->n_inputs()) : mlp->input_size();
}

std::size_t Policy::output_size() const {
  return network ? static_cast<std::size_t>(network->n_outputs()) : mlp->output_size();
}

Policy load_policy(const fs::path& path) {
  if (!fs::exists(path)) throw std::runtime_error("no such file: " + path.string());
  const std::string text = read_text(path);
  Policy policy;
  json doc = json::parse(text, nullptr, false);
  if (doc.is_object() && doc.contains("format") && doc["format"] == "mlp") {
    policy.mlp = deserialize_mlp(text);
  } else {
    policy.network = deserialize(text);
  }
  return policy;
}

EvalSummary evaluate_policy(const Policy& policy, const EvalOptions& options) {
  check(options.env);
  if (options.episodes < 1) throw ConfigError("episodes", "must be >= 1");
  const bool quad = is_quadpod(options.env.name);
  if (options.impair_limb && !quad) {
    throw ConfigError("impair_limb", "only quadpod tasks have limbs");
  }
  if (options.impair_limb && (*options.impair_limb < 0 || *options.impair_limb >= kQuadLimbs)) {
    throw ConfigError("impair_limb", "must lie in 0..3");
  }
  if (options.randomize_morphology && !quad) {
    throw ConfigError("randomize_morphology", "only quadpod tasks have a morphology");
  }

  const std::uint64_t env_seed = derive_seed(options.seed, "eval");
  std::unique_ptr<Environment> env;
  if (quad) {
    auto variant = QuadPodEnv::Variant::kPlain;
    if (options.randomize_morphology || options.env.name == "quadpod_morph") {
      variant = QuadPodEnv::Variant::kMorphology;
    } else if (options.env.name == "quadpod_impaired" && !options.impair_limb) {
      variant = QuadPodEnv::Variant::kImpaired;
    }
    auto q = std::make_unique<QuadPodEnv>(env_seed, variant, quadpod_params(options.env));
    if (options.impair_limb) q->impair_limb(*options.impair_limb);
    env = std::move(q);
  } else {
    env = make_environment(options.env, env_seed);
  }
  if (policy.input_size() != env->observation_size() ||
      policy.output_size() != env->action_size()) {
    throw std::invalid_argument(
        "policy arity " + std::to_string(policy.input_size()) + "->" +
        std::to_string(policy.output_size()) + " does not match " + env->name() + " (" +
        std::to_string(env->observation_size()) + "->" +
        std::to_string(env->action_size()) + ")");
  }

  EvalSummary summary;
  std::int64_t steps = 0;
  const std::int64_t cap = std::numeric_limits<std::int64_t>::max();
  for (int e = 0; e < options.episodes; ++e) {
    if (policy.network) {
      Network net = *policy.network;
      net.reset_state();
      summary.returns.push_back(run_episode(
          *env, cap, [&](const std::vector<double>& obs) { return net.forward(obs); },
          steps));
    } else {
      const Mlp& mlp = *policy.mlp;
      summary.returns.push_back(run_episode(
          *env, cap, [&](const std::vector<double>& obs) { return mlp.forward(obs); },
          steps));
    }
  }
  mean_std(summary.returns, summary.mean, summary.std);
  return summary;
}

std::string format_mean_std(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g ± %.4g", mean, std);
  return buf;
}

CompositionPercent composition_percent(const KindCounts& kinds) {
  const std::size_t total = kinds.total();
  if (total == 0) return {};
  const std::array<std::size_t, 3> counts = {kinds.feedforward,
                                             kinds.feedback + kinds.lateral,
                                             kinds.self_recurrent};
  std::array<int, 3> pct{};
  std::array<std::size_t, 3> remainder{};
  int assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    pct[i] = static_cast<int>(counts[i] * 100 / total);
    remainder[i] = counts[i] * 100 % total;
    assigned += pct[i];
  }
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < 100; ++k, ++assigned) ++pct[order[k]];
  return {pct[0], pct[1], pct[2]};
}

RunSummary summarize_run(const fs::path& dir) {
  const RunConfig cfg = parse_run_config(read_text(dir / "config.resolved"));
  const auto records = read_run_log(dir / "run.log");
  const RunLogRecord* last = nullptr;
  for (const auto& rec : records) {
    if (rec.accepted) last = &rec;
  }
  if (last == nullptr) throw std::runtime_error("run.log has no accepted record");
  RunSummary s;
  s.dir = dir;
  s.algorithm = last->algorithm;
  s.env = cfg.env.name;
  s.seed = cfg.seed;
  s.connections = last->n_connections;
  s.composition = composition_percent(last->kinds);
  s.final_score = last->mean_return;
  return s;
}

Report build_report(const std::vector<fs::path>& run_dirs) {
  Report report;
  for (const auto& dir : run_dirs) {
    try {
      report.runs.push_back(summarize_run(dir));
    } catch (const std::exception& e) {
      report.skipped.push_back(dir.string() + ": " + e.what());
    }
  }
  std::stable_sort(report.runs.begin(), report.runs.end(),
                   [](const RunSummary& a, const RunSummary& b) {
                     return a.connections < b.connections;
                   });
  std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : report.runs) groups[{r.algorithm, r.env}].push_back(r.final_score);
  for (const auto& [key, scores] : groups) {
    PerformanceRow row;
    row.algorithm = key.first;
    row.env = key.second;
    row.runs = scores.size();
    mean_std(scores, row.mean, row.std);
    report.performance.push_back(row);
  }
  return report;
}

namespace {

// Left-aligned columns separated by two spaces.
std::string align(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  auto display_width = [](const std::string& s) {
    // Count UTF-8 code points, not bytes.
    return static_cast<std::size_t>(std::count_if(
        s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
  };
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], display_width(row[i]));
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - display_width(row[i]) + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string pct(int v) { return std::to_string(v) + "%"; }

}  // namespace

std::string composition_table(const Report& report) {
  std::vector<std::vector<std::string>> rows = {
      {"run", "algorithm", "env", "connections", "feedforward", "feedback", "self"}};
  for (const auto& r : report.runs) {
    rows.push_back({r.dir.filename().string(), r.algorithm, r.env,
                    std::to_string(r.connections), pct(r.composition.feedforward),
                    pct(r.composition.feedback), pct(r.composition.self_recurrent)});
  }
  return align(rows);
}

std::string performance_table(const Report& report) {
  std::vector<std::vector<std::string>> rows = {{"algorithm", "env", "runs", "final score"}};
  for (const auto& p : report.performance) {
    rows.push_back({p.algorithm, p.env, std::to_string(p.runs), format_mean_std(p.mean, p.std)});
  }
  return align(rows);
}

std::string composition_csv(const Report& report) {
  std::string out = "run,algorithm,env,seed,connections,feedforward_pct,feedback_pct,self_pct\n";
  for (const auto& r : report.runs) {
    out += r.dir.string() + "," + r.algorithm + "," + r.env + "," + std::to_string(r.seed) +
           "," + std::to_string(r.connections) + "," +
           std::to_string(r.composition.feedforward) + "," +
           std::to_string(r.composition.feedback) + "," +
           std::to_string(r.composition.self_recurrent) + "\n";
  }
  return out;
}

std::string performance_csv(const Report& report) {
  std::string out = "algorithm,env,runs,mean,std\n";
  char buf[64];
  for (const auto& p : report.performance) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", p.mean, p.std);
    out += p.algorithm + "," + p.env + "," + std::to_string(p.runs) + "," + buf + "\n";
  }
  return out;
}

}  // namespace rms
