#include "rms/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rms {

void check(const RmsConfig& cfg) {
  if (cfg.update_interval_steps < 1) {
    throw std::invalid_argument("update_interval_steps: must be >= 1");
  }
  if (!(cfg.decay_rate > 0.0 && cfg.decay_rate <= 1.0)) {
    throw std::invalid_argument("decay_rate: must lie in (0, 1]");
  }
  if (!(cfg.connection_penalty >= 0.0)) {
    throw std::invalid_argument("connection_penalty: must be >= 0");
  }
  if (!(cfg.variance_penalty >= 0.0)) {
    throw std::invalid_argument("variance_penalty_coeff: must be >= 0");
  }
  if (cfg.initial_random_mutations < 0) {
    throw std::invalid_argument("initial_random_mutations: must be >= 0");
  }
  if (cfg.max_episode_steps < 1) {
    throw std::invalid_argument("max_episode_steps: must be >= 1");
  }
  if (cfg.total_env_steps < 1) {
    throw std::invalid_argument("total_env_steps: must be >= 1");
  }
  try {
    check(cfg.mutation);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("mutation.") + e.what());
  }
}

namespace {

void check_arity(const Network& net, const Environment& env) {
  if (static_cast<std::size_t>(net.n_inputs()) != env.observation_size() ||
      static_cast<std::size_t>(net.n_outputs()) != env.action_size()) {
    throw std::invalid_argument(
        "network arity " + std::to_string(net.n_inputs()) + "->" +
        std::to_string(net.n_outputs()) + " does not match " + env.name() + " (" +
        std::to_string(env.observation_size()) + "->" +
        std::to_string(env.action_size()) + ")");
  }
}

}  // namespace

double decay_threshold(double threshold, double decay_rate) {
  return threshold > 0.0 ? threshold * decay_rate : threshold / decay_rate;
}

CandidateScore evaluate_episodic(Network& net, Environment& env,
                                 const RmsConfig& cfg, EvalCounters* counters) {
  check_arity(net, env);
  if (!env.episodic()) {
    throw std::invalid_argument(env.name() + " is not episodic");
  }
  std::vector<double> returns;
  std::int64_t steps = 0;
  double episode_return = 0.0;
  std::int64_t episode_steps = 0;

  auto begin_episode = [&]() {
    net.reset_state();
    if (counters != nullptr) {
      ++counters->state_resets;
      ++counters->env_resets;
    }
    episode_return = 0.0;
    episode_steps = 0;
    return env.reset();
  };

  auto obs = begin_episode();
  while (steps < cfg.update_interval_steps) {
    const auto action = net.forward(obs);
    auto result = env.step(action);
    episode_return += result.reward;
    ++steps;
    ++episode_steps;
    if (result.done || episode_steps >= cfg.max_episode_steps) {
      returns.push_back(episode_return);
      if (steps < cfg.update_interval_steps) obs = begin_episode();
    } else {
      obs = std::move(result.observation);
    }
  }

  CandidateScore score;
  score.steps = steps;
  score.episodes_completed = static_cast<std::int64_t>(returns.size());
  if (returns.empty()) returns.push_back(episode_return);
  double mean = 0.0;
  for (double r : returns) mean += r;
  mean /= static_cast<double>(returns.size());
  double var = 0.0;
  for (double r : returns) var += (r - mean) * (r - mean);
  var /= static_cast<double>(returns.size());
  score.mean_return = mean;
  score.return_std = std::sqrt(var);
  score.n_connections = static_cast<std::int64_t>(net.connections().size());
  score.penalized = score.mean_return - cfg.variance_penalty * score.return_std -
                    cfg.connection_penalty * static_cast<double>(score.n_connections);
  return score;
}

CandidateScore evaluate_lifelong(Network& net, Environment& env,
                                 const RmsConfig& cfg) {
  check_arity(net, env);
  if (env.episodic()) {
    throw std::invalid_argument(env.name() + " is episodic, not lifelong");
  }
  auto obs = env.observation();
  double total = 0.0;
  for (std::int64_t i = 0; i < cfg.update_interval_steps; ++i) {
    const auto action = net.forward(obs);
    auto result = env.step(action);
    total += result.reward;
    obs = std::move(result.observation);
  }
  CandidateScore score;
  score.steps = cfg.update_interval_steps;
  score.mean_return = total;
  score.return_std = 0.0;
  score.episodes_completed = 0;
  score.n_connections = static_cast<std::int64_t>(net.connections().size());
  score.penalized =
      total - cfg.connection_penalty * static_cast<double>(score.n_connections);
  return score;
}

RmsResult run_rms(const EnvFactory& make_env, const RmsConfig& cfg, Rng& rng,
                  const RunHooks& hooks) {
  check(cfg);
  auto env = make_env();
  const bool lifelong = !env->episodic();
  EvalCounters counters;

  auto evaluate = [&](Network& net) {
    return lifelong ? evaluate_lifelong(net, *env, cfg)
                    : evaluate_episodic(net, *env, cfg, &counters);
  };

  using Clock = std::chrono::steady_clock;
  auto elapsed_ms = [&](Clock::time_point start) {
    if (!hooks.record_wall_time) return 0.0;
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };

  auto make_record = [&](const Network& net, const CandidateScore& score,
                         std::int64_t update, std::int64_t steps) {
    RunLogRecord rec;
    rec.algorithm = "rms";
    rec.update_index = update;
    rec.env_steps_consumed = steps;
    rec.mean_return = score.mean_return;
    rec.return_std = score.return_std;
    rec.episodes = score.episodes_completed;
    rec.n_connections = score.n_connections;
    rec.penalized = score.penalized;
    rec.n_neurons = static_cast<std::int64_t>(net.neurons().size());
    rec.kinds = count_kinds(net);
    return rec;
  };

  RmsResult result{Network(static_cast<int>(env->observation_size()),
                           static_cast<int>(env->action_size())),
                   0.0,
                   {},
                   {}};
  RmsStats& stats = result.stats;

  auto start = Clock::now();
  std::vector<MutationOp> initial_ops =
      mutate_n(result.best, cfg.mutation, cfg.initial_random_mutations, rng);
  result.best_eval = evaluate(result.best);
  result.best_score = result.best_eval.penalized;
  stats.env_steps += result.best_eval.steps;
  {
    RunLogRecord rec = make_record(result.best, result.best_eval, 0, stats.env_steps);
    rec.threshold_after = result.best_score;
    rec.accepted = true;
    rec.ops = std::move(initial_ops);
    rec.wall_ms = elapsed_ms(start);
    if (hooks.log) hooks.log(rec);
  }
  if (hooks.on_update) hooks.on_update(0, result.best);

  std::int64_t update = 0;
  while (stats.env_steps < cfg.total_env_steps) {
    start = Clock::now();
    ++update;
    const double threshold = decay_threshold(result.best_score, cfg.decay_rate);
    MutationResult candidate = mutate(result.best, cfg.mutation, rng);
    const CandidateScore score = evaluate(candidate.network);
    stats.env_steps += score.steps;
    ++stats.updates;

    RunLogRecord rec =
        make_record(candidate.network, score, update, stats.env_steps);
    rec.threshold_before = threshold;
    rec.accepted = score.penalized > threshold;
    if (rec.accepted) {
      result.best = std::move(candidate.network);
      result.best_score = score.penalized;
      result.best_eval = score;
      ++stats.acceptances;
    } else {
      result.best_score = threshold;
    }
    rec.threshold_after = result.best_score;
    rec.ops = std::move(candidate.ops);
    rec.wall_ms = elapsed_ms(start);
    if (hooks.log) hooks.log(rec);
    if (hooks.on_update) hooks.on_update(update, result.best);
  }
  stats.env_resets = env->reset_count();
  stats.state_resets = counters.state_resets;
  return result;
}

}  // namespace rms
