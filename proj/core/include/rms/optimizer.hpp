#pragma once

#include <cstdint>
#include <functional>

#include "rms/environment.hpp"
#include "rms/mutation.hpp"
#include "rms/network.hpp"
#include "rms/random.hpp"
#include "rms/run_log.hpp"

namespace rms {

// Defaults follow the published RMS settings for the locomotion tasks
// (swing-up uses one mutation per update instead of 1..20).
struct RmsConfig {
  std::int64_t update_interval_steps = 4000;
  double decay_rate = 0.995;
  double connection_penalty = 0.001;
  double variance_penalty = 0.1;
  int initial_random_mutations = 50;
  MutationConfig mutation;
  std::int64_t max_episode_steps = 1000;
  std::int64_t total_env_steps = 10'000'000;
};

// Throws std::invalid_argument naming the offending field.
void check(const RmsConfig& cfg);

struct CandidateScore {
  double mean_return = 0.0;
  double return_std = 0.0;  // population std over completed episodes
  std::int64_t episodes_completed = 0;
  std::int64_t n_connections = 0;
  double penalized = 0.0;
  std::int64_t steps = 0;
};

// Environment and network-state resets performed during evaluation.
struct EvalCounters {
  std::int64_t env_resets = 0;
  std::int64_t state_resets = 0;
};

// Runs whole episodes until update_interval_steps steps have been taken.
// Only completed episodes are scored; if none completed, the truncated
// episode's return is the single sample.
CandidateScore evaluate_episodic(Network& net, Environment& env,
                                 const RmsConfig& cfg,
                                 EvalCounters* counters = nullptr);

// Steps a live, never-reset environment for update_interval_steps steps from
// wherever it is. The score is the summed reward with no variance term.
CandidateScore evaluate_lifelong(Network& net, Environment& env,
                                 const RmsConfig& cfg);

// Lowers a threshold by one decay step whatever its sign.
double decay_threshold(double threshold, double decay_rate);

struct RmsStats {
  std::int64_t env_steps = 0;
  std::int64_t updates = 0;
  std::int64_t acceptances = 0;
  std::int64_t env_resets = 0;
  std::int64_t state_resets = 0;
};

struct RmsResult {
  Network best;
  double best_score = 0.0;
  CandidateScore best_eval;
  RmsStats stats;
};

struct RunHooks {
  std::function<void(const RunLogRecord&)> log;
  // Called after every update with the incumbent network.
  std::function<void(std::int64_t update_index, const Network& best)> on_update;
  bool record_wall_time = false;
};

// Grows a network from zero connections: apply initial_random_mutations
// operators, evaluate, then repeatedly mutate the incumbent, evaluate the
// candidate and accept it when its penalized score strictly beats the
// decayed incumbent score, until total_env_steps have been spent.
// Uses the lifelong evaluation path when the environment is not episodic.
RmsResult run_rms(const EnvFactory& make_env, const RmsConfig& cfg, Rng& rng,
                  const RunHooks& hooks = {});

}  // namespace rms
