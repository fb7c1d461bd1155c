#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "rms/network_io.hpp"
#include "rms/optimizer.hpp"
#include "rms/swingup.hpp"

namespace rms {
namespace {

// Episodes of fixed length; episode k pays episode_rewards[k % n] per step.
class ScriptedEnv final : public Environment {
 public:
  ScriptedEnv(std::int64_t length, std::vector<double> episode_rewards)
      : length_(length), rewards_(std::move(episode_rewards)) {}
  std::string name() const override { return "scripted"; }
  std::size_t observation_size() const override { return 1; }
  std::size_t action_size() const override { return 1; }
  std::vector<double> observation() const override { return {0.0}; }

 protected:
  std::vector<double> do_reset() override {
    ++episode_;
    t_ = 0;
    return {0.0};
  }
  StepResult do_step(std::span<const double>) override {
    ++t_;
    const double r = rewards_[static_cast<std::size_t>(episode_ - 1) % rewards_.size()];
    return {{0.0}, r, t_ >= length_};
  }

 private:
  std::int64_t length_;
  std::vector<double> rewards_;
  std::int64_t episode_ = 0;
  std::int64_t t_ = 0;
};

// Never-ending environment with a constant reward and a step counter in the
// observation.
class ConstantLifelongEnv final : public Environment {
 public:
  explicit ConstantLifelongEnv(double reward) : reward_(reward) { mark_live(); }
  std::string name() const override { return "constant_lifelong"; }
  bool episodic() const override { return false; }
  std::size_t observation_size() const override { return 1; }
  std::size_t action_size() const override { return 1; }
  std::vector<double> observation() const override { return {clock_}; }

 protected:
  std::vector<double> do_reset() override { throw std::logic_error("no reset"); }
  StepResult do_step(std::span<const double> a) override {
    clock_ += 1.0;
    return {{clock_}, reward_ + 0.0 * a[0], false};
  }

 private:
  double reward_;
  double clock_ = 0.0;
};

Network connected(int n) {
  Network net(1, 1);
  for (int i = 0; i < n; ++i) net.add_connection(NeuronId{0}, NeuronId{1}, 0.25);
  return net;
}

TEST(Optimizer, EpisodicMeanOverCompletedEpisodes) {
  ScriptedEnv env(100, {1.0});
  Network net(1, 1);
  RmsConfig cfg;
  cfg.update_interval_steps = 400;
  const CandidateScore s = evaluate_episodic(net, env, cfg);
  EXPECT_EQ(s.mean_return, 100.0);
  EXPECT_EQ(s.return_std, 0.0);
  EXPECT_EQ(s.episodes_completed, 4);
  EXPECT_EQ(s.steps, 400);
}

TEST(Optimizer, ConnectionPenalty) {
  ScriptedEnv env(10, {1.0});
  Network net = connected(50);
  RmsConfig cfg;
  cfg.update_interval_steps = 40;
  const CandidateScore s = evaluate_episodic(net, env, cfg);
  EXPECT_EQ(s.mean_return, 10.0);
  EXPECT_DOUBLE_EQ(s.penalized, 9.95);
}

TEST(Optimizer, VariancePenalty) {
  ScriptedEnv env(2, {3.0, 7.0});  // returns 6 and 14: mean 10, std 4
  Network net(1, 1);
  RmsConfig cfg;
  cfg.update_interval_steps = 8;
  const CandidateScore s = evaluate_episodic(net, env, cfg);
  EXPECT_EQ(s.mean_return, 10.0);
  EXPECT_EQ(s.return_std, 4.0);
  EXPECT_DOUBLE_EQ(s.penalized, 9.6);
}

TEST(Optimizer, TruncatedEpisodeIsTheOnlySample) {
  ScriptedEnv env(1000, {0.5});
  Network net(1, 1);
  RmsConfig cfg;
  cfg.update_interval_steps = 30;
  const CandidateScore s = evaluate_episodic(net, env, cfg);
  EXPECT_EQ(s.episodes_completed, 0);
  EXPECT_EQ(s.mean_return, 15.0);
  EXPECT_EQ(s.return_std, 0.0);
}

TEST(Optimizer, EpisodeCapEndsEpisodes) {
  ScriptedEnv env(1000, {1.0});
  Network net(1, 1);
  RmsConfig cfg;
  cfg.update_interval_steps = 90;
  cfg.max_episode_steps = 30;
  EvalCounters counters;
  const CandidateScore s = evaluate_episodic(net, env, cfg, &counters);
  EXPECT_EQ(s.episodes_completed, 3);
  EXPECT_EQ(s.mean_return, 30.0);
  EXPECT_EQ(counters.env_resets, 3);
  EXPECT_EQ(counters.state_resets, 3);
}

TEST(Optimizer, ArityMismatch) {
  ScriptedEnv env(10, {1.0});
  Network net(2, 1);
  EXPECT_THROW(evaluate_episodic(net, env, RmsConfig{}), std::invalid_argument);
}

TEST(Optimizer, LifelongEvaluation) {
  RmsConfig cfg;
  cfg.update_interval_steps = 100;
  ConstantLifelongEnv zero(0.0);
  Network net = connected(7);
  EXPECT_DOUBLE_EQ(evaluate_lifelong(net, zero, cfg).penalized, -0.007);

  ConstantLifelongEnv paying(0.5);
  Network empty(1, 1);
  const CandidateScore s = evaluate_lifelong(empty, paying, cfg);
  EXPECT_DOUBLE_EQ(s.penalized, 50.0);
  EXPECT_EQ(s.return_std, 0.0);
  EXPECT_EQ(paying.reset_count(), 0);
}

TEST(Optimizer, LifelongEvaluationsContinueFromLiveState) {
  // Output = tanh(clock): consecutive evaluations see a later clock.
  class ClockReward final : public Environment {
   public:
    ClockReward() { mark_live(); }
    std::string name() const override { return "clock"; }
    bool episodic() const override { return false; }
    std::size_t observation_size() const override { return 1; }
    std::size_t action_size() const override { return 1; }
    std::vector<double> observation() const override { return {clock_ * 0.01}; }

   protected:
    std::vector<double> do_reset() override { throw std::logic_error("no reset"); }
    StepResult do_step(std::span<const double> a) override {
      clock_ += 1.0;
      return {observation(), a[0], false};
    }

   private:
    double clock_ = 0.0;
  };
  ClockReward env;
  Network net(1, 1);
  net.add_connection(NeuronId{0}, NeuronId{1}, 1.0);
  RmsConfig cfg;
  cfg.update_interval_steps = 50;
  const double first = evaluate_lifelong(net, env, cfg).mean_return;
  const double second = evaluate_lifelong(net, env, cfg).mean_return;
  EXPECT_NE(first, second);
}

TEST(Optimizer, DecayLowersThresholdWhateverTheSign) {
  EXPECT_DOUBLE_EQ(decay_threshold(100.0, 0.995), 99.5);
  EXPECT_GT(99.6, decay_threshold(100.0, 0.995));
  EXPECT_DOUBLE_EQ(decay_threshold(-99.5, 0.995), -100.0);
  EXPECT_EQ(decay_threshold(0.0, 0.995), 0.0);
}

RmsConfig small_config() {
  RmsConfig cfg;
  cfg.update_interval_steps = 200;
  cfg.total_env_steps = 6'000;
  cfg.initial_random_mutations = 10;
  cfg.mutation.per_update = {1, 3};
  return cfg;
}

TEST(Optimizer, TiesAreRejected) {
  // Every candidate scores exactly the same and decay_rate 1 keeps the
  // threshold fixed, so no candidate may be accepted.
  RmsConfig cfg = small_config();
  cfg.decay_rate = 1.0;
  cfg.connection_penalty = 0.0;
  std::vector<RunLogRecord> log;
  RunHooks hooks;
  hooks.log = [&](const RunLogRecord& r) { log.push_back(r); };
  Rng rng(1);
  const RmsResult res = run_rms(
      [] { return std::make_unique<ScriptedEnv>(50, std::vector<double>{1.0}); }, cfg, rng,
      hooks);
  ASSERT_GT(log.size(), 2u);
  for (std::size_t i = 1; i < log.size(); ++i) {
    EXPECT_FALSE(log[i].accepted);
    EXPECT_EQ(*log[i].threshold_before, log[0].penalized);
  }
  EXPECT_EQ(res.stats.acceptances, 0);
}

TEST(Optimizer, RunLogPassesAuditAndBudget) {
  RmsConfig cfg = small_config();
  cfg.total_env_steps = 20'000;
  std::vector<RunLogRecord> log;
  RunHooks hooks;
  hooks.log = [&](const RunLogRecord& r) { log.push_back(r); };
  Rng rng(2);
  const RmsResult res = run_rms([] { return std::make_unique<SwingupEnv>(3); }, cfg, rng,
                                hooks);
  const AuditResult audit = audit_acceptance(log, cfg.decay_rate);
  EXPECT_EQ(audit.mismatches, 0u);
  EXPECT_EQ(audit.records, log.size());

  std::int64_t sum = 0;
  std::int64_t prev = 0;
  for (const RunLogRecord& r : log) {
    EXPECT_EQ(r.env_steps_consumed - prev, cfg.update_interval_steps);
    prev = r.env_steps_consumed;
    sum += cfg.update_interval_steps;
  }
  EXPECT_EQ(res.stats.env_steps, sum);
  EXPECT_GE(res.stats.env_steps, cfg.total_env_steps);
  EXPECT_LT(res.stats.env_steps, cfg.total_env_steps + cfg.update_interval_steps);

  // Thresholds never rise between acceptances.
  for (std::size_t i = 2; i < log.size(); ++i) {
    if (!log[i - 1].accepted) {
      EXPECT_LE(*log[i].threshold_before, *log[i - 1].threshold_before);
    }
  }
}

TEST(Optimizer, AuditCatchesTampering) {
  RmsConfig cfg = small_config();
  std::vector<RunLogRecord> log;
  RunHooks hooks;
  hooks.log = [&](const RunLogRecord& r) { log.push_back(r); };
  Rng rng(3);
  run_rms([] { return std::make_unique<SwingupEnv>(4); }, cfg, rng, hooks);
  ASSERT_GT(log.size(), 3u);
  log[2].accepted = !log[2].accepted;
  EXPECT_GT(audit_acceptance(log, cfg.decay_rate).mismatches, 0u);
}

TEST(Optimizer, Deterministic) {
  RmsConfig cfg = small_config();
  auto run = [&](std::uint64_t seed) {
    std::string text;
    RunHooks hooks;
    hooks.log = [&](const RunLogRecord& r) { text += to_json_line(r) + "\n"; };
    Rng rng(seed);
    const RmsResult res =
        run_rms([] { return std::make_unique<SwingupEnv>(5); }, cfg, rng, hooks);
    return text + serialize(res.best);
  };
  EXPECT_EQ(run(7), run(7));
  EXPECT_NE(run(7), run(8));
}

TEST(Optimizer, EmptyStartPlusInitialMutations) {
  RmsConfig cfg = small_config();
  cfg.initial_random_mutations = 25;
  std::vector<RunLogRecord> log;
  RunHooks hooks;
  hooks.log = [&](const RunLogRecord& r) { log.push_back(r); };
  Rng rng(6);
  run_rms([] { return std::make_unique<SwingupEnv>(6); }, cfg, rng, hooks);
  ASSERT_FALSE(log.empty());
  EXPECT_EQ(log[0].ops.size(), 25u);
  EXPECT_FALSE(log[0].threshold_before.has_value());

  Network replay(5, 1);
  for (const MutationOp& op : log[0].ops) apply(replay, op, cfg.mutation.deletion);
  EXPECT_EQ(static_cast<std::int64_t>(replay.connections().size()), log[0].n_connections);
}

TEST(Optimizer, LifelongRunNeverResets) {
  RmsConfig cfg = small_config();
  Rng rng(7);
  const RmsResult res =
      run_rms([] { return std::make_unique<ConstantLifelongEnv>(0.0); }, cfg, rng);
  EXPECT_EQ(res.stats.env_resets, 0);
  EXPECT_EQ(res.stats.state_resets, 0);
}

TEST(Optimizer, ConfigCheck) {
  RmsConfig cfg;
  EXPECT_NO_THROW(check(cfg));
  cfg.decay_rate = 1.5;
  EXPECT_THROW(check(cfg), std::invalid_argument);
  cfg = {};
  cfg.mutation.per_update = {5, 1};
  try {
    check(cfg);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_EQ(std::string(e.what()).rfind("mutation.per_update", 0), 0u);
  }
}

}  // namespace
}  // namespace rms
