#include "rms/lifelong.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rms {

namespace {

void check_range(const StepRange& r, const char* field) {
  if (r.min < 1 || r.max < r.min) {
    throw std::invalid_argument(std::string(field) + ": need 1 <= min <= max");
  }
}

std::int64_t draw(Rng& rng, const StepRange& r) { return rng.uniform_int(r.min, r.max); }

// Mean return of `episodes` full episodes.
double episodic_mean(const Network& trained, QuadPodEnv& env, int episodes) {
  Network net = trained;
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    net.reset_state();
    auto obs = env.reset();
    for (;;) {
      const auto action = net.forward(obs);
      auto step = env.step(action);
      total += step.reward;
      obs = std::move(step.observation);
      if (step.done) break;
    }
  }
  return episodes > 0 ? total / episodes : 0.0;
}

}  // namespace

void check(const LifelongConfig& cfg) {
  check_range(cfg.direction_change, "direction_change");
  check_range(cfg.impairment_duration, "impairment_duration");
  check_range(cfg.morphology_change, "morphology_change");
  if (!(cfg.impairment_probability >= 0.0 && cfg.impairment_probability <= 1.0)) {
    throw std::invalid_argument("impairment_probability: must lie in [0, 1]");
  }
}

double directional_reward(std::span<const double, 2> velocity,
                          std::span<const double, 2> target,
                          std::span<const double> action, double action_cost) {
  return velocity[0] * target[0] + velocity[1] * target[1] -
         action_cost * squared_norm(action);
}

LifelongQuadPod::LifelongQuadPod(LifelongConfig cfg, QuadPodParams params)
    : cfg_(cfg), rng_(cfg.seed), body_(params) {
  check(cfg_);
  run_schedule();
  mark_live();
}

void LifelongQuadPod::set_target(double angle) {
  target_ = {std::cos(angle), std::sin(angle)};
}

void LifelongQuadPod::run_schedule() {
  if (impairment_remaining_ > 0 && --impairment_remaining_ == 0) {
    events_.push_back({global_step_, LifelongEvent::Kind::kImpairmentEnd, 0.0,
                       *body_.impaired_limb()});
    body_.set_impaired_limb(std::nullopt);
  }
  if (global_step_ == next_direction_change_) {
    const double angle = rng_.uniform(-std::numbers::pi, std::numbers::pi);
    set_target(angle);
    events_.push_back({global_step_, LifelongEvent::Kind::kDirection, angle, -1});
    next_direction_change_ = global_step_ + draw(rng_, cfg_.direction_change);
    // Onset only while no limb is impaired; at most one limb at a time.
    if (rng_.bernoulli(cfg_.impairment_probability) && impairment_remaining_ == 0) {
      const int limb = static_cast<int>(rng_.uniform_index(kQuadLimbs));
      body_.set_impaired_limb(limb);
      impairment_remaining_ = draw(rng_, cfg_.impairment_duration);
      events_.push_back(
          {global_step_, LifelongEvent::Kind::kImpairmentStart, 0.0, limb});
    }
  }
  if (global_step_ == 0) {
    next_morphology_change_ = draw(rng_, cfg_.morphology_change);
  } else if (global_step_ == next_morphology_change_) {
    body_.set_morphology(sample_morphology(rng_));
    events_.push_back({global_step_, LifelongEvent::Kind::kMorphology, 0.0, -1});
    next_morphology_change_ = global_step_ + draw(rng_, cfg_.morphology_change);
  }
}

std::vector<double> LifelongQuadPod::observation() const {
  return observe_quadpod(body_.state(), body_.params());
}

std::vector<double> LifelongQuadPod::do_reset() {
  throw std::logic_error("quadpod_lifelong: reset is not allowed in a lifelong run");
}

StepResult LifelongQuadPod::do_step(std::span<const double> action) {
  body_.step(action);
  const auto velocity = body_.planar_velocity();
  const double reward = directional_reward(velocity, target_, action,
                                           body_.params().action_cost);
  ++global_step_;
  run_schedule();
  return {observation(), reward, false};
}

std::array<double, GeneralizationReport::kConditions>
GeneralizationReport::scores() const {
  return {plain, impaired_limb[0], impaired_limb[1], impaired_limb[2],
          impaired_limb[3], randomized_morphology};
}

GeneralizationReport generalization_eval(const Network& net, int episodes,
                                         std::uint64_t seed,
                                         const QuadPodParams& params) {
  GeneralizationReport report;
  {
    QuadPodEnv env(derive_seed(seed, "generalization:plain"),
                   QuadPodEnv::Variant::kPlain, params);
    report.plain = episodic_mean(net, env, episodes);
  }
  for (int limb = 0; limb < kQuadLimbs; ++limb) {
    QuadPodEnv env(derive_seed(seed, "generalization:limb:" + std::to_string(limb)),
                   QuadPodEnv::Variant::kPlain, params);
    env.impair_limb(limb);
    report.impaired_limb[static_cast<std::size_t>(limb)] =
        episodic_mean(net, env, episodes);
  }
  {
    QuadPodEnv env(derive_seed(seed, "generalization:morphology"),
                   QuadPodEnv::Variant::kMorphology, params);
    report.randomized_morphology = episodic_mean(net, env, episodes);
  }
  return report;
}

}  // namespace rms
