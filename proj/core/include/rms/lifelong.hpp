#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rms/locomotion.hpp"
#include "rms/network.hpp"

namespace rms {

// Inclusive range of step counts, sampled uniformly.
struct StepRange {
  std::int64_t min = 1;
  std::int64_t max = 1;
};

struct LifelongConfig {
  StepRange direction_change{500, 2000};
  // Chance that a direction change also impairs a random limb.
  double impairment_probability = 0.2;
  StepRange impairment_duration{500, 2000};
  StepRange morphology_change{2000, 5000};
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument naming the offending field.
void check(const LifelongConfig& cfg);

struct LifelongEvent {
  enum class Kind { kDirection, kImpairmentStart, kImpairmentEnd, kMorphology };
  std::int64_t step = 0;
  Kind kind = Kind::kDirection;
  double angle = 0.0;  // new target heading (kDirection)
  int limb = -1;       // impaired limb (kImpairmentStart / kImpairmentEnd)
  friend bool operator==(const LifelongEvent&, const LifelongEvent&) = default;
};

// (planar velocity . target) - action_cost * |a|^2
double directional_reward(std::span<const double, 2> velocity,
                          std::span<const double, 2> target,
                          std::span<const double> action, double action_cost);

// Reset-free quadruped. A single unbounded run in which the target
// direction, limb impairment and limb morphology change on a random
// schedule. None of those conditions appear in the observation. reset()
// throws; the environment is live from construction and done is always
// false.
class LifelongQuadPod final : public Environment {
 public:
  explicit LifelongQuadPod(LifelongConfig cfg, QuadPodParams params = {});

  std::string name() const override { return "quadpod_lifelong"; }
  bool episodic() const override { return false; }
  std::size_t observation_size() const override { return kQuadPodObservationSize; }
  std::size_t action_size() const override { return kQuadPodActionSize; }
  std::vector<double> observation() const override;

  const std::array<double, 2>& target() const { return target_; }
  std::optional<int> impaired_limb() const { return body_.impaired_limb(); }
  std::int64_t impairment_remaining() const { return impairment_remaining_; }
  const MorphologyParams& morphology() const { return body_.morphology(); }
  std::int64_t global_step() const { return global_step_; }
  const std::vector<LifelongEvent>& events() const { return events_; }
  const QuadPodBody& body() const { return body_; }

 protected:
  std::vector<double> do_reset() override;
  StepResult do_step(std::span<const double> action) override;

 private:
  void set_target(double angle);
  void run_schedule();

  LifelongConfig cfg_;
  Rng rng_;
  QuadPodBody body_;
  std::array<double, 2> target_{1.0, 0.0};
  std::int64_t global_step_ = 0;
  std::int64_t next_direction_change_ = 0;
  std::int64_t next_morphology_change_ = 0;
  std::int64_t impairment_remaining_ = 0;
  std::vector<LifelongEvent> events_;
};

// Mean episodic QuadPod returns of a trained network under each condition:
// the plain task, each single-limb impairment, and randomized morphology.
struct GeneralizationReport {
  double plain = 0.0;
  std::array<double, kQuadLimbs> impaired_limb{};
  double randomized_morphology = 0.0;

  static constexpr std::size_t kConditions = 1 + kQuadLimbs + 1;
  // Flattened in the order above.
  std::array<double, kConditions> scores() const;
};

GeneralizationReport generalization_eval(const Network& net, int episodes,
                                         std::uint64_t seed,
                                         const QuadPodParams& params = {});

inline constexpr std::array<const char*, kQuadLimbs> kLimbNames = {
    "front_left", "back_left", "back_right", "front_right"};

}  // namespace rms
