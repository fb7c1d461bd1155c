#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "rms/environment.hpp"
#include "rms/random.hpp"

namespace rms {

// Gait models standing in for the swimmer and the quadruped.
//
// Every joint is a damped torsional spring driven by its action channel:
//
//   w' = (gain * a - stiffness * q - damping * w) / inertia,   q' = w
//
// integrated with semi-implicit Euler. The body has no contact physics.
// Instead its target velocity is a smooth function of joint angles and
// joint velocities (phase relationships between joints), and the actual
// body velocity follows the target through a first-order lag with time
// constant body_lag. Heading integrates the yaw rate, and the planar
// position integrates the body velocity rotated into the world frame.
//
// All constants are configuration defaults chosen for this repository.

struct JointParams {
  double gain = 8.0;
  double stiffness = 16.0;
  double damping = 2.0;
  double inertia = 1.0;
};

struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

// ---------------------------------------------------------------------------
// PlanarWorm: a three-link chain with two joints.
//
// Body-frame target velocity (shape-space area rule plus recoil):
//   forward = thrust  * (q0 * w1 - q1 * w0)
//   lateral = lateral * (w0 + w1)
//   yaw     = -yaw    * (w0 - w1)
// Reflecting the chain (q -> -q) keeps forward and flips lateral and yaw.

struct PlanarWormParams {
  JointParams joint{5.0, 25.0, 1.0, 1.0};
  double thrust = 0.2;
  double lateral = 0.05;
  double yaw = 0.1;
  double body_lag = 0.2;  // s
  double dt = 0.01;       // s
  double action_cost = 0.005;
  std::int64_t max_steps = 1000;
};

struct PlanarWormState {
  std::array<double, 2> q{};
  std::array<double, 2> w{};
  double v_forward = 0.0;
  double v_lateral = 0.0;
  double yaw_rate = 0.0;
  Pose2 pose;
};

// Advances one step; returns the reward (planar speed minus action cost).
double planar_worm_step(PlanarWormState& state, std::span<const double> action,
                        const PlanarWormParams& params = {});

// Observation (8): q0, q1, w0, w1, v_forward, v_lateral, yaw_rate,
// sin(q0 - q1).
std::vector<double> observe_planar_worm(const PlanarWormState& state);

class PlanarWormEnv final : public Environment {
 public:
  explicit PlanarWormEnv(std::uint64_t seed, PlanarWormParams params = {});

  std::string name() const override { return "planar_worm"; }
  std::size_t observation_size() const override { return 8; }
  std::size_t action_size() const override { return 2; }
  std::vector<double> observation() const override;

  const PlanarWormState& state() const { return state_; }

 protected:
  std::vector<double> do_reset() override;
  StepResult do_step(std::span<const double> action) override;

 private:
  PlanarWormParams params_;
  PlanarWormState state_;
  std::int64_t episode_steps_ = 0;
};

// ---------------------------------------------------------------------------
// QuadPod: four limbs mounted at 45, 135, 225 and 315 degrees in the body
// frame (x forward, y left), i.e. limb 0 front-left, 1 back-left,
// 2 back-right, 3 front-right. Each limb has a hip joint that swings the leg
// tangentially (action channel 2i) and a knee joint that lifts it (channel
// 2i + 1). A leg grips the ground with stance
//
//   s_i = width_i * sigmoid(-stance_sharpness * knee_i)
//
// and a gripping leg swinging its hip pushes the body the other way:
//
//   v_target   = -(push / 4) * sum_i s_i * length_i * hip_w_i * t_i
//   yaw_target = -(turn / 4) * sum_i s_i * length_i * hip_w_i
//
// with t_i = (-sin phi_i, cos phi_i) the limb's tangent. Morphology scales
// joint inertia by mass * length^2, lever arm by length and grip by width.
// Reflecting across the body x axis swaps limbs 0<->3 and 1<->2 and negates
// hip channels.

inline constexpr int kQuadLimbs = 4;

struct LimbMorphology {
  double length = 1.0;
  double width = 1.0;
  double mass = 1.0;
  friend bool operator==(const LimbMorphology&, const LimbMorphology&) = default;
};

struct MorphologyParams {
  std::array<LimbMorphology, kQuadLimbs> limbs{};

  static constexpr double kMinScale = 0.75;
  static constexpr double kMaxScale = 1.25;

  bool within_bounds() const;
  friend bool operator==(const MorphologyParams&, const MorphologyParams&) = default;
};

// Every factor uniform in [0.75, 1.25].
MorphologyParams sample_morphology(Rng& rng);

struct QuadPodParams {
  JointParams joint{8.0, 16.0, 2.0, 1.0};
  double stance_sharpness = 4.0;
  double push = 0.6;
  double turn = 0.6;
  double body_lag = 0.1;  // s
  double dt = 0.02;       // s
  double action_cost = 0.005;
  std::int64_t max_steps = 1000;
  // Joint angles and velocities start uniform in +-reset_noise.
  double reset_noise = 0.0;
};

struct QuadPodState {
  std::array<double, kQuadLimbs> hip_q{};
  std::array<double, kQuadLimbs> knee_q{};
  std::array<double, kQuadLimbs> hip_w{};
  std::array<double, kQuadLimbs> knee_w{};
  std::array<double, 2> v_body{};  // body frame
  double yaw_rate = 0.0;
  Pose2 pose;
};

// Physical body plus the hidden conditions that alter it.
class QuadPodBody {
 public:
  explicit QuadPodBody(QuadPodParams params = {}) : params_(params) {}

  // Advances one step with an already clipped 8-channel action. Channels of
  // the impaired limb are zeroed before the dynamics.
  void step(std::span<const double> action);

  void reset_state() { state_ = {}; }

  // World-frame planar velocity.
  std::array<double, 2> planar_velocity() const;
  double speed() const;

  void set_impaired_limb(std::optional<int> limb);
  std::optional<int> impaired_limb() const { return impaired_; }
  void set_morphology(const MorphologyParams& morphology) { morphology_ = morphology; }
  const MorphologyParams& morphology() const { return morphology_; }

  const QuadPodState& state() const { return state_; }
  QuadPodState& mutable_state() { return state_; }
  const QuadPodParams& params() const { return params_; }

 private:
  QuadPodParams params_;
  MorphologyParams morphology_;
  std::optional<int> impaired_;
  QuadPodState state_;
  std::array<double, 2 * kQuadLimbs> effective_{};
};

// Observation (27): hip_q[4], knee_q[4], hip_w[4], knee_w[4], v_body[2],
// yaw_rate, sin(heading), cos(heading), raw stance sigmoid(-k*knee)[4],
// front-minus-back stance, left-minus-right stance. A pure function of the
// physical state: morphology, impairment and targets never leak in.
std::vector<double> observe_quadpod(const QuadPodState& state,
                                    const QuadPodParams& params);

inline constexpr std::size_t kQuadPodObservationSize = 27;
inline constexpr std::size_t kQuadPodActionSize = 8;

// Episodic quadruped. Variants:
//   kPlain       fixed morphology, no impairment unless set explicitly
//   kImpaired    a uniformly chosen limb is impaired at every reset
//   kMorphology  morphology is resampled at every reset
class QuadPodEnv final : public Environment {
 public:
  enum class Variant { kPlain, kImpaired, kMorphology };

  QuadPodEnv(std::uint64_t seed, Variant variant = Variant::kPlain,
             QuadPodParams params = {});

  std::string name() const override;
  std::size_t observation_size() const override { return kQuadPodObservationSize; }
  std::size_t action_size() const override { return kQuadPodActionSize; }
  std::vector<double> observation() const override;

  // Throws std::out_of_range unless limb is in 0..3; nullopt clears.
  void impair_limb(std::optional<int> limb) { body_.set_impaired_limb(limb); }
  void set_morphology(const MorphologyParams& m) { body_.set_morphology(m); }
  void randomize_morphology(Rng& rng) { body_.set_morphology(sample_morphology(rng)); }

  const QuadPodBody& body() const { return body_; }

 protected:
  std::vector<double> do_reset() override;
  StepResult do_step(std::span<const double> action) override;

 private:
  Variant variant_;
  Rng rng_;
  QuadPodBody body_;
  std::int64_t episode_steps_ = 0;
};

}  // namespace rms
