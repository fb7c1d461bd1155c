#include "rms/locomotion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rms {

namespace {

void step_joint(double& q, double& w, double action, const JointParams& j,
                double inertia, double dt) {
  w += dt * (j.gain * action - j.stiffness * q - j.damping * w) / inertia;
  q += dt * w;
}

void integrate_pose(Pose2& pose, double v_forward, double v_lateral,
                    double yaw_rate, double dt) {
  pose.heading += dt * yaw_rate;
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  pose.x += dt * (c * v_forward - s * v_lateral);
  pose.y += dt * (s * v_forward + c * v_lateral);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr std::array<double, kQuadLimbs> kMountAngles = {
    0.25 * std::numbers::pi, 0.75 * std::numbers::pi, 1.25 * std::numbers::pi,
    1.75 * std::numbers::pi};

}  // namespace

// ----------------------------------------------------------------- worm

double planar_worm_step(PlanarWormState& s, std::span<const double> action,
                        const PlanarWormParams& p) {
  if (action.size() != 2) throw std::invalid_argument("planar_worm: expected 2 actions");
  for (double a : action) {
    if (std::isnan(a)) throw std::invalid_argument("planar_worm: NaN action");
  }
  const double a0 = std::clamp(action[0], -1.0, 1.0);
  const double a1 = std::clamp(action[1], -1.0, 1.0);
  step_joint(s.q[0], s.w[0], a0, p.joint, p.joint.inertia, p.dt);
  step_joint(s.q[1], s.w[1], a1, p.joint, p.joint.inertia, p.dt);

  const double forward = p.thrust * (s.q[0] * s.w[1] - s.q[1] * s.w[0]);
  const double lateral = p.lateral * (s.w[0] + s.w[1]);
  const double yaw = -p.yaw * (s.w[0] - s.w[1]);
  const double k = p.dt / p.body_lag;
  s.v_forward += k * (forward - s.v_forward);
  s.v_lateral += k * (lateral - s.v_lateral);
  s.yaw_rate += k * (yaw - s.yaw_rate);
  integrate_pose(s.pose, s.v_forward, s.v_lateral, s.yaw_rate, p.dt);

  const double speed = std::hypot(s.v_forward, s.v_lateral);
  return speed - p.action_cost * (a0 * a0 + a1 * a1);
}

std::vector<double> observe_planar_worm(const PlanarWormState& s) {
  return {s.q[0],      s.q[1],      s.w[0],     s.w[1],
          s.v_forward, s.v_lateral, s.yaw_rate, std::sin(s.q[0] - s.q[1])};
}

PlanarWormEnv::PlanarWormEnv(std::uint64_t /*seed*/, PlanarWormParams params)
    : params_(params) {}

std::vector<double> PlanarWormEnv::observation() const {
  return observe_planar_worm(state_);
}

std::vector<double> PlanarWormEnv::do_reset() {
  state_ = {};
  episode_steps_ = 0;
  return observation();
}

StepResult PlanarWormEnv::do_step(std::span<const double> action) {
  const double reward = planar_worm_step(state_, action, params_);
  ++episode_steps_;
  return {observation(), reward, episode_steps_ >= params_.max_steps};
}

// ----------------------------------------------------------------- quad

bool MorphologyParams::within_bounds() const {
  auto ok = [](double v) { return v >= kMinScale && v <= kMaxScale; };
  for (const auto& l : limbs) {
    if (!ok(l.length) || !ok(l.width) || !ok(l.mass)) return false;
  }
  return true;
}

MorphologyParams sample_morphology(Rng& rng) {
  MorphologyParams m;
  for (auto& l : m.limbs) {
    l.length = rng.uniform(MorphologyParams::kMinScale, MorphologyParams::kMaxScale);
    l.width = rng.uniform(MorphologyParams::kMinScale, MorphologyParams::kMaxScale);
    l.mass = rng.uniform(MorphologyParams::kMinScale, MorphologyParams::kMaxScale);
  }
  return m;
}

void QuadPodBody::set_impaired_limb(std::optional<int> limb) {
  if (limb && (*limb < 0 || *limb >= kQuadLimbs)) {
    throw std::out_of_range("limb index " + std::to_string(*limb) +
                            " outside 0.." + std::to_string(kQuadLimbs - 1));
  }
  impaired_ = limb;
}

void QuadPodBody::step(std::span<const double> action) {
  if (action.size() != kQuadPodActionSize) {
    throw std::invalid_argument("quadpod: expected 8 actions");
  }
  for (std::size_t i = 0; i < action.size(); ++i) effective_[i] = action[i];
  if (impaired_) {
    effective_[2 * static_cast<std::size_t>(*impaired_)] = 0.0;
    effective_[2 * static_cast<std::size_t>(*impaired_) + 1] = 0.0;
  }

  const QuadPodParams& p = params_;
  QuadPodState& s = state_;
  double tx = 0.0;
  double ty = 0.0;
  double yaw = 0.0;
  for (std::size_t i = 0; i < kQuadLimbs; ++i) {
    const LimbMorphology& m = morphology_.limbs[i];
    const double inertia = p.joint.inertia * m.mass * m.length * m.length;
    step_joint(s.hip_q[i], s.hip_w[i], effective_[2 * i], p.joint, inertia, p.dt);
    step_joint(s.knee_q[i], s.knee_w[i], effective_[2 * i + 1], p.joint, inertia,
               p.dt);
    const double stance = m.width * sigmoid(-p.stance_sharpness * s.knee_q[i]);
    const double drive = stance * m.length * s.hip_w[i];
    tx += drive * -std::sin(kMountAngles[i]);
    ty += drive * std::cos(kMountAngles[i]);
    yaw += drive;
  }
  const double scale = -p.push / kQuadLimbs;
  const double k = p.dt / p.body_lag;
  s.v_body[0] += k * (scale * tx - s.v_body[0]);
  s.v_body[1] += k * (scale * ty - s.v_body[1]);
  s.yaw_rate += k * (-p.turn / kQuadLimbs * yaw - s.yaw_rate);
  integrate_pose(s.pose, s.v_body[0], s.v_body[1], s.yaw_rate, p.dt);
}

std::array<double, 2> QuadPodBody::planar_velocity() const {
  const double c = std::cos(state_.pose.heading);
  const double s = std::sin(state_.pose.heading);
  return {c * state_.v_body[0] - s * state_.v_body[1],
          s * state_.v_body[0] + c * state_.v_body[1]};
}

double QuadPodBody::speed() const {
  return std::hypot(state_.v_body[0], state_.v_body[1]);
}

std::vector<double> observe_quadpod(const QuadPodState& s, const QuadPodParams& p) {
  std::vector<double> obs;
  obs.reserve(kQuadPodObservationSize);
  for (double v : s.hip_q) obs.push_back(v);
  for (double v : s.knee_q) obs.push_back(v);
  for (double v : s.hip_w) obs.push_back(v);
  for (double v : s.knee_w) obs.push_back(v);
  obs.push_back(s.v_body[0]);
  obs.push_back(s.v_body[1]);
  obs.push_back(s.yaw_rate);
  obs.push_back(std::sin(s.pose.heading));
  obs.push_back(std::cos(s.pose.heading));
  std::array<double, kQuadLimbs> stance{};
  for (std::size_t i = 0; i < kQuadLimbs; ++i) {
    stance[i] = sigmoid(-p.stance_sharpness * s.knee_q[i]);
    obs.push_back(stance[i]);
  }
  obs.push_back((stance[0] + stance[3]) - (stance[1] + stance[2]));
  obs.push_back((stance[0] + stance[1]) - (stance[2] + stance[3]));
  return obs;
}

QuadPodEnv::QuadPodEnv(std::uint64_t seed, Variant variant, QuadPodParams params)
    : variant_(variant), rng_(seed), body_(params) {}

std::string QuadPodEnv::name() const {
  switch (variant_) {
    case Variant::kPlain: return "quadpod";
    case Variant::kImpaired: return "quadpod_impaired";
    case Variant::kMorphology: return "quadpod_morph";
  }
  return "quadpod";
}

std::vector<double> QuadPodEnv::observation() const {
  return observe_quadpod(body_.state(), body_.params());
}

std::vector<double> QuadPodEnv::do_reset() {
  body_.reset_state();
  episode_steps_ = 0;
  const double noise = body_.params().reset_noise;
  if (noise > 0.0) {
    QuadPodState& s = body_.mutable_state();
    for (std::size_t i = 0; i < kQuadLimbs; ++i) {
      s.hip_q[i] = rng_.uniform(-noise, noise);
      s.knee_q[i] = rng_.uniform(-noise, noise);
      s.hip_w[i] = rng_.uniform(-noise, noise);
      s.knee_w[i] = rng_.uniform(-noise, noise);
    }
  }
  if (variant_ == Variant::kImpaired) {
    body_.set_impaired_limb(static_cast<int>(rng_.uniform_index(kQuadLimbs)));
  } else if (variant_ == Variant::kMorphology) {
    body_.set_morphology(sample_morphology(rng_));
  }
  return observation();
}

StepResult QuadPodEnv::do_step(std::span<const double> action) {
  body_.step(action);
  ++episode_steps_;
  const double reward =
      body_.speed() - body_.params().action_cost * squared_norm(action);
  return {observation(), reward, episode_steps_ >= body_.params().max_steps};
}

}  // namespace rms
