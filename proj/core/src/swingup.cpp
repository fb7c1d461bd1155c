#include "rms/swingup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rms {

double wrap_angle(double angle) {
  constexpr double kPi = std::numbers::pi;
  double a = std::fmod(angle + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  a -= kPi;
  return a == -kPi ? kPi : a;
}

namespace {

// One semi-implicit Euler substep: velocities first, then positions from the
// new velocities. Theta is left unwrapped here.
void substep(SwingupState& s, double force, double h, const SwingupParams& p) {
  const double total_mass = p.cart_mass + p.pole_mass;
  const double ml = p.pole_mass * p.pole_half_length;
  const double sin_t = std::sin(s.theta);
  const double cos_t = std::cos(s.theta);

  const double temp = (force + ml * s.theta_dot * s.theta_dot * sin_t) / total_mass;
  const double theta_acc =
      (p.gravity * sin_t - cos_t * temp) /
      (p.pole_half_length *
       (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - ml * theta_acc * cos_t / total_mass;

  s.x_dot += h * x_acc;
  s.x += h * s.x_dot;
  s.theta_dot += h * theta_acc;
  s.theta += h * s.theta_dot;
}

}  // namespace

SwingupTransition swingup_step(const SwingupState& s, double action,
                               const SwingupParams& p) {
  if (std::isnan(action)) throw std::invalid_argument("swingup: NaN action");
  const double force = p.force_scale * std::clamp(action, -1.0, 1.0);
  SwingupTransition t;
  t.state = s;
  const double h = p.dt / kSwingupSubsteps;
  for (int i = 0; i < kSwingupSubsteps; ++i) substep(t.state, force, h, p);
  t.state.theta = wrap_angle(t.state.theta);
  t.out_of_bounds = std::fabs(t.state.x) > p.x_limit;
  t.reward = swingup_reward(t.state, p);
  return t;
}

double swingup_reward(const SwingupState& s, const SwingupParams& p) {
  const double off_center = std::min(std::fabs(s.x) / p.x_limit, 1.0);
  return std::cos(s.theta) - p.center_penalty * off_center;
}

double swingup_energy(const SwingupState& s, const SwingupParams& p) {
  const double l = p.pole_half_length;
  const double m = p.pole_mass;
  const double cos_t = std::cos(s.theta);
  const double kinetic =
      0.5 * (p.cart_mass + m) * s.x_dot * s.x_dot +
      m * l * cos_t * s.x_dot * s.theta_dot +
      0.5 * (4.0 / 3.0) * m * l * l * s.theta_dot * s.theta_dot;
  const double potential = m * p.gravity * l * (1.0 + cos_t);
  return kinetic + potential;
}

SwingupEnv::SwingupEnv(std::uint64_t seed, SwingupParams params)
    : params_(params), rng_(seed) {}

std::vector<double> SwingupEnv::observation() const {
  return {state_.x, state_.x_dot, std::sin(state_.theta), std::cos(state_.theta),
          state_.theta_dot};
}

std::vector<double> SwingupEnv::do_reset() {
  state_ = {};
  state_.theta = wrap_angle(
      std::numbers::pi +
      rng_.uniform(-params_.initial_angle_noise, params_.initial_angle_noise));
  episode_steps_ = 0;
  return observation();
}

StepResult SwingupEnv::do_step(std::span<const double> action) {
  const SwingupTransition t = swingup_step(state_, action[0], params_);
  state_ = t.state;
  ++episode_steps_;
  return {observation(), t.reward,
          t.out_of_bounds || episode_steps_ >= params_.max_steps};
}

}  // namespace rms
