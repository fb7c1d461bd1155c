#include "rms/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rms {

std::vector<double> Environment::reset() {
  auto obs = do_reset();
  ++reset_count_;
  needs_reset_ = false;
  return obs;
}

StepResult Environment::step(std::span<const double> action) {
  if (action.size() != action_size()) {
    throw std::invalid_argument(name() + ": expected " +
                                std::to_string(action_size()) +
                                " action values, got " +
                                std::to_string(action.size()));
  }
  if (needs_reset_) {
    throw std::logic_error(name() + ": step before reset or after episode end");
  }
  clipped_.resize(action.size());
  for (std::size_t i = 0; i < action.size(); ++i) {
    if (std::isnan(action[i])) throw std::invalid_argument(name() + ": NaN action");
    clipped_[i] = std::clamp(action[i], -1.0, 1.0);
  }
  StepResult result = do_step(clipped_);
  ++step_count_;
  if (result.done && episodic()) needs_reset_ = true;
  return result;
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace rms
