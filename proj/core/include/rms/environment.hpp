#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace rms {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
};

// Stepped control task. The base class validates and clips actions to
// [-1, 1] and enforces the episode protocol; subclasses implement the
// dynamics in do_reset()/do_step() on an already clipped action.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual std::size_t observation_size() const = 0;
  virtual std::size_t action_size() const = 0;

  // Lifelong environments return false: they start live and never reset.
  virtual bool episodic() const { return true; }

  std::vector<double> reset();

  // Throws std::invalid_argument for a wrong-size or NaN action and
  // std::logic_error when an episodic environment steps past `done` or
  // before its first reset.
  StepResult step(std::span<const double> action);

  // Observation of the current state without advancing time.
  virtual std::vector<double> observation() const = 0;

  std::int64_t reset_count() const { return reset_count_; }
  std::int64_t step_count() const { return step_count_; }

 protected:
  virtual std::vector<double> do_reset() = 0;
  virtual StepResult do_step(std::span<const double> action) = 0;

  // Lifelong subclasses call this once their initial state is ready.
  void mark_live() { needs_reset_ = false; }

 private:
  bool needs_reset_ = true;
  std::int64_t reset_count_ = 0;
  std::int64_t step_count_ = 0;
  std::vector<double> clipped_;
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

double squared_norm(std::span<const double> v);

}  // namespace rms
