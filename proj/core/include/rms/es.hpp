#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rms/random.hpp"

namespace rms {

struct Evaluation {
  double fitness = 0.0;
  std::int64_t steps = 0;
};

struct EsConfig {
  int population_size = 128;
  double learning_rate = 0.04;
  double learning_rate_decay = 0.999;
  double param_std = 0.04;
  double param_std_decay = 0.999;
  double weight_penalty = 0.01;
  std::vector<std::size_t> hidden{64, 64};
  double action_noise_std = 0.01;
  int iterations = 512;
};

// Throws std::invalid_argument naming the offending field.
void check(const EsConfig& cfg);

// Fitness ranks mapped linearly onto [-0.5, 0.5]. Tied fitness values share
// their average rank, so a constant population maps to all zeros.
std::vector<double> centered_ranks(std::span<const double> fitness);

struct EsUpdateStats {
  double mean_fitness = 0.0;
  double fitness_std = 0.0;
  double max_fitness = 0.0;
  std::int64_t steps = 0;
};

// Evolution strategies with mirrored Gaussian sampling. Each update draws
// population_size / 2 directions e_k, scores theta + sigma e_k and
// theta - sigma e_k, and moves
//
//   theta += lr / (n sigma) * sum_i rank_i e_i  -  lr * weight_penalty * theta
//
// before decaying lr and sigma.
class EsOptimizer {
 public:
  // Called with (perturbed parameters, member index); member 2k is the
  // +e_k sample and 2k + 1 its mirror. Must be safe to call concurrently
  // when threads > 1.
  using FitnessFn = std::function<Evaluation(std::span<const double>, std::size_t)>;

  EsOptimizer(std::vector<double> theta, EsConfig cfg);

  EsUpdateStats update(const FitnessFn& fitness, Rng& rng, int threads = 1);

  std::span<const double> theta() const { return theta_; }
  double learning_rate() const { return learning_rate_; }
  double param_std() const { return param_std_; }
  std::int64_t iteration() const { return iteration_; }
  const EsConfig& config() const { return cfg_; }

 private:
  EsConfig cfg_;
  std::vector<double> theta_;
  double learning_rate_;
  double param_std_;
  std::int64_t iteration_ = 0;
};

}  // namespace rms
