#include "rms/es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rms/parallel.hpp"

namespace rms {

void check(const EsConfig& cfg) {
  if (cfg.population_size < 2 || cfg.population_size % 2 != 0) {
    throw std::invalid_argument("population_size: must be even and >= 2");
  }
  if (!(cfg.param_std > 0.0)) throw std::invalid_argument("param_std: must be > 0");
  if (!(cfg.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate: must be > 0");
  }
  if (!(cfg.learning_rate_decay > 0.0 && cfg.learning_rate_decay <= 1.0)) {
    throw std::invalid_argument("learning_rate_decay: must lie in (0, 1]");
  }
  if (!(cfg.param_std_decay > 0.0 && cfg.param_std_decay <= 1.0)) {
    throw std::invalid_argument("param_std_decay: must lie in (0, 1]");
  }
  if (!(cfg.weight_penalty >= 0.0)) {
    throw std::invalid_argument("weight_penalty: must be >= 0");
  }
  if (!(cfg.action_noise_std >= 0.0)) {
    throw std::invalid_argument("action_noise_std: must be >= 0");
  }
  if (cfg.iterations < 1) throw std::invalid_argument("iterations: must be >= 1");
  for (std::size_t h : cfg.hidden) {
    if (h == 0) throw std::invalid_argument("hidden: widths must be positive");
  }
}

std::vector<double> centered_ranks(std::span<const double> fitness) {
  const std::size_t n = fitness.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && fitness[idx[j + 1]] == fitness[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j);
    for (std::size_t k = i; k <= j; ++k) {
      out[idx[k]] = rank / static_cast<double>(n - 1) - 0.5;
    }
    i = j + 1;
  }
  return out;
}

EsOptimizer::EsOptimizer(std::vector<double> theta, EsConfig cfg)
    : cfg_(std::move(cfg)),
      theta_(std::move(theta)),
      learning_rate_(cfg_.learning_rate),
      param_std_(cfg_.param_std) {
  check(cfg_);
}

EsUpdateStats EsOptimizer::update(const FitnessFn& fitness, Rng& rng, int threads) {
  const std::size_t dim = theta_.size();
  const auto n = static_cast<std::size_t>(cfg_.population_size);
  const std::size_t pairs = n / 2;

  std::vector<double> noise(pairs * dim);
  for (double& e : noise) e = rng.normal();

  std::vector<Evaluation> evals(n);
  parallel_for(n, threads, [&](std::size_t member) {
    const std::size_t pair = member / 2;
    const double sign = member % 2 == 0 ? 1.0 : -1.0;
    std::vector<double> params(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      params[d] = theta_[d] + sign * param_std_ * noise[pair * dim + d];
    }
    evals[member] = fitness(params, member);
  });

  std::vector<double> raw(n);
  EsUpdateStats stats;
  stats.max_fitness = evals[0].fitness;
  for (std::size_t i = 0; i < n; ++i) {
    raw[i] = evals[i].fitness;
    stats.mean_fitness += raw[i];
    stats.max_fitness = std::max(stats.max_fitness, raw[i]);
    stats.steps += evals[i].steps;
  }
  stats.mean_fitness /= static_cast<double>(n);
  for (double f : raw) {
    stats.fitness_std += (f - stats.mean_fitness) * (f - stats.mean_fitness);
  }
  stats.fitness_std = std::sqrt(stats.fitness_std / static_cast<double>(n));

  const auto ranks = centered_ranks(raw);
  std::vector<double> grad(dim, 0.0);
  for (std::size_t pair = 0; pair < pairs; ++pair) {
    // +e and -e samples share the direction, so only the rank gap matters.
    const double w = ranks[2 * pair] - ranks[2 * pair + 1];
    if (w == 0.0) continue;
    for (std::size_t d = 0; d < dim; ++d) grad[d] += w * noise[pair * dim + d];
  }
  const double step = learning_rate_ / (static_cast<double>(n) * param_std_);
  for (std::size_t d = 0; d < dim; ++d) {
    theta_[d] += step * grad[d] - learning_rate_ * cfg_.weight_penalty * theta_[d];
  }
  learning_rate_ *= cfg_.learning_rate_decay;
  param_std_ *= cfg_.param_std_decay;
  ++iteration_;
  return stats;
}

}  // namespace rms
