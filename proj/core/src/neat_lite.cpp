#include "rms/neat_lite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rms/parallel.hpp"

namespace rms {

void check(const NeatConfig& cfg) {
  if (cfg.population_size < 1) {
    throw std::invalid_argument("population_size: must be >= 1");
  }
  if (cfg.total_elites < 1 || cfg.total_elites > cfg.population_size) {
    throw std::invalid_argument("total_elites: must lie in [1, population_size]");
  }
  if (cfg.unchanged_elites < 0 || cfg.unchanged_elites > cfg.total_elites) {
    throw std::invalid_argument("unchanged_elites: must lie in [0, total_elites]");
  }
  if (!(cfg.param_std >= 0.0)) throw std::invalid_argument("param_std: must be >= 0");
  const double sum = cfg.p_add_neuron + cfg.p_add_connection + cfg.p_change_activation;
  if (cfg.p_add_neuron < 0.0 || cfg.p_add_connection < 0.0 ||
      cfg.p_change_activation < 0.0 || std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "p_add_neuron/p_add_connection/p_change_activation: must be >= 0 and sum to 1");
  }
  if (cfg.episodes_per_eval < 1) {
    throw std::invalid_argument("episodes_per_eval: must be >= 1");
  }
  if (cfg.iterations < 1) throw std::invalid_argument("iterations: must be >= 1");
  if (cfg.initial_weight_set.empty()) {
    throw std::invalid_argument("initial_weight_set: must not be empty");
  }
}

std::array<double, kMutationKinds> neat_mutation_probabilities(const NeatConfig& cfg) {
  std::array<double, kMutationKinds> p{};
  p[static_cast<std::size_t>(MutationKind::kAddConnection)] = cfg.p_add_connection;
  p[static_cast<std::size_t>(MutationKind::kAddNeuron)] = cfg.p_add_neuron;
  p[static_cast<std::size_t>(MutationKind::kChangeActivation)] = cfg.p_change_activation;
  return p;
}

std::vector<Network> neat_lite_initial_population(int n_inputs, int n_outputs,
                                                  const NeatConfig& cfg, Rng& rng) {
  check(cfg);
  std::vector<Network> population;
  population.reserve(static_cast<std::size_t>(cfg.population_size));
  for (int i = 0; i < cfg.population_size; ++i) {
    Network net(n_inputs, n_outputs);
    add_connection(net, cfg.initial_weight_set, rng);
    population.push_back(std::move(net));
  }
  return population;
}

std::vector<Network> neat_lite_generation(const std::vector<Network>& population,
                                          const NetworkFitnessFn& fitness,
                                          const NeatConfig& cfg, Rng& rng,
                                          NeatGenerationStats* stats, int threads) {
  check(cfg);
  if (population.size() != static_cast<std::size_t>(cfg.population_size)) {
    throw std::invalid_argument("population size does not match the config");
  }
  const std::size_t n = population.size();
  std::vector<Evaluation> evals(n);
  parallel_for(n, threads,
               [&](std::size_t i) { evals[i] = fitness(population[i], i); });

  std::vector<std::size_t> ranked(n);
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
    return evals[a].fitness > evals[b].fitness;
  });
  const auto elites = static_cast<std::size_t>(cfg.total_elites);

  if (stats != nullptr) {
    stats->fitness.resize(n);
    stats->steps = 0;
    stats->mean_fitness = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      stats->fitness[i] = evals[i].fitness;
      stats->mean_fitness += evals[i].fitness;
      stats->steps += evals[i].steps;
    }
    stats->mean_fitness /= static_cast<double>(n);
    double var = 0.0;
    for (double f : stats->fitness) {
      var += (f - stats->mean_fitness) * (f - stats->mean_fitness);
    }
    stats->fitness_std = std::sqrt(var / static_cast<double>(n));
    stats->best_index = ranked.front();
    stats->best_fitness = evals[ranked.front()].fitness;
  }

  const auto probabilities = neat_mutation_probabilities(cfg);
  MutationConfig structural;
  structural.probabilities = probabilities;
  structural.weight_set = cfg.initial_weight_set;

  std::vector<Network> next;
  next.reserve(n);
  for (int i = 0; i < cfg.unchanged_elites; ++i) {
    next.push_back(population[ranked[static_cast<std::size_t>(i)]]);
  }
  while (next.size() < n) {
    Network child = population[ranked[rng.uniform_index(elites)]];
    const MutationKind kind = sample_kind(probabilities, rng);
    apply_random(child, kind, structural, rng);
    for (const Connection& c : child.connections()) {
      child.set_weight(c.id, c.weight + cfg.param_std * rng.normal());
    }
    next.push_back(std::move(child));
  }
  return next;
}

}  // namespace rms
