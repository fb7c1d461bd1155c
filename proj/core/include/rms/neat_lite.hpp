#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "rms/es.hpp"
#include "rms/mutation.hpp"
#include "rms/network.hpp"
#include "rms/random.hpp"

namespace rms {

// Elite-selection neuroevolution on the RMS graph substrate. No speciation,
// crossover or innovation numbers. Weights are continuous.
struct NeatConfig {
  int population_size = 192;
  int total_elites = 24;
  int unchanged_elites = 2;
  double param_std = 0.005;
  double p_add_neuron = 0.2;
  double p_add_connection = 0.4;
  double p_change_activation = 0.4;
  int episodes_per_eval = 3;
  int iterations = 512;
  // Weights for freshly added connections, before perturbation.
  std::vector<double> initial_weight_set{kDiscreteWeights.begin(),
                                         kDiscreteWeights.end()};
};

// Throws std::invalid_argument naming the offending field.
void check(const NeatConfig& cfg);

// Mutation probabilities indexed by MutationKind.
std::array<double, kMutationKinds> neat_mutation_probabilities(const NeatConfig& cfg);

using NetworkFitnessFn = std::function<Evaluation(const Network&, std::size_t)>;

struct NeatGenerationStats {
  std::vector<double> fitness;  // of the evaluated (input) population
  std::size_t best_index = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double fitness_std = 0.0;
  std::int64_t steps = 0;
};

// Each individual is an empty network plus one add-connection operator.
std::vector<Network> neat_lite_initial_population(int n_inputs, int n_outputs,
                                                  const NeatConfig& cfg, Rng& rng);

// Scores the population, keeps the best total_elites (ties broken by
// index), copies the best unchanged_elites verbatim and fills the remaining
// slots with mutated clones of uniformly chosen elites. Each clone gets one
// structural operator and Gaussian noise on every weight.
std::vector<Network> neat_lite_generation(const std::vector<Network>& population,
                                          const NetworkFitnessFn& fitness,
                                          const NeatConfig& cfg, Rng& rng,
                                          NeatGenerationStats* stats = nullptr,
                                          int threads = 1);

}  // namespace rms
