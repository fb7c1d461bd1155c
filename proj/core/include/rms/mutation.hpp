#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rms/network.hpp"
#include "rms/random.hpp"

namespace rms {

enum class MutationKind : std::uint8_t {
  kAddConnection,
  kAddNeuron,
  kChangeActivation,
  kRemoveConnection,
  kChangeWeight,
};

inline constexpr std::size_t kMutationKinds = 5;

std::string_view to_string(MutationKind kind);

// When a hidden neuron is deleted after one of its connections is removed.
enum class DeletionStrategy : std::uint8_t {
  kIncoming,  // no incoming connections left
  kOutgoing,  // no outgoing connections left
  kBoth,      // neither incoming nor outgoing connections left
  kEither,    // no incoming or no outgoing connections left
};

std::string_view to_string(DeletionStrategy strategy);

inline constexpr std::array<double, 6> kDiscreteWeights = {1.0,  -1.0, 0.5,
                                                           -0.5, 0.25, -0.25};

// Number of operators per update, drawn uniformly from [min, max].
struct MutationCount {
  int min = 1;
  int max = 20;
};

struct MutationConfig {
  // Indexed by MutationKind.
  std::array<double, kMutationKinds> probabilities = {0.2, 0.2, 0.2, 0.2, 0.2};
  std::vector<double> weight_set{kDiscreteWeights.begin(), kDiscreteWeights.end()};
  MutationCount per_update;
  DeletionStrategy deletion = DeletionStrategy::kBoth;

  double probability(MutationKind kind) const {
    return probabilities[static_cast<std::size_t>(kind)];
  }
};

// Throws std::invalid_argument naming the offending field.
void check(const MutationConfig& cfg);

// One sampled operator. The recorded fields are enough to replay it with
// apply(). Unused fields keep their defaults.
struct MutationOp {
  MutationKind kind = MutationKind::kAddConnection;
  bool applied = false;
  ConnectionId connection;  // split, removed, or reweighted connection
  NeuronId neuron;          // neuron whose activation changed
  NeuronId src;             // endpoints of an added connection
  NeuronId dst;
  double weight = 0.0;      // weight of an added or reweighted connection
  Activation activation = Activation::kIdentity;
};

MutationOp add_connection(Network& net, std::span<const double> weight_set,
                          Rng& rng);
MutationOp add_neuron(Network& net, Rng& rng);
MutationOp change_activation(Network& net, Rng& rng);
MutationOp remove_connection(Network& net, Rng& rng,
                             DeletionStrategy deletion = DeletionStrategy::kBoth);
MutationOp change_weight(Network& net, std::span<const double> weight_set,
                         Rng& rng);

MutationKind sample_kind(std::span<const double, kMutationKinds> probabilities,
                         Rng& rng);

// Samples one operator of the given kind and applies it.
MutationOp apply_random(Network& net, MutationKind kind,
                        const MutationConfig& cfg, Rng& rng);

// Replays a recorded operator. No-ops (applied == false) leave net untouched.
void apply(Network& net, const MutationOp& op,
           DeletionStrategy deletion = DeletionStrategy::kBoth);

struct MutationResult {
  Network network;
  std::vector<MutationOp> ops;
};

// Draws k from cfg.per_update and applies k sampled operators to a copy.
MutationResult mutate(const Network& net, const MutationConfig& cfg, Rng& rng);

// Applies exactly `count` sampled operators in place.
std::vector<MutationOp> mutate_n(Network& net, const MutationConfig& cfg,
                                 int count, Rng& rng);

}  // namespace rms
