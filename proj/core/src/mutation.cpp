#include "rms/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>
#include <stdexcept>
#include <string>

namespace rms {

std::string_view to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::kAddConnection: return "add_connection";
    case MutationKind::kAddNeuron: return "add_neuron";
    case MutationKind::kChangeActivation: return "change_activation";
    case MutationKind::kRemoveConnection: return "remove_connection";
    case MutationKind::kChangeWeight: return "change_weight";
  }
  return "add_connection";
}

std::string_view to_string(DeletionStrategy strategy) {
  switch (strategy) {
    case DeletionStrategy::kIncoming: return "incoming";
    case DeletionStrategy::kOutgoing: return "outgoing";
    case DeletionStrategy::kBoth: return "both";
    case DeletionStrategy::kEither: return "either";
  }
  return "both";
}

void check(const MutationConfig& cfg) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kMutationKinds; ++i) {
    const double p = cfg.probabilities[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument(
          "probabilities." + std::string(to_string(static_cast<MutationKind>(i))) +
          ": must be a nonnegative number");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("probabilities: must sum to 1 (got " +
                                std::to_string(sum) + ")");
  }
  if (cfg.weight_set.empty()) {
    throw std::invalid_argument("weight_set: must not be empty");
  }
  for (double w : cfg.weight_set) {
    if (!std::isfinite(w)) {
      throw std::invalid_argument("weight_set: values must be finite");
    }
  }
  if (cfg.per_update.min < 0 || cfg.per_update.max < cfg.per_update.min) {
    throw std::invalid_argument("per_update: need 0 <= min <= max");
  }
}

namespace {

void split_connection(Network& net, ConnectionId id, Activation activation) {
  const Connection c = net.connection(id);
  const double lo = net.neuron(c.src).order;
  const double hi = net.neuron(c.dst).order;
  double order = 0.5 * (lo + hi);
  if (!(order > 0.0 && order < 1.0)) {
    order = std::min(std::max(order, Network::kOrderEpsilon), 1.0);
  }
  const NeuronId hidden = net.add_hidden_neuron(order, activation);
  net.remove_connection(id);
  net.add_connection(c.src, hidden, 1.0);
  net.add_connection(hidden, c.dst, c.weight);
  if (net.min_order_gap() < Network::kMinOrderGap) net.renormalize_orders();
}

bool should_delete(DeletionStrategy strategy, std::size_t in, std::size_t out) {
  switch (strategy) {
    case DeletionStrategy::kIncoming: return in == 0;
    case DeletionStrategy::kOutgoing: return out == 0;
    case DeletionStrategy::kBoth: return in == 0 && out == 0;
    case DeletionStrategy::kEither: return in == 0 || out == 0;
  }
  return false;
}

void prune_hidden(Network& net, DeletionStrategy strategy) {
  for (;;) {
    // (in, out) degree indexed by neuron id; ids are dense below the counter.
    const auto neurons = net.neurons();
    std::vector<std::pair<std::size_t, std::size_t>> degree(
        static_cast<std::size_t>(net.next_neuron_id().value));
    for (const Connection& c : net.connections()) {
      ++degree[static_cast<std::size_t>(c.dst.value)].first;
      ++degree[static_cast<std::size_t>(c.src.value)].second;
    }
    std::vector<NeuronId> doomed;
    for (std::size_t i = 0; i < neurons.size(); ++i) {
      const auto& d = degree[static_cast<std::size_t>(neurons[i].id.value)];
      if (neurons[i].role == Role::kHidden && should_delete(strategy, d.first, d.second)) {
        doomed.push_back(neurons[i].id);
      }
    }
    if (doomed.empty()) return;
    for (NeuronId id : doomed) {
      std::vector<ConnectionId> attached;
      for (const Connection& c : net.connections()) {
        if (c.src == id || c.dst == id) attached.push_back(c.id);
      }
      for (ConnectionId c : attached) net.remove_connection(c);
      net.remove_hidden_neuron(id);
    }
  }
}

void remove_and_prune(Network& net, ConnectionId id, DeletionStrategy strategy) {
  net.remove_connection(id);
  prune_hidden(net, strategy);
}

Activation random_activation(Rng& rng) {
  return kAllActivations[rng.uniform_index(kAllActivations.size())];
}

}  // namespace

MutationOp add_connection(Network& net, std::span<const double> weight_set,
                          Rng& rng) {
  const auto all = net.neurons();
  const auto targets = net.non_input_neurons();
  MutationOp op;
  op.kind = MutationKind::kAddConnection;
  op.src = all[rng.uniform_index(all.size())].id;
  op.dst = targets[rng.uniform_index(targets.size())].id;
  op.weight = weight_set[rng.uniform_index(weight_set.size())];
  op.applied = true;
  net.add_connection(op.src, op.dst, op.weight);
  return op;
}

MutationOp add_neuron(Network& net, Rng& rng) {
  MutationOp op;
  op.kind = MutationKind::kAddNeuron;
  const auto conns = net.connections();
  if (conns.empty()) return op;
  op.connection = conns[rng.uniform_index(conns.size())].id;
  op.activation = random_activation(rng);
  op.applied = true;
  split_connection(net, op.connection, op.activation);
  return op;
}

MutationOp change_activation(Network& net, Rng& rng) {
  const auto targets = net.non_input_neurons();
  MutationOp op;
  op.kind = MutationKind::kChangeActivation;
  op.neuron = targets[rng.uniform_index(targets.size())].id;
  op.activation = random_activation(rng);
  op.applied = true;
  net.set_activation(op.neuron, op.activation);
  return op;
}

MutationOp remove_connection(Network& net, Rng& rng, DeletionStrategy deletion) {
  MutationOp op;
  op.kind = MutationKind::kRemoveConnection;
  const auto conns = net.connections();
  if (conns.empty()) return op;
  op.connection = conns[rng.uniform_index(conns.size())].id;
  op.applied = true;
  remove_and_prune(net, op.connection, deletion);
  return op;
}

MutationOp change_weight(Network& net, std::span<const double> weight_set,
                         Rng& rng) {
  MutationOp op;
  op.kind = MutationKind::kChangeWeight;
  const auto conns = net.connections();
  if (conns.empty()) return op;
  op.connection = conns[rng.uniform_index(conns.size())].id;
  op.weight = weight_set[rng.uniform_index(weight_set.size())];
  op.applied = true;
  net.set_weight(op.connection, op.weight);
  return op;
}

MutationKind sample_kind(std::span<const double, kMutationKinds> probabilities,
                         Rng& rng) {
  const double u = rng.uniform01();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < kMutationKinds; ++i) {
    if (probabilities[i] <= 0.0) continue;
    cumulative += probabilities[i];
    last_positive = i;
    if (u < cumulative) return static_cast<MutationKind>(i);
  }
  // Rounding left u above the running sum.
  return static_cast<MutationKind>(last_positive);
}

MutationOp apply_random(Network& net, MutationKind kind,
                        const MutationConfig& cfg, Rng& rng) {
  switch (kind) {
    case MutationKind::kAddConnection: return add_connection(net, cfg.weight_set, rng);
    case MutationKind::kAddNeuron: return add_neuron(net, rng);
    case MutationKind::kChangeActivation: return change_activation(net, rng);
    case MutationKind::kRemoveConnection:
      return remove_connection(net, rng, cfg.deletion);
    case MutationKind::kChangeWeight: return change_weight(net, cfg.weight_set, rng);
  }
  throw std::logic_error("unknown mutation kind");
}

void apply(Network& net, const MutationOp& op, DeletionStrategy deletion) {
  if (!op.applied) return;
  switch (op.kind) {
    case MutationKind::kAddConnection:
      net.add_connection(op.src, op.dst, op.weight);
      return;
    case MutationKind::kAddNeuron:
      split_connection(net, op.connection, op.activation);
      return;
    case MutationKind::kChangeActivation:
      net.set_activation(op.neuron, op.activation);
      return;
    case MutationKind::kRemoveConnection:
      remove_and_prune(net, op.connection, deletion);
      return;
    case MutationKind::kChangeWeight:
      net.set_weight(op.connection, op.weight);
      return;
  }
}

std::vector<MutationOp> mutate_n(Network& net, const MutationConfig& cfg,
                                 int count, Rng& rng) {
  std::vector<MutationOp> ops;
  ops.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const MutationKind kind = sample_kind(cfg.probabilities, rng);
    ops.push_back(apply_random(net, kind, cfg, rng));
  }
  return ops;
}

MutationResult mutate(const Network& net, const MutationConfig& cfg, Rng& rng) {
  MutationResult result{net, {}};
  const auto k = static_cast<int>(
      rng.uniform_int(cfg.per_update.min, cfg.per_update.max));
  result.ops = mutate_n(result.network, cfg, k, rng);
  return result;
}

}  // namespace rms
