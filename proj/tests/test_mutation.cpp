#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <span>

#include "rms/mutation.hpp"
#include "rms/network_io.hpp"

namespace rms {
namespace {

NeuronId nid(std::int64_t v) { return NeuronId{v}; }

bool in_discrete_set(double w) {
  return std::find(kDiscreteWeights.begin(), kDiscreteWeights.end(), w) !=
         kDiscreteWeights.end();
}

const Neuron* only_hidden(const Network& net) {
  for (const Neuron& n : net.neurons()) {
    if (n.role == Role::kHidden) return &n;
  }
  return nullptr;
}

TEST(Mutation, AddConnectionTargetsOutput) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    Network net(2, 1);
    const MutationOp op = add_connection(net, kDiscreteWeights, rng);
    ASSERT_TRUE(op.applied);
    ASSERT_EQ(net.connections().size(), 1u);
    const Connection& c = net.connections()[0];
    EXPECT_EQ(c.dst, nid(2));
    EXPECT_TRUE(in_discrete_set(c.weight));
    EXPECT_EQ(c.kind, c.src == nid(2) ? ConnectionKind::kSelfRecurrent
                                      : ConnectionKind::kFeedforward);
  }
}

TEST(Mutation, AddConnectionSelfLoopOnOutput) {
  Network net(1, 1);
  MutationOp op;
  op.kind = MutationKind::kAddConnection;
  op.applied = true;
  op.src = nid(1);
  op.dst = nid(1);
  op.weight = 0.5;
  apply(net, op);
  EXPECT_EQ(net.connections()[0].kind, ConnectionKind::kSelfRecurrent);
}

TEST(Mutation, AddNeuronSplitsConnection) {
  Network net(1, 1);
  net.add_connection(nid(0), nid(1), 0.5);
  Rng rng(3);
  const MutationOp op = add_neuron(net, rng);
  ASSERT_TRUE(op.applied);
  const Neuron* h = only_hidden(net);
  ASSERT_NE(h, nullptr);
  EXPECT_EQ(h->order, 0.5);
  ASSERT_EQ(net.connections().size(), 2u);
  for (const Connection& c : net.connections()) {
    if (c.dst == h->id) {
      EXPECT_EQ(c.src, nid(0));
      EXPECT_EQ(c.weight, 1.0);
    } else {
      EXPECT_EQ(c.src, h->id);
      EXPECT_EQ(c.dst, nid(1));
      EXPECT_EQ(c.weight, 0.5);
    }
  }
}

TEST(Mutation, AddNeuronOnEmptyIsNoop) {
  Network net(3, 2);
  const std::string before = serialize(net);
  Rng rng(4);
  const MutationOp op = add_neuron(net, rng);
  EXPECT_FALSE(op.applied);
  EXPECT_EQ(serialize(net), before);
}

TEST(Mutation, AddNeuronOrderClamped) {
  // Splitting an output self-loop puts the midpoint at 1.
  Network net(1, 1);
  net.add_connection(nid(1), nid(1), -1.0);
  Rng rng(5);
  add_neuron(net, rng);
  EXPECT_EQ(only_hidden(net)->order, 1.0);
  EXPECT_TRUE(validate(net).empty());
}

TEST(Mutation, ChangeActivationSkipsInputs) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    Network net(4, 2);
    const MutationOp op = change_activation(net, rng);
    EXPECT_EQ(net.neuron(op.neuron).role, Role::kOutput);
    EXPECT_EQ(net.neuron(op.neuron).activation, op.activation);
  }
}

TEST(Mutation, ChangeActivationReplays) {
  Rng rng(7);
  MutationConfig cfg;
  Network base(3, 2);
  mutate_n(base, cfg, 40, rng);
  for (int i = 0; i < 50; ++i) {
    Network a = base;
    const MutationOp op = change_activation(a, rng);
    EXPECT_NE(std::find(kAllActivations.begin(), kAllActivations.end(), op.activation),
              kAllActivations.end());
    Network b = base;
    apply(b, op);
    EXPECT_TRUE(a.structurally_equal(b));
  }
}

TEST(Mutation, RemoveOnlyConnectionKeepsEndpoints) {
  Network net(1, 1);
  net.add_connection(nid(0), nid(1), 1.0);
  Rng rng(8);
  const MutationOp op = remove_connection(net, rng);
  EXPECT_TRUE(op.applied);
  EXPECT_EQ(net.connections().size(), 0u);
  EXPECT_EQ(net.neurons().size(), 2u);
}

TEST(Mutation, BothSetsDeletion) {
  Network net(1, 1);
  net.add_connection(nid(0), nid(1), 0.25);
  Rng rng(9);
  add_neuron(net, rng);
  const NeuronId h = only_hidden(net)->id;
  ASSERT_EQ(net.connections().size(), 2u);

  MutationOp rm;
  rm.kind = MutationKind::kRemoveConnection;
  rm.applied = true;
  rm.connection = net.connections()[1].id;  // h -> output
  apply(net, rm);
  // Retains one incoming connection and no outgoing ones.
  ASSERT_NE(net.find_neuron(h), nullptr);
  EXPECT_EQ(net.in_degree(h), 1u);
  EXPECT_EQ(net.out_degree(h), 0u);

  rm.connection = net.connections()[0].id;
  apply(net, rm);
  EXPECT_EQ(net.find_neuron(h), nullptr);
  EXPECT_TRUE(validate(net).empty());
}

TEST(Mutation, AlternativeDeletionStrategies) {
  auto split = [] {
    Network net(1, 1);
    net.add_connection(nid(0), nid(1), 1.0);
    Rng rng(10);
    add_neuron(net, rng);
    return net;
  };
  auto remove_outgoing = [](Network& net, DeletionStrategy s) {
    const NeuronId h = only_hidden(net)->id;
    for (const Connection& c : net.connections()) {
      if (c.src == h) {
        MutationOp rm;
        rm.kind = MutationKind::kRemoveConnection;
        rm.applied = true;
        rm.connection = c.id;
        apply(net, rm, s);
        return;
      }
    }
  };
  Network a = split();
  remove_outgoing(a, DeletionStrategy::kOutgoing);
  EXPECT_EQ(a.n_hidden(), 0u);
  EXPECT_EQ(a.connections().size(), 0u);
  Network b = split();
  remove_outgoing(b, DeletionStrategy::kIncoming);
  EXPECT_EQ(b.n_hidden(), 1u);
  Network c = split();
  remove_outgoing(c, DeletionStrategy::kEither);
  EXPECT_EQ(c.n_hidden(), 0u);
}

TEST(Mutation, ChangeWeightKeepsTopology) {
  Rng rng(11);
  MutationConfig cfg;
  Network net(5, 3);
  mutate_n(net, cfg, 60, rng);
  Network empty(2, 2);
  EXPECT_FALSE(change_weight(empty, kDiscreteWeights, rng).applied);
  for (int i = 0; i < 100; ++i) {
    if (net.connections().empty()) break;
    Network before = net;
    const MutationOp op = change_weight(net, kDiscreteWeights, rng);
    ASSERT_TRUE(op.applied);
    EXPECT_TRUE(in_discrete_set(net.connection(op.connection).weight));
    ASSERT_EQ(before.connections().size(), net.connections().size());
    for (std::size_t k = 0; k < net.connections().size(); ++k) {
      EXPECT_EQ(before.connections()[k].id, net.connections()[k].id);
      EXPECT_EQ(before.connections()[k].src, net.connections()[k].src);
      EXPECT_EQ(before.connections()[k].dst, net.connections()[k].dst);
    }
    EXPECT_EQ(before.neurons().size(), net.neurons().size());
  }
}

TEST(Mutation, PerUpdateCounts) {
  Rng rng(12);
  Network net(27, 8);
  MutationConfig one;
  one.per_update = {1, 1};
  EXPECT_EQ(mutate(net, one, rng).ops.size(), 1u);

  MutationConfig many;
  std::array<int, 21> seen{};
  for (int i = 0; i < 2000; ++i) {
    const auto n = mutate(net, many, rng).ops.size();
    ASSERT_GE(n, 1u);
    ASSERT_LE(n, 20u);
    ++seen[n];
  }
  for (int k = 1; k <= 20; ++k) EXPECT_GT(seen[static_cast<std::size_t>(k)], 0);
}

TEST(Mutation, MutateIsDeterministicAndNonDestructive) {
  MutationConfig cfg;
  Network net(6, 2);
  Rng warm(13);
  mutate_n(net, cfg, 30, warm);
  const std::string before = serialize(net);
  Rng r1(99);
  Rng r2(99);
  const MutationResult a = mutate(net, cfg, r1);
  const MutationResult b = mutate(net, cfg, r2);
  EXPECT_EQ(serialize(a.network), serialize(b.network));
  EXPECT_EQ(serialize(net), before);
}

TEST(Mutation, OpListReplaysToSameNetwork) {
  MutationConfig cfg;
  Rng rng(14);
  Network net(4, 3);
  for (int round = 0; round < 100; ++round) {
    const MutationResult r = mutate(net, cfg, rng);
    Network replayed = net;
    for (const MutationOp& op : r.ops) apply(replayed, op, cfg.deletion);
    ASSERT_EQ(serialize(replayed), serialize(r.network));
    net = r.network;
  }
}

TEST(Mutation, SampleKindFollowsProbabilities) {
  Rng rng(15);
  const std::array<double, kMutationKinds> p = {0.1, 0.0, 0.3, 0.2, 0.4};
  std::array<int, kMutationKinds> count{};
  const int n = 50'000;
  for (int i = 0; i < n; ++i) ++count[static_cast<std::size_t>(sample_kind(p, rng))];
  for (std::size_t k = 0; k < kMutationKinds; ++k) {
    EXPECT_NEAR(static_cast<double>(count[k]) / n, p[k], 0.01);
  }
  EXPECT_EQ(count[1], 0);
}

TEST(Mutation, ConfigCheck) {
  MutationConfig cfg;
  EXPECT_NO_THROW(check(cfg));
  cfg.probabilities[0] = 0.5;
  EXPECT_THROW(check(cfg), std::invalid_argument);
  cfg = {};
  cfg.weight_set.clear();
  EXPECT_THROW(check(cfg), std::invalid_argument);
  cfg = {};
  cfg.per_update = {3, 2};
  EXPECT_THROW(check(cfg), std::invalid_argument);
}

TEST(Mutation, ClosureFuzz) {
  MutationConfig cfg;
  Rng rng(16);
  Network net(27, 8);
  for (int i = 0; i < 1000; ++i) {
    net = mutate(net, cfg, rng).network;
    const auto problems = validate(net, std::span<const double>(cfg.weight_set));
    ASSERT_TRUE(problems.empty()) << "after call " << i << ": " << problems.front();
  }
}

}  // namespace
}  // namespace rms
