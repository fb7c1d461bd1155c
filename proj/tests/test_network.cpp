#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rms/network.hpp"

namespace rms {
namespace {

NeuronId nid(std::int64_t v) { return NeuronId{v}; }

TEST(Network, NewNetworkHasInputsAndOutputsOnly) {
  Network net(5, 2);
  EXPECT_EQ(net.neurons().size(), 7u);
  EXPECT_EQ(net.connections().size(), 0u);
  for (const Neuron& n : net.neurons()) {
    if (n.role == Role::kInput) {
      EXPECT_EQ(n.order, 0.0);
      EXPECT_EQ(n.activation, Activation::kIdentity);
    } else {
      EXPECT_EQ(n.role, Role::kOutput);
      EXPECT_EQ(n.order, 1.0);
      EXPECT_EQ(n.activation, Activation::kTanh);
    }
    EXPECT_EQ(n.state, 0.0);
  }
  EXPECT_TRUE(validate(net).empty());
}

TEST(Network, RejectsZeroCounts) {
  EXPECT_THROW(Network(0, 1), std::invalid_argument);
  EXPECT_THROW(Network(1, 0), std::invalid_argument);
}

TEST(Network, EmptyNetworkOutputsZero) {
  Network net(1, 1);
  for (double x : {-3.0, 0.0, 0.7, 12.0}) {
    const std::vector<double> obs{x};
    EXPECT_EQ(net.forward(obs), std::vector<double>{0.0});
  }
}

TEST(Network, EmptyCompositionIsZero) {
  Network net(3, 4);
  const Composition c = classify_connections(net);
  EXPECT_EQ(c.feedforward, 0.0);
  EXPECT_EQ(c.feedback, 0.0);
  EXPECT_EQ(c.self_recurrent, 0.0);
  EXPECT_EQ(count_kinds(net).total(), 0u);
}

TEST(Network, IdentityChain) {
  Network net(1, 1);
  net.add_connection(nid(0), nid(1), 1.0);
  net.set_activation(nid(1), Activation::kIdentity);
  const std::vector<double> obs{0.3};
  EXPECT_EQ(net.forward(obs), std::vector<double>{0.3});
}

TEST(Network, SelfRecurrentStartsFromZero) {
  Network net(1, 1);
  net.add_connection(nid(1), nid(1), 1.0);
  net.set_activation(nid(1), Activation::kIdentity);
  const std::vector<double> obs{5.0};
  EXPECT_EQ(net.forward(obs), std::vector<double>{0.0});
  EXPECT_EQ(net.forward(obs), std::vector<double>{0.0});
}

TEST(Network, DelayedEdgeReadsPreviousStep) {
  // input -> output feedforward, output -> hidden feedback, hidden -> output.
  Network net(1, 1);
  net.set_activation(nid(1), Activation::kIdentity);
  const NeuronId h = net.add_hidden_neuron(0.5, Activation::kIdentity);
  net.add_connection(nid(0), nid(1), 1.0);
  net.add_connection(nid(1), h, 1.0);
  net.add_connection(h, nid(1), 1.0);
  const std::vector<double> one{1.0};
  EXPECT_EQ(net.forward(one), std::vector<double>{1.0});  // h = prev out = 0
  EXPECT_EQ(net.forward(one), std::vector<double>{2.0});  // h = 1
  EXPECT_EQ(net.forward(one), std::vector<double>{3.0});  // h = 2
}

TEST(Network, ForwardRejectsBadInput) {
  Network net(2, 1);
  const std::vector<double> short_obs{1.0};
  EXPECT_THROW(net.forward(short_obs), std::invalid_argument);
  const std::vector<double> nan_obs{1.0, std::nan("")};
  EXPECT_THROW(net.forward(nan_obs), std::invalid_argument);
}

TEST(Network, ClassifiesAllKinds) {
  Network net(1, 1);
  const NeuronId a = net.add_hidden_neuron(0.5, Activation::kTanh);
  const NeuronId b = net.add_hidden_neuron(0.5, Activation::kTanh);
  const auto ff = net.add_connection(nid(0), a, 1.0);
  const auto fb = net.add_connection(nid(1), a, 1.0);
  const auto lat = net.add_connection(a, b, 1.0);
  const auto self = net.add_connection(b, b, 1.0);
  EXPECT_EQ(net.connection(ff).kind, ConnectionKind::kFeedforward);
  EXPECT_EQ(net.connection(fb).kind, ConnectionKind::kFeedback);
  EXPECT_EQ(net.connection(lat).kind, ConnectionKind::kLateral);
  EXPECT_EQ(net.connection(self).kind, ConnectionKind::kSelfRecurrent);

  const Composition c = classify_connections(net);
  EXPECT_DOUBLE_EQ(c.feedforward, 0.25);
  EXPECT_DOUBLE_EQ(c.feedback, 0.5);  // lateral folded in
  EXPECT_DOUBLE_EQ(c.self_recurrent, 0.25);
}

TEST(Network, SingleInputOutputEdgeIsFeedforward) {
  Network net(2, 1);
  net.add_connection(nid(1), nid(2), -0.5);
  const Composition c = classify_connections(net);
  EXPECT_EQ(c.feedforward, 1.0);
  EXPECT_EQ(c.feedback, 0.0);
  EXPECT_EQ(c.self_recurrent, 0.0);
}

TEST(Network, InputsCannotReceive) {
  Network net(2, 1);
  EXPECT_THROW(net.add_connection(nid(2), nid(0), 1.0), std::invalid_argument);
}

TEST(Network, ResetMatchesFreshCopy) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Network net = oracle::random_network(rng);
    Network fresh = net;
    std::vector<double> obs(static_cast<std::size_t>(net.n_inputs()));
    for (int t = 0; t < 100; ++t) {
      for (double& v : obs) v = rng.uniform(-2.0, 2.0);
      net.forward(obs);
    }
    net.reset_state();
    for (const Neuron& n : net.neurons()) EXPECT_EQ(n.state, 0.0);
    for (double& v : obs) v = rng.uniform(-2.0, 2.0);
    EXPECT_EQ(net.forward(obs), fresh.forward(obs));
  }
}

TEST(Network, MatchesBruteForceOracle) {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Network net = oracle::random_network(rng, 12, 40);
    oracle::BruteForceEvaluator ref(net);
    std::vector<double> obs(static_cast<std::size_t>(net.n_inputs()));
    for (int t = 0; t < 3; ++t) {
      for (double& v : obs) v = rng.uniform(-2.0, 2.0);
      const auto got = net.forward(obs);
      const auto want = ref.step(obs);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
    }
    checked += net.neurons().size() >= 6 ? 1 : 0;
  }
  EXPECT_GT(checked, 50);  // the sample is not dominated by trivial nets
}

TEST(Network, RenormalizeSingleHidden) {
  Network net(1, 1);
  const NeuronId h = net.add_hidden_neuron(0.5, Activation::kRelu);
  net.add_connection(nid(0), h, 1.0);
  net.renormalize_orders();
  EXPECT_EQ(net.neuron(h).order, 0.5);
}

TEST(Network, RenormalizeKeepsKinds) {
  Network net(1, 1);
  const NeuronId a = net.add_hidden_neuron(0.25, Activation::kRelu);
  const NeuronId b = net.add_hidden_neuron(0.5, Activation::kRelu);
  net.add_connection(nid(0), a, 1.0);
  net.add_connection(a, b, 1.0);
  net.add_connection(b, a, 1.0);
  net.add_connection(b, nid(1), 1.0);
  net.add_connection(a, a, 1.0);
  std::vector<ConnectionKind> before;
  for (const Connection& c : net.connections()) before.push_back(c.kind);
  net.renormalize_orders();
  EXPECT_DOUBLE_EQ(net.neuron(a).order, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(net.neuron(b).order, 2.0 / 3.0);
  std::vector<ConnectionKind> after;
  for (const Connection& c : net.connections()) after.push_back(c.kind);
  EXPECT_EQ(before, after);
}

TEST(Network, RenormalizeWidensTinyGaps) {
  Network net(1, 1);
  const double base = 0.4;
  std::vector<NeuronId> hidden;
  for (int i = 0; i < 5; ++i) {
    hidden.push_back(net.add_hidden_neuron(base + i * 1e-14, Activation::kTanh));
  }
  for (std::size_t i = 0; i + 1 < hidden.size(); ++i) {
    net.add_connection(hidden[i], hidden[i + 1], 0.5);
  }
  net.add_connection(nid(0), hidden.front(), 1.0);
  net.add_connection(hidden.back(), nid(1), 1.0);
  Network copy = net;
  net.renormalize_orders();
  EXPECT_GE(net.min_order_gap(), 1.0 / (5 + 1) - 1e-15);
  std::vector<double> obs{0.7};
  for (int t = 0; t < 4; ++t) {
    EXPECT_EQ(net.forward(obs), copy.forward(obs));
  }
}

TEST(Network, ValidateFlagsWeightsOutsideSet) {
  Network net(1, 1);
  net.add_connection(nid(0), nid(1), 0.3);
  const std::vector<double> set{1.0, -1.0};
  EXPECT_TRUE(validate(net).empty());
  EXPECT_FALSE(validate(net, std::span<const double>(set)).empty());
}

}  // namespace
}  // namespace rms
