#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rms/activation.hpp"

namespace rms {

template <typename Tag>
struct Id {
  std::int64_t value = -1;
  friend auto operator<=>(const Id&, const Id&) = default;
};

using NeuronId = Id<struct NeuronTag>;
using ConnectionId = Id<struct ConnectionTag>;

enum class Role : std::uint8_t { kInput, kHidden, kOutput };

enum class ConnectionKind : std::uint8_t {
  kFeedforward,
  kFeedback,
  kLateral,
  kSelfRecurrent,
};

std::string_view to_string(Role role);
std::string_view to_string(ConnectionKind kind);

struct Neuron {
  NeuronId id;
  Role role = Role::kHidden;
  // Activation precedence: inputs 0, outputs 1, hidden in (0, 1].
  double order = 0.0;
  Activation activation = Activation::kIdentity;
  // Last emitted value; read by delayed edges on the next step.
  double state = 0.0;
};

struct Connection {
  ConnectionId id;
  NeuronId src;
  NeuronId dst;
  double weight = 0.0;
  ConnectionKind kind = ConnectionKind::kFeedforward;
};

// Kind of an edge src -> dst given the endpoint neurons.
ConnectionKind classify(const Neuron& src, const Neuron& dst);

// Directed-graph policy network. Inputs and outputs are created up front and
// never deleted; hidden neurons and connections come and go through mutation.
// Neurons and connections are stored sorted by id, and ids are never reused.
//
// forward() evaluates non-input neurons in ascending (order, id). Feedforward
// edges read the source's value from the current step; feedback, lateral and
// self-recurrent edges read the source's value from the previous step.
class Network {
 public:
  // Adjacent distinct orders closer than this trigger renormalize_orders().
  static constexpr double kMinOrderGap = 1e-12;
  // Lower clamp for a hidden neuron's order.
  static constexpr double kOrderEpsilon = 1e-9;
  static constexpr Activation kOutputActivation = Activation::kTanh;

  // Throws std::invalid_argument unless both counts are >= 1.
  Network(int n_inputs, int n_outputs);

  // Rebuilds a network from stored parts; throws std::invalid_argument when
  // the parts violate a structural invariant. States are zeroed.
  static Network restore(int n_inputs, int n_outputs,
                         std::vector<Neuron> neurons,
                         std::vector<Connection> connections,
                         NeuronId next_neuron_id,
                         ConnectionId next_connection_id);

  int n_inputs() const { return n_inputs_; }
  int n_outputs() const { return n_outputs_; }
  std::size_t n_hidden() const {
    return neurons_.size() - static_cast<std::size_t>(n_inputs_ + n_outputs_);
  }

  std::span<const Neuron> neurons() const { return neurons_; }
  std::span<const Connection> connections() const { return connections_; }

  // Neurons that may receive connections (hidden and output).
  std::span<const Neuron> non_input_neurons() const {
    return std::span<const Neuron>(neurons_).subspan(
        static_cast<std::size_t>(n_inputs_));
  }

  const Neuron* find_neuron(NeuronId id) const;
  const Connection* find_connection(ConnectionId id) const;
  const Neuron& neuron(NeuronId id) const;
  const Connection& connection(ConnectionId id) const;

  NeuronId next_neuron_id() const { return next_neuron_id_; }
  ConnectionId next_connection_id() const { return next_connection_id_; }

  NeuronId add_hidden_neuron(double order, Activation activation);
  ConnectionId add_connection(NeuronId src, NeuronId dst, double weight);
  void remove_connection(ConnectionId id);
  // The neuron must be hidden and have no attached connections.
  void remove_hidden_neuron(NeuronId id);
  void set_weight(ConnectionId id, double weight);
  void set_activation(NeuronId id, Activation activation);

  std::size_t in_degree(NeuronId id) const;
  std::size_t out_degree(NeuronId id) const;

  // Advances one timestep. Throws std::invalid_argument on a size mismatch
  // or NaN input.
  std::vector<double> forward(std::span<const double> observation);

  void reset_state();

  // Respaces hidden orders below 1 evenly over (0, 1) by dense rank; hidden
  // neurons sitting at 1 keep it. Every connection kind is preserved.
  void renormalize_orders();

  // Smallest gap between adjacent distinct values of {0, hidden orders, 1}.
  double min_order_gap() const;

  // Equality of everything except neuron states.
  bool structurally_equal(const Network& other) const;

 private:
  struct Edge {
    std::size_t src;
    double weight;
    bool delayed;
  };
  struct Node {
    std::size_t index;
    Activation activation;
    std::vector<Edge> edges;
  };

  Network() = default;
  std::size_t neuron_index(NeuronId id) const;
  std::size_t connection_index(ConnectionId id) const;
  void rebuild_plan() const;

  int n_inputs_ = 0;
  int n_outputs_ = 0;
  std::vector<Neuron> neurons_;
  std::vector<Connection> connections_;
  NeuronId next_neuron_id_{0};
  ConnectionId next_connection_id_{0};

  mutable bool plan_valid_ = false;
  mutable std::vector<Node> plan_;
  std::vector<double> previous_;
};

struct KindCounts {
  std::size_t feedforward = 0;
  std::size_t feedback = 0;
  std::size_t lateral = 0;
  std::size_t self_recurrent = 0;
  std::size_t total() const {
    return feedforward + feedback + lateral + self_recurrent;
  }
};

// Fractions of all connections; lateral edges count as feedback.
struct Composition {
  double feedforward = 0.0;
  double feedback = 0.0;
  double self_recurrent = 0.0;
};

KindCounts count_kinds(const Network& net);
Composition classify_connections(const Network& net);

// Lists every violated structural invariant; empty means valid. When
// weight_set is given, every weight must be exactly one of its values.
std::vector<std::string> validate(
    const Network& net,
    std::optional<std::span<const double>> weight_set = std::nullopt);

}  // namespace rms
