#include "rms/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rms {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kInput: return "input";
    case Role::kHidden: return "hidden";
    case Role::kOutput: return "output";
  }
  return "hidden";
}

std::string_view to_string(ConnectionKind kind) {
  switch (kind) {
    case ConnectionKind::kFeedforward: return "feedforward";
    case ConnectionKind::kFeedback: return "feedback";
    case ConnectionKind::kLateral: return "lateral";
    case ConnectionKind::kSelfRecurrent: return "self_recurrent";
  }
  return "feedback";
}

ConnectionKind classify(const Neuron& src, const Neuron& dst) {
  if (src.id == dst.id) return ConnectionKind::kSelfRecurrent;
  if (src.order < dst.order) return ConnectionKind::kFeedforward;
  if (src.order == dst.order && src.role == dst.role) {
    return ConnectionKind::kLateral;
  }
  return ConnectionKind::kFeedback;
}

Network::Network(int n_inputs, int n_outputs)
    : n_inputs_(n_inputs), n_outputs_(n_outputs) {
  if (n_inputs < 1 || n_outputs < 1) {
    throw std::invalid_argument("network needs at least one input and output");
  }
  neurons_.reserve(static_cast<std::size_t>(n_inputs + n_outputs));
  for (int i = 0; i < n_inputs; ++i) {
    neurons_.push_back(
        {NeuronId{next_neuron_id_.value++}, Role::kInput, 0.0,
         Activation::kIdentity, 0.0});
  }
  for (int i = 0; i < n_outputs; ++i) {
    neurons_.push_back({NeuronId{next_neuron_id_.value++}, Role::kOutput, 1.0,
                        kOutputActivation, 0.0});
  }
}

Network Network::restore(int n_inputs, int n_outputs,
                         std::vector<Neuron> neurons,
                         std::vector<Connection> connections,
                         NeuronId next_neuron_id,
                         ConnectionId next_connection_id) {
  if (n_inputs < 1 || n_outputs < 1) {
    throw std::invalid_argument("network needs at least one input and output");
  }
  Network net;
  net.n_inputs_ = n_inputs;
  net.n_outputs_ = n_outputs;
  std::sort(neurons.begin(), neurons.end(),
            [](const Neuron& a, const Neuron& b) { return a.id < b.id; });
  std::sort(connections.begin(), connections.end(),
            [](const Connection& a, const Connection& b) { return a.id < b.id; });
  for (auto& n : neurons) n.state = 0.0;
  net.neurons_ = std::move(neurons);
  net.connections_ = std::move(connections);
  net.next_neuron_id_ = next_neuron_id;
  net.next_connection_id_ = next_connection_id;

  // Inputs must occupy the first slots and outputs the next ones so that
  // forward() can address them by position.
  const auto n_fixed = static_cast<std::size_t>(n_inputs + n_outputs);
  if (net.neurons_.size() < n_fixed) {
    throw std::invalid_argument("fewer neurons than inputs + outputs");
  }
  for (std::size_t i = 0; i < net.neurons_.size(); ++i) {
    const Neuron& n = net.neurons_[i];
    const Role expected = i < static_cast<std::size_t>(n_inputs) ? Role::kInput
                          : i < n_fixed                          ? Role::kOutput
                                                                 : Role::kHidden;
    if (n.role != expected) {
      throw std::invalid_argument("neuron " + std::to_string(n.id.value) +
                                  " has role " + std::string(to_string(n.role)) +
                                  ", expected " +
                                  std::string(to_string(expected)));
    }
    if (i > 0 && !(net.neurons_[i - 1].id < n.id)) {
      throw std::invalid_argument("duplicate neuron id " +
                                  std::to_string(n.id.value));
    }
  }
  for (std::size_t i = 1; i < net.connections_.size(); ++i) {
    if (!(net.connections_[i - 1].id < net.connections_[i].id)) {
      throw std::invalid_argument("duplicate connection id " +
                                  std::to_string(net.connections_[i].id.value));
    }
  }
  for (auto& c : net.connections_) {
    const Neuron* src = net.find_neuron(c.src);
    const Neuron* dst = net.find_neuron(c.dst);
    if (src == nullptr || dst == nullptr) {
      throw std::invalid_argument("connection " + std::to_string(c.id.value) +
                                  " references a missing neuron");
    }
    if (dst->role == Role::kInput) {
      throw std::invalid_argument("connection " + std::to_string(c.id.value) +
                                  " targets input neuron " +
                                  std::to_string(dst->id.value));
    }
    c.kind = classify(*src, *dst);
  }
  const auto problems = validate(net);
  if (!problems.empty()) throw std::invalid_argument(problems.front());
  return net;
}

std::size_t Network::neuron_index(NeuronId id) const {
  auto it = std::lower_bound(
      neurons_.begin(), neurons_.end(), id,
      [](const Neuron& n, NeuronId key) { return n.id < key; });
  if (it == neurons_.end() || it->id != id) {
    throw std::out_of_range("no neuron with id " + std::to_string(id.value));
  }
  return static_cast<std::size_t>(it - neurons_.begin());
}

std::size_t Network::connection_index(ConnectionId id) const {
  auto it = std::lower_bound(
      connections_.begin(), connections_.end(), id,
      [](const Connection& c, ConnectionId key) { return c.id < key; });
  if (it == connections_.end() || it->id != id) {
    throw std::out_of_range("no connection with id " + std::to_string(id.value));
  }
  return static_cast<std::size_t>(it - connections_.begin());
}

const Neuron* Network::find_neuron(NeuronId id) const {
  auto it = std::lower_bound(
      neurons_.begin(), neurons_.end(), id,
      [](const Neuron& n, NeuronId key) { return n.id < key; });
  return it != neurons_.end() && it->id == id ? &*it : nullptr;
}

const Connection* Network::find_connection(ConnectionId id) const {
  auto it = std::lower_bound(
      connections_.begin(), connections_.end(), id,
      [](const Connection& c, ConnectionId key) { return c.id < key; });
  return it != connections_.end() && it->id == id ? &*it : nullptr;
}

const Neuron& Network::neuron(NeuronId id) const {
  return neurons_[neuron_index(id)];
}

const Connection& Network::connection(ConnectionId id) const {
  return connections_[connection_index(id)];
}

NeuronId Network::add_hidden_neuron(double order, Activation activation) {
  if (!(order > 0.0 && order <= 1.0)) {
    throw std::invalid_argument("hidden order must lie in (0, 1]");
  }
  const NeuronId id{next_neuron_id_.value++};
  neurons_.push_back({id, Role::kHidden, order, activation, 0.0});
  plan_valid_ = false;
  return id;
}

ConnectionId Network::add_connection(NeuronId src, NeuronId dst, double weight) {
  const Neuron& s = neuron(src);
  const Neuron& d = neuron(dst);
  if (d.role == Role::kInput) {
    throw std::invalid_argument("input neurons cannot receive connections");
  }
  const ConnectionId id{next_connection_id_.value++};
  connections_.push_back({id, src, dst, weight, classify(s, d)});
  plan_valid_ = false;
  return id;
}

void Network::remove_connection(ConnectionId id) {
  connections_.erase(connections_.begin() +
                     static_cast<std::ptrdiff_t>(connection_index(id)));
  plan_valid_ = false;
}

void Network::remove_hidden_neuron(NeuronId id) {
  const std::size_t idx = neuron_index(id);
  if (neurons_[idx].role != Role::kHidden) {
    throw std::invalid_argument("only hidden neurons can be removed");
  }
  if (in_degree(id) != 0 || out_degree(id) != 0) {
    throw std::invalid_argument("neuron still has connections");
  }
  neurons_.erase(neurons_.begin() + static_cast<std::ptrdiff_t>(idx));
  plan_valid_ = false;
}

void Network::set_weight(ConnectionId id, double weight) {
  connections_[connection_index(id)].weight = weight;
  plan_valid_ = false;
}

void Network::set_activation(NeuronId id, Activation activation) {
  Neuron& n = neurons_[neuron_index(id)];
  if (n.role == Role::kInput) {
    throw std::invalid_argument("input neurons keep the identity activation");
  }
  n.activation = activation;
  plan_valid_ = false;
}

std::size_t Network::in_degree(NeuronId id) const {
  return static_cast<std::size_t>(
      std::count_if(connections_.begin(), connections_.end(),
                    [id](const Connection& c) { return c.dst == id; }));
}

std::size_t Network::out_degree(NeuronId id) const {
  return static_cast<std::size_t>(
      std::count_if(connections_.begin(), connections_.end(),
                    [id](const Connection& c) { return c.src == id; }));
}

void Network::rebuild_plan() const {
  plan_.clear();
  std::vector<std::size_t> order;
  for (std::size_t i = static_cast<std::size_t>(n_inputs_); i < neurons_.size();
       ++i) {
    order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [this](std::size_t a, std::size_t b) {
                     return neurons_[a].order < neurons_[b].order;
                   });
  std::vector<std::size_t> slot(neurons_.size());
  plan_.reserve(order.size());
  for (std::size_t i : order) {
    slot[i] = plan_.size();
    plan_.push_back({i, neurons_[i].activation, {}});
  }
  for (const Connection& c : connections_) {
    const std::size_t src = neuron_index(c.src);
    const std::size_t dst = neuron_index(c.dst);
    const bool delayed = c.kind != ConnectionKind::kFeedforward;
    plan_[slot[dst]].edges.push_back({src, c.weight, delayed});
  }
  plan_valid_ = true;
}

std::vector<double> Network::forward(std::span<const double> observation) {
  if (observation.size() != static_cast<std::size_t>(n_inputs_)) {
    throw std::invalid_argument("observation has " +
                                std::to_string(observation.size()) +
                                " values, network expects " +
                                std::to_string(n_inputs_));
  }
  for (double v : observation) {
    if (std::isnan(v)) throw std::invalid_argument("NaN in observation");
  }
  if (!plan_valid_) rebuild_plan();

  previous_.resize(neurons_.size());
  for (std::size_t i = 0; i < neurons_.size(); ++i) {
    previous_[i] = neurons_[i].state;
  }
  for (std::size_t i = 0; i < observation.size(); ++i) {
    neurons_[i].state = observation[i];
  }
  for (const Node& node : plan_) {
    double pre = 0.0;
    for (const Edge& e : node.edges) {
      pre += e.weight * (e.delayed ? previous_[e.src] : neurons_[e.src].state);
    }
    neurons_[node.index].state = activate(node.activation, pre);
  }
  std::vector<double> out(static_cast<std::size_t>(n_outputs_));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = neurons_[static_cast<std::size_t>(n_inputs_) + k].state;
  }
  return out;
}

void Network::reset_state() {
  for (auto& n : neurons_) n.state = 0.0;
}

void Network::renormalize_orders() {
  std::vector<double> distinct;
  for (const Neuron& n : neurons_) {
    if (n.role == Role::kHidden && n.order < 1.0) distinct.push_back(n.order);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const double denom = static_cast<double>(distinct.size() + 1);
  for (Neuron& n : neurons_) {
    if (n.role != Role::kHidden || n.order >= 1.0) continue;
    const auto rank =
        std::lower_bound(distinct.begin(), distinct.end(), n.order) -
        distinct.begin();
    n.order = static_cast<double>(rank + 1) / denom;
  }
  for (Connection& c : connections_) {
    c.kind = classify(neuron(c.src), neuron(c.dst));
  }
  plan_valid_ = false;
}

double Network::min_order_gap() const {
  std::vector<double> values{0.0, 1.0};
  for (const Neuron& n : neurons_) {
    if (n.role == Role::kHidden) values.push_back(n.order);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i) {
    gap = std::min(gap, values[i] - values[i - 1]);
  }
  return gap;
}

bool Network::structurally_equal(const Network& other) const {
  if (n_inputs_ != other.n_inputs_ || n_outputs_ != other.n_outputs_ ||
      next_neuron_id_ != other.next_neuron_id_ ||
      next_connection_id_ != other.next_connection_id_ ||
      neurons_.size() != other.neurons_.size() ||
      connections_.size() != other.connections_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < neurons_.size(); ++i) {
    const Neuron& a = neurons_[i];
    const Neuron& b = other.neurons_[i];
    if (a.id != b.id || a.role != b.role || a.order != b.order ||
        a.activation != b.activation) {
      return false;
    }
  }
  for (std::size_t i = 0; i < connections_.size(); ++i) {
    const Connection& a = connections_[i];
    const Connection& b = other.connections_[i];
    if (a.id != b.id || a.src != b.src || a.dst != b.dst ||
        a.weight != b.weight || a.kind != b.kind) {
      return false;
    }
  }
  return true;
}

KindCounts count_kinds(const Network& net) {
  KindCounts counts;
  for (const Connection& c : net.connections()) {
    switch (c.kind) {
      case ConnectionKind::kFeedforward: ++counts.feedforward; break;
      case ConnectionKind::kFeedback: ++counts.feedback; break;
      case ConnectionKind::kLateral: ++counts.lateral; break;
      case ConnectionKind::kSelfRecurrent: ++counts.self_recurrent; break;
    }
  }
  return counts;
}

Composition classify_connections(const Network& net) {
  const KindCounts k = count_kinds(net);
  const std::size_t total = k.total();
  if (total == 0) return {};
  const auto n = static_cast<double>(total);
  return {static_cast<double>(k.feedforward) / n,
          static_cast<double>(k.feedback + k.lateral) / n,
          static_cast<double>(k.self_recurrent) / n};
}

std::vector<std::string> validate(const Network& net,
                                  std::optional<std::span<const double>> weight_set) {
  std::vector<std::string> problems;
  auto fail = [&problems](std::string msg) { problems.push_back(std::move(msg)); };
  auto neuron_tag = [](NeuronId id) { return "neuron " + std::to_string(id.value); };
  auto connection_tag = [](ConnectionId id) {
    return "connection " + std::to_string(id.value);
  };

  const auto neurons = net.neurons();
  int inputs = 0;
  int outputs = 0;
  for (const Neuron& n : neurons) {
    if (!(n.id < net.next_neuron_id())) fail(neuron_tag(n.id) + ": id not below counter");
    switch (n.role) {
      case Role::kInput:
        ++inputs;
        if (n.order != 0.0) fail(neuron_tag(n.id) + ": input order must be 0");
        if (n.activation != Activation::kIdentity) {
          fail(neuron_tag(n.id) + ": input activation must be identity");
        }
        break;
      case Role::kOutput:
        ++outputs;
        if (n.order != 1.0) fail(neuron_tag(n.id) + ": output order must be 1");
        break;
      case Role::kHidden:
        if (!(n.order > 0.0 && n.order <= 1.0)) {
          fail(neuron_tag(n.id) + ": hidden order outside (0, 1]");
        }
        break;
    }
  }
  if (inputs != net.n_inputs()) fail("wrong number of input neurons");
  if (outputs != net.n_outputs()) fail("wrong number of output neurons");

  // Position of each neuron by id, so endpoint lookups are O(1).
  std::vector<const Neuron*> by_id(static_cast<std::size_t>(
      std::max<std::int64_t>(net.next_neuron_id().value, 0)));
  for (const Neuron& n : neurons) {
    if (n.id.value >= 0 && n.id < net.next_neuron_id()) {
      by_id[static_cast<std::size_t>(n.id.value)] = &n;
    }
  }
  auto lookup = [&by_id](NeuronId id) -> const Neuron* {
    return id.value >= 0 && static_cast<std::size_t>(id.value) < by_id.size()
               ? by_id[static_cast<std::size_t>(id.value)]
               : nullptr;
  };

  std::vector<bool> attached(neurons.size(), false);
  for (const Connection& c : net.connections()) {
    if (!(c.id < net.next_connection_id())) {
      fail(connection_tag(c.id) + ": id not below counter");
    }
    const Neuron* src = lookup(c.src);
    const Neuron* dst = lookup(c.dst);
    if (src == nullptr) fail(connection_tag(c.id) + ": dangling src");
    if (dst == nullptr) fail(connection_tag(c.id) + ": dangling dst");
    if (src == nullptr || dst == nullptr) continue;
    if (dst->role == Role::kInput) fail(connection_tag(c.id) + ": dst is an input neuron");
    if (c.kind != classify(*src, *dst)) fail(connection_tag(c.id) + ": stale kind");
    if (!std::isfinite(c.weight)) fail(connection_tag(c.id) + ": non-finite weight");
    if (weight_set) {
      const auto& ws = *weight_set;
      if (std::find(ws.begin(), ws.end(), c.weight) == ws.end()) {
        fail(connection_tag(c.id) + ": weight " + std::to_string(c.weight) +
             " outside the weight set");
      }
    }
    attached[static_cast<std::size_t>(src - neurons.data())] = true;
    attached[static_cast<std::size_t>(dst - neurons.data())] = true;
  }
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    if (neurons[i].role == Role::kHidden && !attached[i]) {
      fail(neuron_tag(neurons[i].id) + ": isolated hidden neuron");
    }
  }
  return problems;
}

}  // namespace rms
