#include "rms/network_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rms {

using ordered_json = nlohmann::ordered_json;

namespace {

const ordered_json& require(const ordered_json& obj, const char* key,
                            const std::string& path) {
  if (!obj.is_object()) throw NetworkFormatError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw NetworkFormatError(path.empty() ? key : path + "." + key,
                             "missing field");
  }
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

std::int64_t get_int(const ordered_json& obj, const char* key,
                     const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number_integer()) {
    throw NetworkFormatError(join(path, key), "expected an integer");
  }
  return v.get<std::int64_t>();
}

double get_number(const ordered_json& obj, const char* key,
                  const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) throw NetworkFormatError(join(path, key), "expected a number");
  return v.get<double>();
}

std::string get_string(const ordered_json& obj, const char* key,
                       const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw NetworkFormatError(join(path, key), "expected a string");
  return v.get<std::string>();
}

}  // namespace

std::string serialize(const Network& net) {
  ordered_json doc;
  doc["format_version"] = kNetworkFormatVersion;
  doc["n_inputs"] = net.n_inputs();
  doc["n_outputs"] = net.n_outputs();
  doc["next_neuron_id"] = net.next_neuron_id().value;
  doc["next_connection_id"] = net.next_connection_id().value;
  auto neurons = ordered_json::array();
  for (const Neuron& n : net.neurons()) {
    ordered_json j;
    j["id"] = n.id.value;
    j["role"] = std::string(to_string(n.role));
    j["order"] = n.order;
    j["activation"] = std::string(to_string(n.activation));
    neurons.push_back(std::move(j));
  }
  doc["neurons"] = std::move(neurons);
  auto connections = ordered_json::array();
  for (const Connection& c : net.connections()) {
    ordered_json j;
    j["id"] = c.id.value;
    j["src"] = c.src.value;
    j["dst"] = c.dst.value;
    j["weight"] = c.weight;
    connections.push_back(std::move(j));
  }
  doc["connections"] = std::move(connections);
  return doc.dump(2) + "\n";
}

Network deserialize(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw NetworkFormatError("$", e.what());
  }
  const std::string root;
  const auto version = get_int(doc, "format_version", root);
  if (version != kNetworkFormatVersion) {
    throw NetworkFormatError("format_version",
                             "unsupported version " + std::to_string(version));
  }
  const auto n_inputs = get_int(doc, "n_inputs", root);
  const auto n_outputs = get_int(doc, "n_outputs", root);
  if (n_inputs < 1) throw NetworkFormatError("n_inputs", "must be >= 1");
  if (n_outputs < 1) throw NetworkFormatError("n_outputs", "must be >= 1");

  const auto& jneurons = require(doc, "neurons", root);
  if (!jneurons.is_array()) throw NetworkFormatError("neurons", "expected an array");
  std::vector<Neuron> neurons;
  std::int64_t max_neuron = -1;
  std::map<std::int64_t, Role> roles;
  for (std::size_t i = 0; i < jneurons.size(); ++i) {
    const std::string path = "neurons[" + std::to_string(i) + "]";
    const auto& j = jneurons[i];
    Neuron n;
    n.id = NeuronId{get_int(j, "id", path)};
    const std::string role = get_string(j, "role", path);
    if (role == "input") {
      n.role = Role::kInput;
    } else if (role == "hidden") {
      n.role = Role::kHidden;
    } else if (role == "output") {
      n.role = Role::kOutput;
    } else {
      throw NetworkFormatError(path + ".role", "unknown role '" + role + "'");
    }
    n.order = get_number(j, "order", path);
    const std::string act = get_string(j, "activation", path);
    const auto parsed = activation_from_string(act);
    if (!parsed) {
      throw NetworkFormatError(path + ".activation",
                               "unknown activation '" + act + "'");
    }
    n.activation = *parsed;
    if (n.role == Role::kInput && (n.order != 0.0)) {
      throw NetworkFormatError(path + ".order", "input order must be 0");
    }
    if (n.role == Role::kOutput && (n.order != 1.0)) {
      throw NetworkFormatError(path + ".order", "output order must be 1");
    }
    if (n.role == Role::kHidden && !(n.order > 0.0 && n.order <= 1.0)) {
      throw NetworkFormatError(path + ".order", "hidden order outside (0, 1]");
    }
    if (n.role == Role::kInput && n.activation != Activation::kIdentity) {
      throw NetworkFormatError(path + ".activation",
                               "input activation must be identity");
    }
    if (!roles.emplace(n.id.value, n.role).second) {
      throw NetworkFormatError(path + ".id", "duplicate neuron id");
    }
    max_neuron = std::max(max_neuron, n.id.value);
    neurons.push_back(n);
  }

  const auto& jconns = require(doc, "connections", root);
  if (!jconns.is_array()) {
    throw NetworkFormatError("connections", "expected an array");
  }
  std::vector<Connection> connections;
  std::int64_t max_conn = -1;
  for (std::size_t i = 0; i < jconns.size(); ++i) {
    const std::string path = "connections[" + std::to_string(i) + "]";
    const auto& j = jconns[i];
    Connection c;
    c.id = ConnectionId{get_int(j, "id", path)};
    c.src = NeuronId{get_int(j, "src", path)};
    c.dst = NeuronId{get_int(j, "dst", path)};
    c.weight = get_number(j, "weight", path);
    if (!roles.contains(c.src.value)) {
      throw NetworkFormatError(path + ".src", "unknown neuron id");
    }
    auto dst = roles.find(c.dst.value);
    if (dst == roles.end()) {
      throw NetworkFormatError(path + ".dst", "unknown neuron id");
    }
    if (dst->second == Role::kInput) {
      throw NetworkFormatError(path + ".dst", "connection targets an input neuron");
    }
    max_conn = std::max(max_conn, c.id.value);
    connections.push_back(c);
  }

  // Counters are optional for hand-written documents.
  std::int64_t next_neuron = max_neuron + 1;
  std::int64_t next_conn = max_conn + 1;
  if (doc.contains("next_neuron_id")) {
    next_neuron = get_int(doc, "next_neuron_id", root);
    if (next_neuron <= max_neuron) {
      throw NetworkFormatError("next_neuron_id", "must exceed every neuron id");
    }
  }
  if (doc.contains("next_connection_id")) {
    next_conn = get_int(doc, "next_connection_id", root);
    if (next_conn <= max_conn) {
      throw NetworkFormatError("next_connection_id",
                               "must exceed every connection id");
    }
  }

  try {
    return Network::restore(static_cast<int>(n_inputs),
                            static_cast<int>(n_outputs), std::move(neurons),
                            std::move(connections), NeuronId{next_neuron},
                            ConnectionId{next_conn});
  } catch (const std::invalid_argument& e) {
    throw NetworkFormatError("$", e.what());
  }
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize(net);
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace rms
