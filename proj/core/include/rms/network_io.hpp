#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rms/network.hpp"

namespace rms {

inline constexpr int kNetworkFormatVersion = 1;

// Raised for a malformed network document; field() is a JSON-path-like
// location such as "connections[3].dst".
class NetworkFormatError : public std::runtime_error {
 public:
  NetworkFormatError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// JSON document:
//   {format_version, n_inputs, n_outputs, next_neuron_id, next_connection_id,
//    neurons: [{id, role, order, activation}],
//    connections: [{id, src, dst, weight}]}
// Arrays are sorted by id, keys appear in the order above, and numbers are
// written in shortest round-trip form. Neuron states are not stored.
std::string serialize(const Network& net);
Network deserialize(std::string_view document);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace rms
