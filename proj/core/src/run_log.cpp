#include "rms/run_log.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include "rms/optimizer.hpp"

namespace rms {

using ordered_json = nlohmann::ordered_json;

Composition RunLogRecord::composition() const {
  const std::size_t total = kinds.total();
  if (total == 0) return {};
  const auto n = static_cast<double>(total);
  return {static_cast<double>(kinds.feedforward) / n,
          static_cast<double>(kinds.feedback + kinds.lateral) / n,
          static_cast<double>(kinds.self_recurrent) / n};
}

namespace {

ordered_json op_to_json(const MutationOp& op) {
  ordered_json j;
  j["kind"] = std::string(to_string(op.kind));
  j["applied"] = op.applied;
  if (!op.applied) return j;
  switch (op.kind) {
    case MutationKind::kAddConnection:
      j["src"] = op.src.value;
      j["dst"] = op.dst.value;
      j["weight"] = op.weight;
      break;
    case MutationKind::kAddNeuron:
      j["connection"] = op.connection.value;
      j["activation"] = std::string(to_string(op.activation));
      break;
    case MutationKind::kChangeActivation:
      j["neuron"] = op.neuron.value;
      j["activation"] = std::string(to_string(op.activation));
      break;
    case MutationKind::kRemoveConnection:
      j["connection"] = op.connection.value;
      break;
    case MutationKind::kChangeWeight:
      j["connection"] = op.connection.value;
      j["weight"] = op.weight;
      break;
  }
  return j;
}

MutationOp op_from_json(const ordered_json& j, const std::string& path) {
  MutationOp op;
  const std::string kind = j.at("kind").get<std::string>();
  bool known = false;
  for (std::size_t k = 0; k < kMutationKinds; ++k) {
    if (to_string(static_cast<MutationKind>(k)) == kind) {
      op.kind = static_cast<MutationKind>(k);
      known = true;
    }
  }
  if (!known) throw std::runtime_error(path + ".kind: unknown mutation '" + kind + "'");
  op.applied = j.at("applied").get<bool>();
  if (!op.applied) return op;
  auto activation = [&]() {
    const auto name = j.at("activation").get<std::string>();
    const auto a = activation_from_string(name);
    if (!a) throw std::runtime_error(path + ".activation: unknown '" + name + "'");
    return *a;
  };
  switch (op.kind) {
    case MutationKind::kAddConnection:
      op.src = NeuronId{j.at("src").get<std::int64_t>()};
      op.dst = NeuronId{j.at("dst").get<std::int64_t>()};
      op.weight = j.at("weight").get<double>();
      break;
    case MutationKind::kAddNeuron:
      op.connection = ConnectionId{j.at("connection").get<std::int64_t>()};
      op.activation = activation();
      break;
    case MutationKind::kChangeActivation:
      op.neuron = NeuronId{j.at("neuron").get<std::int64_t>()};
      op.activation = activation();
      break;
    case MutationKind::kRemoveConnection:
      op.connection = ConnectionId{j.at("connection").get<std::int64_t>()};
      break;
    case MutationKind::kChangeWeight:
      op.connection = ConnectionId{j.at("connection").get<std::int64_t>()};
      op.weight = j.at("weight").get<double>();
      break;
  }
  return op;
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string to_json_line(const RunLogRecord& r) {
  ordered_json j;
  j["algorithm"] = r.algorithm;
  j["update_index"] = r.update_index;
  j["env_steps_consumed"] = r.env_steps_consumed;
  j["mean_return"] = r.mean_return;
  j["return_std"] = r.return_std;
  j["episodes"] = r.episodes;
  j["n_connections"] = r.n_connections;
  j["penalized"] = r.penalized;
  j["threshold_before"] = optional_number(r.threshold_before);
  j["threshold_after"] = optional_number(r.threshold_after);
  j["accepted"] = r.accepted;
  j["n_neurons"] = r.n_neurons;
  j["kinds"] = {{"feedforward", r.kinds.feedforward},
                {"feedback", r.kinds.feedback},
                {"lateral", r.kinds.lateral},
                {"self_recurrent", r.kinds.self_recurrent}};
  const Composition c = r.composition();
  j["composition"] = {{"feedforward", c.feedforward},
                      {"feedback", c.feedback},
                      {"self_recurrent", c.self_recurrent}};
  j["wall_ms"] = r.wall_ms;
  auto ops = ordered_json::array();
  for (const auto& op : r.ops) ops.push_back(op_to_json(op));
  j["ops"] = std::move(ops);
  return j.dump();
}

RunLogRecord parse_run_log_line(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("run.log: ") + e.what());
  }
  RunLogRecord r;
  const char* field = "";
  try {
    field = "algorithm";
    r.algorithm = j.at(field).get<std::string>();
    field = "update_index";
    r.update_index = j.at(field).get<std::int64_t>();
    field = "env_steps_consumed";
    r.env_steps_consumed = j.at(field).get<std::int64_t>();
    field = "mean_return";
    r.mean_return = j.at(field).get<double>();
    field = "return_std";
    r.return_std = j.at(field).get<double>();
    field = "episodes";
    r.episodes = j.at(field).get<std::int64_t>();
    field = "n_connections";
    r.n_connections = j.at(field).get<std::int64_t>();
    field = "penalized";
    r.penalized = j.at(field).get<double>();
    field = "threshold_before";
    if (!j.at(field).is_null()) r.threshold_before = j.at(field).get<double>();
    field = "threshold_after";
    if (!j.at(field).is_null()) r.threshold_after = j.at(field).get<double>();
    field = "accepted";
    r.accepted = j.at(field).get<bool>();
    field = "n_neurons";
    r.n_neurons = j.at(field).get<std::int64_t>();
    field = "kinds";
    const auto& k = j.at(field);
    r.kinds.feedforward = k.at("feedforward").get<std::size_t>();
    r.kinds.feedback = k.at("feedback").get<std::size_t>();
    r.kinds.lateral = k.at("lateral").get<std::size_t>();
    r.kinds.self_recurrent = k.at("self_recurrent").get<std::size_t>();
    field = "wall_ms";
    r.wall_ms = j.at(field).get<double>();
    field = "ops";
    const auto& ops = j.at(field);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      r.ops.push_back(op_from_json(ops[i], "ops[" + std::to_string(i) + "]"));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("run.log field '") + field + "': " + e.what());
  }
  return r;
}

std::vector<RunLogRecord> read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<RunLogRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(parse_run_log_line(line));
  }
  return records;
}

RunLogWriter::RunLogWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
}

void RunLogWriter::write(const RunLogRecord& record) {
  out_ << to_json_line(record) << '\n';
  out_.flush();
}

AuditResult audit_acceptance(const std::vector<RunLogRecord>& records,
                             double decay_rate) {
  AuditResult result;
  std::optional<double> incumbent;
  for (const RunLogRecord& r : records) {
    ++result.records;
    std::optional<double> expected_threshold;
    if (incumbent) expected_threshold = decay_threshold(*incumbent, decay_rate);
    const bool expected_accept =
        !expected_threshold || r.penalized > *expected_threshold;
    const double expected_after =
        expected_accept ? r.penalized : *expected_threshold;

    std::string problem;
    if (r.threshold_before != expected_threshold) {
      problem = "threshold_before differs";
    } else if (r.accepted != expected_accept) {
      problem = "accepted flag differs";
    } else if (!r.threshold_after || *r.threshold_after != expected_after) {
      problem = "threshold_after differs";
    }
    if (!problem.empty()) {
      ++result.mismatches;
      result.details.push_back("update " + std::to_string(r.update_index) + ": " +
                               problem);
    }
    incumbent = expected_after;
  }
  return result;
}

}  // namespace rms
