#include "rms/config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "rms/env_registry.hpp"
#include "rms/random.hpp"

namespace rms {

using json = nlohmann::ordered_json;

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRms: return "rms";
    case Algorithm::kEs: return "es";
    case Algorithm::kNeatLite: return "neat_lite";
  }
  return "rms";
}

RmsConfig default_rms_config(std::string_view env_name) {
  RmsConfig cfg;
  if (env_name == "swingup") cfg.mutation.per_update = {1, 1};
  return cfg;
}

namespace {

// Reads one JSON object, remembering which keys were consumed so unknown
// keys can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(display(), "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  std::string field(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* get(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void read(const char* key, double& out) {
    if (const json* v = get(key)) {
      if (!v->is_number()) throw ConfigError(field(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
    }
  }

  template <typename Int>
    requires std::is_integral_v<Int>
  void read(const char* key, Int& out) {
    if (const json* v = get(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
      if (v->is_number_unsigned()) {
        const auto u = v->get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
          throw ConfigError(field(key), "out of range");
        }
        out = static_cast<Int>(u);
      } else {
        const auto s = v->get<std::int64_t>();
        if constexpr (std::is_unsigned_v<Int>) {
          if (s < 0) throw ConfigError(field(key), "must be >= 0");
        } else if (s < std::numeric_limits<Int>::min() ||
                   s > std::numeric_limits<Int>::max()) {
          throw ConfigError(field(key), "out of range");
        }
        out = static_cast<Int>(s);
      }
    }
  }

  void read(const char* key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key), "expected a boolean");
      out = v->get<bool>();
    }
  }

  void read(const char* key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) throw ConfigError(field(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void read(const char* key, std::vector<double>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array()) throw ConfigError(field(key), "expected an array");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        const std::string p = field(key) + "[" + std::to_string(i) + "]";
        if (!e.is_number()) throw ConfigError(p, "expected a number");
        out.push_back(e.get<double>());
      }
    }
  }

  void read(const char* key, std::vector<std::size_t>& out) {
    if (const json* v = get(key)) {
      if (!v->is_array()) throw ConfigError(field(key), "expected an array");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        const std::string p = field(key) + "[" + std::to_string(i) + "]";
        if (!e.is_number_unsigned() || e.get<std::uint64_t>() == 0) {
          throw ConfigError(p, "expected a positive integer");
        }
        out.push_back(e.get<std::size_t>());
      }
    }
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(field(key.c_str()), "unknown field");
    }
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Runs a module check, re-raising its "field: message" error with a path.
template <typename Fn>
void checked(const std::string& prefix, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon == std::string::npos) throw ConfigError(prefix, what);
    throw ConfigError(prefix + "." + what.substr(0, colon), what.substr(colon + 2));
  }
}

void read_range(ObjectReader& r, const char* key, StepRange& out) {
  if (const json* v = r.get(key)) {
    ObjectReader sub(*v, r.field(key));
    sub.read("min", out.min);
    sub.read("max", out.max);
    sub.finish();
  }
}

void read_mutation(const json& j, const std::string& path, MutationConfig& m) {
  ObjectReader r(j, path);
  if (const json* p = r.get("probabilities")) {
    ObjectReader pr(*p, r.field("probabilities"));
    for (std::size_t k = 0; k < kMutationKinds; ++k) {
      const std::string name(to_string(static_cast<MutationKind>(k)));
      pr.read(name.c_str(), m.probabilities[k]);
    }
    pr.finish();
  }
  r.read("weight_set", m.weight_set);
  if (const json* v = r.get("per_update")) {
    ObjectReader pu(*v, r.field("per_update"));
    pu.read("min", m.per_update.min);
    pu.read("max", m.per_update.max);
    pu.finish();
  }
  std::string deletion(to_string(m.deletion));
  r.read("deletion", deletion);
  bool found = false;
  for (auto s : {DeletionStrategy::kIncoming, DeletionStrategy::kOutgoing,
                 DeletionStrategy::kBoth, DeletionStrategy::kEither}) {
    if (deletion == to_string(s)) {
      m.deletion = s;
      found = true;
    }
  }
  if (!found) {
    throw ConfigError(r.field("deletion"),
                      "expected one of incoming, outgoing, both, either");
  }
  r.finish();
}

void read_rms(const json& j, RmsConfig& c) {
  ObjectReader r(j, "rms");
  r.read("update_interval_steps", c.update_interval_steps);
  r.read("decay_rate", c.decay_rate);
  r.read("connection_penalty", c.connection_penalty);
  r.read("variance_penalty_coeff", c.variance_penalty);
  r.read("initial_random_mutations", c.initial_random_mutations);
  r.read("max_episode_steps", c.max_episode_steps);
  if (const json* m = r.get("mutation")) read_mutation(*m, "rms.mutation", c.mutation);
  r.finish();
}

void read_es(const json& j, EsConfig& c) {
  ObjectReader r(j, "es");
  r.read("population_size", c.population_size);
  r.read("learning_rate", c.learning_rate);
  r.read("learning_rate_decay", c.learning_rate_decay);
  r.read("param_std", c.param_std);
  r.read("param_std_decay", c.param_std_decay);
  r.read("weight_penalty", c.weight_penalty);
  r.read("hidden", c.hidden);
  r.read("action_noise_std", c.action_noise_std);
  r.read("iterations", c.iterations);
  r.finish();
}

void read_neat(const json& j, NeatConfig& c) {
  ObjectReader r(j, "neat");
  r.read("population_size", c.population_size);
  r.read("total_elites", c.total_elites);
  r.read("unchanged_elites", c.unchanged_elites);
  r.read("param_std", c.param_std);
  r.read("p_add_neuron", c.p_add_neuron);
  r.read("p_add_connection", c.p_add_connection);
  r.read("p_change_activation", c.p_change_activation);
  r.read("episodes_per_eval", c.episodes_per_eval);
  r.read("iterations", c.iterations);
  r.read("initial_weight_set", c.initial_weight_set);
  r.finish();
}

void read_lifelong(const json& j, LifelongConfig& c, bool& seed_given) {
  ObjectReader r(j, "lifelong");
  read_range(r, "direction_change", c.direction_change);
  r.read("impairment_probability", c.impairment_probability);
  read_range(r, "impairment_duration", c.impairment_duration);
  read_range(r, "morphology_change", c.morphology_change);
  seed_given = r.has("seed");
  r.read("seed", c.seed);
  r.finish();
}

json range_json(const StepRange& r) { return json{{"min", r.min}, {"max", r.max}}; }

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  ObjectReader r(doc, "");
  RunConfig cfg;

  std::string algo = "rms";
  r.read("algorithm", algo);
  if (algo == "rms") {
    cfg.algorithm = Algorithm::kRms;
  } else if (algo == "es") {
    cfg.algorithm = Algorithm::kEs;
  } else if (algo == "neat_lite") {
    cfg.algorithm = Algorithm::kNeatLite;
  } else {
    throw ConfigError("algorithm", "expected one of rms, es, neat_lite");
  }

  const json* env = r.get("env");
  if (env == nullptr) throw ConfigError("env", "required field is missing");
  {
    ObjectReader er(*env, "env");
    if (!er.has("name")) throw ConfigError("env.name", "required field is missing");
    er.read("name", cfg.env.name);
    if (const json* p = er.get("params")) {
      if (!p->is_object()) throw ConfigError("env.params", "expected an object");
      for (const auto& [key, value] : p->items()) {
        if (!value.is_number()) throw ConfigError("env.params." + key, "expected a number");
        cfg.env.params[key] = value.get<double>();
      }
    }
    er.finish();
  }
  check(cfg.env);

  r.read("seed", cfg.seed);
  r.read("total_env_steps", cfg.total_env_steps);
  r.read("out_dir", cfg.out_dir);
  r.read("snapshot_every", cfg.snapshot_every);
  r.read("record_wall_time", cfg.record_wall_time);
  r.read("threads", cfg.threads);

  cfg.rms = default_rms_config(cfg.env.name);
  if (const json* v = r.get("rms")) read_rms(*v, cfg.rms);
  if (const json* v = r.get("es")) read_es(*v, cfg.es);
  if (const json* v = r.get("neat")) read_neat(*v, cfg.neat);
  bool seed_given = false;
  if (const json* v = r.get("lifelong")) read_lifelong(*v, cfg.lifelong, seed_given);
  if (!seed_given) cfg.lifelong.seed = derive_seed(cfg.seed, "env:lifelong");
  r.finish();

  cfg.rms.total_env_steps = cfg.total_env_steps;
  validate(cfg);
  return cfg;
}

RunConfig parse_run_config(std::string_view json_text, const ConfigOverrides& o) {
  json doc = json::object();
  if (json_text.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    try {
      doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("<root>", "expected an object");
  }
  if (o.algorithm) doc["algorithm"] = *o.algorithm;
  if (o.env) {
    if (!doc.contains("env") || !doc["env"].is_object() ||
        doc["env"].value("name", "") != *o.env) {
      doc["env"] = json{{"name", *o.env}};
    }
  }
  if (o.seed) doc["seed"] = *o.seed;
  if (o.total_env_steps) doc["total_env_steps"] = *o.total_env_steps;
  if (o.out_dir) doc["out_dir"] = *o.out_dir;
  if (o.snapshot_every) doc["snapshot_every"] = *o.snapshot_every;
  if (o.threads) doc["threads"] = *o.threads;
  return parse_run_config(doc.dump());
}

void validate(const RunConfig& cfg) {
  check(cfg.env);
  if (cfg.total_env_steps < 1) throw ConfigError("total_env_steps", "must be >= 1");
  if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every", "must be >= 0");
  if (cfg.threads < 1) throw ConfigError("threads", "must be >= 1");
  if (cfg.algorithm != Algorithm::kRms && cfg.env.name == "quadpod_lifelong") {
    throw ConfigError("algorithm", std::string(to_string(cfg.algorithm)) +
                                       " needs an episodic environment");
  }
  checked("rms", [&] { check(cfg.rms); });
  checked("es", [&] { check(cfg.es); });
  checked("neat", [&] { check(cfg.neat); });
  checked("lifelong", [&] { check(cfg.lifelong); });
}

std::string resolved_config_json(const RunConfig& cfg) {
  json env_params = json::object();
  for (const auto& [key, value] : default_env_params(cfg.env.name)) env_params[key] = value;
  for (const auto& [key, value] : cfg.env.params) env_params[key] = value;

  json probabilities = json::object();
  for (std::size_t k = 0; k < kMutationKinds; ++k) {
    probabilities[std::string(to_string(static_cast<MutationKind>(k)))] =
        cfg.rms.mutation.probabilities[k];
  }
  const auto& m = cfg.rms.mutation;

  json doc = {
      {"algorithm", std::string(to_string(cfg.algorithm))},
      {"env", {{"name", cfg.env.name}, {"params", env_params}}},
      {"seed", cfg.seed},
      {"total_env_steps", cfg.total_env_steps},
      {"out_dir", cfg.out_dir},
      {"snapshot_every", cfg.snapshot_every},
      {"record_wall_time", cfg.record_wall_time},
      {"threads", cfg.threads},
      {"rms",
       {{"update_interval_steps", cfg.rms.update_interval_steps},
        {"decay_rate", cfg.rms.decay_rate},
        {"connection_penalty", cfg.rms.connection_penalty},
        {"variance_penalty_coeff", cfg.rms.variance_penalty},
        {"initial_random_mutations", cfg.rms.initial_random_mutations},
        {"max_episode_steps", cfg.rms.max_episode_steps},
        {"mutation",
         {{"probabilities", probabilities},
          {"weight_set", m.weight_set},
          {"per_update", {{"min", m.per_update.min}, {"max", m.per_update.max}}},
          {"deletion", std::string(to_string(m.deletion))}}}}},
      {"es",
       {{"population_size", cfg.es.population_size},
        {"learning_rate", cfg.es.learning_rate},
        {"learning_rate_decay", cfg.es.learning_rate_decay},
        {"param_std", cfg.es.param_std},
        {"param_std_decay", cfg.es.param_std_decay},
        {"weight_penalty", cfg.es.weight_penalty},
        {"hidden", cfg.es.hidden},
        {"action_noise_std", cfg.es.action_noise_std},
        {"iterations", cfg.es.iterations}}},
      {"neat",
       {{"population_size", cfg.neat.population_size},
        {"total_elites", cfg.neat.total_elites},
        {"unchanged_elites", cfg.neat.unchanged_elites},
        {"param_std", cfg.neat.param_std},
        {"p_add_neuron", cfg.neat.p_add_neuron},
        {"p_add_connection", cfg.neat.p_add_connection},
        {"p_change_activation", cfg.neat.p_change_activation},
        {"episodes_per_eval", cfg.neat.episodes_per_eval},
        {"iterations", cfg.neat.iterations},
        {"initial_weight_set", cfg.neat.initial_weight_set}}},
      {"lifelong",
       {{"direction_change", range_json(cfg.lifelong.direction_change)},
        {"impairment_probability", cfg.lifelong.impairment_probability},
        {"impairment_duration", range_json(cfg.lifelong.impairment_duration)},
        {"morphology_change", range_json(cfg.lifelong.morphology_change)},
        {"seed", cfg.lifelong.seed}}},
  };
  return doc.dump(2) + "\n";
}

}  // namespace rms
