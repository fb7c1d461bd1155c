#include "rms/env_registry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rms/locomotion.hpp"
#include "rms/swingup.hpp"

namespace rms {

namespace {

// A named, overridable numeric field of a parameter struct.
struct Binding {
  const char* name;
  std::function<double&()> ref;
};

std::vector<Binding> bind(SwingupParams& p) {
  return {{"cart_mass", [&p]() -> double& { return p.cart_mass; }},
          {"pole_mass", [&p]() -> double& { return p.pole_mass; }},
          {"pole_half_length", [&p]() -> double& { return p.pole_half_length; }},
          {"gravity", [&p]() -> double& { return p.gravity; }},
          {"force_scale", [&p]() -> double& { return p.force_scale; }},
          {"dt", [&p]() -> double& { return p.dt; }},
          {"x_limit", [&p]() -> double& { return p.x_limit; }},
          {"center_penalty", [&p]() -> double& { return p.center_penalty; }},
          {"initial_angle_noise", [&p]() -> double& { return p.initial_angle_noise; }}};
}

std::vector<Binding> bind_joint(JointParams& j) {
  return {{"joint_gain", [&j]() -> double& { return j.gain; }},
          {"joint_stiffness", [&j]() -> double& { return j.stiffness; }},
          {"joint_damping", [&j]() -> double& { return j.damping; }},
          {"joint_inertia", [&j]() -> double& { return j.inertia; }}};
}

std::vector<Binding> bind(PlanarWormParams& p) {
  auto b = bind_joint(p.joint);
  b.push_back({"thrust", [&p]() -> double& { return p.thrust; }});
  b.push_back({"lateral", [&p]() -> double& { return p.lateral; }});
  b.push_back({"yaw", [&p]() -> double& { return p.yaw; }});
  b.push_back({"body_lag", [&p]() -> double& { return p.body_lag; }});
  b.push_back({"dt", [&p]() -> double& { return p.dt; }});
  b.push_back({"action_cost", [&p]() -> double& { return p.action_cost; }});
  return b;
}

std::vector<Binding> bind(QuadPodParams& p) {
  auto b = bind_joint(p.joint);
  b.push_back({"reset_noise", [&p]() -> double& { return p.reset_noise; }});
  b.push_back({"stance_sharpness", [&p]() -> double& { return p.stance_sharpness; }});
  b.push_back({"push", [&p]() -> double& { return p.push; }});
  b.push_back({"turn", [&p]() -> double& { return p.turn; }});
  b.push_back({"body_lag", [&p]() -> double& { return p.body_lag; }});
  b.push_back({"dt", [&p]() -> double& { return p.dt; }});
  b.push_back({"action_cost", [&p]() -> double& { return p.action_cost; }});
  return b;
}

template <typename Params>
void apply_overrides(Params& params, const std::map<std::string, double>& overrides) {
  auto bindings = bind(params);
  for (const auto& [key, value] : overrides) {
    const std::string path = "env.params." + key;
    if (!std::isfinite(value)) throw ConfigError(path, "must be finite");
    if (key == "max_steps") {
      if (value < 1 || value != std::floor(value)) {
        throw ConfigError(path, "must be a positive integer");
      }
      params.max_steps = static_cast<std::int64_t>(value);
      continue;
    }
    auto it = std::find_if(bindings.begin(), bindings.end(),
                           [&](const Binding& b) { return key == b.name; });
    if (it == bindings.end()) throw ConfigError(path, "unknown parameter");
    if (key != "center_penalty" && key != "initial_angle_noise" &&
        key != "action_cost" && key != "lateral" && key != "yaw" &&
        key != "turn" && key != "joint_damping" && key != "reset_noise" && !(value > 0.0)) {
      throw ConfigError(path, "must be > 0");
    }
    if (value < 0.0) throw ConfigError(path, "must be >= 0");
    it->ref() = value;
  }
}

template <typename Params>
std::map<std::string, double> listing(Params params) {
  std::map<std::string, double> out;
  for (auto& b : bind(params)) out[b.name] = b.ref();
  out["max_steps"] = static_cast<double>(params.max_steps);
  return out;
}

enum class Family { kSwingup, kWorm, kQuad };

Family family_of(const std::string& name) {
  if (name == "swingup") return Family::kSwingup;
  if (name == "planar_worm") return Family::kWorm;
  if (is_quadpod(name)) return Family::kQuad;
  throw ConfigError("env.name", "unknown environment '" + name + "'");
}

}  // namespace

const std::vector<std::string>& environment_names() {
  static const std::vector<std::string> names = {
      "swingup",       "planar_worm",   "quadpod",
      "quadpod_impaired", "quadpod_morph", "quadpod_lifelong"};
  return names;
}

std::map<std::string, double> default_env_params(const std::string& name) {
  switch (family_of(name)) {
    case Family::kSwingup: return listing(SwingupParams{});
    case Family::kWorm: return listing(PlanarWormParams{});
    case Family::kQuad: {
      auto out = listing(QuadPodParams{});
      // The lifelong task never ends.
      if (name == "quadpod_lifelong") out.erase("max_steps");
      return out;
    }
  }
  return {};
}

bool is_quadpod(const std::string& name) {
  return name == "quadpod" || name == "quadpod_impaired" || name == "quadpod_morph" ||
         name == "quadpod_lifelong";
}

QuadPodParams quadpod_params(const EnvSpec& spec) {
  if (!is_quadpod(spec.name)) {
    throw ConfigError("env.name", spec.name + " is not a quadpod task");
  }
  QuadPodParams p;
  apply_overrides(p, spec.params);
  return p;
}

void check(const EnvSpec& spec) {
  switch (family_of(spec.name)) {
    case Family::kSwingup: {
      SwingupParams p;
      apply_overrides(p, spec.params);
      break;
    }
    case Family::kWorm: {
      PlanarWormParams p;
      apply_overrides(p, spec.params);
      break;
    }
    case Family::kQuad: {
      if (spec.name == "quadpod_lifelong" && spec.params.contains("max_steps")) {
        throw ConfigError("env.params.max_steps", "not used by the lifelong task");
      }
      QuadPodParams p;
      apply_overrides(p, spec.params);
      break;
    }
  }
}

std::unique_ptr<Environment> make_environment(const EnvSpec& spec, std::uint64_t seed,
                                              const LifelongConfig& lifelong) {
  switch (family_of(spec.name)) {
    case Family::kSwingup: {
      SwingupParams p;
      apply_overrides(p, spec.params);
      return std::make_unique<SwingupEnv>(seed, p);
    }
    case Family::kWorm: {
      PlanarWormParams p;
      apply_overrides(p, spec.params);
      return std::make_unique<PlanarWormEnv>(seed, p);
    }
    case Family::kQuad: {
      QuadPodParams p;
      apply_overrides(p, spec.params);
      if (spec.name == "quadpod_lifelong") {
        return std::make_unique<LifelongQuadPod>(lifelong, p);
      }
      const auto variant = spec.name == "quadpod_impaired" ? QuadPodEnv::Variant::kImpaired
                           : spec.name == "quadpod_morph"  ? QuadPodEnv::Variant::kMorphology
                                                           : QuadPodEnv::Variant::kPlain;
      return std::make_unique<QuadPodEnv>(seed, variant, p);
    }
  }
  return nullptr;
}

}  // namespace rms
