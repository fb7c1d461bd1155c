#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rms/config.hpp"
#include "rms/environment.hpp"
#include "rms/lifelong.hpp"
#include "rms/locomotion.hpp"

namespace rms {

// swingup, planar_worm, quadpod, quadpod_impaired, quadpod_morph,
// quadpod_lifelong
const std::vector<std::string>& environment_names();

// Documented parameter defaults of an environment, keyed by override name.
// Throws ConfigError("env.name") for an unknown environment.
std::map<std::string, double> default_env_params(const std::string& name);

// Throws ConfigError for an unknown environment or parameter.
void check(const EnvSpec& spec);

// True for the quadpod family (plain, impaired, morph, lifelong).
bool is_quadpod(const std::string& name);

// QuadPod parameters with the overrides applied.
QuadPodParams quadpod_params(const EnvSpec& spec);

// lifelong is used only by quadpod_lifelong (its seed included).
std::unique_ptr<Environment> make_environment(const EnvSpec& spec,
                                              std::uint64_t seed,
                                              const LifelongConfig& lifelong = {});

}  // namespace rms
