#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace rms {

enum class Activation : std::uint8_t {
  kIdentity,
  kRelu,
  kTanh,
  kSigmoid,
  kGaussian,  // exp(-x^2)
  kSine,
  kStep,  // 1 if x > 0 else 0
  kAbs,
};

inline constexpr std::array<Activation, 8> kAllActivations = {
    Activation::kIdentity, Activation::kRelu,     Activation::kTanh,
    Activation::kSigmoid,  Activation::kGaussian, Activation::kSine,
    Activation::kStep,     Activation::kAbs,
};

double activate(Activation kind, double x);

std::string_view to_string(Activation kind);
std::optional<Activation> activation_from_string(std::string_view name);

}  // namespace rms
