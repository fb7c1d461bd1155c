#include "rms/activation.hpp"

#include <cmath>

namespace rms {

double activate(Activation kind, double x) {
  switch (kind) {
    case Activation::kIdentity:
      return x;
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case Activation::kGaussian:
      return std::exp(-x * x);
    case Activation::kSine:
      return std::sin(x);
    case Activation::kStep:
      return x > 0.0 ? 1.0 : 0.0;
    case Activation::kAbs:
      return std::fabs(x);
  }
  return x;
}

std::string_view to_string(Activation kind) {
  switch (kind) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kGaussian: return "gaussian";
    case Activation::kSine: return "sine";
    case Activation::kStep: return "step";
    case Activation::kAbs: return "abs";
  }
  return "identity";
}

std::optional<Activation> activation_from_string(std::string_view name) {
  for (Activation a : kAllActivations) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

}  // namespace rms
