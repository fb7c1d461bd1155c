#include "rms/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rms {

Mlp::Mlp(std::vector<std::size_t> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("mlp needs input and output sizes");
  for (std::size_t s : sizes_) {
    if (s == 0) throw std::invalid_argument("mlp layer sizes must be positive");
  }
  params_.assign(parameter_count(), 0.0);
}

Mlp::Mlp(std::size_t inputs, std::span<const std::size_t> hidden, std::size_t outputs)
    : Mlp([&] {
        std::vector<std::size_t> sizes{inputs};
        sizes.insert(sizes.end(), hidden.begin(), hidden.end());
        sizes.push_back(outputs);
        return sizes;
      }()) {}

std::size_t Mlp::weight_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) n += sizes_[l] * sizes_[l + 1];
  return n;
}

std::size_t Mlp::bias_count() const {
  std::size_t n = 0;
  for (std::size_t l = 1; l < sizes_.size(); ++l) n += sizes_[l];
  return n;
}

std::size_t Mlp::layer_offset(std::size_t layer) const {
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer; ++l) off += (sizes_[l] + 1) * sizes_[l + 1];
  return off;
}

void Mlp::set_parameters(std::span<const double> params) {
  if (params.size() != params_.size()) {
    throw std::invalid_argument("expected " + std::to_string(params_.size()) +
                                " parameters, got " + std::to_string(params.size()));
  }
  params_.assign(params.begin(), params.end());
}

double& Mlp::weight(std::size_t layer, std::size_t row, std::size_t col) {
  if (layer >= layer_count() || row >= sizes_[layer + 1] || col >= sizes_[layer]) {
    throw std::out_of_range("mlp weight index");
  }
  return params_[layer_offset(layer) + row * sizes_[layer] + col];
}

double& Mlp::bias(std::size_t layer, std::size_t row) {
  if (layer >= layer_count() || row >= sizes_[layer + 1]) {
    throw std::out_of_range("mlp bias index");
  }
  return params_[layer_offset(layer) + sizes_[layer] * sizes_[layer + 1] + row];
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  return forward(params_, input);
}

std::vector<double> Mlp::forward(std::span<const double> params,
                                 std::span<const double> input) const {
  if (params.size() != params_.size()) {
    throw std::invalid_argument("mlp parameter vector has the wrong size");
  }
  if (input.size() != input_size()) {
    throw std::invalid_argument("mlp expects " + std::to_string(input_size()) +
                                " inputs, got " + std::to_string(input.size()));
  }
  std::vector<double> x(input.begin(), input.end());
  std::vector<double> y;
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const std::size_t in = sizes_[l];
    const std::size_t out = sizes_[l + 1];
    const double* w = params.data() + off;
    const double* b = w + in * out;
    y.assign(out, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      double acc = b[r];
      const double* row = w + r * in;
      for (std::size_t c = 0; c < in; ++c) acc += row[c] * x[c];
      y[r] = std::tanh(acc);
    }
    off += (in + 1) * out;
    x.swap(y);
  }
  return x;
}

}  // namespace rms
