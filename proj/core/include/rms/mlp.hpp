#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rms {

// Dense tanh network: every layer computes tanh(W x + b), including the
// output layer. Parameters live in one flat vector, layer by layer, each
// layer as W (row-major, out x in) followed by b.
class Mlp {
 public:
  // layer_sizes = {inputs, hidden..., outputs}
  explicit Mlp(std::vector<std::size_t> layer_sizes);
  Mlp(std::size_t inputs, std::span<const std::size_t> hidden, std::size_t outputs);

  std::size_t input_size() const { return sizes_.front(); }
  std::size_t output_size() const { return sizes_.back(); }
  std::size_t layer_count() const { return sizes_.size() - 1; }
  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }

  std::size_t weight_count() const;
  std::size_t bias_count() const;
  std::size_t parameter_count() const { return weight_count() + bias_count(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }
  void set_parameters(std::span<const double> params);

  double& weight(std::size_t layer, std::size_t row, std::size_t col);
  double& bias(std::size_t layer, std::size_t row);

  std::vector<double> forward(std::span<const double> input) const;

  // Forward pass with an external parameter vector of matching size.
  std::vector<double> forward(std::span<const double> params,
                              std::span<const double> input) const;

 private:
  std::size_t layer_offset(std::size_t layer) const;

  std::vector<std::size_t> sizes_;
  std::vector<double> params_;
};

}  // namespace rms
