// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sien::congruity {

// One layer of neurons. Neuron j of layer h (h >= 1) reads every neuron of
// layer h-1 through row j of `weights`; the input layer has no connections
// and its biases only act in the negative (reconstruction) direction.
struct Layer {
  std::size_t width = 0;
  std::size_t in_width = 0;
  std::vector<double> weights;  // width x in_width, row-major
  std::vector<double> bias;
  std::vector<std::uint8_t> alive;

  std::span<double> row(std::size_t j) { return {weights.data() + j * in_width, in_width}; }
  std::span<const double> row(std::size_t j) const { return {weights.data() + j * in_width, in_width}; }
  std::size_t alive_count() const;
};

// theta = {theta_h}, h = 0 (input) .. H+1 (output).
//
// Flat layout used by gradients: layers in order, neurons in order, and per
// neuron its bias followed by its incoming connections.
class ParameterSet {
 public:
  ParameterSet() = default;

  // All-zero parameters. widths.size() >= 2. d_max 0 = widest layer.
  static ParameterSet zeros(std::span<const std::size_t> widths, std::size_t d_max = 0);
  // Uniform in [-0.5, 0.5] from the seeded generator.
  static ParameterSet random(std::span<const std::size_t> widths, std::uint64_t seed, std::size_t d_max = 0);

  std::size_t layer_count() const { return layers_.size(); }
  std::size_t input_width() const { return layers_.front().width; }
  std::size_t output_width() const { return layers_.back().width; }
  std::vector<std::size_t> widths() const;
  std::size_t d_max() const { return d_max_; }

  const Layer& layer(std::size_t h) const { return layers_.at(h); }
  Layer& layer(std::size_t h) { return layers_.at(h); }

  std::size_t size() const { return offsets_.back(); }
  // Flat index of neuron j's bias in layer h; its connections follow.
  std::size_t neuron_offset(std::size_t h, std::size_t j) const {
    return offsets_[h] + j * (1 + layers_[h].in_width);
  }
  std::size_t neuron_size(std::size_t h) const { return 1 + layers_[h].in_width; }

  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);

  // 1 where the parameter may change: it belongs to an alive neuron and, for
  // a connection, its source neuron is alive too.
  std::vector<std::uint8_t> trainable_mask() const;

  // Zeroes the neuron's bias, incoming and outgoing connections, and marks it
  // dead. Dead neurons output 0 in both directions.
  void prune(std::size_t h, std::size_t j);

  bool operator==(const ParameterSet& o) const;

 private:
  void layout();

  std::vector<Layer> layers_;
  std::vector<std::size_t> offsets_{0};
  std::size_t d_max_ = 0;
};

double sigmoid(double z);

// Positive direction: a_0 = X, a_h = f(W_h a_{h-1} + b_h).
struct PositivePass {
  std::vector<std::vector<double>> activations;  // per layer, [0] = masked input

  std::span<const double> output() const { return activations.back(); }
};

// Throws DimensionMismatch.
PositivePass forward_positive(const ParameterSet& p, std::span<const double> x);

// Negative direction with tied (transposed) weights:
// r_{H+1} = Y, r_{h-1} = g(W_h^T r_h + b_{h-1}).
struct NegativePass {
  std::vector<std::vector<double>> activations;  // per layer, [0] = reconstruction

  std::span<const double> reconstruction() const { return activations.front(); }
};

// Throws DimensionMismatch.
NegativePass forward_negative(const ParameterSet& p, std::span<const double> y);

// Value and gradient of one sample's error
//   label_weight * (y - target)^2  (when a target is present)
// + recon_weight * ||x - X||^2
// where y is the positive output for X and x the negative reconstruction of y.
// The gradient is accumulated into `grad` (flat layout). Output width must be 1.
// `recon_out`, when given, receives ||x - X||^2.
double accumulate_sample(const ParameterSet& p, std::span<const double> features, std::optional<double> target,
                         double label_weight, double recon_weight, std::span<double> grad,
                         double* recon_out = nullptr);

// Same value without the gradient.
double sample_error(const ParameterSet& p, std::span<const double> features, std::optional<double> target,
                    double label_weight, double recon_weight);

// Squared reconstruction residual ||x - X||^2 alone.
double reconstruction_error(const ParameterSet& p, std::span<const double> features);

}  // namespace sien::congruity
