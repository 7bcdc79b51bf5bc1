// SPDX-License-Identifier: Apache-2.0
#include "sien/congruity/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sien/error.hpp"
#include "sien/rng.hpp"
#include "sien/simd/kernels.hpp"

namespace sien::congruity {

std::size_t Layer::alive_count() const {
  return static_cast<std::size_t>(std::count(alive.begin(), alive.end(), std::uint8_t{1}));
}

ParameterSet ParameterSet::zeros(std::span<const std::size_t> widths, std::size_t d_max) {
  if (widths.size() < 2) throw Error(Errc::DimensionMismatch, "need at least an input and an output layer");
  ParameterSet p;
  std::size_t prev = 0;
  for (std::size_t w : widths) {
    if (w == 0) throw Error(Errc::DimensionMismatch, "layer widths must be >= 1");
    Layer l;
    l.width = w;
    l.in_width = prev;
    l.weights.assign(w * prev, 0.0);
    l.bias.assign(w, 0.0);
    l.alive.assign(w, 1);
    p.layers_.push_back(std::move(l));
    prev = w;
  }
  const std::size_t widest = *std::max_element(widths.begin(), widths.end());
  p.d_max_ = d_max == 0 ? widest : d_max;
  p.layout();
  return p;
}

ParameterSet ParameterSet::random(std::span<const std::size_t> widths, std::uint64_t seed, std::size_t d_max) {
  ParameterSet p = zeros(widths, d_max);
  Rng rng(seed);
  std::vector<double> flat(p.size());
  for (double& v : flat) v = rng.uniform(-0.5, 0.5);
  p.assign(flat);
  return p;
}

void ParameterSet::layout() {
  offsets_.assign(1, 0);
  for (const Layer& l : layers_) offsets_.push_back(offsets_.back() + l.width * (1 + l.in_width));
}

std::vector<std::size_t> ParameterSet::widths() const {
  std::vector<std::size_t> w;
  for (const Layer& l : layers_) w.push_back(l.width);
  return w;
}

std::vector<double> ParameterSet::flatten() const {
  std::vector<double> flat;
  flat.reserve(size());
  for (const Layer& l : layers_) {
    for (std::size_t j = 0; j < l.width; ++j) {
      flat.push_back(l.bias[j]);
      const auto r = l.row(j);
      flat.insert(flat.end(), r.begin(), r.end());
    }
  }
  return flat;
}

void ParameterSet::assign(std::span<const double> flat) {
  if (flat.size() != size()) throw Error(Errc::DimensionMismatch, "flat parameter vector has the wrong length");
  std::size_t i = 0;
  for (Layer& l : layers_) {
    for (std::size_t j = 0; j < l.width; ++j) {
      l.bias[j] = flat[i++];
      for (double& c : l.row(j)) c = flat[i++];
    }
  }
}

std::vector<std::uint8_t> ParameterSet::trainable_mask() const {
  std::vector<std::uint8_t> mask(size(), 0);
  for (std::size_t h = 0; h < layers_.size(); ++h) {
    const Layer& l = layers_[h];
    for (std::size_t j = 0; j < l.width; ++j) {
      if (!l.alive[j]) continue;
      const std::size_t off = neuron_offset(h, j);
      mask[off] = 1;
      for (std::size_t i = 0; i < l.in_width; ++i) mask[off + 1 + i] = layers_[h - 1].alive[i];
    }
  }
  return mask;
}

void ParameterSet::prune(std::size_t h, std::size_t j) {
  Layer& l = layers_.at(h);
  l.alive.at(j) = 0;
  l.bias[j] = 0.0;
  std::fill(l.row(j).begin(), l.row(j).end(), 0.0);
  if (h + 1 < layers_.size()) {
    Layer& next = layers_[h + 1];
    for (std::size_t k = 0; k < next.width; ++k) next.row(k)[j] = 0.0;
  }
}

bool ParameterSet::operator==(const ParameterSet& o) const {
  if (d_max_ != o.d_max_ || layers_.size() != o.layers_.size()) return false;
  for (std::size_t h = 0; h < layers_.size(); ++h) {
    const Layer& a = layers_[h];
    const Layer& b = o.layers_[h];
    if (a.width != b.width || a.in_width != b.in_width || a.weights != b.weights || a.bias != b.bias ||
        a.alive != b.alive) {
      return false;
    }
  }
  return true;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

PositivePass forward_positive(const ParameterSet& p, std::span<const double> x) {
  if (x.size() != p.input_width()) {
    throw Error(Errc::DimensionMismatch, "input has " + std::to_string(x.size()) + " entries, network expects " +
                                             std::to_string(p.input_width()));
  }
  PositivePass pass;
  pass.activations.resize(p.layer_count());
  const Layer& in = p.layer(0);
  auto& a0 = pass.activations[0];
  a0.resize(in.width);
  for (std::size_t j = 0; j < in.width; ++j) a0[j] = in.alive[j] ? x[j] : 0.0;
  for (std::size_t h = 1; h < p.layer_count(); ++h) {
    const Layer& l = p.layer(h);
    const auto& prev = pass.activations[h - 1];
    auto& a = pass.activations[h];
    a.resize(l.width);
    for (std::size_t j = 0; j < l.width; ++j) {
      a[j] = l.alive[j] ? sigmoid(simd::dot(l.row(j), prev) + l.bias[j]) : 0.0;
    }
  }
  return pass;
}

NegativePass forward_negative(const ParameterSet& p, std::span<const double> y) {
  if (y.size() != p.output_width()) {
    throw Error(Errc::DimensionMismatch, "output-side vector has " + std::to_string(y.size()) +
                                             " entries, network expects " + std::to_string(p.output_width()));
  }
  const std::size_t top = p.layer_count() - 1;
  NegativePass pass;
  pass.activations.resize(p.layer_count());
  auto& rt = pass.activations[top];
  rt.resize(p.output_width());
  for (std::size_t k = 0; k < rt.size(); ++k) rt[k] = p.layer(top).alive[k] ? y[k] : 0.0;
  for (std::size_t h = top; h >= 1; --h) {
    const Layer& l = p.layer(h);
    const Layer& below = p.layer(h - 1);
    std::vector<double> u = below.bias;
    const auto& r = pass.activations[h];
    for (std::size_t k = 0; k < l.width; ++k) {
      if (r[k] != 0.0) simd::axpy(r[k], l.row(k), u);
    }
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = below.alive[j] ? sigmoid(u[j]) : 0.0;
    pass.activations[h - 1] = std::move(u);
  }
  return pass;
}

namespace {

void require_scalar_output(const ParameterSet& p) {
  if (p.output_width() != 1) throw Error(Errc::DimensionMismatch, "error functions need a single output neuron");
}

}  // namespace

double sample_error(const ParameterSet& p, std::span<const double> features, std::optional<double> target,
                    double label_weight, double recon_weight) {
  require_scalar_output(p);
  const PositivePass pos = forward_positive(p, features);
  double value = 0.0;
  const double y = pos.output()[0];
  if (target) value += label_weight * (y - *target) * (y - *target);
  if (recon_weight != 0.0) {
    const NegativePass neg = forward_negative(p, pos.output());
    value += recon_weight * simd::squared_distance(neg.reconstruction(), features);
  }
  return value;
}

double reconstruction_error(const ParameterSet& p, std::span<const double> features) {
  const PositivePass pos = forward_positive(p, features);
  const NegativePass neg = forward_negative(p, pos.output());
  return simd::squared_distance(neg.reconstruction(), features);
}

double accumulate_sample(const ParameterSet& p, std::span<const double> features, std::optional<double> target,
                         double label_weight, double recon_weight, std::span<double> grad,
                         double* recon_out) {
  require_scalar_output(p);
  if (grad.size() != p.size()) throw Error(Errc::DimensionMismatch, "gradient buffer has the wrong length");
  const std::size_t top = p.layer_count() - 1;
  const PositivePass pos = forward_positive(p, features);
  const NegativePass neg = forward_negative(p, pos.output());
  const double y = pos.output()[0];
  const auto x = neg.reconstruction();

  const double residual = simd::squared_distance(x, features);
  if (recon_out) *recon_out = residual;
  double value = recon_weight * residual;
  if (target) value += label_weight * (y - *target) * (y - *target);

  // Reconstruction path, from r_0 back up to r_{H+1} = y.
  std::vector<double> delta(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) delta[j] = 2.0 * recon_weight * (x[j] - features[j]);
  for (std::size_t h = 1; h <= top; ++h) {
    const Layer& l = p.layer(h);
    const auto& r_below = neg.activations[h - 1];
    const auto& r = neg.activations[h];
    std::vector<double> du(delta.size());
    for (std::size_t j = 0; j < du.size(); ++j) {
      du[j] = delta[j] * r_below[j] * (1.0 - r_below[j]);
      grad[p.neuron_offset(h - 1, j)] += du[j];
    }
    std::vector<double> up(l.width);
    for (std::size_t k = 0; k < l.width; ++k) {
      const std::size_t off = p.neuron_offset(h, k) + 1;
      if (r[k] != 0.0) simd::axpy(r[k], du, grad.subspan(off, l.in_width));
      up[k] = simd::dot(l.row(k), du);
    }
    delta = std::move(up);
  }

  // Positive path, from y back down to layer 1.
  if (target) delta[0] += 2.0 * label_weight * (y - *target);
  if (!p.layer(top).alive[0]) delta[0] = 0.0;
  for (std::size_t h = top; h >= 1; --h) {
    const Layer& l = p.layer(h);
    const auto& a = pos.activations[h];
    const auto& a_below = pos.activations[h - 1];
    std::vector<double> down(h > 1 ? l.in_width : 0, 0.0);
    for (std::size_t k = 0; k < l.width; ++k) {
      const double dz = delta[k] * a[k] * (1.0 - a[k]);
      if (dz == 0.0) continue;
      const std::size_t off = p.neuron_offset(h, k);
      grad[off] += dz;
      simd::axpy(dz, a_below, grad.subspan(off + 1, l.in_width));
      if (h > 1) simd::axpy(dz, l.row(k), down);
    }
    delta = std::move(down);
  }
  return value;
}

}  // namespace sien::congruity
