// SPDX-License-Identifier: Apache-2.0
#include "sien/congruity/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sien/error.hpp"
#include "sien/simd/kernels.hpp"

namespace sien::congruity {

void Hyperparams::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::InvalidParams, what); };
  if (!(alpha >= 0.0 && alpha <= 1.0)) bad("alpha must lie in [0, 1]");
  for (auto [name, v] : {std::pair{"lambda_g", lambda_g}, std::pair{"lambda_q", lambda_q},
                         std::pair{"lambda_p", lambda_p}, std::pair{"lambda_k", lambda_k}}) {
    if (!(v >= 0.0) || !std::isfinite(v)) bad(std::string(name) + " must be a non-negative real");
  }
  if (q < 1) bad("q must be a positive integer");
  if (k < 1) bad("k must be a positive integer");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) bad("learning_rate must be positive");
  if (!(prune_probability >= 0.0 && prune_probability <= 1.0)) bad("prune_probability must lie in [0, 1]");
  if (batch_size < 1) bad("batch_size must be >= 1");
  if (max_epochs < 1) bad("max_epochs must be >= 1");
  if (!(tolerance > 0.0)) bad("tolerance must be positive");
}

namespace {

template <typename F>
void for_each_alive_parameter(const ParameterSet& p, F&& f) {
  for (std::size_t h = 0; h < p.layer_count(); ++h) {
    const Layer& l = p.layer(h);
    for (std::size_t j = 0; j < l.width; ++j) {
      if (!l.alive[j]) continue;
      const std::size_t off = p.neuron_offset(h, j);
      f(off, l.bias[j]);
      const auto r = l.row(j);
      for (std::size_t i = 0; i < r.size(); ++i) f(off + 1 + i, r[i]);
    }
  }
}

void require_kind(const Dataset& d, DatasetKind kind) {
  if (d.kind != kind) {
    throw Error(Errc::InvalidParams, kind == DatasetKind::general ? "expected a general dataset"
                                                                  : "expected a personal dataset");
  }
  if (d.empty()) throw Error(Errc::EmptyDataset, "dataset has no samples");
}

void check_range(std::size_t begin, std::size_t end, std::size_t size) {
  if (begin > end || end > size) throw Error(Errc::InvalidParams, "sample range out of bounds");
}

}  // namespace

double regularizer(const ParameterSet& p, int q) {
  if (q < 1) throw Error(Errc::InvalidParams, "q must be a positive integer");
  double sum = 0.0;
  if (q == 1) {
    for_each_alive_parameter(p, [&](std::size_t, double v) { sum += std::abs(v); });
    return sum;
  }
  if (q == 2) {
    for_each_alive_parameter(p, [&](std::size_t, double v) { sum += v * v; });
    return std::sqrt(sum);
  }
  for_each_alive_parameter(p, [&](std::size_t, double v) { sum += std::pow(std::abs(v), q); });
  return std::pow(sum, 1.0 / q);
}

std::vector<double> regularizer_gradient(const ParameterSet& p, int q) {
  std::vector<double> g(p.size(), 0.0);
  const double r = regularizer(p, q);
  if (r == 0.0) return g;
  // d/dθ_j (Σ|θ|^q)^(1/q) = sign(θ_j) |θ_j|^(q-1) / R^(q-1)
  const double scale = q == 1 ? 1.0 : std::pow(r, 1 - q);
  for_each_alive_parameter(p, [&](std::size_t idx, double v) {
    if (v == 0.0) return;
    const double mag = q == 1 ? 1.0 : (q == 2 ? std::abs(v) : std::pow(std::abs(v), q - 1));
    g[idx] = (v > 0 ? 1.0 : -1.0) * mag * scale;
  });
  return g;
}

double filter_topk(std::span<const double> xp, std::span<const double> x, std::size_t k) {
  if (xp.size() != x.size()) throw Error(Errc::DimensionMismatch, "filter operands differ in length");
  if (k < 1) throw Error(Errc::InvalidParams, "k must be >= 1");
  std::vector<std::size_t> idx(xp.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const std::size_t take = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double ma = std::abs(xp[a]), mb = std::abs(xp[b]);
                      return ma != mb ? ma > mb : a < b;
                    });
  double dotp = 0.0, np = 0.0, nx = 0.0;
  for (std::size_t t = 0; t < take; ++t) {
    const std::size_t i = idx[t];
    dotp += xp[i] * x[i];
    np += xp[i] * xp[i];
    nx += x[i] * x[i];
  }
  if (np == 0.0 || nx == 0.0) return 0.0;
  return std::clamp(dotp / (std::sqrt(np) * std::sqrt(nx)), -1.0, 1.0);
}

std::vector<double> centroid(const Dataset& d) {
  if (d.empty()) throw Error(Errc::EmptyDataset, "dataset has no samples");
  std::vector<double> c(d.samples.front().features.size(), 0.0);
  for (const Sample& s : d.samples) {
    if (s.features.size() != c.size()) throw Error(Errc::DimensionMismatch, "samples differ in feature count");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += s.features[i];
  }
  for (double& v : c) v /= static_cast<double>(d.size());
  return c;
}

std::vector<double> filter_weights(const Dataset& d, std::size_t k) {
  const auto c = centroid(d);
  std::vector<double> w;
  w.reserve(d.size());
  for (const Sample& s : d.samples) w.push_back(filter_topk(s.features, c, k));
  return w;
}

Objective::Objective(const Dataset& dp, const Dataset& dg, const Hyperparams& h) : dp_(dp), dg_(dg), h_(h) {
  h_.validate();
  if (!dp_.empty()) {
    require_kind(dp_, DatasetKind::personal);
    filters_ = filter_weights(dp_, h_.k);
  }
  if (!dg_.empty()) require_kind(dg_, DatasetKind::general);
}

double Objective::general(const ParameterSet& p, std::size_t begin, std::size_t end) const {
  check_range(begin, end, dg_.size());
  const double rq = h_.lambda_q == 0.0 ? 0.0 : regularizer(p, h_.q);
  double labeled = 0.0, recon = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const Sample& s = dg_.samples[i];
    if (auto t = s.target()) {
      const double y = forward_positive(p, s.features).output()[0];
      labeled += (y - *t) * (y - *t);
    }
    if (rq != 0.0) recon += reconstruction_error(p, s.features);
  }
  return h_.lambda_g * labeled + h_.lambda_q * rq * recon;
}

double Objective::personal(const ParameterSet& p, std::size_t begin, std::size_t end) const {
  check_range(begin, end, dp_.size());
  double value = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const Sample& s = dp_.samples[i];
    value += sample_error(p, s.features, s.target(), h_.lambda_p, h_.lambda_k * filters_[i]);
  }
  return value;
}

double Objective::total(const ParameterSet& p) const {
  return (1.0 - h_.alpha) * general(p) + h_.alpha * personal(p);
}

double Objective::general_gradient(const ParameterSet& p, std::size_t begin, std::size_t end,
                                   std::vector<double>& grad) const {
  check_range(begin, end, dg_.size());
  grad.assign(p.size(), 0.0);
  const double rq = regularizer(p, h_.q);
  const double recon_weight = h_.lambda_q * rq;
  double value = 0.0, recon_sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const Sample& s = dg_.samples[i];
    double residual = 0.0;
    value += accumulate_sample(p, s.features, s.target(), h_.lambda_g, recon_weight, grad, &residual);
    recon_sum += residual;
  }
  if (h_.lambda_q != 0.0 && recon_sum != 0.0) {
    // Product rule on lambda_q * R_q(θ) * Σ||x - x_i||^2.
    simd::axpy(h_.lambda_q * recon_sum, regularizer_gradient(p, h_.q), grad);
  }
  return value;
}

double Objective::personal_gradient(const ParameterSet& p, std::size_t begin, std::size_t end,
                                    std::vector<double>& grad) const {
  check_range(begin, end, dp_.size());
  grad.assign(p.size(), 0.0);
  double value = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const Sample& s = dp_.samples[i];
    value += accumulate_sample(p, s.features, s.target(), h_.lambda_p, h_.lambda_k * filters_[i], grad);
  }
  return value;
}

double Objective::total_gradient(const ParameterSet& p, std::vector<double>& grad) const {
  std::vector<double> gg, gp;
  const double eg = general_gradient(p, 0, dg_.size(), gg);
  const double ep = personal_gradient(p, 0, dp_.size(), gp);
  grad.resize(p.size());
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = (1.0 - h_.alpha) * gg[i] + h_.alpha * gp[i];
  return (1.0 - h_.alpha) * eg + h_.alpha * ep;
}

namespace {
const Dataset& empty_of(DatasetKind kind) {
  static const Dataset personal{DatasetKind::personal, {}};
  static const Dataset general{DatasetKind::general, {}};
  return kind == DatasetKind::personal ? personal : general;
}
}  // namespace

double general_error(const ParameterSet& p, const Dataset& dg, const Hyperparams& h) {
  require_kind(dg, DatasetKind::general);
  return Objective(empty_of(DatasetKind::personal), dg, h).general(p);
}

double personal_error(const ParameterSet& p, const Dataset& dp, const Hyperparams& h) {
  require_kind(dp, DatasetKind::personal);
  return Objective(dp, empty_of(DatasetKind::general), h).personal(p);
}

double congruity_objective(const ParameterSet& p, const Dataset& dp, const Dataset& dg, const Hyperparams& h) {
  require_kind(dp, DatasetKind::personal);
  require_kind(dg, DatasetKind::general);
  return Objective(dp, dg, h).total(p);
}

}  // namespace sien::congruity
