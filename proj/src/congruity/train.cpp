// SPDX-License-Identifier: Apache-2.0
#include "sien/congruity/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sien/error.hpp"
#include "sien/rng.hpp"

namespace sien::congruity {

std::size_t BatchPlan::count() const {
  auto slices = [&](std::size_t n) { return (n + batch_size - 1) / batch_size; };
  return std::max(slices(personal_size), slices(general_size));
}

namespace {
std::pair<std::size_t, std::size_t> slice(std::size_t b, std::size_t n, std::size_t bs) {
  if (n == 0) return {0, 0};
  const std::size_t slices = (n + bs - 1) / bs;
  const std::size_t s = b % slices;
  return {s * bs, std::min(n, (s + 1) * bs)};
}
}  // namespace

std::pair<std::size_t, std::size_t> BatchPlan::personal(std::size_t b) const {
  return slice(b, personal_size, batch_size);
}

std::pair<std::size_t, std::size_t> BatchPlan::general(std::size_t b) const {
  return slice(b, general_size, batch_size);
}

void descend(ParameterSet& p, std::span<const double> grad, double learning_rate) {
  if (grad.size() != p.size()) throw Error(Errc::DimensionMismatch, "gradient has the wrong length");
  auto flat = p.flatten();
  const auto mask = p.trainable_mask();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (mask[i]) flat[i] -= learning_rate * grad[i];
  }
  p.assign(flat);
}

namespace {

void check_finite(double e, const char* where) {
  if (!std::isfinite(e)) throw Error(Errc::NonFiniteLoss, std::string("objective diverged during ") + where);
}

// Layer-wise pruning: candidate steps on E^p, neurons whose step moves E^p
// less than alpha times the E^g change are zeroed with the configured
// probability. A layer is left once its live count drops below d_max.
std::size_t prune_layers(ParameterSet& theta, const Objective& obj, const BatchPlan& plan, const Hyperparams& h,
                         Rng& rng) {
  std::size_t pruned = 0;
  std::vector<double> grad;
  for (std::size_t layer = 0; layer < theta.layer_count(); ++layer) {
    std::size_t live = theta.layer(layer).alive_count();
    bool advance = false;
    for (std::size_t b = 0; b < plan.count() && !advance; ++b) {
      const auto [pb, pe] = plan.personal(b);
      const auto [gb, ge] = plan.general(b);
      for (std::size_t j = 0; j < theta.layer(layer).width; ++j) {
        if (!theta.layer(layer).alive[j]) continue;
        const double ev_p = obj.personal_gradient(theta, pb, pe, grad);
        const double ev_g = obj.general(theta, gb, ge);
        check_finite(ev_p + ev_g, "pruning");

        auto flat = theta.flatten();
        const auto mask = theta.trainable_mask();
        const std::size_t off = theta.neuron_offset(layer, j);
        for (std::size_t i = off; i < off + theta.neuron_size(layer); ++i) {
          if (mask[i]) flat[i] -= h.learning_rate * grad[i];
        }
        theta.assign(flat);

        const double en_p = obj.personal(theta, pb, pe);
        const double en_g = obj.general(theta, gb, ge);
        const double de_p = std::abs(en_p - ev_p);
        const double de_g = std::abs(en_g - ev_g);
        // Never empty a layer: the network would stop carrying signal.
        if (de_p < h.alpha * de_g && theta.layer(layer).alive_count() > 1 && rng.bernoulli(h.prune_probability)) {
          theta.prune(layer, j);
          ++pruned;
          --live;
          if (live < theta.d_max()) {
            advance = true;
            break;
          }
        }
      }
    }
  }
  return pruned;
}

}  // namespace

TrainResult train(const Dataset& dp, const Dataset& dg, const Hyperparams& h, std::span<const std::size_t> widths,
                  const StepObserver& observer) {
  h.validate();
  if (dp.empty() || dg.empty()) throw Error(Errc::EmptyDataset, "training needs personal and general samples");
  if (widths.size() < 2 || widths.back() != 1) {
    throw Error(Errc::DimensionMismatch, "architecture needs >= 2 layers and a single output neuron");
  }
  if (dp.samples.front().features.size() != widths.front()) {
    throw Error(Errc::DimensionMismatch, "input width does not match the feature count");
  }
  const Objective obj(dp, dg, h);
  const BatchPlan plan{h.batch_size, dp.size(), dg.size()};

  TrainResult out;
  ParameterSet theta = ParameterSet::random(widths, Rng::derive(h.rng_seed, 0), h.d_max);
  out.e_initial = obj.total(theta);
  check_finite(out.e_initial, "initialization");

  Rng prune_rng(Rng::derive(h.rng_seed, 1));
  out.pruned = prune_layers(theta, obj, plan, h, prune_rng);
  out.after_pruning = theta;

  double e_prev = obj.total(theta);
  check_finite(e_prev, "pruning");
  out.loss_curve.push_back(e_prev);

  std::vector<double> gg, gp, grad(theta.size());
  std::size_t step = 0;
  for (std::size_t epoch = 1; epoch <= h.max_epochs; ++epoch) {
    for (std::size_t b = 0; b < plan.count(); ++b) {
      const auto [pb, pe] = plan.personal(b);
      const auto [gb, ge] = plan.general(b);
      // The boundary weights use one error alone, so their trajectories are
      // exactly those of the pure objectives.
      if (h.alpha == 0.0) {
        obj.general_gradient(theta, gb, ge, grad);
      } else if (h.alpha == 1.0) {
        obj.personal_gradient(theta, pb, pe, grad);
      } else {
        obj.general_gradient(theta, gb, ge, gg);
        obj.personal_gradient(theta, pb, pe, gp);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = (1.0 - h.alpha) * gg[i] + h.alpha * gp[i];
      }
      descend(theta, grad, h.learning_rate);
      ++step;
      if (observer) observer(step, theta);
    }
    const double e = obj.total(theta);
    check_finite(e, "descent");
    out.loss_curve.push_back(e);
    const double rel = std::abs(e_prev - e) / std::max(std::abs(e_prev), std::numeric_limits<double>::min());
    e_prev = e;
    if (rel < h.tolerance) break;
  }

  out.e_star = obj.total(theta);
  for (const Sample& s : dp.samples) out.predictions.push_back(forward_positive(theta, s.features).output()[0]);
  for (const Sample& s : dg.samples) out.predictions.push_back(forward_positive(theta, s.features).output()[0]);
  out.theta = std::move(theta);
  return out;
}

double predict_distance(const ParameterSet& theta, std::span<const double> features, double distance_scale) {
  return forward_positive(theta, features).output()[0] * distance_scale;
}

}  // namespace sien::congruity
