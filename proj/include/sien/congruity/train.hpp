// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sien/congruity/dataset.hpp"
#include "sien/congruity/network.hpp"
#include "sien/congruity/objective.hpp"

namespace sien::congruity {

struct TrainResult {
  ParameterSet theta;          // θ*
  double e_star = 0.0;         // E(θ*)
  double e_initial = 0.0;      // E at initialization
  ParameterSet after_pruning;  // parameters entering the descent phase
  std::size_t pruned = 0;      // neurons zeroed during the pruning phase
  std::vector<double> loss_curve;   // E after the pruning phase, then after each epoch
  std::vector<double> predictions;  // outputs on Dp then Dg
};

// Called after every descent step with the updated parameters.
using StepObserver = std::function<void(std::size_t step, const ParameterSet& theta)>;

// Batches pair the b-th slice of Dp with the b-th slice of Dg; the shorter
// dataset wraps around. Count = max of the two slice counts.
struct BatchPlan {
  std::size_t batch_size;
  std::size_t personal_size;
  std::size_t general_size;

  std::size_t count() const;
  std::pair<std::size_t, std::size_t> personal(std::size_t b) const;
  std::pair<std::size_t, std::size_t> general(std::size_t b) const;
};

// Layer-wise pruning on the personal error, then gradient descent on the
// congruity objective. widths includes the input and output layers; the
// output layer must have width 1. Throws EmptyDataset, NonFiniteLoss,
// InvalidParams, DimensionMismatch.
TrainResult train(const Dataset& dp, const Dataset& dg, const Hyperparams& h, std::span<const std::size_t> widths,
                  const StepObserver& observer = {});

// One descent step θ -= lr * grad over the trainable parameters.
void descend(ParameterSet& p, std::span<const double> grad, double learning_rate);

// Forward output scaled back into the graph's distance unit.
double predict_distance(const ParameterSet& theta, std::span<const double> features, double distance_scale);

}  // namespace sien::congruity
