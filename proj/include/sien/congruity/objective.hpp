// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sien/congruity/dataset.hpp"
#include "sien/congruity/network.hpp"

namespace sien::congruity {

struct Hyperparams {
  double alpha = 0.5;  // weight of the personal error in the congruity objective
  double lambda_g = 1.0;
  double lambda_q = 0.01;
  double lambda_p = 1.0;
  double lambda_k = 0.01;
  int q = 2;
  std::size_t k = 5;
  double learning_rate = 0.008;
  double prune_probability = 0.5;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 500;
  double tolerance = 1e-9;
  std::uint64_t rng_seed = 1;
  std::size_t d_max = 0;  // 0 = widest layer

  // Throws InvalidParams naming the offending field.
  void validate() const;
};

// (sum_j |theta_j|^q)^(1/q) over the parameters of alive neurons.
double regularizer(const ParameterSet& p, int q);

// Gradient of the regularizer in flat layout (0 where undefined).
std::vector<double> regularizer_gradient(const ParameterSet& p, int q);

// Top-k cosine similarity: cosine of xp and x restricted to the k
// largest-magnitude coordinates of xp (ties to the lower index); 0 when a
// restricted norm vanishes. Throws DimensionMismatch.
double filter_topk(std::span<const double> xp, std::span<const double> x, std::size_t k);

// Mean feature vector. Throws EmptyDataset.
std::vector<double> centroid(const Dataset& d);

// Per-sample filter weights F_k against the dataset centroid.
std::vector<double> filter_weights(const Dataset& d, std::size_t k);

// E^g: lambda_g * sum_labeled (y - y_i)^2 + lambda_q * R_q * sum_all ||x - x_i||^2.
// Throws EmptyDataset, InvalidParams (wrong kind).
double general_error(const ParameterSet& p, const Dataset& dg, const Hyperparams& h);

// E^p: lambda_p * sum_labeled (y - y_i)^2 + lambda_k * sum_i F_k(i) ||x - x_i||^2.
double personal_error(const ParameterSet& p, const Dataset& dp, const Hyperparams& h);

// E = (1 - alpha) E^g + alpha E^p.
double congruity_objective(const ParameterSet& p, const Dataset& dp, const Dataset& dg, const Hyperparams& h);

// Evaluates the errors over sample ranges with precomputed filter weights.
// This is what training uses batch by batch.
class Objective {
 public:
  Objective(const Dataset& dp, const Dataset& dg, const Hyperparams& h);

  std::size_t personal_size() const { return dp_.size(); }
  std::size_t general_size() const { return dg_.size(); }

  double general(const ParameterSet& p, std::size_t begin, std::size_t end) const;
  double personal(const ParameterSet& p, std::size_t begin, std::size_t end) const;
  double general(const ParameterSet& p) const { return general(p, 0, dg_.size()); }
  double personal(const ParameterSet& p) const { return personal(p, 0, dp_.size()); }
  double total(const ParameterSet& p) const;

  // Flat gradients; the returned value is the error itself.
  double general_gradient(const ParameterSet& p, std::size_t begin, std::size_t end, std::vector<double>& grad) const;
  double personal_gradient(const ParameterSet& p, std::size_t begin, std::size_t end, std::vector<double>& grad) const;
  double total_gradient(const ParameterSet& p, std::vector<double>& grad) const;

  const Hyperparams& hyper() const { return h_; }

 private:
  const Dataset& dp_;
  const Dataset& dg_;
  Hyperparams h_;
  std::vector<double> filters_;
};

}  // namespace sien::congruity
