// SPDX-License-Identifier: Apache-2.0
#include "sien/userplane/prefetch.hpp"

#include <cmath>

#include "sien/error.hpp"

namespace sien::userplane {

std::vector<double> zipf_popularity(std::size_t catalog_size, double s, double shift) {
  if (catalog_size == 0) throw Error(Errc::InvalidParams, "catalog size must be >= 1");
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidParams, "zipf exponent must be > 0");
  if (!(shift >= 0.0) || !std::isfinite(shift)) throw Error(Errc::InvalidParams, "zipf shift must be >= 0");
  std::vector<double> fp(catalog_size);
  double sum = 0.0;
  for (std::size_t j = 0; j < catalog_size; ++j) {
    fp[j] = std::pow(static_cast<double>(j + 1) + shift, -s);
    sum += fp[j];
  }
  for (double& v : fp) v /= sum;
  return fp;
}

std::vector<double> prefetch_probabilities(std::span<const double> nc, std::span<const double> fp) {
  if (nc.empty() || fp.empty()) throw Error(Errc::DegenerateDistribution, "no candidate nodes or objects");
  for (double v : nc) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::InvalidParams, "centralities must be finite and >= 0");
  }
  for (double v : fp) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(Errc::InvalidParams, "popularities must be finite and >= 0");
  }
  std::vector<double> p(nc.size() * fp.size());
  double total = 0.0;
  for (std::size_t i = 0; i < nc.size(); ++i) {
    for (std::size_t j = 0; j < fp.size(); ++j) {
      p[i * fp.size() + j] = nc[i] * fp[j];
      total += p[i * fp.size() + j];
    }
  }
  if (!(total > 0.0)) throw Error(Errc::DegenerateDistribution, "selection mass is zero");
  for (double& v : p) v /= total;
  return p;
}

std::size_t draw_index(std::span<const double> mass, Rng& rng) {
  double total = 0.0;
  for (double m : mass) total += m;
  if (!(total > 0.0)) throw Error(Errc::DegenerateDistribution, "selection mass is zero");
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = mass.size();
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mass[i] <= 0.0) continue;
    acc += mass[i];
    last = i;
    if (u < acc) return i;
  }
  return last;  // rounding at the top end
}

PrefetchPlan prefetch_plan(std::span<const topology::NodeId> nodes, std::span<const double> nc,
                           std::span<const ilm::GlobalId> objects, std::span<const double> fp, std::size_t budget,
                           std::uint64_t seed) {
  if (nodes.size() != nc.size()) throw Error(Errc::InvalidParams, "one centrality per candidate node");
  if (objects.size() != fp.size()) throw Error(Errc::InvalidParams, "one popularity per object");
  PrefetchPlan plan;
  plan.probabilities = prefetch_probabilities(nc, fp);
  std::vector<double> remaining = plan.probabilities;
  Rng rng(seed);
  std::size_t support = 0;
  for (double p : remaining) support += p > 0.0;
  for (std::size_t b = 0; b < budget && b < support; ++b) {
    const std::size_t cell = draw_index(remaining, rng);
    remaining[cell] = 0.0;
    const std::size_t i = cell / fp.size();
    const std::size_t j = cell % fp.size();
    plan.placements.push_back(Placement{objects[j], nodes[i], plan.probabilities[cell]});
  }
  return plan;
}

}  // namespace sien::userplane
