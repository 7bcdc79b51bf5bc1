// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sien/ilm/ids.hpp"
#include "sien/rng.hpp"
#include "sien/topology/graph.hpp"

namespace sien::userplane {

// fp_j = c / (j + shift)^s for ranks j = 1..J, summing to 1.
// Throws InvalidParams.
std::vector<double> zipf_popularity(std::size_t catalog_size, double s, double shift);

// Selection probabilities p_ij = nc_i fp_j / sum nc fp, node-major:
// index = i * J + j. Throws DegenerateDistribution, InvalidParams.
std::vector<double> prefetch_probabilities(std::span<const double> nc, std::span<const double> fp);

// One inverse-CDF draw over a mass vector (need not be normalized), skipping
// entries whose mass is zero. Returns the index.
std::size_t draw_index(std::span<const double> mass, Rng& rng);

struct Placement {
  ilm::GlobalId object;
  topology::NodeId node = 0;
  double probability = 0.0;  // p_ij of the drawn cell
};

struct PrefetchPlan {
  std::vector<double> probabilities;  // full I x J support, node-major
  std::vector<Placement> placements;  // in draw order
};

// Draws `budget` distinct (node, object) cells without replacement. A
// budget beyond the support places every cell. The first b draws of a plan
// are the plan with budget b. Throws DegenerateDistribution, InvalidParams.
PrefetchPlan prefetch_plan(std::span<const topology::NodeId> nodes, std::span<const double> nc,
                           std::span<const ilm::GlobalId> objects, std::span<const double> fp, std::size_t budget,
                           std::uint64_t seed);

}  // namespace sien::userplane
