// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sien/topology/graph.hpp"

namespace sien::evaluation {

struct RequestRecord {
  std::size_t n = 0;
  std::vector<std::uint32_t> paths;  // H_nj, one per routing path
  std::uint64_t volume = 0;          // V_n bytes
  std::uint32_t baseline_hops = 0;   // H_cn without caching or prefetching
};

// Numerator and denominator of the offloading ratio, summed exactly:
//   sum_n (J_n H_cn - sum_j H_nj) V_n  /  sum_n J_n H_cn V_n
struct ItoTerms {
  __int128 numerator = 0;
  __int128 denominator = 0;
  double ratio() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

// Throws EmptyLog, InvalidRecord, ZeroDenominator.
ItoTerms ito_terms(std::span<const RequestRecord> records);
double compute_ito(std::span<const RequestRecord> records);

// Fewest hops between the two nodes on the raw topology. Throws Unreachable,
// InvalidNode.
std::uint32_t baseline_hops(const topology::WeightedGraph& g, topology::NodeId requester, topology::NodeId publisher);

}  // namespace sien::evaluation
