// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sien/topology/graph.hpp"

namespace sien::userplane {

using topology::NodeId;

// Hop distances and shortest-path next hops. Trees (every generated
// topology) use an ancestor index; other graphs fall back to cached
// breadth-first searches. Next hops follow the lexicographically smallest
// shortest path.
class HopIndex {
 public:
  static constexpr std::uint32_t kUnreachable = UINT32_MAX;

  enum class Strategy { automatic, breadth_first };

  explicit HopIndex(const topology::WeightedGraph& g, Strategy s = Strategy::automatic);

  bool uses_tree() const { return tree_; }
  std::uint32_t hops(NodeId a, NodeId b) const;
  // Next node from `from` towards `to`; nullopt when from == to or unreachable.
  std::optional<NodeId> next_hop(NodeId from, NodeId to) const;

 private:
  std::uint32_t lca(NodeId a, NodeId b) const;
  std::uint32_t ancestor(NodeId v, std::uint32_t up) const;
  const std::vector<std::uint32_t>& bfs_from(NodeId target) const;

  const topology::WeightedGraph* g_;
  bool tree_ = false;
  std::vector<std::uint32_t> depth_;
  std::vector<std::uint32_t> component_;
  std::vector<std::vector<std::uint32_t>> up_;  // up_[k][v] = 2^k-th ancestor
  std::vector<std::uint32_t> tin_, tout_;
  mutable std::unordered_map<NodeId, std::vector<std::uint32_t>> bfs_cache_;
};

}  // namespace sien::userplane
