// SPDX-License-Identifier: Apache-2.0
// Small graph builders and brute-force oracles shared by the unit tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "sien/rng.hpp"
#include "sien/topology/graph.hpp"

namespace sien::testing {

using topology::Distance;
using topology::Edge;
using topology::NodeId;
using topology::NodeKind;
using topology::WeightedGraph;
using topology::WeightUnit;

inline std::vector<topology::Node> plain_nodes(std::size_t n, NodeKind kind = NodeKind::switch_) {
  std::vector<topology::Node> nodes;
  for (NodeId i = 0; i < n; ++i) nodes.push_back(topology::make_node(i, kind));
  return nodes;
}

inline WeightedGraph make_graph(std::size_t n, std::vector<Edge> edges, WeightUnit unit = WeightUnit::latency_us,
                                NodeKind kind = NodeKind::switch_) {
  return topology::build_graph(plain_nodes(n, kind), std::move(edges), unit);
}

// Random simple graph with each pair linked with probability p.
inline WeightedGraph random_graph(Rng& rng, std::size_t n, double p, Distance wmin, Distance wmax,
                                  WeightUnit unit = WeightUnit::latency_us) {
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (rng.bernoulli(p)) {
        edges.push_back({a, b, static_cast<Distance>(rng.uniform_int(wmin, wmax))});
      }
    }
  }
  return make_graph(n, std::move(edges), unit);
}

// Random tree: node i > 0 attaches to a uniformly chosen earlier node.
inline WeightedGraph random_tree(Rng& rng, std::size_t n, Distance wmin = 1, Distance wmax = 10) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) {
    edges.push_back({static_cast<NodeId>(rng.uniform_int(0, v - 1)), v, static_cast<Distance>(rng.uniform_int(wmin, wmax))});
  }
  return make_graph(n, std::move(edges));
}

// Enumerates every simple path from a to b and folds it: additive takes the
// minimum sum, bottleneck the maximum over paths of the minimum edge, hops
// the fewest edges.
struct PathOracle {
  const WeightedGraph& g;
  enum class Fold { additive, bottleneck, hops };

  std::optional<Distance> best(NodeId a, NodeId b, Fold fold) const {
    if (a == b) return fold == Fold::bottleneck ? topology::kUnconstrained : 0;
    std::vector<std::uint8_t> on(g.node_count(), 0);
    std::optional<Distance> result;
    walk(a, b, fold, on, fold == Fold::bottleneck ? topology::kUnconstrained : 0, result);
    return result;
  }

 private:
  void walk(NodeId v, NodeId b, Fold fold, std::vector<std::uint8_t>& on, Distance acc,
            std::optional<Distance>& result) const {
    on[v] = 1;
    for (const auto& nb : g.neighbors(v)) {
      if (on[nb.node]) continue;
      Distance next = 0;
      switch (fold) {
        case Fold::additive: next = acc + nb.weight; break;
        case Fold::bottleneck: next = std::min(acc, nb.weight); break;
        case Fold::hops: next = acc + 1; break;
      }
      if (nb.node == b) {
        if (!result) {
          result = next;
        } else {
          result = fold == Fold::bottleneck ? std::max(*result, next) : std::min(*result, next);
        }
        continue;
      }
      walk(nb.node, b, fold, on, next, result);
    }
    on[v] = 0;
  }
};

}  // namespace sien::testing
