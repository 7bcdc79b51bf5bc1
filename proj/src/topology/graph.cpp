// SPDX-License-Identifier: Apache-2.0
#include "sien/topology/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <utility>

#include "sien/error.hpp"

namespace sien::topology {

namespace {

constexpr std::pair<NodeKind, std::string_view> kKindNames[] = {
    {NodeKind::server, "server"},
    {NodeKind::switch_, "switch"},
    {NodeKind::access_point, "access_point"},
    {NodeKind::gateway, "gateway"},
    {NodeKind::pc, "pc"},
    {NodeKind::mobile_device, "mobile_device"},
    {NodeKind::mmtc_device, "mmtc_device"},
};

constexpr std::pair<WeightUnit, std::string_view> kUnitNames[] = {
    {WeightUnit::latency_us, "latency_us"},
    {WeightUnit::hops, "hops"},
    {WeightUnit::bandwidth_bps, "bandwidth_bps"},
};

void validate_node(const Node& n) {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::InvalidNode, "node " + std::to_string(n.id) + ": " + why);
  };
  if (n.downlink_bps != limits::kBandwidthRatio * n.uplink_bps) {
    fail("downlink must be 3x uplink");
  }
  if (n.kind == NodeKind::mmtc_device) {
    if (n.compute_hz >= limits::kMmtcComputeHz) fail("mMTC compute must be < 50 MHz");
    if (n.memory_total >= limits::kMmtcMemory) fail("mMTC memory must be < 50 kB");
    if (n.storage >= limits::kMmtcStorage) fail("mMTC storage must be < 300 kB");
  }
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  for (auto [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::string_view to_string(WeightUnit unit) {
  for (auto [u, name] : kUnitNames) {
    if (u == unit) return name;
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view s) {
  for (auto [k, name] : kKindNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

std::optional<WeightUnit> parse_weight_unit(std::string_view s) {
  for (auto [u, name] : kUnitNames) {
    if (name == s) return u;
  }
  return std::nullopt;
}

bool is_forwarding(NodeKind kind) {
  return kind == NodeKind::access_point || kind == NodeKind::switch_ || kind == NodeKind::gateway ||
         kind == NodeKind::server;
}

bool is_end_device(NodeKind kind) {
  return kind == NodeKind::pc || kind == NodeKind::mobile_device || kind == NodeKind::mmtc_device;
}

Node make_node(NodeId id, NodeKind kind) {
  Node n;
  n.id = id;
  n.kind = kind;
  if (kind == NodeKind::mmtc_device) {
    n.memory_total = 32'000;
    n.storage = 256'000;
    n.uplink_bps = 250'000;
    n.downlink_bps = 750'000;
    n.compute_hz = 48'000'000;
  }
  return n;
}

WeightedGraph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, WeightUnit unit) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != i) {
      throw Error(Errc::InvalidNode, "node ids must be dense and ordered; found " +
                                         std::to_string(nodes[i].id) + " at position " + std::to_string(i));
    }
    validate_node(nodes[i]);
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Edge& e : edges) {
    if (e.a >= nodes.size() || e.b >= nodes.size()) {
      throw Error(Errc::DanglingEndpoint,
                  "edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " references an absent node");
    }
    if (e.a == e.b) throw Error(Errc::SelfLoop, "edge on node " + std::to_string(e.a));
    if (e.weight < 0) {
      throw Error(Errc::NegativeWeight, "edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
    }
    if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) {
      throw Error(Errc::DuplicateEdge, "edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
    }
  }
  WeightedGraph g;
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  g.unit_ = unit;
  g.index();
  return g;
}

void WeightedGraph::index() {
  const std::size_t n = nodes_.size();
  offsets_.assign(n + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.assign(offsets_[n], Neighbor{});
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    adjacency_[fill[e.a]++] = {e.b, e.weight, i};
    adjacency_[fill[e.b]++] = {e.a, e.weight, i};
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1],
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
}

WeightedGraph WeightedGraph::with_weights(std::span<const Distance> weights) const {
  if (weights.size() != edges_.size()) {
    throw Error(Errc::InvalidParams, "weight count does not match edge count");
  }
  std::vector<Edge> edges = edges_;
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i].weight = weights[i];
  return build_graph(nodes_, std::move(edges), unit_);
}

std::vector<std::optional<Distance>> distances_from(const WeightedGraph& g, NodeId source, DistanceMode mode) {
  const std::size_t n = g.node_count();
  std::vector<std::optional<Distance>> dist(n);
  if (source >= n) throw Error(Errc::InvalidParams, "node " + std::to_string(source) + " not in graph");
  if (mode == DistanceMode::additive) {
    using Item = std::pair<Distance, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0;
    pq.emplace(0, source);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d != *dist[v]) continue;
      for (const Neighbor& nb : g.neighbors(v)) {
        const Distance nd = d + nb.weight;
        if (!dist[nb.node] || nd < *dist[nb.node]) {
          dist[nb.node] = nd;
          pq.emplace(nd, nb.node);
        }
      }
    }
  } else {
    // Widest path: maximize the minimum edge along the path.
    using Item = std::pair<Distance, NodeId>;
    std::priority_queue<Item> pq;
    dist[source] = kUnconstrained;
    pq.emplace(kUnconstrained, source);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d != *dist[v]) continue;
      for (const Neighbor& nb : g.neighbors(v)) {
        const Distance nd = std::min(d, nb.weight);
        if (!dist[nb.node] || nd > *dist[nb.node]) {
          dist[nb.node] = nd;
          pq.emplace(nd, nb.node);
        }
      }
    }
  }
  return dist;
}

std::optional<Distance> measure_distance(const WeightedGraph& g, NodeId a, NodeId b, DistanceMode mode) {
  if (!g.contains(a) || !g.contains(b)) {
    throw Error(Errc::InvalidParams, "node not in graph");
  }
  if (a == b) return mode == DistanceMode::additive ? Distance{0} : kUnconstrained;
  return distances_from(g, a, mode)[b];
}

std::optional<std::uint32_t> hop_distance(const WeightedGraph& g, NodeId a, NodeId b) {
  if (!g.contains(a) || !g.contains(b)) throw Error(Errc::InvalidParams, "node not in graph");
  if (a == b) return 0u;
  std::vector<std::uint32_t> dist(g.node_count(), UINT32_MAX);
  std::queue<NodeId> q;
  dist[a] = 0;
  q.push(a);
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    for (const Neighbor& nb : g.neighbors(v)) {
      if (dist[nb.node] != UINT32_MAX) continue;
      dist[nb.node] = dist[v] + 1;
      if (nb.node == b) return dist[b];
      q.push(nb.node);
    }
  }
  return std::nullopt;
}

double node_centrality(const WeightedGraph& g, NodeId v) {
  if (!g.contains(v)) throw Error(Errc::InvalidParams, "node not in graph");
  if (g.node_count() == 1) return 1.0;
  return static_cast<double>(g.degree(v)) / static_cast<double>(g.node_count() - 1);
}

std::vector<std::uint32_t> connected_components(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::uint32_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != UINT32_MAX) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(v)) {
        if (comp[nb.node] == UINT32_MAX) {
          comp[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return comp;
}

}  // namespace sien::topology
