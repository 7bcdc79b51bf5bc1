// SPDX-License-Identifier: Apache-2.0
#include "sien/userplane/hops.hpp"

#include <deque>

#include "sien/error.hpp"

namespace sien::userplane {

namespace {
constexpr std::size_t kBfsCacheLimit = 256;
}

HopIndex::HopIndex(const topology::WeightedGraph& g, Strategy s) : g_(&g) {
  const std::size_t n = g.node_count();
  component_.assign(n, kUnreachable);
  std::uint32_t comps = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (component_[v] != kUnreachable) continue;
    std::deque<NodeId> q{v};
    component_[v] = comps;
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop_front();
      for (const auto& nb : g.neighbors(u)) {
        if (component_[nb.node] == kUnreachable) {
          component_[nb.node] = comps;
          q.push_back(nb.node);
        }
      }
    }
    ++comps;
  }
  tree_ = s == Strategy::automatic && n > 0 && g.edges().size() + comps == n;
  if (!tree_) return;

  // Iterative DFS from each component's smallest node.
  depth_.assign(n, 0);
  tin_.assign(n, 0);
  tout_.assign(n, 0);
  std::size_t levels = 1;
  while ((std::size_t{1} << levels) < n) ++levels;
  up_.assign(levels, std::vector<std::uint32_t>(n, 0));
  std::vector<std::uint8_t> seen(n, 0);
  std::uint32_t clock = 0;
  for (NodeId r = 0; r < n; ++r) {
    if (seen[r]) continue;
    std::vector<std::pair<NodeId, std::size_t>> stack{{r, 0}};
    seen[r] = 1;
    up_[0][r] = r;
    tin_[r] = clock++;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto nbs = g.neighbors(u);
      if (next < nbs.size()) {
        const NodeId v = nbs[next++].node;
        if (seen[v]) continue;
        seen[v] = 1;
        depth_[v] = depth_[u] + 1;
        up_[0][v] = u;
        tin_[v] = clock++;
        stack.emplace_back(v, 0);
      } else {
        tout_[u] = clock++;
        stack.pop_back();
      }
    }
  }
  for (std::size_t k = 1; k < levels; ++k) {
    for (NodeId v = 0; v < n; ++v) up_[k][v] = up_[k - 1][up_[k - 1][v]];
  }
}

std::uint32_t HopIndex::ancestor(NodeId v, std::uint32_t up) const {
  for (std::size_t k = 0; up; ++k, up >>= 1) {
    if (up & 1) v = up_[k][v];
  }
  return v;
}

std::uint32_t HopIndex::lca(NodeId a, NodeId b) const {
  if (depth_[a] < depth_[b]) std::swap(a, b);
  a = ancestor(a, depth_[a] - depth_[b]);
  if (a == b) return a;
  for (std::size_t k = up_.size(); k-- > 0;) {
    if (up_[k][a] != up_[k][b]) {
      a = up_[k][a];
      b = up_[k][b];
    }
  }
  return up_[0][a];
}

const std::vector<std::uint32_t>& HopIndex::bfs_from(NodeId target) const {
  if (auto it = bfs_cache_.find(target); it != bfs_cache_.end()) return it->second;
  if (bfs_cache_.size() >= kBfsCacheLimit) bfs_cache_.clear();
  std::vector<std::uint32_t> d(g_->node_count(), kUnreachable);
  std::deque<NodeId> q{target};
  d[target] = 0;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (const auto& nb : g_->neighbors(u)) {
      if (d[nb.node] == kUnreachable) {
        d[nb.node] = d[u] + 1;
        q.push_back(nb.node);
      }
    }
  }
  return bfs_cache_.emplace(target, std::move(d)).first->second;
}

std::uint32_t HopIndex::hops(NodeId a, NodeId b) const {
  const std::size_t n = g_->node_count();
  if (a >= n || b >= n) throw Error(Errc::InvalidNode, "hop query outside the graph");
  if (component_[a] != component_[b]) return kUnreachable;
  if (tree_) return depth_[a] + depth_[b] - 2 * depth_[lca(a, b)];
  return bfs_from(b)[a];
}

std::optional<NodeId> HopIndex::next_hop(NodeId from, NodeId to) const {
  const std::uint32_t d = hops(from, to);
  if (d == 0 || d == kUnreachable) return std::nullopt;
  if (tree_) {
    const bool below = tin_[from] < tin_[to] && tout_[to] < tout_[from];
    if (!below) return up_[0][from];
    return ancestor(to, depth_[to] - depth_[from] - 1);
  }
  const auto& dist = bfs_from(to);
  for (const auto& nb : g_->neighbors(from)) {
    if (dist[nb.node] == d - 1) return nb.node;
  }
  return std::nullopt;
}

}  // namespace sien::userplane
