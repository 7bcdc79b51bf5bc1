// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sien::topology {

using NodeId = std::uint32_t;

// Latency in integer microseconds, hop counts, or bandwidth in bits/s,
// depending on the graph's WeightUnit.
using Distance = std::int64_t;

// Bottleneck distance of a node to itself: unconstrained.
inline constexpr Distance kUnconstrained = std::numeric_limits<Distance>::max();

enum class NodeKind { server, switch_, access_point, gateway, pc, mobile_device, mmtc_device };

enum class WeightUnit { latency_us, hops, bandwidth_bps };

enum class DistanceMode { additive, bottleneck };

std::string_view to_string(NodeKind kind);
std::string_view to_string(WeightUnit unit);
std::optional<NodeKind> parse_node_kind(std::string_view s);
std::optional<WeightUnit> parse_weight_unit(std::string_view s);

// Forwarding elements carry requests hop by hop (APs, switches, gateways,
// and the data-center server at the core).
bool is_forwarding(NodeKind kind);
bool is_end_device(NodeKind kind);

// Resource limits of network elements.
namespace limits {
inline constexpr std::uint64_t kDefaultMemory = 8'000'000'000ULL;       // 8 GB
inline constexpr std::uint64_t kDefaultStorage = 64'000'000'000ULL;
inline constexpr std::uint64_t kDefaultDownlinkBps = 1'200'000'000ULL;  // 1.2 Gb/s
inline constexpr std::uint64_t kDefaultUplinkBps = 400'000'000ULL;
inline constexpr std::uint64_t kDefaultComputeHz = 2'100'000'000ULL;
inline constexpr std::uint64_t kBandwidthRatio = 3;  // downlink / uplink

// mMTC devices are strictly below these.
inline constexpr std::uint64_t kMmtcComputeHz = 50'000'000ULL;
inline constexpr std::uint64_t kMmtcMemory = 50'000ULL;
inline constexpr std::uint64_t kMmtcStorage = 300'000ULL;
inline constexpr std::uint64_t kMmtcPayload = 128ULL;
}  // namespace limits

// 80% of memory is reserved for audio-visual media.
constexpr std::uint64_t media_partition(std::uint64_t memory_total) {
  return memory_total / 5 * 4 + (memory_total % 5) * 4 / 5;
}

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::server;
  std::uint64_t memory_total = limits::kDefaultMemory;
  std::uint64_t storage = limits::kDefaultStorage;
  std::uint64_t downlink_bps = limits::kDefaultDownlinkBps;
  std::uint64_t uplink_bps = limits::kDefaultUplinkBps;
  std::uint64_t compute_hz = limits::kDefaultComputeHz;

  std::uint64_t memory_media_partition() const { return media_partition(memory_total); }
  std::uint64_t memory_other_partition() const { return memory_total - memory_media_partition(); }

  bool operator==(const Node&) const = default;
};

// Default resources for a node of the given kind.
Node make_node(NodeId id, NodeKind kind);

struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  Distance weight = 0;

  bool operator==(const Edge&) const = default;
};

struct Neighbor {
  NodeId node;
  Distance weight;
  std::uint32_t edge;
};

// Undirected weighted graph G(V, E, W). Immutable after construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  WeightUnit unit() const { return unit_; }

  const Node& node(NodeId v) const { return nodes_.at(v); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Neighbor> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool contains(NodeId v) const { return v < nodes_.size(); }

  // Copy with edge weights replaced; same structure, same unit.
  WeightedGraph with_weights(std::span<const Distance> weights) const;

  bool operator==(const WeightedGraph& o) const {
    return unit_ == o.unit_ && nodes_ == o.nodes_ && edges_ == o.edges_;
  }

  friend WeightedGraph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, WeightUnit unit);

 private:
  void index();

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  WeightUnit unit_ = WeightUnit::latency_us;
  std::vector<std::uint32_t> offsets_;
  std::vector<Neighbor> adjacency_;  // sorted by neighbor id per node
};

// Validates and builds. Node ids must be dense: nodes[i].id == i.
// Throws DanglingEndpoint, DuplicateEdge, NegativeWeight, SelfLoop, InvalidNode.
WeightedGraph build_graph(std::vector<Node> nodes, std::vector<Edge> edges, WeightUnit unit);

// Additive: shortest-path sum. Bottleneck: widest path (max over paths of
// the min edge). a == b gives 0 / kUnconstrained. nullopt when unreachable.
std::optional<Distance> measure_distance(const WeightedGraph& g, NodeId a, NodeId b, DistanceMode mode);

// Single-source variant; unreachable entries are nullopt.
std::vector<std::optional<Distance>> distances_from(const WeightedGraph& g, NodeId source, DistanceMode mode);

// Fewest-hops distance; nullopt when unreachable.
std::optional<std::uint32_t> hop_distance(const WeightedGraph& g, NodeId a, NodeId b);

// Normalized degree centrality, degree / (n - 1); 1 for a single-node graph.
double node_centrality(const WeightedGraph& g, NodeId v);

// Connected component index per node, components numbered by smallest member.
std::vector<std::uint32_t> connected_components(const WeightedGraph& g);

}  // namespace sien::topology
