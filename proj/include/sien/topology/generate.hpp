// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "sien/topology/graph.hpp"

namespace sien::topology {

enum class Scenario { embb, urllc, mmtc };

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view s);

// Shape of the generated tree:
//   root server -- origin servers
//               -- region switches -- access points -- end devices
//                                                   -- gateways -- mMTC devices (mMTC only)
// Access links stay under 1 ms so an access point and its attachments form a
// sub-millisecond cluster; aggregation links draw from [L, 2L] and core links
// from [C, 2C].
struct TopologyParams {
  Scenario scenario = Scenario::embb;
  std::uint32_t regions = 4;
  std::uint32_t aps_per_region = 4;
  std::uint32_t devices_per_ap = 8;
  std::uint32_t origin_servers = 2;
  // mMTC device count = round(density_per_km2 * area_km2).
  double area_km2 = 1.0;
  std::uint64_t density_per_km2 = 63'000;
  std::uint32_t devices_per_gateway = 120;
  Distance access_latency_min_us = 50;
  Distance access_latency_max_us = 450;
  Distance aggregation_latency_us = 5'000;
  Distance core_latency_us = 160'000;
};

// Roles of the generated nodes, kept alongside the graph so the simulation
// knows who publishes and who subscribes.
struct TopologyLayout {
  NodeId root = 0;
  std::vector<NodeId> origin_servers;
  std::vector<NodeId> switches;
  std::vector<NodeId> access_points;
  std::vector<NodeId> subscribers;   // pcs and mobile devices
  std::vector<NodeId> gateways;
  std::vector<NodeId> mmtc_devices;
  std::vector<NodeId> gateway_of;    // per node; gateway serving an mMTC device, else UINT32_MAX
};

struct GeneratedTopology {
  WeightedGraph graph;
  TopologyLayout layout;
};

std::uint64_t mmtc_device_count(const TopologyParams& p);

// Pure function of (params, seed). Throws InvalidParams.
GeneratedTopology generate_topology(const TopologyParams& params, std::uint64_t seed);

// Recovers the role layout of a graph produced by generate_topology (for
// graphs loaded from disk).
TopologyLayout infer_layout(const WeightedGraph& g);

}  // namespace sien::topology
