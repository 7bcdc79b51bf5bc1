// SPDX-License-Identifier: Apache-2.0
#include "sien/topology/generate.hpp"

#include <cmath>
#include <string>

#include "sien/error.hpp"
#include "sien/rng.hpp"

namespace sien::topology {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::embb: return "embb";
    case Scenario::urllc: return "urllc";
    case Scenario::mmtc: return "mmtc";
  }
  return "?";
}

std::optional<Scenario> parse_scenario(std::string_view s) {
  if (s == "embb" || s == "eMBB") return Scenario::embb;
  if (s == "urllc" || s == "URLLC") return Scenario::urllc;
  if (s == "mmtc" || s == "mMTC") return Scenario::mmtc;
  return std::nullopt;
}

std::uint64_t mmtc_device_count(const TopologyParams& p) {
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(p.density_per_km2) * p.area_km2));
}

namespace {

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::InvalidParams, what);
}

class Builder {
 public:
  explicit Builder(std::uint64_t seed) : rng_(seed) {}

  NodeId add(NodeKind kind) {
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(make_node(id, kind));
    return id;
  }

  void link(NodeId a, NodeId b, Distance lo, Distance hi) {
    const auto w = static_cast<Distance>(rng_.uniform_int(static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)));
    edges_.push_back({a, b, w});
  }

  WeightedGraph finish() { return build_graph(std::move(nodes_), std::move(edges_), WeightUnit::latency_us); }

 private:
  Rng rng_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

}  // namespace

GeneratedTopology generate_topology(const TopologyParams& p, std::uint64_t seed) {
  check(p.regions >= 1, "regions must be >= 1");
  check(p.aps_per_region >= 1, "aps_per_region must be >= 1");
  check(p.devices_per_ap >= 1, "devices_per_ap must be >= 1");
  check(p.access_latency_min_us >= 0 && p.access_latency_min_us <= p.access_latency_max_us,
        "access latency range is empty");
  check(p.aggregation_latency_us >= 0, "aggregation latency must be >= 0");
  check(p.core_latency_us >= 0, "core latency must be >= 0");
  std::uint64_t mmtc_devices = 0;
  std::uint64_t gateway_count = 0;
  if (p.scenario == Scenario::mmtc) {
    check(p.area_km2 > 0.0 && std::isfinite(p.area_km2), "area_km2 must be positive");
    check(p.devices_per_gateway >= 1, "devices_per_gateway must be >= 1");
    mmtc_devices = mmtc_device_count(p);
    check(mmtc_devices >= 1, "mMTC scenario needs at least one device");
    gateway_count = (mmtc_devices + p.devices_per_gateway - 1) / p.devices_per_gateway;
  }

  Builder b(seed);
  GeneratedTopology out;
  TopologyLayout& lay = out.layout;
  const Distance core_lo = p.core_latency_us, core_hi = 2 * p.core_latency_us;
  const Distance agg_lo = p.aggregation_latency_us, agg_hi = 2 * p.aggregation_latency_us;
  const Distance acc_lo = p.access_latency_min_us, acc_hi = p.access_latency_max_us;

  lay.root = b.add(NodeKind::server);
  for (std::uint32_t s = 0; s < p.origin_servers; ++s) {
    const NodeId id = b.add(NodeKind::server);
    b.link(lay.root, id, core_lo, core_hi);
    lay.origin_servers.push_back(id);
  }
  const std::uint64_t ap_total = std::uint64_t{p.regions} * p.aps_per_region;
  std::uint64_t ap_index = 0;
  std::uint64_t gateways_done = 0;
  std::uint64_t devices_done = 0;
  const std::uint64_t base_per_gw = gateway_count ? mmtc_devices / gateway_count : 0;
  const std::uint64_t extra_gw = gateway_count ? mmtc_devices % gateway_count : 0;
  for (std::uint32_t r = 0; r < p.regions; ++r) {
    const NodeId sw = b.add(NodeKind::switch_);
    b.link(lay.root, sw, core_lo, core_hi);
    lay.switches.push_back(sw);
    for (std::uint32_t a = 0; a < p.aps_per_region; ++a, ++ap_index) {
      const NodeId ap = b.add(NodeKind::access_point);
      b.link(sw, ap, agg_lo, agg_hi);
      lay.access_points.push_back(ap);
      for (std::uint32_t d = 0; d < p.devices_per_ap; ++d) {
        const NodeId dev = b.add(d % 4 == 3 ? NodeKind::pc : NodeKind::mobile_device);
        b.link(ap, dev, acc_lo, acc_hi);
        lay.subscribers.push_back(dev);
      }
      // Gateways are spread round-robin over access points.
      const std::uint64_t gws_here =
          gateway_count / ap_total + (ap_index < gateway_count % ap_total ? 1 : 0);
      for (std::uint64_t g = 0; g < gws_here; ++g, ++gateways_done) {
        const NodeId gw = b.add(NodeKind::gateway);
        b.link(ap, gw, acc_lo, acc_hi);
        lay.gateways.push_back(gw);
        const std::uint64_t devs = base_per_gw + (gateways_done < extra_gw ? 1 : 0);
        for (std::uint64_t k = 0; k < devs; ++k, ++devices_done) {
          const NodeId m = b.add(NodeKind::mmtc_device);
          b.link(gw, m, acc_lo, acc_hi);
          lay.mmtc_devices.push_back(m);
        }
      }
    }
  }
  out.graph = b.finish();
  lay.gateway_of.assign(out.graph.node_count(), UINT32_MAX);
  for (NodeId gw : lay.gateways) {
    for (const Neighbor& nb : out.graph.neighbors(gw)) {
      if (out.graph.node(nb.node).kind == NodeKind::mmtc_device) lay.gateway_of[nb.node] = gw;
    }
  }
  return out;
}

TopologyLayout infer_layout(const WeightedGraph& g) {
  TopologyLayout lay;
  lay.gateway_of.assign(g.node_count(), UINT32_MAX);
  bool root_set = false;
  for (const Node& n : g.nodes()) {
    switch (n.kind) {
      case NodeKind::server:
        if (!root_set) {
          lay.root = n.id;
          root_set = true;
        } else {
          lay.origin_servers.push_back(n.id);
        }
        break;
      case NodeKind::switch_: lay.switches.push_back(n.id); break;
      case NodeKind::access_point: lay.access_points.push_back(n.id); break;
      case NodeKind::gateway: lay.gateways.push_back(n.id); break;
      case NodeKind::pc:
      case NodeKind::mobile_device: lay.subscribers.push_back(n.id); break;
      case NodeKind::mmtc_device: lay.mmtc_devices.push_back(n.id); break;
    }
  }
  for (NodeId gw : lay.gateways) {
    for (const Neighbor& nb : g.neighbors(gw)) {
      if (g.node(nb.node).kind == NodeKind::mmtc_device) lay.gateway_of[nb.node] = gw;
    }
  }
  return lay;
}

}  // namespace sien::topology
