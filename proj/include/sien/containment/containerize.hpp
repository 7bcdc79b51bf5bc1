// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sien/topology/graph.hpp"

namespace sien::containment {

using topology::Distance;
using topology::NodeId;
using topology::WeightedGraph;
using topology::WeightUnit;

enum class TargetMode {
  additive,    // accumulated by summation (latency, hops)
  bottleneck,  // accumulated by the minimum edge (bandwidth)
  exact_hit,   // additive with a closed bound
};

std::string_view to_string(TargetMode m);
std::optional<TargetMode> parse_target_mode(std::string_view s);

struct Target {
  std::uint32_t level = 1;
  Distance value = 0;
  TargetMode mode = TargetMode::additive;
  WeightUnit unit = WeightUnit::latency_us;
};

// Parses "1ms", "150ms:additive", "500us", "3hops", "100Mbps:bottleneck".
// Missing mode defaults to additive for latency/hops, bottleneck for bandwidth.
Target parse_target(std::string_view text, std::uint32_t level);

// Parses a comma-separated list; all entries must share one unit.
std::vector<Target> parse_targets(std::string_view text);

struct Container {
  std::uint32_t level = 1;  // 1-based
  std::uint32_t index = 1;  // 1-based within the level
  std::vector<NodeId> members;          // ascending
  std::vector<std::uint32_t> children;  // 0-based positions in the level below
};

struct ContainerHierarchy {
  std::size_t node_count = 0;
  std::vector<Target> targets;
  std::vector<std::vector<Container>> levels;  // levels[0] is level 1

  std::size_t level_count() const { return levels.size(); }
  // 0-based container position per node at a 0-based level; UINT32_MAX if absent.
  std::vector<std::uint32_t> membership(std::size_t level) const;
};

// One level of the greedy containerization. seed_order empty = ascending ids.
// Throws UnitMismatch.
std::vector<Container> containerize_level(const WeightedGraph& g, const Target& t,
                                          std::span<const NodeId> seed_order = {});

// Multi-level hierarchy: level 1 on g, each higher level on the quotient
// graph of the level below. Throws UnitMismatch, InvalidTargets.
ContainerHierarchy containerize(const WeightedGraph& g, std::span<const Target> targets);

// Checks the target sequence (levels increasing, distinct values, positive,
// tighter targets at lower levels). Throws InvalidTargets / UnitMismatch.
void validate_targets(std::span<const Target> targets, WeightUnit graph_unit);

struct Violation {
  enum class Kind { disjointness, coverage, nesting, unknown_member };
  Kind kind;
  std::uint32_t level;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t count(Violation::Kind k) const;
};

ValidationReport validate_hierarchy(const ContainerHierarchy& h);

// `container <level> <index> <member-ids comma-separated>`, ordered by (level, index).
void write_hierarchy(std::ostream& out, const ContainerHierarchy& h);
std::string format_hierarchy(const ContainerHierarchy& h);

}  // namespace sien::containment
