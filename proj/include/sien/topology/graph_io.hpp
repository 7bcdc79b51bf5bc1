// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sien/topology/graph.hpp"

namespace sien::topology {

// Line-oriented text:
//   graph <unit> <node_count>
//   node <id> <kind> <mem> <storage> <down_bps> <up_bps> <compute_hz>
//   edge <a> <b> <weight>
void write_graph(std::ostream& out, const WeightedGraph& g);
std::string format_graph(const WeightedGraph& g);

// Throws ParseError plus everything build_graph throws.
WeightedGraph read_graph(std::istream& in);
WeightedGraph parse_graph(const std::string& text);
WeightedGraph load_graph(const std::filesystem::path& path);

}  // namespace sien::topology
