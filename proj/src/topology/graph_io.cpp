// SPDX-License-Identifier: Apache-2.0
#include "sien/topology/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "sien/error.hpp"

namespace sien::topology {

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << "graph " << to_string(g.unit()) << ' ' << g.node_count() << '\n';
  for (const Node& n : g.nodes()) {
    out << "node " << n.id << ' ' << to_string(n.kind) << ' ' << n.memory_total << ' ' << n.storage << ' '
        << n.downlink_bps << ' ' << n.uplink_bps << ' ' << n.compute_hz << '\n';
  }
  for (const Edge& e : g.edges()) {
    out << "edge " << e.a << ' ' << e.b << ' ' << e.weight << '\n';
  }
}

std::string format_graph(const WeightedGraph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

namespace {

template <typename T>
T parse_num(std::string_view tok, std::size_t line) {
  T v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

WeightedGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<WeightUnit> unit;
  std::size_t expected_nodes = 0;
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split(line);
    if (tok.empty()) continue;
    auto need = [&](std::size_t n) {
      if (tok.size() != n) {
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected " + std::to_string(n) +
                                          " fields, got " + std::to_string(tok.size()));
      }
    };
    if (tok[0] == "graph") {
      need(3);
      if (unit) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": duplicate header");
      unit = parse_weight_unit(tok[1]);
      if (!unit) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown unit");
      expected_nodes = parse_num<std::size_t>(tok[2], lineno);
      nodes.reserve(expected_nodes);
    } else if (!unit) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": missing graph header");
    } else if (tok[0] == "node") {
      need(8);
      Node n;
      n.id = parse_num<NodeId>(tok[1], lineno);
      auto kind = parse_node_kind(tok[2]);
      if (!kind) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown node kind");
      n.kind = *kind;
      n.memory_total = parse_num<std::uint64_t>(tok[3], lineno);
      n.storage = parse_num<std::uint64_t>(tok[4], lineno);
      n.downlink_bps = parse_num<std::uint64_t>(tok[5], lineno);
      n.uplink_bps = parse_num<std::uint64_t>(tok[6], lineno);
      n.compute_hz = parse_num<std::uint64_t>(tok[7], lineno);
      nodes.push_back(n);
    } else if (tok[0] == "edge") {
      need(4);
      edges.push_back({parse_num<NodeId>(tok[1], lineno), parse_num<NodeId>(tok[2], lineno),
                       parse_num<Distance>(tok[3], lineno)});
    } else {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": unknown record '" + std::string(tok[0]) + "'");
    }
  }
  if (!unit) throw Error(Errc::ParseError, "missing graph header");
  if (nodes.size() != expected_nodes) {
    throw Error(Errc::ParseError, "header declares " + std::to_string(expected_nodes) + " nodes, found " +
                                      std::to_string(nodes.size()));
  }
  return build_graph(std::move(nodes), std::move(edges), *unit);
}

WeightedGraph parse_graph(const std::string& text) {
  std::istringstream is(text);
  return read_graph(is);
}

WeightedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return read_graph(in);
}

}  // namespace sien::topology
