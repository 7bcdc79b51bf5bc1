// SPDX-License-Identifier: Apache-2.0
#include "sien/containment/containerize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include "sien/error.hpp"

namespace sien::containment {

std::string_view to_string(TargetMode m) {
  switch (m) {
    case TargetMode::additive: return "additive";
    case TargetMode::bottleneck: return "bottleneck";
    case TargetMode::exact_hit: return "exact_hit";
  }
  return "?";
}

std::optional<TargetMode> parse_target_mode(std::string_view s) {
  if (s == "additive") return TargetMode::additive;
  if (s == "bottleneck") return TargetMode::bottleneck;
  if (s == "exact_hit" || s == "exact") return TargetMode::exact_hit;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

struct UnitScale {
  std::string_view suffix;
  WeightUnit unit;
  double scale;
};

// Longest suffixes first so "ms" is not read as "s".
constexpr UnitScale kUnits[] = {
    {"Gbps", WeightUnit::bandwidth_bps, 1e9}, {"Mbps", WeightUnit::bandwidth_bps, 1e6},
    {"kbps", WeightUnit::bandwidth_bps, 1e3}, {"hops", WeightUnit::hops, 1.0},
    {"bps", WeightUnit::bandwidth_bps, 1.0},  {"hop", WeightUnit::hops, 1.0},
    {"us", WeightUnit::latency_us, 1.0},      {"ms", WeightUnit::latency_us, 1e3},
    {"s", WeightUnit::latency_us, 1e6},
};

bool mode_fits_unit(TargetMode m, WeightUnit u) {
  if (m == TargetMode::bottleneck) return u == WeightUnit::bandwidth_bps;
  return u != WeightUnit::bandwidth_bps;
}

// Graph used at each level: node count plus weighted undirected edges.
struct LevelGraph {
  std::size_t n = 0;
  std::vector<std::vector<std::pair<std::uint32_t, Distance>>> adj;
};

LevelGraph from_graph(const WeightedGraph& g) {
  LevelGraph lg;
  lg.n = g.node_count();
  lg.adj.resize(lg.n);
  for (NodeId v = 0; v < lg.n; ++v) {
    for (const auto& nb : g.neighbors(v)) lg.adj[v].emplace_back(nb.node, nb.weight);
  }
  return lg;
}

bool edge_kept(const Target& t, Distance w) {
  // Bottleneck mode drops sub-target edges; additive modes keep every edge.
  return t.mode != TargetMode::bottleneck || w >= t.value;
}

Distance contracted(const Target& t, Distance w) { return w < t.value ? 0 : w; }

bool within(const Target& t, Distance d) {
  return t.mode == TargetMode::exact_hit ? d <= t.value : d < t.value;
}

// Greedy grouping on one level graph; members are level-graph node ids.
std::vector<std::vector<std::uint32_t>> group(const LevelGraph& lg, const Target& t,
                                              std::span<const NodeId> seed_order) {
  std::vector<std::uint32_t> order;
  if (seed_order.empty()) {
    order.resize(lg.n);
    for (std::uint32_t i = 0; i < lg.n; ++i) order[i] = i;
  } else {
    if (seed_order.size() != lg.n) throw Error(Errc::InvalidParams, "seed order must list every node once");
    std::vector<bool> seen(lg.n, false);
    for (NodeId v : seed_order) {
      if (v >= lg.n || seen[v]) throw Error(Errc::InvalidParams, "seed order must list every node once");
      seen[v] = true;
    }
    order.assign(seed_order.begin(), seed_order.end());
  }

  std::vector<bool> assigned(lg.n, false);
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<Distance> dist(lg.n, -1);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t seed : order) {
    if (assigned[seed]) continue;
    std::vector<std::uint32_t> members;
    const bool isolated = std::none_of(lg.adj[seed].begin(), lg.adj[seed].end(),
                                       [&](const auto& e) { return edge_kept(t, e.second); });
    if (isolated) {
      members.push_back(seed);
    } else if (t.mode == TargetMode::bottleneck) {
      // Every kept edge is >= T, so reachability over kept edges is exactly
      // "some path with bottleneck >= T".
      std::vector<std::uint32_t> stack{seed};
      dist[seed] = 0;
      touched.push_back(seed);
      while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        members.push_back(v);
        for (const auto& [u, w] : lg.adj[v]) {
          if (assigned[u] || dist[u] >= 0 || !edge_kept(t, w)) continue;
          dist[u] = 0;
          touched.push_back(u);
          stack.push_back(u);
        }
      }
    } else {
      // Search paths of accumulated contracted weight within the bound.
      using Item = std::pair<Distance, std::uint32_t>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[seed] = 0;
      touched.push_back(seed);
      pq.emplace(0, seed);
      while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d != dist[v]) continue;
        members.push_back(v);
        for (const auto& [u, w] : lg.adj[v]) {
          if (assigned[u]) continue;
          const Distance nd = d + contracted(t, w);
          if (!within(t, nd)) continue;
          if (dist[u] < 0 || nd < dist[u]) {
            if (dist[u] < 0) touched.push_back(u);
            dist[u] = nd;
            pq.emplace(nd, u);
          }
        }
      }
    }
    for (auto v : touched) dist[v] = -1;
    touched.clear();
    std::sort(members.begin(), members.end());
    for (auto v : members) assigned[v] = true;
    out.push_back(std::move(members));
  }
  return out;
}

LevelGraph quotient(const LevelGraph& lg, const std::vector<std::vector<std::uint32_t>>& groups,
                    const Target& next) {
  std::vector<std::uint32_t> owner(lg.n);
  for (std::uint32_t k = 0; k < groups.size(); ++k) {
    for (auto v : groups[k]) owner[v] = k;
  }
  const bool take_max = next.mode == TargetMode::bottleneck;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Distance> best;
  for (std::uint32_t v = 0; v < lg.n; ++v) {
    for (const auto& [u, w] : lg.adj[v]) {
      const auto a = owner[v], b = owner[u];
      if (a >= b) continue;
      auto [it, inserted] = best.try_emplace({a, b}, w);
      if (!inserted) it->second = take_max ? std::max(it->second, w) : std::min(it->second, w);
    }
  }
  LevelGraph q;
  q.n = groups.size();
  q.adj.resize(q.n);
  for (const auto& [key, w] : best) {
    q.adj[key.first].emplace_back(key.second, w);
    q.adj[key.second].emplace_back(key.first, w);
  }
  for (auto& a : q.adj) std::sort(a.begin(), a.end());
  return q;
}

void check_target_unit(const Target& t, WeightUnit graph_unit) {
  if (t.unit != graph_unit) {
    throw Error(Errc::UnitMismatch, std::string("target unit ") + std::string(topology::to_string(t.unit)) +
                                        " vs graph unit " + std::string(topology::to_string(graph_unit)));
  }
  if (!mode_fits_unit(t.mode, t.unit)) {
    throw Error(Errc::UnitMismatch, std::string(to_string(t.mode)) + " target on a " +
                                        std::string(topology::to_string(t.unit)) + " graph");
  }
}

}  // namespace

Target parse_target(std::string_view text, std::uint32_t level) {
  text = trim(text);
  std::optional<TargetMode> mode;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    mode = parse_target_mode(trim(text.substr(colon + 1)));
    if (!mode) throw Error(Errc::ConfigError, "unknown target mode in '" + std::string(text) + "'");
    text = trim(text.substr(0, colon));
  }
  const UnitScale* unit = nullptr;
  for (const auto& u : kUnits) {
    if (text.size() > u.suffix.size() && text.ends_with(u.suffix)) {
      unit = &u;
      break;
    }
  }
  if (!unit) throw Error(Errc::ConfigError, "target '" + std::string(text) + "' lacks a unit (us, ms, s, hops, bps, ...)");
  const std::string_view num = trim(text.substr(0, text.size() - unit->suffix.size()));
  double v = 0;
  auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
  if (ec != std::errc{} || p != num.data() + num.size() || !std::isfinite(v)) {
    throw Error(Errc::ConfigError, "bad target value '" + std::string(num) + "'");
  }
  Target t;
  t.level = level;
  t.unit = unit->unit;
  t.value = static_cast<Distance>(std::llround(v * unit->scale));
  t.mode = mode.value_or(t.unit == WeightUnit::bandwidth_bps ? TargetMode::bottleneck : TargetMode::additive);
  if (!mode_fits_unit(t.mode, t.unit)) {
    throw Error(Errc::UnitMismatch, std::string(to_string(t.mode)) + " target cannot use unit " +
                                        std::string(unit->suffix));
  }
  return t;
}

std::vector<Target> parse_targets(std::string_view text) {
  std::vector<Target> out;
  std::uint32_t level = 1;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(parse_target(item, level++));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw Error(Errc::InvalidTargets, "no targets given");
  for (const auto& t : out) {
    if (t.unit != out.front().unit) throw Error(Errc::UnitMismatch, "targets mix units");
  }
  return out;
}

void validate_targets(std::span<const Target> targets, WeightUnit graph_unit) {
  if (targets.empty()) throw Error(Errc::InvalidTargets, "at least one target is required");
  std::set<Distance> values;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Target& t = targets[i];
    check_target_unit(t, graph_unit);
    if (t.value <= 0) throw Error(Errc::InvalidTargets, "target values must be > 0");
    if (!values.insert(t.value).second) throw Error(Errc::InvalidTargets, "repeated target value");
    if (i > 0) {
      const Target& prev = targets[i - 1];
      if (t.level <= prev.level) throw Error(Errc::InvalidTargets, "target levels must be strictly increasing");
      // A higher level must be looser than the one it nests.
      const bool looser = t.mode == TargetMode::bottleneck ? t.value < prev.value : t.value > prev.value;
      if (!looser || (t.mode == TargetMode::bottleneck) != (prev.mode == TargetMode::bottleneck)) {
        throw Error(Errc::InvalidTargets, "each level's target must be looser than the level below");
      }
    }
  }
}

std::vector<Container> containerize_level(const WeightedGraph& g, const Target& t,
                                          std::span<const NodeId> seed_order) {
  check_target_unit(t, g.unit());
  if (g.node_count() == 0) throw Error(Errc::InvalidParams, "graph is empty");
  auto groups = group(from_graph(g), t, seed_order);
  std::vector<Container> out;
  out.reserve(groups.size());
  for (std::uint32_t k = 0; k < groups.size(); ++k) {
    out.push_back({t.level, k + 1, std::move(groups[k]), {}});
  }
  return out;
}

ContainerHierarchy containerize(const WeightedGraph& g, std::span<const Target> targets) {
  validate_targets(targets, g.unit());
  if (g.node_count() == 0) throw Error(Errc::InvalidParams, "graph is empty");
  ContainerHierarchy h;
  h.node_count = g.node_count();
  h.targets.assign(targets.begin(), targets.end());
  LevelGraph lg = from_graph(g);
  // Original members of each node of the current level graph.
  std::vector<std::vector<NodeId>> expansion(lg.n);
  for (NodeId v = 0; v < lg.n; ++v) expansion[v] = {v};
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto groups = group(lg, targets[i], {});
    std::vector<Container> level;
    std::vector<std::vector<NodeId>> next_expansion;
    for (std::uint32_t k = 0; k < groups.size(); ++k) {
      Container c;
      c.level = static_cast<std::uint32_t>(i + 1);
      c.index = k + 1;
      for (auto q : groups[k]) {
        c.members.insert(c.members.end(), expansion[q].begin(), expansion[q].end());
        if (i > 0) c.children.push_back(q);
      }
      std::sort(c.members.begin(), c.members.end());
      next_expansion.push_back(c.members);
      level.push_back(std::move(c));
    }
    h.levels.push_back(std::move(level));
    if (i + 1 < targets.size()) lg = quotient(lg, groups, targets[i + 1]);
    expansion = std::move(next_expansion);
  }
  return h;
}

std::vector<std::uint32_t> ContainerHierarchy::membership(std::size_t level) const {
  std::vector<std::uint32_t> m(node_count, UINT32_MAX);
  const auto& cs = levels.at(level);
  for (std::uint32_t k = 0; k < cs.size(); ++k) {
    for (NodeId v : cs[k].members) {
      if (v < node_count) m[v] = k;
    }
  }
  return m;
}

std::size_t ValidationReport::count(Violation::Kind k) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
}

ValidationReport validate_hierarchy(const ContainerHierarchy& h) {
  ValidationReport r;
  auto add = [&](Violation::Kind k, std::uint32_t level, std::string detail) {
    r.violations.push_back({k, level, std::move(detail)});
  };
  // owner[level][node] = container position, for nesting checks.
  std::vector<std::vector<std::uint32_t>> owner(h.levels.size());
  for (std::size_t li = 0; li < h.levels.size(); ++li) {
    const auto level = static_cast<std::uint32_t>(li + 1);
    std::vector<std::uint32_t> seen(h.node_count, 0);
    owner[li].assign(h.node_count, UINT32_MAX);
    for (std::uint32_t k = 0; k < h.levels[li].size(); ++k) {
      for (NodeId v : h.levels[li][k].members) {
        if (v >= h.node_count) {
          add(Violation::Kind::unknown_member, level, "node " + std::to_string(v));
          continue;
        }
        if (seen[v]++ == 1) add(Violation::Kind::disjointness, level, "node " + std::to_string(v));
        owner[li][v] = k;
      }
    }
    for (NodeId v = 0; v < h.node_count; ++v) {
      if (seen[v] == 0) add(Violation::Kind::coverage, level, "node " + std::to_string(v));
    }
  }
  for (std::size_t li = 1; li < h.levels.size(); ++li) {
    const auto level = static_cast<std::uint32_t>(li + 1);
    const auto& below = h.levels[li - 1];
    std::vector<std::uint32_t> parents(below.size(), 0);
    for (const Container& c : h.levels[li]) {
      std::vector<NodeId> from_children;
      bool bad_child = false;
      for (auto ch : c.children) {
        if (ch >= below.size()) {
          bad_child = true;
          continue;
        }
        ++parents[ch];
        from_children.insert(from_children.end(), below[ch].members.begin(), below[ch].members.end());
      }
      std::sort(from_children.begin(), from_children.end());
      std::vector<NodeId> members = c.members;
      std::sort(members.begin(), members.end());
      if (bad_child || from_children != members) {
        add(Violation::Kind::nesting, level,
            "container " + std::to_string(c.index) + " differs from the union of its children");
      }
    }
    for (std::uint32_t k = 0; k < below.size(); ++k) {
      // Each lower container must sit inside exactly one upper container.
      std::set<std::uint32_t> ups;
      for (NodeId v : below[k].members) {
        if (v < h.node_count) ups.insert(owner[li][v]);
      }
      if (parents[k] != 1 || ups.size() != 1) {
        add(Violation::Kind::nesting, level,
            "level " + std::to_string(li) + " container " + std::to_string(below[k].index) +
                " is not nested in exactly one parent");
      }
    }
  }
  return r;
}

void write_hierarchy(std::ostream& out, const ContainerHierarchy& h) {
  for (const auto& level : h.levels) {
    for (const Container& c : level) {
      out << "container " << c.level << ' ' << c.index << ' ';
      for (std::size_t i = 0; i < c.members.size(); ++i) {
        if (i) out << ',';
        out << c.members[i];
      }
      out << '\n';
    }
  }
}

std::string format_hierarchy(const ContainerHierarchy& h) {
  std::ostringstream os;
  write_hierarchy(os, h);
  return os.str();
}

}  // namespace sien::containment
