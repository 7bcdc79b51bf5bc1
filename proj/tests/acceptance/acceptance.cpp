// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <list>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/support.hpp"
#include "sien/cli/commands.hpp"
#include "sien/congruity/dataset.hpp"
#include "sien/congruity/network.hpp"
#include "sien/congruity/objective.hpp"
#include "sien/congruity/train.hpp"
#include "sien/containment/containerize.hpp"
#include "sien/error.hpp"
#include "sien/evaluation/ito.hpp"
#include "sien/evaluation/scenario.hpp"
#include "sien/ilm/tree.hpp"
#include "sien/rng.hpp"
#include "sien/topology/generate.hpp"
#include "sien/userplane/forwarding.hpp"
#include "sien/userplane/prefetch.hpp"

using namespace sien;
namespace fs = std::filesystem;
using topology::NodeId;
using topology::NodeKind;
using ilm::GlobalId;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure message; later ones only flip the flag.
struct Checker {
  Outcome o;
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (o.pass) o.detail = what;
    o.pass = false;
  }
};

std::string trimmed(const std::ostringstream& os) {
  std::string s = os.str();
  while (!s.empty() && (s.back() == ' ' || s.back() == ';')) s.pop_back();
  return s;
}

// ---------------------------------------------------------------------------
// 1. Replay oracle for offloading on tiny instances.

struct Tiny {
  topology::WeightedGraph g;
  std::vector<NodeId> subscribers;
  std::vector<NodeId> forwarders;
};

Tiny tiny_instance(Rng& rng) {
  const std::size_t n = 3 + rng.uniform_int(0, 3);
  std::vector<topology::Node> nodes;
  Tiny t;
  for (NodeId i = 0; i < n; ++i) {
    NodeKind k = NodeKind::switch_;
    if (i == 0) {
      k = NodeKind::server;
    } else if (i == n - 1 || rng.bernoulli(0.35)) {
      k = NodeKind::pc;
    } else if (rng.bernoulli(0.5)) {
      k = NodeKind::access_point;
    }
    nodes.push_back(topology::make_node(i, k));
    (topology::is_forwarding(k) ? t.forwarders : t.subscribers).push_back(i);
  }
  // Spanning tree over the forwarders, end devices hang off forwarders, plus
  // occasional extra links between forwarders.
  std::vector<topology::Edge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  auto link = [&](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    if (a == b || !seen.insert({a, b}).second) return;
    edges.push_back({a, b, static_cast<topology::Distance>(1 + rng.uniform_int(0, 19))});
  };
  for (std::size_t i = 1; i < t.forwarders.size(); ++i) link(t.forwarders[rng.uniform_int(0, i - 1)], t.forwarders[i]);
  for (NodeId s : t.subscribers) link(t.forwarders[rng.uniform_int(0, t.forwarders.size() - 1)], s);
  for (std::size_t i = 0; i < t.forwarders.size(); ++i) {
    for (std::size_t j = i + 1; j < t.forwarders.size(); ++j) {
      if (rng.bernoulli(0.3)) link(t.forwarders[i], t.forwarders[j]);
    }
  }
  t.g = topology::build_graph(std::move(nodes), std::move(edges), topology::WeightUnit::latency_us);
  return t;
}

// Independent model of caching and forwarding for one tiny instance.
class ReplayOracle {
 public:
  ReplayOracle(const topology::WeightedGraph& g, std::uint64_t capacity) : g_(g), lru_(g.node_count()) {
    for (const auto& n : g.nodes()) {
      cap_.push_back(topology::is_forwarding(n.kind) ? std::min<std::uint64_t>(n.memory_media_partition(), capacity) : 0);
    }
  }

  void publish(int obj, NodeId at, std::uint64_t volume) {
    pinned_.insert({at, obj});
    volume_[obj] = volume;
    publisher_[obj] = at;
    locators_[obj].insert(at);
  }

  void place_explicit(int obj, NodeId at) {
    if (pinned_.count({at, obj})) return;
    const bool known = locators_[obj].count(at) != 0;
    const bool announce = known || locators_[obj].size() < ilm::kMaxLocators;
    if (!insert(at, obj, announce)) return;
    if (announce) locators_[obj].insert(at);
  }

  // Hop count of one request; updates caches like a delivery.
  std::uint32_t request(int obj, NodeId from) {
    std::vector<NodeId> path{from};
    NodeId cur = from;
    while (!holds(cur, obj)) {
      NodeId target = *locators_[obj].begin();
      std::size_t best = SIZE_MAX;
      for (NodeId l : locators_[obj]) {
        const auto p = smallest_shortest_path(cur, l);
        if (p.size() < best) {
          best = p.size();
          target = l;
        }
      }
      cur = smallest_shortest_path(cur, target)[1];
      path.push_back(cur);
    }
    touch(cur, obj);
    for (std::size_t i = path.size() - 1; i-- > 0;) {
      const NodeId n = path[i];
      if (!topology::is_forwarding(g_.node(n).kind) || pinned_.count({n, obj})) continue;
      insert(n, obj, false);
    }
    return static_cast<std::uint32_t>(path.size() - 1);
  }

  // Fewest hops on the raw graph, by exhaustive path enumeration.
  std::uint32_t baseline(int obj, NodeId from) const {
    return static_cast<std::uint32_t>(smallest_shortest_path(from, publisher_.at(obj)).size() - 1);
  }

 private:
  struct Copy {
    int obj;
    std::uint64_t bytes;
    bool explicit_copy;
  };

  bool holds(NodeId n, int obj) const {
    if (pinned_.count({n, obj})) return true;
    for (const auto& c : lru_[n]) {
      if (c.obj == obj) return true;
    }
    return false;
  }

  void touch(NodeId n, int obj) {
    for (auto it = lru_[n].begin(); it != lru_[n].end(); ++it) {
      if (it->obj == obj) {
        lru_[n].splice(lru_[n].begin(), lru_[n], it);
        return;
      }
    }
  }

  bool insert(NodeId n, int obj, bool explicit_copy) {
    for (auto it = lru_[n].begin(); it != lru_[n].end(); ++it) {
      if (it->obj == obj) {
        it->explicit_copy = it->explicit_copy || explicit_copy;
        lru_[n].splice(lru_[n].begin(), lru_[n], it);
        return true;
      }
    }
    const std::uint64_t bytes = volume_.at(obj);
    if (bytes > cap_[n]) return false;
    std::uint64_t used = bytes;
    for (const auto& c : lru_[n]) used += c.bytes;
    while (used > cap_[n]) {
      const Copy cold = lru_[n].back();
      lru_[n].pop_back();
      used -= cold.bytes;
      if (cold.explicit_copy) locators_[cold.obj].erase(n);
    }
    lru_[n].push_front({obj, bytes, explicit_copy});
    return true;
  }

  // Among all fewest-hop simple paths, the lexicographically smallest.
  std::vector<NodeId> smallest_shortest_path(NodeId a, NodeId b) const {
    std::vector<NodeId> best, cur{a};
    std::vector<std::uint8_t> on(g_.node_count(), 0);
    on[a] = 1;
    enumerate(b, cur, on, best);
    return best;
  }

  void enumerate(NodeId b, std::vector<NodeId>& cur, std::vector<std::uint8_t>& on, std::vector<NodeId>& best) const {
    if (cur.back() == b) {
      if (best.empty() || cur.size() < best.size() || (cur.size() == best.size() && cur < best)) best = cur;
      return;
    }
    for (const auto& nb : g_.neighbors(cur.back())) {
      if (on[nb.node]) continue;
      on[nb.node] = 1;
      cur.push_back(nb.node);
      enumerate(b, cur, on, best);
      cur.pop_back();
      on[nb.node] = 0;
    }
  }

  const topology::WeightedGraph& g_;
  std::vector<std::uint64_t> cap_;
  std::vector<std::list<Copy>> lru_;
  std::set<std::pair<NodeId, int>> pinned_;
  std::map<int, std::uint64_t> volume_;
  std::map<int, NodeId> publisher_;
  std::map<int, std::set<NodeId>> locators_;
};

Outcome ito_oracle() {
  Checker c;
  Rng rng(20240601);
  std::size_t hits = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const Tiny t = tiny_instance(rng);
    const auto h = containment::containerize(t.g, containment::parse_targets("5us,30us"));
    auto tree = ilm::IlmTree::build(h);
    const std::uint64_t capacity = rng.uniform_int(0, 120);
    userplane::UserPlane up(t.g, tree, capacity);
    ReplayOracle oracle(t.g, capacity);

    const int objects = 1 + static_cast<int>(rng.uniform_int(0, 2));
    std::vector<GlobalId> ids;
    for (int o = 0; o < objects; ++o) {
      userplane::ContentObject obj;
      obj.hrn = "urn:tiny:" + std::to_string(o);
      obj.volume = 1 + rng.uniform_int(0, 49);
      obj.publisher = t.forwarders[rng.uniform_int(0, t.forwarders.size() - 1)];
      up.publish(obj);
      oracle.publish(o, obj.publisher, obj.volume);
      ids.push_back(ilm::digest(obj.hrn));
    }
    const std::size_t placements = rng.uniform_int(0, 3);
    for (std::size_t i = 0; i < placements; ++i) {
      const int o = static_cast<int>(rng.uniform_int(0, objects - 1));
      const NodeId at = t.forwarders[rng.uniform_int(0, t.forwarders.size() - 1)];
      up.place_explicit(ids[o], at);
      oracle.place_explicit(o, at);
    }

    std::vector<evaluation::RequestRecord> records;
    std::int64_t num = 0, den = 0;
    const std::size_t requests = 1 + rng.uniform_int(0, 4);
    for (std::size_t n = 0; n < requests; ++n) {
      const NodeId from = t.subscribers[rng.uniform_int(0, t.subscribers.size() - 1)];
      const int o = static_cast<int>(rng.uniform_int(0, objects - 1));
      userplane::RequestMsg req;
      req.requested = ids[o];
      req.origin_node = from;
      const auto trace = up.handle_request(req, n);
      up.deliver_data(trace);
      hits += trace.cache_hit;
      evaluation::RequestRecord r;
      r.n = n;
      r.paths = {trace.hops};
      r.volume = trace.volume;
      r.baseline_hops = evaluation::baseline_hops(t.g, from, up.object(ids[o]).publisher);
      records.push_back(r);

      const std::int64_t v = static_cast<std::int64_t>(up.object(ids[o]).volume);
      const std::int64_t hc = oracle.baseline(o, from);
      const std::int64_t hn = oracle.request(o, from);
      num += (hc - hn) * v;
      den += hc * v;
    }
    const auto terms = evaluation::ito_terms(records);
    const double ito = evaluation::compute_ito(records);
    c.expect(terms.numerator == num && terms.denominator == den,
             "instance " + std::to_string(inst) + ": " + std::to_string(static_cast<long long>(terms.numerator)) + "/" +
                 std::to_string(static_cast<long long>(terms.denominator)) + " vs oracle " + std::to_string(num) +
                 "/" + std::to_string(den));
    c.expect(std::abs(ito - static_cast<double>(num) / static_cast<double>(den)) <= 1e-12,
             "instance " + std::to_string(inst) + ": ratio differs");
  }
  if (c.o.pass) c.o.detail = "50 instances equal; " + std::to_string(hits) + " cache hits replayed";
  return c.o;
}

// ---------------------------------------------------------------------------
// 2. Boundary values of the offloading ratio.

evaluation::ScenarioParams compact(topology::Scenario s) {
  evaluation::ScenarioParams p;
  p.scenario = s;
  p.topology.regions = 3;
  p.topology.aps_per_region = 3;
  p.topology.devices_per_ap = 6;
  p.topology.area_km2 = 0.005;
  p.request_count = 1000;
  p.catalog_size = 100;
  return p;
}

Outcome ito_boundaries() {
  Checker c;
  std::ostringstream detail;
  for (auto s : {topology::Scenario::embb, topology::Scenario::urllc, topology::Scenario::mmtc}) {
    auto p = compact(s);
    p.cache_fraction = 0;
    p.prefetch_budget = 0;
    for (double v : evaluation::default_sweep(s)) {
      const auto r = evaluation::run_point(p, v, 1);
      c.expect(r.report.ito == 0.0, std::string(topology::to_string(s)) + ": ITO " + std::to_string(r.report.ito));
    }
    auto u = compact(s);
    u.universal_preplacement = true;
    const auto pt = evaluation::run_point(u, evaluation::default_sweep(s).front(), 1);
    // Every request can be answered by its own access point at best.
    __int128 num = 0, den = 0;
    for (const auto& r : pt.records) {
      num += static_cast<__int128>(r.baseline_hops - 1) * r.paths.size() * r.volume;
      den += static_cast<__int128>(r.baseline_hops) * r.paths.size() * r.volume;
    }
    const double max_ito = static_cast<double>(num) / static_cast<double>(den);
    c.expect(std::abs(pt.report.ito - max_ito) <= 1e-9,
             std::string(topology::to_string(s)) + ": " + std::to_string(pt.report.ito) + " vs max " +
                 std::to_string(max_ito));
    detail << topology::to_string(s) << " max " << max_ito << "; ";
  }
  if (c.o.pass) c.o.detail = "zero everywhere; " + trimmed(detail);
  return c.o;
}

// ---------------------------------------------------------------------------
// 3. Containerization soundness.

bool container_sound(const topology::WeightedGraph& g, const containment::Target& t, const std::vector<NodeId>& ms) {
  using sien::testing::PathOracle;
  if (t.mode == containment::TargetMode::bottleneck) {
    const PathOracle o{g};
    for (NodeId a : ms) {
      for (NodeId b : ms) {
        const auto d = o.best(a, b, PathOracle::Fold::bottleneck);
        if (!d || *d < t.value) return false;
      }
    }
    return true;
  }
  std::vector<topology::Distance> w;
  for (const auto& e : g.edges()) w.push_back(e.weight < t.value ? 0 : e.weight);
  const auto contracted = g.with_weights(w);
  const PathOracle o{contracted};
  for (NodeId a : ms) {
    for (NodeId b : ms) {
      const auto d = o.best(a, b, PathOracle::Fold::additive);
      if (!d) return false;
      if (t.mode == containment::TargetMode::exact_hit ? *d > t.value : *d >= t.value) return false;
    }
  }
  return true;
}

Outcome containment_soundness() {
  Checker c;
  Rng rng(77);
  std::size_t containers = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_int(0, 9);
    const int kind = trial % 4;
    topology::WeightedGraph g;
    std::vector<containment::Target> ts;
    if (kind == 3) {
      g = sien::testing::random_graph(rng, n, 0.35, 1, 100, topology::WeightUnit::bandwidth_bps);
      ts = containment::parse_targets("70bps,40bps,10bps");
    } else {
      g = sien::testing::random_graph(rng, n, 0.35, 1, 40);
      ts = containment::parse_targets(kind == 2 ? "6us:exact_hit,25us:exact_hit,60us:exact_hit" : "6us,25us,60us");
    }
    const auto h = containment::containerize(g, ts);
    const auto report = containment::validate_hierarchy(h);
    c.expect(report.ok(), "graph " + std::to_string(trial) + ": structural violation");
    for (std::size_t l = 0; l < h.level_count(); ++l) {
      for (const auto& ct : h.levels[l]) {
        ++containers;
        c.expect(container_sound(g, ts[l], ct.members),
                 "graph " + std::to_string(trial) + " level " + std::to_string(l + 1) + " container " +
                     std::to_string(ct.index) + " breaks its target");
      }
    }
  }
  if (c.o.pass) c.o.detail = std::to_string(containers) + " containers checked on 200 graphs";
  return c.o;
}

// ---------------------------------------------------------------------------
// 4. Gradient check.

congruity::Dataset random_dataset(Rng& rng, congruity::DatasetKind kind, std::size_t n, std::size_t width) {
  congruity::Dataset d{kind, {}};
  for (std::size_t i = 0; i < n; ++i) {
    congruity::Sample s;
    s.features.resize(width);
    for (double& v : s.features) v = rng.uniform();
    if (rng.bernoulli(0.7)) s.labels[congruity::LabelKind::distance] = rng.uniform(0.1, 0.9);
    d.samples.push_back(std::move(s));
  }
  return d;
}

Outcome gradient_check() {
  Checker c;
  Rng rng(4242);
  double worst = 0.0;
  int probes = 0;
  while (probes < 100) {
    // At most three layers of at most ten neurons.
    std::vector<std::size_t> widths{1 + rng.uniform_int(0, 9)};
    if (rng.bernoulli(0.7)) widths.push_back(1 + rng.uniform_int(0, 9));
    widths.push_back(1);
    const auto dp = random_dataset(rng, congruity::DatasetKind::personal, 5, widths[0]);
    const auto dg = random_dataset(rng, congruity::DatasetKind::general, 6, widths[0]);
    congruity::Hyperparams h;
    h.alpha = rng.uniform();
    h.q = 1 + static_cast<int>(rng.uniform_int(0, 2));
    h.k = 1 + rng.uniform_int(0, widths[0] - 1);
    h.lambda_q = rng.uniform(0.05, 0.5);
    h.lambda_k = rng.uniform(0.05, 0.5);
    const auto p = congruity::ParameterSet::random(widths, rng.uniform_int(0, UINT64_MAX));
    const congruity::Objective obj(dp, dg, h);
    std::vector<double> grad;
    obj.total_gradient(p, grad);
    const auto flat = p.flatten();
    for (int t = 0; t < 5 && probes < 100; ++t, ++probes) {
      const std::size_t i = rng.uniform_int(0, flat.size() - 1);
      const double step = 1e-6;
      auto plus = flat, minus = flat;
      plus[i] += step;
      minus[i] -= step;
      auto pp = p, pm = p;
      pp.assign(plus);
      pm.assign(minus);
      const double numeric = (obj.total(pp) - obj.total(pm)) / (2 * step);
      const double rel = std::abs(numeric - grad[i]) / std::max({std::abs(numeric), std::abs(grad[i]), 1e-6});
      worst = std::max(worst, rel);
    }
  }
  c.expect(worst < 1e-4, "worst relative error " + std::to_string(worst));
  if (c.o.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "100 probes, worst relative error %.2e", worst);
    c.o.detail = buf;
  }
  return c.o;
}

// ---------------------------------------------------------------------------
// 5. Learning progress and boundary trajectories.

Outcome learning_progress() {
  Checker c;
  congruity::DatasetSpec spec;
  spec.personal_samples = 100;
  spec.general_samples = 100;
  const auto [dp, dg] = congruity::synthesize_dataset(spec, 7);
  const std::size_t widths[] = {congruity::kFeatureCount, 8, 1};

  congruity::Hyperparams h;
  const auto r = congruity::train(dp, dg, h, widths);
  const double ratio = r.e_star / r.e_initial;
  c.expect(ratio <= 0.5, "E*/E0 = " + std::to_string(ratio));
  c.expect(r.loss_curve.size() <= h.max_epochs + 1, "ran past the epoch limit");

  // Plain masked descent on one error alone, recomputed outside train().
  auto replay = [&](double alpha, const std::vector<congruity::ParameterSet>& steps,
                    congruity::ParameterSet theta) -> std::size_t {
    congruity::Hyperparams hb = h;
    hb.alpha = alpha;
    const congruity::Objective obj(dp, dg, hb);
    const congruity::BatchPlan plan{hb.batch_size, dp.size(), dg.size()};
    std::vector<double> grad;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const std::size_t b = s % plan.count();
      if (alpha == 0.0) {
        const auto [gb, ge] = plan.general(b);
        obj.general_gradient(theta, gb, ge, grad);
      } else {
        const auto [pb, pe] = plan.personal(b);
        obj.personal_gradient(theta, pb, pe, grad);
      }
      auto flat = theta.flatten();
      const auto mask = theta.trainable_mask();
      for (std::size_t i = 0; i < flat.size(); ++i) {
        if (mask[i]) flat[i] = flat[i] - hb.learning_rate * grad[i];
      }
      theta.assign(flat);
      if (!(theta == steps[s])) return s + 1;
    }
    return 0;
  };

  std::ostringstream detail;
  detail << "E*/E0 = " << ratio << " after " << r.loss_curve.size() - 1 << " epochs";
  for (double alpha : {0.0, 1.0}) {
    congruity::Hyperparams hb = h;
    hb.alpha = alpha;
    hb.max_epochs = 60;
    std::vector<congruity::ParameterSet> steps;
    const auto rb = congruity::train(dp, dg, hb, widths,
                                     [&](std::size_t, const congruity::ParameterSet& t) { steps.push_back(t); });
    if (alpha == 0.0) c.expect(rb.pruned == 0, "alpha 0 pruned neurons");
    const std::size_t bad = replay(alpha, steps, rb.after_pruning);
    c.expect(bad == 0, "alpha " + std::to_string(alpha) + " diverges from the pure objective at step " +
                           std::to_string(bad));
    detail << "; alpha " << alpha << ": " << steps.size() << " steps identical";
  }
  if (c.o.pass) c.o.detail = detail.str();
  return c.o;
}

// ---------------------------------------------------------------------------
// 6. Prefetch distribution.

Outcome prefetch_distribution() {
  Checker c;
  topology::TopologyParams tp;
  const auto topo = topology::generate_topology(tp, 1);
  std::vector<NodeId> nodes;
  std::vector<double> nc;
  for (const auto& n : topo.graph.nodes()) {
    if (topology::is_forwarding(n.kind) && n.kind != NodeKind::server) {
      nodes.push_back(n.id);
      nc.push_back(topology::node_centrality(topo.graph, n.id));
    }
  }
  // Sum over the full candidate set.
  const auto p_full = userplane::prefetch_probabilities(nc, userplane::zipf_popularity(10, 0.8, 10));
  double sum = 0;
  for (double v : p_full) sum += v;
  c.expect(std::abs(sum - 1.0) <= 1e-9, "p sums to " + std::to_string(sum));

  // Frequencies on a support small enough that 1e5 draws resolve TV 0.01:
  // sampling noise alone gives about 0.4 * sqrt(cells / draws).
  nodes.resize(6);
  nc.resize(6);
  const auto fp = userplane::zipf_popularity(3, 0.8, 10);
  std::vector<GlobalId> objects;
  for (int j = 0; j < 3; ++j) objects.push_back(ilm::digest("urn:sien:content:" + std::to_string(j)));
  const auto p = userplane::prefetch_probabilities(nc, fp);

  // Direct draws.
  const int draws = 100'000;
  Rng rng(99);
  std::vector<double> freq(p.size(), 0.0);
  for (int i = 0; i < draws; ++i) freq[userplane::draw_index(p, rng)] += 1.0;
  double tv = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(freq[i] / draws - p[i]);
  tv /= 2;
  c.expect(tv < 0.01, "draw TV distance " + std::to_string(tv));

  // First placement of independently seeded plans.
  std::map<std::pair<NodeId, GlobalId>, std::size_t> cell;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < objects.size(); ++j) cell[{nodes[i], objects[j]}] = i * objects.size() + j;
  }
  std::vector<double> first(p.size(), 0.0);
  for (int s = 0; s < draws; ++s) {
    const auto plan = userplane::prefetch_plan(nodes, nc, objects, fp, 1, static_cast<std::uint64_t>(s) + 1);
    const auto& pl = plan.placements.front();
    first[cell.at({pl.node, pl.object})] += 1.0;
    if (s == 0) {
      double psum = 0;
      for (double v : plan.probabilities) psum += v;
      c.expect(std::abs(psum - 1.0) <= 1e-9, "plan probabilities sum to " + std::to_string(psum));
    }
  }
  double tv_plan = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tv_plan += std::abs(first[i] / draws - p[i]);
  tv_plan /= 2;
  c.expect(tv_plan < 0.01, "plan TV distance " + std::to_string(tv_plan));
  if (c.o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "|sum-1| = %.1e over %zu cells; %zu cells: TV %.4f (draws) / %.4f (plans)",
                  std::abs(sum - 1.0), p_full.size(), p.size(),
                  tv, tv_plan);
    c.o.detail = buf;
  }
  return c.o;
}

// ---------------------------------------------------------------------------
// 7. ILM protocol suite.

template <class F>
bool throws_code(Errc code, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

Outcome ilm_suite() {
  Checker c;
  topology::TopologyParams tp;
  tp.scenario = topology::Scenario::urllc;
  const auto topo = topology::generate_topology(tp, 1);
  const auto h = containment::containerize(topo.graph, containment::parse_targets("1ms,150ms,500ms"));
  auto tree = ilm::IlmTree::build(h);
  const auto na = [](NodeId n) { return ilm::NetworkAddress::for_node(n); };

  // Round trips: one object per node, resolved from every ILM.
  std::vector<std::pair<GlobalId, NodeId>> registered;
  for (NodeId n = 0; n < topo.graph.node_count(); ++n) {
    registered.emplace_back(tree.register_object(tree.leaf_of(n), "urn:acc:obj:" + std::to_string(n), na(n)), n);
  }
  std::size_t resolutions = 0;
  for (const auto& [id, n] : registered) {
    for (ilm::IlmRef r = 0; r < tree.size(); ++r) {
      const auto locs = tree.resolve(r, id);
      ++resolutions;
      c.expect(locs.size() == 1 && locs[0] == na(n), "round trip failed for node " + std::to_string(n));
    }
  }

  // Locator cap.
  const auto capped = registered.front().first;
  for (NodeId n = 1; n < ilm::kMaxLocators; ++n) tree.update_binding(tree.root(), capped, ilm::BindingAction::add, na(n));
  c.expect(tree.resolve(tree.root(), capped).size() == 4, "four locators expected");
  c.expect(throws_code(Errc::LocatorLimitExceeded,
                       [&] { tree.update_binding(tree.root(), capped, ilm::BindingAction::add, na(40)); }),
           "fifth locator accepted by update");
  c.expect(throws_code(Errc::LocatorLimitExceeded,
                       [&] { tree.register_object(tree.leaf_of(41), "urn:acc:obj:0", na(41)); }),
           "fifth locator accepted by register");

  // Indirect binding GX -> GT.
  const NodeId device = topo.layout.subscribers.back();
  const auto gt = tree.register_object(tree.leaf_of(device), "urn:acc:device", na(device));
  const auto gx = tree.bind_indirect(tree.leaf_of(device), "urn:acc:data", gt);
  c.expect(tree.resolve(tree.leaf_of(topo.layout.subscribers.front()), gx) == std::vector{na(device)},
           "indirect chase failed");
  const auto self = tree.bind_indirect(tree.root(), "urn:acc:loop", ilm::digest("urn:acc:loop"));
  c.expect(throws_code(Errc::IndirectLoop, [&] { tree.resolve(tree.root(), self); }), "self loop not detected");

  // Local namespace.
  ilm::LocalDomain domain(topo.layout.access_points.front());
  bool ok = true;
  for (int i = 0; i < 256; ++i) ok = ok && domain.register_local("urn:acc:mtc:" + std::to_string(i)).value == i;
  c.expect(ok, "the first 256 local names were not 0..255");
  c.expect(throws_code(Errc::NamespaceExhausted, [&] { domain.register_local("urn:acc:mtc:256"); }),
           "257th local name accepted");

  // 10^3 ids x 100 updates each, tracked against a plain model.
  Rng rng(8);
  std::map<GlobalId, std::set<ilm::NetworkAddress>> truth;
  std::vector<GlobalId> ids;
  const auto& nodes = topo.graph.nodes();
  for (int i = 0; i < 1000; ++i) {
    const NodeId n = static_cast<NodeId>(rng.uniform_int(0, nodes.size() - 1));
    ids.push_back(tree.register_object(tree.leaf_of(n), "urn:acc:mobile:" + std::to_string(i), na(n)));
    truth[ids.back()].insert(na(n));
  }
  std::size_t updates = 0;
  for (int round = 0; round < 100; ++round) {
    for (const auto& id : ids) {
      auto& want = truth[id];
      const NodeId n = static_cast<NodeId>(rng.uniform_int(0, nodes.size() - 1));
      const auto at = tree.leaf_of(n);
      // A move: bind the new address, drop the oldest once at the cap.
      if (want.size() == ilm::kMaxLocators || (want.size() > 1 && rng.bernoulli(0.5))) {
        const auto victim = *std::next(want.begin(), static_cast<long>(rng.uniform_int(0, want.size() - 1)));
        tree.update_binding(at, id, ilm::BindingAction::remove, victim);
        want.erase(victim);
      } else {
        tree.update_binding(at, id, ilm::BindingAction::add, na(n));
        want.insert(na(n));
      }
      ++updates;
    }
  }
  std::size_t checked = 0;
  for (const auto& [id, want] : truth) {
    const std::vector<ilm::NetworkAddress> expect(want.begin(), want.end());
    for (ilm::IlmRef r = 0; r < tree.size(); ++r) {
      ++checked;
      if (tree.resolve(r, id) != expect) {
        c.expect(false, "incoherent record after updates");
        break;
      }
    }
    const auto* rec = tree.record(id);
    c.expect(rec && rec->locators == expect, "stored record differs");
  }
  if (c.o.pass) {
    c.o.detail = std::to_string(resolutions) + " round trips over " + std::to_string(tree.size()) + " ILMs, " +
                 std::to_string(updates) + " updates, " + std::to_string(checked) + " coherence checks";
  }
  return c.o;
}

// ---------------------------------------------------------------------------
// 8. Monotonicity in cache capacity and prefetch budget.

Outcome monotonicity() {
  Checker c;
  std::ostringstream detail;
  for (auto s : {topology::Scenario::embb, topology::Scenario::urllc}) {
    evaluation::ScenarioParams p;
    p.scenario = s;
    const double value = s == topology::Scenario::embb ? 8 : 1;
    double prev = -1;
    detail << topology::to_string(s) << " cache";
    for (double f : {0.0, 0.25, 0.5, 1.0}) {
      p.cache_fraction = f;
      const double ito = evaluation::run_point(p, value, 1).report.ito;
      c.expect(ito >= prev, std::string(topology::to_string(s)) + ": ITO fell at cache fraction " + std::to_string(f));
      detail << ' ' << ito;
      prev = ito;
    }
    p = {};
    p.scenario = s;
    prev = -1;
    detail << ", budget";
    for (std::size_t b : {std::size_t{0}, p.prefetch_k / 2, p.prefetch_k}) {
      p.prefetch_budget = b;
      const double ito = evaluation::run_point(p, value, 1).report.ito;
      c.expect(ito >= prev, std::string(topology::to_string(s)) + ": ITO fell at budget " + std::to_string(b));
      detail << ' ' << ito;
      prev = ito;
    }
    detail << "; ";
  }
  if (c.o.pass) c.o.detail = trimmed(detail);
  return c.o;
}

// ---------------------------------------------------------------------------
// 9. Determinism of full runs.

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = os.str();
  }
  return files;
}

bool run_twice(const fs::path& base, const std::string& name, const std::string& config, Checker& c,
               double* seconds = nullptr) {
  const fs::path conf = base / (name + ".conf");
  std::ofstream(conf) << config;
  std::vector<std::map<std::string, std::string>> outputs;
  for (int i = 0; i < 2; ++i) {
    const fs::path out = base / (name + "_" + std::to_string(i));
    std::ostringstream so, se;
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cli::run_cli({"--config", conf.string(), "--out", out.string(), "run"}, so, se);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds) *seconds = std::max(*seconds, dt);
    c.expect(code == 0, name + ": run failed: " + se.str());
    if (code != 0) return false;
    outputs.push_back(read_tree(out));
  }
  c.expect(outputs[0] == outputs[1], name + ": outputs differ between runs");
  c.expect(!outputs[0].empty(), name + ": no outputs");
  return outputs[0] == outputs[1];
}

Outcome determinism() {
  Checker c;
  const fs::path base = fs::temp_directory_path() / "sien_acceptance_determinism";
  fs::remove_all(base);
  fs::create_directories(base);
  run_twice(base, "embb", "scenario = embb\nseeds = 1,2\ntraces = true\n", c);
  run_twice(base, "urllc_learned", "scenario = urllc\nsweep = 1, 128\nlearner = true\nmax_epochs = 50\n", c);
  double mmtc_seconds = 0;
  run_twice(base, "mmtc", "scenario = mmtc\narea_km2 = 0.1\n", c, &mmtc_seconds);
  topology::TopologyParams tp;
  tp.scenario = topology::Scenario::mmtc;
  tp.area_km2 = 0.1;
  tp.density_per_km2 = 1'049'000;
  const auto objects = topology::mmtc_device_count(tp);
  c.expect(objects >= 100'000, "top mMTC point has only " + std::to_string(objects) + " objects");
  c.expect(mmtc_seconds < 300, "mMTC sweep took " + std::to_string(mmtc_seconds) + " s");
  fs::remove_all(base);
  if (c.o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "eMBB, URLLC+learner and mMTC runs byte-identical; mMTC sweep up to %llu objects in %.1f s",
                  static_cast<unsigned long long>(objects), mmtc_seconds);
    c.o.detail = buf;
  }
  return c.o;
}

// ---------------------------------------------------------------------------
// 10. Sweep shapes and the sub-millisecond URLLC containers.

Outcome sweep_shape() {
  Checker c;
  std::ostringstream detail;
  for (auto s : {topology::Scenario::embb, topology::Scenario::urllc, topology::Scenario::mmtc}) {
    evaluation::ScenarioParams p;
    p.scenario = s;
    if (s == topology::Scenario::mmtc) p.topology.area_km2 = 0.1;
    const auto axis = evaluation::default_sweep(s);
    const auto reports = evaluation::run_scenario(p);
    c.expect(reports.size() == axis.size(), std::string(topology::to_string(s)) + ": wrong number of sweep points");
    detail << topology::to_string(s) << " " << axis.front() << ".." << axis.back() << ":";
    for (std::size_t i = 0; i < reports.size() && i < axis.size(); ++i) {
      c.expect(reports[i].sweep_value == axis[i], "sweep value mismatch");
      c.expect(std::isfinite(reports[i].ito) && reports[i].ito <= 1.0, "ITO out of range");
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.4f", reports[i].ito);
      detail << buf;
    }
    detail << "; ";
  }
  c.expect(evaluation::default_sweep(topology::Scenario::embb).front() == 8 &&
               evaluation::default_sweep(topology::Scenario::embb).back() == 512,
           "eMBB axis");
  c.expect(evaluation::default_sweep(topology::Scenario::urllc).front() == 1 &&
               evaluation::default_sweep(topology::Scenario::urllc).back() == 128,
           "URLLC axis");
  c.expect(evaluation::default_sweep(topology::Scenario::mmtc).front() == 63'000 &&
               evaluation::default_sweep(topology::Scenario::mmtc).back() == 1'049'000,
           "mMTC axis");

  // Every level-1 URLLC container keeps all member pairs under 1 ms.
  evaluation::ScenarioParams u;
  u.scenario = topology::Scenario::urllc;
  u.request_count = 1;
  std::size_t containers = 0;
  topology::Distance worst = 0;
  for (double v : evaluation::default_sweep(topology::Scenario::urllc)) {
    const auto pt = evaluation::run_point(u, v, 1);
    const auto& g = pt.topology.graph;
    c.expect(pt.hierarchy.targets.front().value == 1000, "T1 is not 1 ms");
    for (const auto& ct : pt.hierarchy.levels.front()) {
      ++containers;
      for (NodeId a : ct.members) {
        const auto d = topology::distances_from(g, a, topology::DistanceMode::additive);
        for (NodeId b : ct.members) {
          const bool ok = d[b].has_value() && *d[b] < 1000;
          if (d[b]) worst = std::max(worst, *d[b]);
          c.expect(ok, "URLLC container at " + std::to_string(v) + " ms spans " +
                           (d[b] ? std::to_string(*d[b]) : std::string("inf")) + " us");
        }
      }
    }
  }
  detail << containers << " URLLC level-1 containers, widest pair " << worst << " us";
  if (c.o.pass) c.o.detail = detail.str();
  return c.o;
}

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "offloading ratio equals exhaustive replay", 10, ito_oracle},
      {2, "offloading boundary cases", 5, ito_boundaries},
      {3, "containerization soundness", 30, containment_soundness},
      {4, "objective gradient check", 10, gradient_check},
      {5, "learning progress and boundary trajectories", 0, learning_progress},
      {6, "prefetch distribution", 5, prefetch_distribution},
      {7, "ILM protocol suite", 30, ilm_suite},
      {8, "monotonicity in cache and prefetch budget", 0, monotonicity},
      {9, "determinism incl. mMTC sweep at 1e5 objects", 0, determinism},
      {10, "scenario sweep shape and URLLC containers", 0, sweep_shape},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && cr.time_limit > 0 && dt >= cr.time_limit) {
      o.pass = false;
      o.detail = "exceeded the " + std::to_string(static_cast<int>(cr.time_limit)) + " s budget";
    }
    std::printf("criterion %2d: %s  %s (%s; %.2f s)\n", cr.id, o.pass ? "PASS" : "FAIL", cr.name.c_str(),
                o.detail.c_str(), dt);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
