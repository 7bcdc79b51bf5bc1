// SPDX-License-Identifier: Apache-2.0
#include "sien/evaluation/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "sien/congruity/dataset.hpp"
#include "sien/congruity/train.hpp"
#include "sien/error.hpp"
#include "sien/ilm/tree.hpp"
#include "sien/rng.hpp"
#include "sien/userplane/prefetch.hpp"

namespace sien::evaluation {

using congruity::format_double;
using topology::NodeId;

namespace {

struct Axis {
  double lo, hi;
};

Axis axis(Scenario s) {
  switch (s) {
    case Scenario::embb: return {8, 512};
    case Scenario::urllc: return {1, 128};
    case Scenario::mmtc: return {63'000, 1'049'000};
  }
  return {0, 0};
}

// Salts for the independent random streams of one sweep point.
enum Stream : std::uint64_t { kTopology = 1, kDataset, kLearner, kEdges, kRanking, kPrefetch, kWorkload };

}  // namespace

std::vector<double> default_sweep(Scenario s) {
  switch (s) {
    case Scenario::embb: return {8, 16, 32, 64, 128, 256, 512};
    case Scenario::urllc: return {1, 2, 4, 8, 16, 32, 64, 128};
    case Scenario::mmtc: return {63'000, 131'000, 262'000, 524'000, 1'049'000};
  }
  return {};
}

std::string_view sweep_variable(Scenario s) {
  switch (s) {
    case Scenario::embb: return "data_rate_mbps";
    case Scenario::urllc: return "latency_ms";
    case Scenario::mmtc: return "density_per_km2";
  }
  return "?";
}

void ScenarioParams::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::InvalidParams, what); };
  const Axis a = axis(scenario);
  for (double v : sweep_values) {
    if (!(v >= a.lo && v <= a.hi)) {
      bad("sweep value " + format_double(v) + " outside [" + format_double(a.lo) + ", " + format_double(a.hi) + "]");
    }
  }
  if (seeds.empty()) bad("at least one seed is required");
  if (request_count == 0) bad("request_count must be >= 1");
  if (catalog_size == 0) bad("catalog_size must be >= 1");
  if (paths_per_request == 0) bad("paths_per_request must be >= 1");
  if (!(zipf_s > 0.0)) bad("zipf_s must be > 0");
  if (!(zipf_shift >= 0.0)) bad("zipf_shift must be >= 0");
  if (!(cache_fraction >= 0.0 && cache_fraction <= 1.0)) bad("cache_fraction must be in [0, 1]");
  if (!(segment_seconds > 0.0)) bad("segment_seconds must be > 0");
  if (urllc_volume == 0 || embb_volume == 0) bad("object volumes must be > 0");
  if (mmtc_volume == 0 || mmtc_volume >= topology::limits::kMmtcPayload) bad("mmtc_volume must be in [1, 127]");
  if (!(learner_edge_fraction >= 0.0 && learner_edge_fraction <= 1.0)) bad("learner_edge_fraction must be in [0, 1]");
  if (learner && learner_samples < 2) bad("learner_samples must be >= 2");
  if (learner) learner_hyper.validate();
}

namespace {

// Feature vector of one link, every entry in [0, 1].
std::vector<double> edge_features(const topology::WeightedGraph& g, const topology::Edge& e, double w_max,
                                  double scenario_code, double density, std::size_t max_degree, Rng& rng) {
  const auto& a = g.node(e.a);
  const auto& b = g.node(e.b);
  const double n = static_cast<double>(g.node_count());
  const double deg = static_cast<double>(g.degree(e.a) + g.degree(e.b)) / (2.0 * static_cast<double>(max_degree));
  const double bw = static_cast<double>(std::min(a.downlink_bps, b.downlink_bps)) /
                    static_cast<double>(topology::limits::kDefaultDownlinkBps);
  const double cpu = static_cast<double>(std::min(a.compute_hz, b.compute_hz)) /
                     static_cast<double>(topology::limits::kDefaultComputeHz);
  const double storage = static_cast<double>(std::min(a.storage, b.storage)) /
                         static_cast<double>(topology::limits::kDefaultStorage);
  std::vector<double> f(congruity::kFeatureCount);
  f[0] = rng.uniform();                                     // timestamp
  f[1] = scenario_code;                                     // scenario type
  f[2] = rng.uniform();                                     // uplink traffic
  f[3] = rng.uniform();                                     // downlink traffic
  f[4] = cpu;                                               // capability
  f[5] = rng.uniform();                                     // utilization
  f[6] = density;                                           // object density
  f[7] = static_cast<double>(e.weight) / w_max;             // latency
  f[8] = storage;                                           // storage space
  f[9] = std::clamp(bw, 0.0, 1.0);                          // bandwidth state
  f[10] = cpu;                                              // computational state
  f[11] = std::clamp(deg, 0.0, 1.0);                        // neighbor list size
  f[12] = static_cast<double>(e.a) / n;                     // source
  f[13] = static_cast<double>(e.b) / n;                     // destination
  f[14] = 0.5;                                              // protocol
  f[15] = rng.uniform();                                    // port
  f[16] = rng.uniform();                                    // payload
  for (double& v : f) v = std::clamp(v, 0.0, 1.0);
  return f;
}

topology::WeightedGraph learned_weights(const ScenarioParams& p, const topology::WeightedGraph& g, double density,
                                        std::uint64_t seed, std::size_t& replaced) {
  congruity::DatasetSpec spec;
  spec.personal_samples = p.learner_samples / 2;
  spec.general_samples = p.learner_samples - spec.personal_samples;
  auto [dp, dg] = congruity::synthesize_dataset(spec, Rng::derive(seed, kDataset));
  congruity::Hyperparams h = p.learner_hyper;
  h.rng_seed = Rng::derive(seed, kLearner);
  const std::size_t widths[] = {congruity::kFeatureCount, 8, 1};
  const auto model = congruity::train(dp, dg, h, widths);

  const auto edges = g.edges();
  std::vector<topology::Distance> weights(edges.size());
  topology::Distance w_max = 1;
  std::size_t max_degree = 1;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    weights[i] = edges[i].weight;
    w_max = std::max(w_max, edges[i].weight);
  }
  for (NodeId v = 0; v < g.node_count(); ++v) max_degree = std::max(max_degree, g.degree(v));

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(Rng::derive(seed, kEdges));
  rng.shuffle(order.begin(), order.end());
  replaced = static_cast<std::size_t>(std::llround(p.learner_edge_fraction * static_cast<double>(edges.size())));
  const double code = static_cast<double>(static_cast<int>(p.scenario)) / 2.0;
  for (std::size_t k = 0; k < replaced; ++k) {
    const auto& e = edges[order[k]];
    const auto f = edge_features(g, e, static_cast<double>(w_max), code, density, max_degree, rng);
    const double d = congruity::predict_distance(model.theta, f, static_cast<double>(w_max));
    weights[order[k]] = std::max<topology::Distance>(1, std::llround(d));
  }
  return g.with_weights(weights);
}

}  // namespace

PointResult run_point(const ScenarioParams& p, double sweep_value, std::uint64_t seed) {
  p.validate();
  PointResult out;
  topology::TopologyParams tp = p.topology;
  tp.scenario = p.scenario;
  std::uint64_t volume = 0;
  switch (p.scenario) {
    case Scenario::embb:
      volume = static_cast<std::uint64_t>(std::llround(sweep_value * 1e6 * p.segment_seconds / 8.0));
      if (volume == 0) volume = p.embb_volume;
      break;
    case Scenario::urllc:
      tp.aggregation_latency_us = std::llround(sweep_value * 1000.0);
      volume = p.urllc_volume;
      break;
    case Scenario::mmtc:
      tp.density_per_km2 = static_cast<std::uint64_t>(std::llround(sweep_value));
      volume = p.mmtc_volume;
      break;
  }

  out.topology = topology::generate_topology(tp, Rng::derive(seed, kTopology));
  const auto& layout = out.topology.layout;
  const topology::WeightedGraph& raw = out.topology.graph;
  topology::WeightedGraph learned;
  const topology::WeightedGraph* g = &raw;
  if (p.learner) {
    const double density = static_cast<double>(tp.density_per_km2) / 1'049'000.0;
    learned = learned_weights(p, raw, std::clamp(density, 0.0, 1.0), seed, out.replaced_edges);
    g = &learned;
  }

  const auto targets = containment::parse_targets(p.targets);
  out.hierarchy = containment::containerize(*g, targets);
  ilm::IlmTree tree = ilm::IlmTree::build(out.hierarchy);

  // Catalog in popularity order.
  struct Item {
    std::string hrn;
    std::string device_hrn;
    NodeId publisher;
  };
  std::vector<Item> items;
  std::map<NodeId, ilm::LocalDomain> domains;
  if (p.scenario == Scenario::mmtc) {
    std::vector<NodeId> devices = layout.mmtc_devices;
    if (devices.empty()) throw Error(Errc::InvalidParams, "mMTC topology has no devices");
    Rng rank_rng(Rng::derive(seed, kRanking));
    rank_rng.shuffle(devices.begin(), devices.end());
    for (NodeId d : devices) {
      items.push_back({"urn:sien:data:" + std::to_string(d), "urn:sien:device:" + std::to_string(d), d});
    }
  } else {
    if (layout.origin_servers.empty()) throw Error(Errc::InvalidParams, "topology has no origin servers");
    for (std::size_t j = 0; j < p.catalog_size; ++j) {
      items.push_back({"urn:sien:content:" + std::to_string(j), {}, layout.origin_servers[j % layout.origin_servers.size()]});
    }
  }
  const std::uint64_t catalog_volume = volume * items.size();
  const auto capacity = static_cast<std::uint64_t>(std::floor(p.cache_fraction * static_cast<double>(catalog_volume)));

  userplane::UserPlane up(*g, tree, capacity);
  std::vector<ilm::GlobalId> by_rank;
  by_rank.reserve(items.size());
  for (std::size_t j = 0; j < items.size(); ++j) {
    userplane::ContentObject obj;
    obj.hrn = items[j].hrn;
    obj.volume = volume;
    obj.publisher = items[j].publisher;
    obj.popularity_rank = static_cast<std::uint32_t>(j + 1);
    up.publish(obj, items[j].device_hrn);
    by_rank.push_back(tree.naming().assign_id(items[j].hrn));
    if (!items[j].device_hrn.empty()) {
      const NodeId gw = layout.gateway_of.at(items[j].publisher);
      auto& dom = domains.try_emplace(gw, gw).first->second;
      const ilm::LocalId lt = dom.register_local(tree.naming().assign_id(items[j].device_hrn));
      const ilm::LocalId lx = dom.register_local(by_rank.back());
      dom.bind_local(lx, lt);
    }
  }
  const auto fp = userplane::zipf_popularity(items.size(), p.zipf_s, p.zipf_shift);

  if (p.universal_preplacement) {
    for (NodeId ap : layout.access_points) {
      for (const auto& id : by_rank) up.preplace(id, ap);
    }
  }

  if (p.prefetch_budget > 0) {
    std::vector<NodeId> candidates;
    std::vector<double> nc;
    for (const auto& n : g->nodes()) {
      if (topology::is_forwarding(n.kind) && n.kind != topology::NodeKind::server) {
        candidates.push_back(n.id);
        nc.push_back(topology::node_centrality(*g, n.id));
      }
    }
    const std::size_t top = std::min(p.prefetch_k, items.size());
    const auto plan = userplane::prefetch_plan(candidates, nc, std::span(by_rank).first(top),
                                               std::span(fp).first(top), p.prefetch_budget,
                                               Rng::derive(seed, kPrefetch));
    for (const auto& pl : plan.placements) up.place_explicit(pl.object, pl.node);
  }

  // Workload: uniform subscriber, Zipf-ranked object.
  if (layout.subscribers.empty()) throw Error(Errc::InvalidParams, "topology has no subscribers");
  std::vector<double> cdf(fp.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < fp.size(); ++j) cdf[j] = acc += fp[j];
  Rng wl(Rng::derive(seed, kWorkload));
  std::uint64_t total_hops = 0, hits = 0, paths = 0;
  out.records.reserve(p.request_count);
  for (std::size_t n = 0; n < p.request_count; ++n) {
    const NodeId requester = layout.subscribers[wl.uniform_int(0, layout.subscribers.size() - 1)];
    const double u = wl.uniform() * acc;
    const std::size_t rank = std::min<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(),
                                                   cdf.size() - 1);
    const ilm::GlobalId& id = by_rank[rank];
    RequestRecord rec;
    rec.n = n;
    rec.volume = volume;
    rec.baseline_hops = up.hop_index().hops(requester, items[rank].publisher);
    if (rec.baseline_hops == userplane::HopIndex::kUnreachable) {
      throw Error(Errc::Unreachable, "requester cannot reach the publisher");
    }
    userplane::RequestMsg msg;
    msg.requested = id;
    msg.requester = ilm::digest("urn:sien:subscriber:" + std::to_string(requester));
    msg.origin_node = requester;
    for (std::size_t j = 0; j < p.paths_per_request; ++j) {
      auto trace = up.handle_request(msg, n, j);
      up.deliver_data(trace);
      rec.paths.push_back(trace.hops);
      total_hops += trace.hops;
      hits += trace.cache_hit;
      ++paths;
      if (p.keep_traces) out.traces.push_back(std::move(trace));
    }
    out.records.push_back(std::move(rec));
  }

  out.terms = ito_terms(out.records);
  ItoReport& r = out.report;
  r.scenario = p.scenario;
  r.sweep_var = std::string(sweep_variable(p.scenario));
  r.sweep_value = sweep_value;
  r.seed = seed;
  r.request_count = p.request_count;
  r.ito = out.terms.ratio();
  r.mean_hops = static_cast<double>(total_hops) / static_cast<double>(paths);
  r.cache_hit_rate = static_cast<double>(hits) / static_cast<double>(paths);
  return out;
}

std::vector<ItoReport> run_scenario(const ScenarioParams& p) {
  p.validate();
  const auto values = p.sweep_values.empty() ? default_sweep(p.scenario) : p.sweep_values;
  std::vector<ItoReport> out;
  for (double v : values) {
    for (std::uint64_t seed : p.seeds) out.push_back(run_point(p, v, seed).report);
  }
  return out;
}

void write_report_header(std::ostream& out) { out << "scenario,sweep_var,sweep_value,seed,N,ito,mean_hops,cache_hit_rate\n"; }

void write_report_row(std::ostream& out, const ItoReport& r) {
  out << topology::to_string(r.scenario) << ',' << r.sweep_var << ',' << format_double(r.sweep_value) << ',' << r.seed
      << ',' << r.request_count << ',' << format_double(r.ito) << ',' << format_double(r.mean_hops) << ','
      << format_double(r.cache_hit_rate) << '\n';
}

void write_reports(std::ostream& out, const std::vector<ItoReport>& reports) {
  write_report_header(out);
  for (const auto& r : reports) write_report_row(out, r);
}

namespace {

template <typename T>
T parse_number(const std::string& s, std::size_t line) {
  std::istringstream is(s);
  T v{};
  if (!(is >> v) || !is.eof()) {
    throw Error(Errc::ParseError, "report line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<ItoReport> read_reports(std::istream& in) {
  std::vector<ItoReport> out;
  std::string line;
  std::size_t ln = 0;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "report is empty");
  ++ln;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "scenario,sweep_var,sweep_value,seed,N,ito,mean_hops,cache_hit_rate") {
    throw Error(Errc::ParseError, "report line 1: unexpected header");
  }
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() != 8) throw Error(Errc::ParseError, "report line " + std::to_string(ln) + ": expected 8 columns");
    ItoReport r;
    const auto s = topology::parse_scenario(cells[0]);
    if (!s) throw Error(Errc::ParseError, "report line " + std::to_string(ln) + ": unknown scenario");
    r.scenario = *s;
    r.sweep_var = cells[1];
    r.sweep_value = parse_number<double>(cells[2], ln);
    r.seed = parse_number<std::uint64_t>(cells[3], ln);
    r.request_count = parse_number<std::size_t>(cells[4], ln);
    r.ito = parse_number<double>(cells[5], ln);
    r.mean_hops = parse_number<double>(cells[6], ln);
    r.cache_hit_rate = parse_number<double>(cells[7], ln);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepSummary> sweep_report(const std::vector<ItoReport>& reports) {
  std::map<std::tuple<int, std::string, double>, std::vector<double>> groups;
  for (const auto& r : reports) groups[{static_cast<int>(r.scenario), r.sweep_var, r.sweep_value}].push_back(r.ito);
  std::vector<SweepSummary> out;
  for (const auto& [key, xs] : groups) {
    SweepSummary s;
    s.scenario = static_cast<Scenario>(std::get<0>(key));
    s.sweep_var = std::get<1>(key);
    s.sweep_value = std::get<2>(key);
    s.seeds = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    if (xs.size() > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - s.mean) * (x - s.mean);
      s.variance = ss / static_cast<double>(xs.size() - 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<SweepSummary>& summary) {
  out << "scenario,sweep_var,sweep_value,seeds,ito_mean,ito_min,ito_max,ito_variance\n";
  for (const auto& s : summary) {
    out << topology::to_string(s.scenario) << ',' << s.sweep_var << ',' << format_double(s.sweep_value) << ','
        << s.seeds << ',' << format_double(s.mean) << ',' << format_double(s.min) << ',' << format_double(s.max)
        << ',' << format_double(s.variance) << '\n';
  }
}

void write_plot_data(std::ostream& out, const std::vector<SweepSummary>& summary) {
  out << "scenario,x,y,y_min,y_max\n";
  for (const auto& s : summary) {
    out << topology::to_string(s.scenario) << ',' << format_double(s.sweep_value) << ',' << format_double(s.mean)
        << ',' << format_double(s.min) << ',' << format_double(s.max) << '\n';
  }
}

}  // namespace sien::evaluation
