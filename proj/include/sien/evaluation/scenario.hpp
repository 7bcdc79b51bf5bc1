// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sien/congruity/objective.hpp"
#include "sien/containment/containerize.hpp"
#include "sien/evaluation/ito.hpp"
#include "sien/topology/generate.hpp"
#include "sien/userplane/forwarding.hpp"

namespace sien::evaluation {

using topology::Scenario;

struct ScenarioParams {
  Scenario scenario = Scenario::embb;
  // Empty = the scenario's default axis.
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> seeds{1};

  topology::TopologyParams topology;  // scenario field is overwritten
  std::string targets = "1ms,150ms,500ms";

  std::size_t request_count = 2000;
  std::size_t catalog_size = 200;  // eMBB/URLLC; mMTC publishes one object per device
  std::size_t paths_per_request = 1;
  double zipf_s = 0.8;
  double zipf_shift = 10.0;

  double cache_fraction = 0.1;       // of catalog volume, per forwarding element
  std::size_t prefetch_k = 10;       // top-k objects eligible for prefetching
  std::size_t prefetch_budget = 10;  // placements
  bool universal_preplacement = false;

  double segment_seconds = 10.0;          // eMBB object = rate * segment / 8
  std::uint64_t urllc_volume = 4096;      // bytes
  std::uint64_t mmtc_volume = 100;        // bytes
  std::uint64_t embb_volume = 4'000'000;  // when the sweep does not set the rate

  bool learner = false;
  double learner_edge_fraction = 0.1;
  congruity::Hyperparams learner_hyper;
  std::size_t learner_samples = 200;

  bool keep_traces = false;

  // Throws InvalidParams.
  void validate() const;
};

// The figure axes: eMBB data rate 8..512 Mb/s, URLLC latency 1..128 ms,
// mMTC density 63k..1049k objects/km^2.
std::vector<double> default_sweep(Scenario s);
std::string_view sweep_variable(Scenario s);

struct ItoReport {
  Scenario scenario = Scenario::embb;
  std::string sweep_var;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  std::size_t request_count = 0;
  double ito = 0.0;
  double mean_hops = 0.0;
  double cache_hit_rate = 0.0;
};

struct PointResult {
  ItoReport report;
  ItoTerms terms;
  std::vector<RequestRecord> records;
  std::vector<userplane::DeliveryTrace> traces;  // when keep_traces
  topology::GeneratedTopology topology;
  containment::ContainerHierarchy hierarchy;
  std::size_t replaced_edges = 0;
};

// One sweep point end to end: topology, containers, optional learned
// distances, ILM, publication, prefetching, requests and the report.
PointResult run_point(const ScenarioParams& p, double sweep_value, std::uint64_t seed);

// Sweep-major, then seed order.
std::vector<ItoReport> run_scenario(const ScenarioParams& p);

// Report CSV: scenario,sweep_var,sweep_value,seed,N,ito,mean_hops,cache_hit_rate
void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const ItoReport& r);
void write_reports(std::ostream& out, const std::vector<ItoReport>& reports);
// Throws ParseError.
std::vector<ItoReport> read_reports(std::istream& in);

struct SweepSummary {
  Scenario scenario = Scenario::embb;
  std::string sweep_var;
  double sweep_value = 0.0;
  std::size_t seeds = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double variance = 0.0;  // sample variance over seeds; 0 for one seed
};

// Groups by (scenario, sweep_var, sweep_value) in ascending order.
std::vector<SweepSummary> sweep_report(const std::vector<ItoReport>& reports);
void write_summary(std::ostream& out, const std::vector<SweepSummary>& s);
// sweep_value then mean/min/max per scenario, one row per sweep point.
void write_plot_data(std::ostream& out, const std::vector<SweepSummary>& s);

}  // namespace sien::evaluation
