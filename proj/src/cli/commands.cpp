// SPDX-License-Identifier: Apache-2.0
#include "sien/cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "sien/congruity/model_io.hpp"
#include "sien/congruity/train.hpp"
#include "sien/containment/containerize.hpp"
#include "sien/error.hpp"
#include "sien/evaluation/scenario.hpp"
#include "sien/topology/graph_io.hpp"

namespace sien::cli {

namespace fs = std::filesystem;

void OutputSet::add(const fs::path& relative, std::string content) { files_.emplace_back(relative, std::move(content)); }

void OutputSet::commit() {
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [rel, content] : files_) {
    const fs::path final_path = dir_ / rel;
    std::error_code ec;
    fs::create_directories(final_path.parent_path(), ec);
    if (ec) {
      cleanup();
      throw Error(Errc::IoError, "cannot create " + final_path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = final_path;
    tmp += ".tmp";
    temps.push_back(tmp);
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    os << content;
    os.close();
    if (!os) {
      cleanup();
      throw Error(Errc::IoError, "cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], dir_ / files_[i].first, ec);
    if (ec) {
      cleanup();
      for (std::size_t k = 0; k < i; ++k) fs::remove(dir_ / files_[k].first, ec);
      throw Error(Errc::IoError, "cannot move output into " + (dir_ / files_[i].first).string());
    }
  }
  files_.clear();
}

std::uint64_t GlobalOptions::first_seed() const {
  if (seed) return *seed;
  const auto seeds = config.get_u64s("seeds");
  return seeds.empty() ? 1 : seeds.front();
}

namespace {

std::vector<std::string> commit(OutputSet& outs, const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    outs.add(name, content);
    names.push_back(name);
  }
  outs.commit();
  return names;
}

topology::WeightedGraph topology_for(const GlobalOptions& g, const std::optional<fs::path>& topo) {
  std::optional<fs::path> path = topo;
  if (!path && !g.config.get_string("topology_file").empty()) path = g.config.get_string("topology_file");
  if (path) return topology::load_graph(*path);
  return topology::generate_topology(topology_params(g.config), g.first_seed()).graph;
}

evaluation::ScenarioParams run_params(const GlobalOptions& g) {
  auto p = scenario_params(g.config);
  if (g.seed) p.seeds = {*g.seed};
  return p;
}

std::string value_tag(double v) {
  std::string s = congruity::format_double(v);
  for (char& c : s) {
    if (c == '.' || c == '+') c = '_';
  }
  return s;
}

}  // namespace

std::vector<std::string> cmd_gen_topo(const GlobalOptions& g) {
  const auto topo = topology::generate_topology(topology_params(g.config), g.first_seed());
  OutputSet outs(g.out);
  return commit(outs, {{"topology.graph", topology::format_graph(topo.graph)}});
}

std::vector<std::string> cmd_containerize(const GlobalOptions& g, const std::optional<fs::path>& topo) {
  const auto targets = containment::parse_targets(g.config.require("targets"));
  const auto graph = topology_for(g, topo);
  const auto h = containment::containerize(graph, targets);
  const auto report = containment::validate_hierarchy(h);
  if (!report.ok()) throw Error(Errc::InvalidTargets, "hierarchy failed validation");
  OutputSet outs(g.out);
  return commit(outs, {{"hierarchy.txt", containment::format_hierarchy(h)}});
}

std::vector<std::string> cmd_train(const GlobalOptions& g, const std::vector<fs::path>& datasets) {
  congruity::Hyperparams h = hyperparams(g.config);
  if (g.seed) h.rng_seed = *g.seed;
  const auto widths = network_widths(g.config);

  std::vector<fs::path> files = datasets;
  if (files.empty()) {
    const auto p = g.config.get_string("dataset_personal");
    const auto q = g.config.get_string("dataset_general");
    if (!p.empty() || !q.empty()) {
      if (p.empty() || q.empty()) throw Error(Errc::ConfigError, "dataset_personal and dataset_general go together");
      files = {p, q};
    }
  }
  congruity::Dataset dp, dg;
  if (files.empty()) {
    std::tie(dp, dg) = congruity::synthesize_dataset(dataset_spec(g.config), h.rng_seed);
  } else if (files.size() == 2) {
    dp = congruity::load_dataset_csv(files[0], congruity::DatasetKind::personal);
    dg = congruity::load_dataset_csv(files[1], congruity::DatasetKind::general);
  } else {
    throw Error(Errc::ConfigError, "train takes a personal and a general dataset file");
  }

  const auto result = congruity::train(dp, dg, h, widths);
  std::ostringstream curve;
  curve << "epoch,loss\n";
  for (std::size_t i = 0; i < result.loss_curve.size(); ++i) {
    curve << i << ',' << congruity::format_double(result.loss_curve[i]) << '\n';
  }
  OutputSet outs(g.out);
  return commit(outs, {{"model.txt", congruity::format_model({result.theta, h})}, {"loss_curve.csv", curve.str()}});
}

std::vector<std::string> cmd_run(const GlobalOptions& g) {
  const auto p = run_params(g);
  const auto values = p.sweep_values.empty() ? evaluation::default_sweep(p.scenario) : p.sweep_values;
  std::vector<evaluation::ItoReport> reports;
  std::vector<std::pair<std::string, std::string>> files;
  for (double v : values) {
    for (std::uint64_t seed : p.seeds) {
      auto point = evaluation::run_point(p, v, seed);
      reports.push_back(point.report);
      if (p.keep_traces) {
        std::ostringstream os;
        userplane::write_trace_header(os);
        for (const auto& t : point.traces) userplane::write_trace_row(os, t);
        files.emplace_back("traces/" + std::string(topology::to_string(p.scenario)) + "_" + value_tag(v) + "_" +
                               std::to_string(seed) + ".csv",
                           os.str());
      }
    }
  }
  std::ostringstream os;
  evaluation::write_reports(os, reports);
  files.insert(files.begin(), {"report.csv", os.str()});
  OutputSet outs(g.out);
  return commit(outs, files);
}

std::vector<std::string> cmd_report(const GlobalOptions& g, const std::vector<fs::path>& reports) {
  std::vector<fs::path> files = reports;
  if (files.empty()) {
    std::stringstream ss(g.config.get_string("reports"));
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) files.emplace_back(item);
    }
  }
  if (files.empty()) throw Error(Errc::ConfigError, "report needs at least one report file");
  std::vector<evaluation::ItoReport> all;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw Error(Errc::IoError, "cannot open report " + f.string());
    auto rs = evaluation::read_reports(in);
    all.insert(all.end(), rs.begin(), rs.end());
  }
  if (all.empty()) throw Error(Errc::ParseError, "reports hold no rows");
  const auto summary = evaluation::sweep_report(all);
  std::ostringstream s, plot;
  evaluation::write_summary(s, summary);
  evaluation::write_plot_data(plot, summary);
  OutputSet outs(g.out);
  return commit(outs, {{"summary.csv", s.str()}, {"plot_data.csv", plot.str()}});
}

namespace {

bool is_validation(Errc c) {
  switch (c) {
    case Errc::ConfigError:
    case Errc::ParseError:
    case Errc::InvalidParams:
    case Errc::InvalidTargets:
    case Errc::UnitMismatch:
    case Errc::InvalidSpec:
    case Errc::DimensionMismatch:
    case Errc::EmptyDataset:
    case Errc::DanglingEndpoint:
    case Errc::DuplicateEdge:
    case Errc::NegativeWeight:
    case Errc::SelfLoop:
    case Errc::InvalidNode:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Containerized networking simulator: topology, containers, ILM, caching and offloading sweeps", "sien"};
  app.footer(describe_keys());
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--seed", seed, "seed overriding the config's seed list");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-topo", "generate a scenario topology -> topology.graph");
  auto* cont = app.add_subcommand("containerize", "build the container hierarchy -> hierarchy.txt");
  std::string topo_file;
  cont->add_option("topology", topo_file, "graph file (default: topology_file key or a generated topology)");
  auto* train = app.add_subcommand("train", "train the distance learner -> model.txt, loss_curve.csv");
  std::vector<std::string> datasets;
  train->add_option("datasets", datasets, "personal and general dataset CSVs (default: synthesize)");
  auto* run = app.add_subcommand("run", "run the scenario sweep -> report.csv [traces/]");
  auto* report = app.add_subcommand("report", "summarize report CSVs -> summary.csv, plot_data.csv");
  std::vector<std::string> report_files;
  report->add_option("reports", report_files, "report CSV files (default: reports key)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidation;
  }

  try {
    GlobalOptions g;
    if (!config_path.empty()) g.config = Config::load(config_path);
    g.out = out_dir;
    g.seed = seed;
    std::vector<std::string> produced;
    if (*gen) {
      scenario_of(g.config);
      produced = cmd_gen_topo(g);
    } else if (*cont) {
      produced = cmd_containerize(g, topo_file.empty() ? std::nullopt : std::optional<fs::path>(topo_file));
    } else if (*train) {
      std::vector<fs::path> ds(datasets.begin(), datasets.end());
      produced = cmd_train(g, ds);
    } else if (*run) {
      produced = cmd_run(g);
    } else if (*report) {
      std::vector<fs::path> rs(report_files.begin(), report_files.end());
      produced = cmd_report(g, rs);
    }
    for (const auto& f : produced) out << (g.out / f).string() << '\n';
    return kSuccess;
  } catch (const Error& e) {
    err << "sien: error: " << e.what() << '\n';
    return is_validation(e.code()) ? kValidation : kRuntime;
  } catch (const std::exception& e) {
    err << "sien: error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace sien::cli
