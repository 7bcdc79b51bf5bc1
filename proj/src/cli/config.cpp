// SPDX-License-Identifier: Apache-2.0
#include "sien/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sien/error.hpp"

namespace sien::cli {

namespace {

constexpr KeyInfo kKeys[] = {
    {"scenario", "", "embb | urllc | mmtc (required)"},
    {"seeds", "1", "comma-separated seed list; --seed overrides"},
    // topology
    {"regions", "4", "region switches under the root"},
    {"aps_per_region", "4", "access points per region"},
    {"devices_per_ap", "8", "subscriber devices per access point"},
    {"origin_servers", "2", "publishing servers next to the root"},
    {"area_km2", "1", "mMTC deployment area"},
    {"density_per_km2", "63000", "mMTC devices per km^2 (outside sweeps)"},
    {"devices_per_gateway", "120", "mMTC devices behind one gateway"},
    {"access_latency_min_us", "50", "access link latency lower bound"},
    {"access_latency_max_us", "450", "access link latency upper bound"},
    {"aggregation_latency_us", "5000", "aggregation links draw from [L, 2L]"},
    {"core_latency_us", "160000", "core links draw from [C, 2C]"},
    {"topology_file", "", "graph file for containerize (default: generate)"},
    // containers
    {"targets", "1ms,150ms,500ms", "per-level targets, value+unit[:mode]"},
    // learner
    {"alpha", "0.5", "weight of the personal error"},
    {"lambda_g", "1", "label error weight"},
    {"lambda_q", "0.01", "regularized reconstruction weight"},
    {"lambda_p", "1", "personal label error weight"},
    {"lambda_k", "0.01", "filtered reconstruction weight"},
    {"q", "2", "regularizer norm"},
    {"k", "5", "top-k filter size"},
    {"learning_rate", "0.008", "descent step"},
    {"prune_probability", "0.5", "chance of zeroing a pruning candidate"},
    {"batch_size", "32", "samples per batch"},
    {"max_epochs", "500", "descent epochs"},
    {"tolerance", "1e-9", "stop when the relative change falls below"},
    {"d_max", "0", "live neurons below which a layer stops pruning (0 = widest)"},
    {"hidden", "8", "hidden layer widths, comma-separated"},
    {"personal_samples", "100", "synthetic personal samples"},
    {"general_samples", "100", "synthetic general samples"},
    {"label_coverage", "1", "fraction of general samples with a distance label"},
    {"conflict_fraction", "0", "fraction of samples with conflicting labels"},
    {"dataset_personal", "", "personal dataset CSV (default: synthesize)"},
    {"dataset_general", "", "general dataset CSV (default: synthesize)"},
    // workload
    {"sweep", "", "sweep values (default: the scenario axis)"},
    {"request_count", "2000", "requests per sweep point"},
    {"catalog_size", "200", "objects (eMBB/URLLC)"},
    {"paths_per_request", "1", "routing paths per request"},
    {"zipf_s", "0.8", "popularity exponent"},
    {"zipf_shift", "10", "popularity rank shift"},
    {"cache_fraction", "0.1", "cache per element as a fraction of catalog volume"},
    {"prefetch_k", "10", "top-k objects eligible for prefetching"},
    {"prefetch_budget", "10", "prefetch placements"},
    {"universal_preplacement", "false", "every access point holds every object"},
    {"segment_seconds", "10", "eMBB object = rate * segment / 8"},
    {"urllc_volume", "4096", "URLLC object bytes"},
    {"mmtc_volume", "100", "mMTC object bytes (< 128)"},
    {"embb_volume", "4000000", "eMBB bytes when no rate applies"},
    {"learner", "false", "replace link distances with learned ones"},
    {"learner_edge_fraction", "0.1", "share of links given learned distances"},
    {"learner_samples", "200", "synthetic samples for the scenario learner"},
    {"traces", "false", "write per-point trace CSVs"},
    // report
    {"reports", "", "report CSVs for the report command, comma-separated"},
};

const KeyInfo* info(std::string_view key) {
  for (const auto& k : kKeys) {
    if (k.name == key) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, const std::string& v, std::string_view kind) {
  throw Error(Errc::ConfigError, std::string(key) + " = '" + v + "' is not a valid " + std::string(kind));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string_view rest = v;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

double to_double(std::string_view key, const std::string& v) {
  double d = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v, "number");
  return d;
}

std::uint64_t to_u64(std::string_view key, const std::string& v) {
  std::uint64_t u = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), u);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, v, "non-negative integer");
  return u;
}

}  // namespace

std::span<const KeyInfo> known_keys() { return kKeys; }

Config Config::parse(std::istream& in) {
  Config c;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::ConfigError, "config line " + std::to_string(ln) + ": expected 'key = value'");
    }
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    if (!info(key)) throw Error(Errc::ConfigError, "config line " + std::to_string(ln) + ": unknown key '" + std::string(key) + "'");
    if (!c.values_.emplace(std::string(key), std::string(value)).second) {
      throw Error(Errc::ConfigError, "config line " + std::to_string(ln) + ": repeated key '" + std::string(key) + "'");
    }
  }
  return c;
}

Config Config::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse(is);
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config " + path.string());
  return parse(in);
}

bool Config::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::optional<std::string> Config::raw(std::string_view key) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  const KeyInfo* k = info(key);
  if (!k) throw Error(Errc::ConfigError, "unknown key '" + std::string(key) + "'");
  if (k->default_value.empty()) return std::nullopt;
  return std::string(k->default_value);
}

std::string Config::require(std::string_view key) const {
  auto v = raw(key);
  if (!v || v->empty()) throw Error(Errc::ConfigError, "missing required key '" + std::string(key) + "'");
  return *v;
}

std::string Config::get_string(std::string_view key) const { return raw(key).value_or(""); }
double Config::get_double(std::string_view key) const { return to_double(key, require(key)); }
std::uint64_t Config::get_u64(std::string_view key) const { return to_u64(key, require(key)); }

bool Config::get_bool(std::string_view key) const {
  const std::string v = require(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "boolean");
}

std::vector<double> Config::get_doubles(std::string_view key) const {
  std::vector<double> out;
  for (const auto& item : split_list(get_string(key))) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::uint64_t> Config::get_u64s(std::string_view key) const {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(get_string(key))) out.push_back(to_u64(key, item));
  return out;
}

void Config::set(std::string_view key, std::string value) {
  if (!info(key)) throw Error(Errc::ConfigError, "unknown key '" + std::string(key) + "'");
  values_[std::string(key)] = std::move(value);
}

topology::Scenario scenario_of(const Config& c) {
  const std::string v = c.require("scenario");
  const auto s = topology::parse_scenario(v);
  if (!s) bad_value("scenario", v, "scenario (embb, urllc, mmtc)");
  return *s;
}

namespace {
std::uint32_t u32(const Config& c, std::string_view key) {
  const auto v = c.get_u64(key);
  if (v > UINT32_MAX) bad_value(key, std::to_string(v), "32-bit count");
  return static_cast<std::uint32_t>(v);
}
}  // namespace

topology::TopologyParams topology_params(const Config& c) {
  topology::TopologyParams p;
  p.scenario = scenario_of(c);
  p.regions = u32(c, "regions");
  p.aps_per_region = u32(c, "aps_per_region");
  p.devices_per_ap = u32(c, "devices_per_ap");
  p.origin_servers = u32(c, "origin_servers");
  p.area_km2 = c.get_double("area_km2");
  p.density_per_km2 = c.get_u64("density_per_km2");
  p.devices_per_gateway = u32(c, "devices_per_gateway");
  p.access_latency_min_us = static_cast<topology::Distance>(c.get_u64("access_latency_min_us"));
  p.access_latency_max_us = static_cast<topology::Distance>(c.get_u64("access_latency_max_us"));
  p.aggregation_latency_us = static_cast<topology::Distance>(c.get_u64("aggregation_latency_us"));
  p.core_latency_us = static_cast<topology::Distance>(c.get_u64("core_latency_us"));
  return p;
}

congruity::Hyperparams hyperparams(const Config& c) {
  congruity::Hyperparams h;
  h.alpha = c.get_double("alpha");
  h.lambda_g = c.get_double("lambda_g");
  h.lambda_q = c.get_double("lambda_q");
  h.lambda_p = c.get_double("lambda_p");
  h.lambda_k = c.get_double("lambda_k");
  const auto q = c.get_u64("q");
  if (q > 64) bad_value("q", std::to_string(q), "norm order (1..64)");
  h.q = static_cast<int>(q);
  h.k = c.get_u64("k");
  h.learning_rate = c.get_double("learning_rate");
  h.prune_probability = c.get_double("prune_probability");
  h.batch_size = c.get_u64("batch_size");
  h.max_epochs = c.get_u64("max_epochs");
  h.tolerance = c.get_double("tolerance");
  h.d_max = c.get_u64("d_max");
  const auto seeds = c.get_u64s("seeds");
  h.rng_seed = seeds.empty() ? 1 : seeds.front();
  h.validate();
  return h;
}

congruity::DatasetSpec dataset_spec(const Config& c) {
  congruity::DatasetSpec s;
  s.personal_samples = c.get_u64("personal_samples");
  s.general_samples = c.get_u64("general_samples");
  s.label_coverage = c.get_double("label_coverage");
  s.conflict_fraction = c.get_double("conflict_fraction");
  return s;
}

std::vector<std::size_t> network_widths(const Config& c) {
  std::vector<std::size_t> w{congruity::kFeatureCount};
  for (auto v : c.get_u64s("hidden")) {
    if (v == 0) bad_value("hidden", "0", "layer width");
    w.push_back(v);
  }
  w.push_back(1);
  return w;
}

evaluation::ScenarioParams scenario_params(const Config& c) {
  evaluation::ScenarioParams p;
  p.scenario = scenario_of(c);
  p.topology = topology_params(c);
  p.sweep_values = c.get_doubles("sweep");
  p.seeds = c.get_u64s("seeds");
  p.targets = c.require("targets");
  p.request_count = c.get_u64("request_count");
  p.catalog_size = c.get_u64("catalog_size");
  p.paths_per_request = c.get_u64("paths_per_request");
  p.zipf_s = c.get_double("zipf_s");
  p.zipf_shift = c.get_double("zipf_shift");
  p.cache_fraction = c.get_double("cache_fraction");
  p.prefetch_k = c.get_u64("prefetch_k");
  p.prefetch_budget = c.get_u64("prefetch_budget");
  p.universal_preplacement = c.get_bool("universal_preplacement");
  p.segment_seconds = c.get_double("segment_seconds");
  p.urllc_volume = c.get_u64("urllc_volume");
  p.mmtc_volume = c.get_u64("mmtc_volume");
  p.embb_volume = c.get_u64("embb_volume");
  p.learner = c.get_bool("learner");
  p.learner_edge_fraction = c.get_double("learner_edge_fraction");
  p.learner_samples = c.get_u64("learner_samples");
  p.keep_traces = c.get_bool("traces");
  if (p.learner) p.learner_hyper = hyperparams(c);
  p.validate();
  return p;
}

std::string describe_keys() {
  std::ostringstream os;
  os << "Config keys (key = value, '#' comments):\n";
  for (const auto& k : kKeys) {
    os << "  " << k.name;
    for (std::size_t i = k.name.size(); i < 24; ++i) os << ' ';
    os << (k.default_value.empty() ? std::string("(unset)") : std::string(k.default_value)) << "  " << k.help << '\n';
  }
  return os.str();
}

}  // namespace sien::cli
