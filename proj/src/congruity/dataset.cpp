// SPDX-License-Identifier: Apache-2.0
#include "sien/congruity/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "sien/error.hpp"
#include "sien/rng.hpp"

namespace sien::congruity {

namespace {

constexpr std::array<std::string_view, kLabelKindCount> kLabelNames = {
    "personal",      "general",        "distance", "scalability",          "mobility",        "security",
    "object_state",  "prediction",     "classification", "prefetch_replacement", "service_quality", "cost",
};

constexpr std::size_t kLatency = 7, kUtilization = 5, kBandwidth = 9, kNeighbors = 11, kDensity = 6;

}  // namespace

std::string_view to_string(LabelKind kind) { return kLabelNames[static_cast<std::size_t>(kind)]; }

std::optional<LabelKind> parse_label_kind(std::string_view s) {
  for (std::size_t i = 0; i < kLabelNames.size(); ++i) {
    if (kLabelNames[i] == s) return static_cast<LabelKind>(i);
  }
  return std::nullopt;
}

std::optional<double> Sample::target() const {
  if (auto it = labels.find(LabelKind::distance); it != labels.end()) return it->second;
  return std::nullopt;
}

void validate_measurement(const Sample& s) {
  if (s.features.size() != kFeatureCount) {
    throw Error(Errc::InvalidSpec, "a sample needs exactly 17 features, got " + std::to_string(s.features.size()));
  }
  for (double v : s.features) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(Errc::InvalidSpec, "features must be normalized to [0, 1]");
  }
}

double synthetic_distance(std::span<const double> f) {
  const double mix = 0.45 * f[kLatency] + 0.2 * f[kUtilization] + 0.15 * (1.0 - f[kBandwidth]) +
                     0.1 * f[kNeighbors] + 0.1 * f[kDensity];
  return 0.2 + 0.6 * mix;
}

namespace {

// Largest-remainder apportionment of n items over the given shares.
std::vector<std::size_t> apportion(std::size_t n, const std::vector<double>& shares) {
  std::vector<std::size_t> counts(shares.size());
  std::vector<std::pair<double, std::size_t>> rema;
  std::size_t used = 0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const double exact = shares[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    used += counts[i];
    rema.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < n; ++i, ++used) ++counts[rema[i % rema.size()].second];
  return counts;
}

Dataset make_one(DatasetKind kind, std::size_t n, double coverage, const DatasetSpec& spec, Rng& rng) {
  const std::vector<double> shares{spec.mix.benign, spec.mix.malware, spec.mix.uncertain};
  const double class_value[] = {kBenign, kMalware, kUncertain};
  const auto counts = apportion(n, shares);
  std::vector<std::size_t> cls;
  for (std::size_t c = 0; c < counts.size(); ++c) cls.insert(cls.end(), counts[c], c);
  rng.shuffle(cls.begin(), cls.end());

  Dataset d;
  d.kind = kind;
  d.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = d.samples[i];
    s.features.resize(kFeatureCount);
    for (double& v : s.features) v = rng.uniform();
    s.features[0] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    s.features[1] = 0.5 * static_cast<double>(rng.uniform_int(0, 2));
    s.labels[kind == DatasetKind::personal ? LabelKind::personal : LabelKind::general] = 1.0;
    s.labels[LabelKind::classification] = class_value[cls[i]];
    s.labels[LabelKind::distance] = synthetic_distance(s.features);
  }

  const auto conflicts = static_cast<std::size_t>(std::llround(spec.conflict_fraction * static_cast<double>(n)));
  if (conflicts > 0 && n > 1) {
    std::vector<std::size_t> idx(n - 1);
    std::iota(idx.begin(), idx.end(), std::size_t{1});
    rng.shuffle(idx.begin(), idx.end());
    idx.resize(std::min(conflicts, idx.size()));
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx) {
      // Copy the features of an earlier sample of a different class.
      const std::size_t start = rng.uniform_int(0, i - 1);
      std::size_t src = start;
      for (std::size_t step = 0; step < i; ++step) {
        const std::size_t j = (start + step) % i;
        if (cls[j] != cls[i]) {
          src = j;
          break;
        }
      }
      Sample& s = d.samples[i];
      s.features = d.samples[src].features;
      s.features[0] = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
      const double truth = synthetic_distance(s.features);
      s.labels[LabelKind::distance] = truth + 0.25 > 0.8 ? truth - 0.25 : truth + 0.25;
    }
  }

  const auto labeled = static_cast<std::size_t>(std::llround(coverage * static_cast<double>(n)));
  if (labeled < n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    rng.shuffle(idx.begin(), idx.end());
    for (std::size_t t = labeled; t < n; ++t) d.samples[idx[t]].labels.erase(LabelKind::distance);
  }
  return d;
}

}  // namespace

std::pair<Dataset, Dataset> synthesize_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.personal_samples == 0 || spec.general_samples == 0) {
    throw Error(Errc::InvalidSpec, "both datasets need at least one sample");
  }
  if (!(spec.label_coverage >= 0.0 && spec.label_coverage <= 1.0)) {
    throw Error(Errc::InvalidSpec, "label_coverage must lie in [0, 1]");
  }
  if (!(spec.conflict_fraction >= 0.0 && spec.conflict_fraction < 1.0)) {
    throw Error(Errc::InvalidSpec, "conflict_fraction must lie in [0, 1)");
  }
  const ClassMix& m = spec.mix;
  if (m.benign < 0 || m.malware < 0 || m.uncertain < 0 || std::abs(m.benign + m.malware + m.uncertain - 1.0) > 1e-6) {
    throw Error(Errc::InvalidSpec, "class mix must be non-negative and sum to 1");
  }
  Rng rng(seed);
  Dataset dp = make_one(DatasetKind::personal, spec.personal_samples, 1.0, spec, rng);
  Dataset dg = make_one(DatasetKind::general, spec.general_samples, spec.label_coverage, spec, rng);
  return {std::move(dp), std::move(dg)};
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) out << (i ? "," : "") << kFeatureNames[i];
  for (auto name : kLabelNames) out << ',' << name;
  out << '\n';
  for (const Sample& s : d.samples) {
    if (s.features.size() != kFeatureCount) throw Error(Errc::InvalidSpec, "a sample needs exactly 17 features");
    for (std::size_t i = 0; i < kFeatureCount; ++i) out << (i ? "," : "") << format_double(s.features[i]);
    for (std::size_t k = 0; k < kLabelKindCount; ++k) {
      out << ',';
      if (auto it = s.labels.find(static_cast<LabelKind>(k)); it != s.labels.end()) out << format_double(it->second);
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t line) {
  double v = 0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || p != cell.data() + cell.size()) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, DatasetKind kind) {
  Dataset d;
  d.kind = kind;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "dataset is missing its header");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  if (header.size() != kFeatureCount + kLabelKindCount) {
    throw Error(Errc::ParseError, "dataset header needs 17 feature and 12 label columns");
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (header[i] != kFeatureNames[i]) throw Error(Errc::ParseError, "unexpected column '" + std::string(header[i]) + "'");
  }
  for (std::size_t k = 0; k < kLabelKindCount; ++k) {
    if (header[kFeatureCount + k] != kLabelNames[k]) {
      throw Error(Errc::ParseError, "unexpected column '" + std::string(header[kFeatureCount + k]) + "'");
    }
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                                        " cells");
    }
    Sample s;
    for (std::size_t i = 0; i < kFeatureCount; ++i) s.features.push_back(parse_cell(cells[i], lineno));
    for (std::size_t k = 0; k < kLabelKindCount; ++k) {
      const auto cell = cells[kFeatureCount + k];
      if (!cell.empty()) s.labels[static_cast<LabelKind>(k)] = parse_cell(cell, lineno);
    }
    try {
      validate_measurement(s);
    } catch (const Error& e) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
    d.samples.push_back(std::move(s));
  }
  return d;
}

Dataset load_dataset_csv(const std::filesystem::path& path, DatasetKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return read_dataset_csv(in, kind);
}

}  // namespace sien::congruity
