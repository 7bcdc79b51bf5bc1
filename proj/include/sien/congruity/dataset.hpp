// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sien::congruity {

inline constexpr std::size_t kFeatureCount = 17;

// Fixed feature order of a measurement sample; every entry normalized to [0, 1].
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "timestamp",   "scenario_type",  "uplink_traffic",  "downlink_traffic",   "capability",  "utilization",
    "object_density", "latency",     "storage_space",   "bandwidth_state",    "computational_state",
    "neighbor_list_size", "source",  "destination",     "protocol",           "port",        "payload",
};

enum class LabelKind {
  personal,
  general,
  distance,
  scalability,
  mobility,
  security,
  object_state,
  prediction,
  classification,
  prefetch_replacement,
  service_quality,
  cost,
};

inline constexpr std::size_t kLabelKindCount = 12;
std::string_view to_string(LabelKind kind);
std::optional<LabelKind> parse_label_kind(std::string_view s);

struct Sample {
  std::vector<double> features;
  std::map<LabelKind, double> labels;  // partial

  // The concrete regression task: the distance label.
  std::optional<double> target() const;
  bool operator==(const Sample&) const = default;
};

enum class DatasetKind { personal, general };

struct Dataset {
  DatasetKind kind = DatasetKind::general;
  std::vector<Sample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  bool operator==(const Dataset&) const = default;
};

// Checks feature count 17 and the [0, 1] range. Throws InvalidSpec.
void validate_measurement(const Sample& s);

// Class mix: benign / malware / uncertain.
struct ClassMix {
  double benign = 9'077'448.0 / 9'581'751.0;
  double malware = 328'811.0 / 9'581'751.0;
  double uncertain = 175'492.0 / 9'581'751.0;
};

struct DatasetSpec {
  std::size_t personal_samples = 200;
  std::size_t general_samples = 200;
  double label_coverage = 1.0;     // fraction of general samples with a distance label
  double conflict_fraction = 0.0;  // fraction of samples duplicating earlier features with a conflicting label
  ClassMix mix{};
};

// Ground truth distance (normalized to [0.2, 0.8]) behind the synthetic data.
double synthetic_distance(std::span<const double> features);

// Seeded stand-in for measured history. Throws InvalidSpec.
std::pair<Dataset, Dataset> synthesize_dataset(const DatasetSpec& spec, std::uint64_t seed);

// Classification label encoding: benign 0, malware 0.5, uncertain 1.
inline constexpr double kBenign = 0.0;
inline constexpr double kMalware = 0.5;
inline constexpr double kUncertain = 1.0;

// CSV: 17 feature columns then 12 label columns; an empty cell is an absent label.
void write_dataset_csv(std::ostream& out, const Dataset& d);
Dataset read_dataset_csv(std::istream& in, DatasetKind kind);
Dataset load_dataset_csv(const std::filesystem::path& path, DatasetKind kind);

// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace sien::congruity
