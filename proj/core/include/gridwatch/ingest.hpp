#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridwatch/types.hpp"

namespace gridwatch {

// ---------------------------------------------------------------------------
// Dataset CSV
//
//   station_id,name,lat,lon,channel,label,t,value
//
// One row per sample, rows grouped by series and ordered by t (0-based).
// `label` is empty for unlabeled series.
// ---------------------------------------------------------------------------

inline constexpr std::string_view kDatasetHeader = "station_id,name,lat,lon,channel,label,t,value";

/// Reads a dataset CSV. When `channel` is set, rows of other channels are
/// skipped. Throws Error with a line number on malformed rows, naming the
/// station and sample index on non-finite values.
Dataset load_dataset(const std::filesystem::path& path,
                     std::optional<Channel> channel = std::nullopt);

/// Writes a dataset CSV with shortest round-trip decimal formatting, so
/// load_dataset(save_dataset(d)) == d bit for bit.
void save_dataset(const Dataset& data, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic scenarios
// ---------------------------------------------------------------------------

inline constexpr std::size_t kNumZones = 5;

/// Parametric shape of a class signature. Each class combines a smooth level
/// shift with a sustained dynamic component; the numbers below tune both.
struct SignatureParams {
  double amplitude = 0.02;      // Hz, scale of the whole signature
  double decay_rate = 0.0;      // 1/s, envelope decay of the dynamic part (< 0 grows)
  double oscillation_hz = 1.0;  // dominant frequency of the dynamic part
  double ramp_slope = 1.0;      // 1/s, how fast the level shift develops

  bool operator==(const SignatureParams&) const = default;
};

/// Per-class defaults used when a scenario does not override them.
SignatureParams default_signature(FaultLabel label);

struct ScenarioSpec {
  FaultLabel fault_class = FaultLabel::DroppedLoad;
  int n_stations = 126;
  int series_length = 1802;
  double baseline = 60.0;
  double noise_sigma = 1e-4;
  int onset_index = 600;
  int onset_jitter = 300;  // uniform per-series shift in [-jitter, +jitter]
  SignatureParams signature = default_signature(FaultLabel::DroppedLoad);
  double geo_attenuation = 1.0;  // spread of the per-zone amplitude factor
  double long_fraction = 0.1;    // share of series extended to long_length
  int long_length = 3000;        // extra samples are prepended before onset
  double sample_rate_hz = 30.0;
  std::uint64_t seed = 1;
  std::uint64_t layout_seed = 2024;  // station geography, shared across scenarios
  std::int64_t first_station_id = 0;

  /// Throws Error describing the first invalid field.
  void validate() const;
};

/// Reads `key = value` lines (`#` comments, blank lines allowed). Unknown keys
/// are rejected. Signature parameters default per fault_class.
ScenarioSpec parse_scenario_config(const std::string& text);
ScenarioSpec load_scenario_config(const std::filesystem::path& path);

struct StationSite {
  StationMeta meta;
  int zone = 0;  // planted geographic zone, 0..kNumZones-1
};

/// Bus geography: uniform in a Washington/Oregon bounding box, zones by nearest
/// of five fixed zone centres.
std::vector<StationSite> station_layout(int n_stations, std::uint64_t layout_seed);

/// One generated series plus the ground truth that produced it.
struct GeneratedSeries {
  LabeledSeries data;
  int zone = 0;
  int onset = 0;             // first sample index carrying the signature
  double amplitude = 0.0;    // effective amplitude after zone factor and jitter
  double level_ratio = 0.0;  // effective level-to-dynamics mix
};

/// Signature value (deviation from baseline) `samples_after_onset` samples
/// after onset, for an effective amplitude and level ratio.
double signature_value(FaultLabel label, const SignatureParams& params, double amplitude,
                       double level_ratio, int samples_after_onset, double sample_rate_hz);

/// Pure function of `spec`: identical specs give bit-identical output.
std::vector<GeneratedSeries> generate_scenario(const ScenarioSpec& spec);

struct CorpusSpec {
  int n_stations = 126;
  int series_length = 1802;
  double noise_sigma = 1e-4;
  double geo_attenuation = 1.0;
  double long_fraction = 0.1;
  std::uint64_t seed = 1;
  std::uint64_t layout_seed = 2024;
  /// Series per class; OpenDC and IceStorm stand for the two consolidated
  /// classes (7 * 126 + 560 + 559 = 2001).
  std::array<int, kNumFaultClasses> class_counts = {126, 126, 560, 126, 126, 559, 126, 126, 126};
};

/// Full labeled corpus. Classes needing more series than there are stations
/// are filled from several independent events. Station ids are unique.
std::vector<GeneratedSeries> generate_corpus(const CorpusSpec& spec);

/// Strips ground truth.
Dataset to_dataset(const std::vector<GeneratedSeries>& generated);

}  // namespace gridwatch
