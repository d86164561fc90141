#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridwatch/anomaly.hpp"
#include "gridwatch/classify/model.hpp"
#include "gridwatch/cluster.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/types.hpp"

namespace gridwatch {

struct ClusterStageConfig {
  FaultLabel fault_class = FaultLabel::GMD2;  // alerts with this predicted label are clustered
  int L = 5;
  int restarts = 5;
  std::optional<std::size_t> band;
  std::filesystem::path assignments_csv;            // station_id,lat,lon,cluster
  std::optional<std::filesystem::path> geo_svg;
};

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path model;
  std::optional<ModelKind> expected_kind;  // checked against the model file when set
  DetectorConfig detector;
  int heatmap_window = 40;
  FeatureConfig features;
  int window_budget = 600;  // samples from the first outlier fed to the classifier
  std::optional<std::filesystem::path> alerts_csv;
  std::optional<std::filesystem::path> outliers_csv;
  std::optional<std::filesystem::path> heatmap_svg;
  std::optional<ClusterStageConfig> cluster;  // stage 3 runs only when set
  std::uint64_t seed = 42;

  /// Throws Error describing the first out-of-range field or missing file.
  void validate() const;
};

struct FaultAlert {
  std::int64_t station_id = 0;
  std::size_t trigger_index = 0;  // 1-based sample index of the triggering sample
  double timestamp = 0.0;         // trigger_index / 30 seconds
  FaultLabel label = FaultLabel::DroppedLoad;
  double confidence = 0.0;
  std::size_t latency = 0;  // samples after (and including) the first outlier used to classify
};

struct PipelineResult {
  std::vector<FaultAlert> alerts;
  std::vector<std::string> warnings;
  std::optional<Clustering> clustering;
};

struct StreamResult {
  std::vector<OutlierVector> outliers;  // severities of the samples each detector consumed
  std::vector<std::optional<TriggerInfo>> triggers;
};

/// Stage 1: each series is fed through its own detector in sample order. With
/// freezing on, a station consumes nothing after its trigger.
StreamResult stream_stations(const Dataset& data, const DetectorConfig& detector);

/// Heat-map scores at the last index any station reached; a frozen station
/// keeps the score it had when it stopped.
std::vector<int> final_scores(std::span<const OutlierVector> outliers, int window);

/// Stage 1 replays each station through its own detector and freezes it on
/// trigger; stage 2 classifies [first outlier, first outlier + budget);
/// stage 3 optionally clusters the alerts of one predicted class.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Same as run_pipeline but on an already loaded dataset and model.
PipelineResult run_pipeline(const PipelineConfig& config, const Dataset& data, const TrainedModel& model);

/// Stage 2 for one triggered series.
FaultAlert classify_window(const TimeSeries& series, const TriggerInfo& trigger, const TrainedModel& model,
                           const FeatureConfig& features, int window_budget);

void write_alerts(std::span<const FaultAlert> alerts, const std::filesystem::path& path);

/// `station_id,t,severity`, one row per nonzero severity, t 1-based.
void write_outliers(std::span<const std::int64_t> station_ids, std::span<const OutlierVector> outliers,
                    const std::filesystem::path& path);

/// Stations at lat/lon colored by score over [0, 2 * window].
std::string heatmap_svg(std::span<const StationMeta> stations, std::span<const int> scores, int window);

}  // namespace gridwatch
