#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gridwatch/anomaly.hpp"
#include "gridwatch/classify/dataset.hpp"
#include "gridwatch/classify/model.hpp"
#include "gridwatch/features.hpp"

namespace gridwatch {

struct StratifiedSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, round(train_fraction * n_c) members go to training (clamped so
/// both sides keep at least one). Throws if a class has fewer than 2 samples.
StratifiedSplit stratified_split(std::span<const FaultLabel> labels, double train_fraction,
                                 std::mt19937_64& rng);

using ConfusionMatrix = std::array<std::array<std::uint32_t, kNumFaultClasses>, kNumFaultClasses>;

struct EvalReport {
  std::vector<double> accuracies;  // per trial, correct / total on the test split
  double mean = 0.0;
  double stddev = 0.0;             // sample standard deviation across trials
  ConfusionMatrix confusion{};     // [true][predicted], pooled over trials
  double train_seconds = 0.0;
  double predict_seconds = 0.0;
};

struct EvalOptions {
  int n_trials = 100;
  double train_fraction = 0.8;
  std::uint64_t seed = 1;
};

using Classifier = std::function<FaultLabel(std::span<const double>)>;
/// Builds a classifier from a training split; the second argument is a
/// per-trial seed.
using TrainFn = std::function<Classifier(const LabeledDataset&, std::uint64_t)>;

EvalReport evaluate_with(const LabeledDataset& data, const TrainFn& train, const EvalOptions& options);
EvalReport evaluate(const LabeledDataset& data, ModelKind kind, const ModelParams& params,
                    const EvalOptions& options);

struct SweepRow {
  double fraction = 0.0;
  ModelKind kind = ModelKind::Svm;
  double mean = 0.0;
  double stddev = 0.0;
  int trials = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

/// Accuracy against training-set size. Fractions whose stratified split would
/// leave a class out of training are skipped with a warning naming the classes.
SweepResult budget_sweep(const LabeledDataset& data, std::span<const ModelKind> kinds,
                         std::span<const double> fractions, int trials_per_point,
                         const ModelParams& params, std::uint64_t seed);

struct PreemptRow {
  std::optional<int> samples;  // nullopt: window runs to the end of the series
  ModelKind kind = ModelKind::Svm;
  double mean = 0.0;
  double stddev = 0.0;
  int n_series = 0;
};

struct PreemptResult {
  std::vector<PreemptRow> rows;
  std::vector<std::string> warnings;
  std::vector<std::int64_t> excluded_stations;  // never triggered
};

struct PreemptOptions {
  DetectorConfig detector;
  FeatureConfig features;
  std::vector<int> sample_counts = {30, 60, 120, 300, 600};
  bool include_full_window = true;
  EvalOptions eval{10, 0.8, 1};
};

/// Accuracy when features come only from the first c samples after the first
/// outlier of each series' triggering run.
PreemptResult preemptive_curve(const Dataset& series, std::span<const ModelKind> kinds,
                               const ModelParams& params, const PreemptOptions& options);

/// Features for every labeled series; throws naming the station on failure.
LabeledDataset featurize(const Dataset& series, const FeatureConfig& config);

struct WindowedFeatures {
  LabeledDataset data;
  std::vector<std::int64_t> excluded_stations;  // never triggered or degenerate window
  std::vector<std::string> warnings;
};

/// Features of [first outlier, first outlier + budget) for every labeled series
/// that triggers, truncated at the series end. This is the window the pipeline
/// classifies, so models meant for `run` should be trained on it.
WindowedFeatures featurize_windows(const Dataset& series, const DetectorConfig& detector,
                                   const FeatureConfig& config, int budget);

}  // namespace gridwatch
