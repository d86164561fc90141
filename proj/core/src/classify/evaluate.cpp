#include "gridwatch/classify/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>

#include "gridwatch/error.hpp"
#include "gridwatch/rng.hpp"

namespace gridwatch {

StratifiedSplit stratified_split(std::span<const FaultLabel> labels, double train_fraction,
                                 std::mt19937_64& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train fraction must lie in (0, 1)");
  }
  std::array<std::vector<std::size_t>, kNumFaultClasses> members;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[static_cast<std::size_t>(code_of(labels[i]))].push_back(i);
  }
  StratifiedSplit split;
  for (std::size_t c = 0; c < kNumFaultClasses; ++c) {
    auto& m = members[c];
    if (m.empty()) continue;
    if (m.size() < 2) {
      throw Error("class " + std::string(to_string(kAllFaultLabels[c])) +
                  " has fewer than 2 samples; cannot stratify");
    }
    std::shuffle(m.begin(), m.end(), rng);
    auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(m.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, m.size() - 1);
    split.train.insert(split.train.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), m.begin() + static_cast<std::ptrdiff_t>(n_train), m.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

namespace {

void summarize(EvalReport& r) {
  const double n = static_cast<double>(r.accuracies.size());
  if (r.accuracies.empty()) return;
  r.mean = std::accumulate(r.accuracies.begin(), r.accuracies.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : r.accuracies) ss += (a - r.mean) * (a - r.mean);
  r.stddev = r.accuracies.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

}  // namespace

EvalReport evaluate_with(const LabeledDataset& data, const TrainFn& train, const EvalOptions& options) {
  if (options.n_trials < 1) throw Error("need at least one trial");
  require_trainable(data);
  using clock = std::chrono::steady_clock;
  EvalReport report;
  for (int trial = 0; trial < options.n_trials; ++trial) {
    auto rng = stream_for(options.seed, static_cast<std::uint64_t>(trial));
    const auto split = stratified_split(data.labels, options.train_fraction, rng);
    const auto train_set = data.subset(split.train);

    const auto t0 = clock::now();
    const Classifier classifier = train(train_set, splitmix64(options.seed ^ splitmix64(trial)));
    const auto t1 = clock::now();
    std::size_t correct = 0;
    for (auto i : split.test) {
      const FaultLabel predicted = classifier(data.row(i));
      const auto truth = static_cast<std::size_t>(code_of(data.labels[i]));
      ++report.confusion[truth][static_cast<std::size_t>(code_of(predicted))];
      if (predicted == data.labels[i]) ++correct;
    }
    const auto t2 = clock::now();
    report.train_seconds += std::chrono::duration<double>(t1 - t0).count();
    report.predict_seconds += std::chrono::duration<double>(t2 - t1).count();
    report.accuracies.push_back(static_cast<double>(correct) / static_cast<double>(split.test.size()));
  }
  summarize(report);
  return report;
}

EvalReport evaluate(const LabeledDataset& data, ModelKind kind, const ModelParams& params,
                    const EvalOptions& options) {
  TrainFn train = [kind, &params](const LabeledDataset& d, std::uint64_t seed) -> Classifier {
    auto model = std::make_shared<TrainedModel>(train_model(kind, d, params, seed));
    return [model](std::span<const double> x) { return predict(*model, x).label; };
  };
  return evaluate_with(data, train, options);
}

SweepResult budget_sweep(const LabeledDataset& data, std::span<const ModelKind> kinds,
                         std::span<const double> fractions, int trials_per_point,
                         const ModelParams& params, std::uint64_t seed) {
  SweepResult result;
  const auto counts = data.class_counts();
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) throw Error("sweep fractions must lie in (0, 1)");
    std::string missing;
    for (std::size_t c = 0; c < kNumFaultClasses; ++c) {
      if (counts[c] == 0) continue;
      if (std::llround(f * counts[c]) < 1) {
        if (!missing.empty()) missing += ",";
        missing += to_string(kAllFaultLabels[c]);
      }
    }
    if (!missing.empty()) {
      result.warnings.push_back("fraction " + std::to_string(f) +
                                " skipped: no training samples for " + missing);
      continue;
    }
    for (auto kind : kinds) {
      const auto report = evaluate(data, kind, params, {trials_per_point, f, seed});
      result.rows.push_back({f, kind, report.mean, report.stddev, trials_per_point});
    }
  }
  return result;
}

LabeledDataset featurize(const Dataset& series, const FeatureConfig& config) {
  LabeledDataset out;
  for (const auto& s : series) {
    if (!s.label) {
      throw Error("station " + std::to_string(s.series.station.station_id) + " has no label");
    }
    out.add(extract(s.series, config).values, *s.label, s.series.station);
  }
  out.dim = config.dimension();
  return out;
}

WindowedFeatures featurize_windows(const Dataset& series, const DetectorConfig& detector,
                                   const FeatureConfig& config, int budget) {
  if (budget <= config.lags) {
    throw Error("window budget must exceed the lag count (" + std::to_string(config.lags) + ")");
  }
  WindowedFeatures out;
  out.data.dim = config.dimension();
  std::vector<std::int64_t> untriggered;
  for (const auto& s : series) {
    if (!s.label) {
      throw Error("station " + std::to_string(s.series.station.station_id) + " has no label");
    }
    const auto& v = s.series.values;
    const auto hit = find_trigger(v, detector);
    if (!hit) {
      untriggered.push_back(s.series.station.station_id);
      continue;
    }
    const std::size_t length = std::min<std::size_t>(static_cast<std::size_t>(budget), v.size() - hit->first_outlier);
    try {
      out.data.add(extract(std::span<const double>(v.data() + hit->first_outlier, length), config).values,
                   *s.label, s.series.station);
    } catch (const Error& e) {
      out.excluded_stations.push_back(s.series.station.station_id);
      out.warnings.push_back("station " + std::to_string(s.series.station.station_id) + ": " + e.what());
    }
  }
  if (!untriggered.empty()) {
    std::string ids;
    for (auto id : untriggered) {
      if (!ids.empty()) ids += ",";
      ids += std::to_string(id);
    }
    out.warnings.push_back("excluded series that never triggered: " + ids);
    out.excluded_stations.insert(out.excluded_stations.end(), untriggered.begin(), untriggered.end());
  }
  return out;
}

PreemptResult preemptive_curve(const Dataset& series, std::span<const ModelKind> kinds,
                               const ModelParams& params, const PreemptOptions& options) {
  PreemptResult result;
  struct Triggered {
    const LabeledSeries* s;
    std::size_t first_outlier;
  };
  std::vector<Triggered> triggered;
  for (const auto& s : series) {
    if (!s.label) throw Error("preemptive curve needs labeled series");
    const auto hit = find_trigger(s.series.values, options.detector);
    if (!hit) {
      result.excluded_stations.push_back(s.series.station.station_id);
      continue;
    }
    triggered.push_back({&s, hit->first_outlier});
  }
  if (!result.excluded_stations.empty()) {
    std::string ids;
    for (auto id : result.excluded_stations) {
      if (!ids.empty()) ids += ",";
      ids += std::to_string(id);
    }
    result.warnings.push_back("excluded series that never triggered: " + ids);
  }

  std::vector<std::optional<int>> windows(options.sample_counts.begin(), options.sample_counts.end());
  if (options.include_full_window) windows.push_back(std::nullopt);

  for (const auto& window : windows) {
    if (window && *window <= options.features.lags) {
      result.warnings.push_back("window of " + std::to_string(*window) +
                                " samples skipped: need more than " +
                                std::to_string(options.features.lags) + " samples");
      continue;
    }
    LabeledDataset data;
    int short_series = 0;
    int degenerate = 0;
    for (const auto& t : triggered) {
      const auto& values = t.s->series.values;
      const std::size_t available = values.size() - t.first_outlier;
      const std::size_t length = window ? static_cast<std::size_t>(*window) : available;
      if (length > available) {
        ++short_series;
        continue;
      }
      const std::span<const double> slice(values.data() + t.first_outlier, length);
      try {
        data.add(extract(slice, options.features).values, *t.s->label, t.s->series.station);
      } catch (const Error&) {
        ++degenerate;
      }
    }
    const std::string label = window ? std::to_string(*window) : std::string("full");
    if (short_series > 0) {
      result.warnings.push_back("window " + label + ": " + std::to_string(short_series) +
                                " series too short after first outlier, excluded");
    }
    if (degenerate > 0) {
      result.warnings.push_back("window " + label + ": " + std::to_string(degenerate) +
                                " series with degenerate features, excluded");
    }
    if (data.classes().size() < 2) {
      result.warnings.push_back("window " + label + " skipped: fewer than 2 classes remain");
      continue;
    }
    for (auto kind : kinds) {
      const auto report = evaluate(data, kind, params, options.eval);
      result.rows.push_back({window, kind, report.mean, report.stddev, static_cast<int>(data.size())});
    }
  }
  return result;
}

}  // namespace gridwatch
