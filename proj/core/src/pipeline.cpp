#include "gridwatch/pipeline.hpp"

#include <algorithm>

#include "gridwatch/csv.hpp"
#include "gridwatch/error.hpp"
#include "gridwatch/ingest.hpp"
#include "gridwatch/svg.hpp"

namespace gridwatch {

void PipelineConfig::validate() const {
  detector.validate();
  if (heatmap_window < 1) throw Error("heatmap window must be at least 1");
  if (features.lags < 1) throw Error("lags must be at least 1");
  if (window_budget <= features.lags) {
    throw Error("window budget must exceed the lag count (" + std::to_string(features.lags) + ")");
  }
  if (!std::filesystem::exists(input)) throw Error("input file not found: " + input.string());
  if (!std::filesystem::exists(model)) throw Error("model file not found: " + model.string());
  if (cluster) {
    if (cluster->L < 1) throw Error("L must be at least 1");
    if (cluster->restarts < 1) throw Error("restarts must be at least 1");
    if (cluster->assignments_csv.empty()) throw Error("cluster stage needs an assignments path");
  }
}

StreamResult stream_stations(const Dataset& data, const DetectorConfig& detector_config) {
  StreamResult r;
  r.outliers.resize(data.size());
  r.triggers.resize(data.size());
  for (std::size_t s = 0; s < data.size(); ++s) {
    const auto& values = data[s].series.values;
    Detector detector(detector_config);
    auto& ov = r.outliers[s];
    ov.reserve(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
      const auto event = detector.feed(values[t]);
      ov.push_back(static_cast<std::uint8_t>(event.severity));
      if (event.kind == FeedEvent::Kind::Triggered && !r.triggers[s]) {
        r.triggers[s] = TriggerInfo{*detector.run_start(), t};
        if (detector.frozen()) break;
      }
    }
  }
  return r;
}

std::vector<int> final_scores(std::span<const OutlierVector> outliers, int window) {
  std::size_t final_index = 0;
  for (const auto& ov : outliers) final_index = std::max(final_index, ov.size());
  std::vector<int> scores;
  for (const auto& ov : outliers) {
    const std::size_t t = std::min(final_index, ov.size());
    scores.push_back(t == 0 ? 0 : window_score(ov, t, window));
  }
  return scores;
}

FaultAlert classify_window(const TimeSeries& series, const TriggerInfo& trigger, const TrainedModel& model,
                           const FeatureConfig& features, int window_budget) {
  const auto& v = series.values;
  const std::size_t length =
      std::min<std::size_t>(static_cast<std::size_t>(window_budget), v.size() - trigger.first_outlier);
  const auto fv = extract(std::span<const double>(v.data() + trigger.first_outlier, length), features);
  const auto p = predict(model, fv.values);
  FaultAlert alert;
  alert.station_id = series.station.station_id;
  alert.trigger_index = trigger.trigger_index + 1;
  alert.timestamp = static_cast<double>(alert.trigger_index) / 30.0;
  alert.label = p.label;
  alert.confidence = p.confidence;
  alert.latency = length;
  return alert;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  // check the model before touching the input
  const auto model = load_model(config.model);
  if (config.expected_kind && kind_of(model) != *config.expected_kind) {
    throw Error("model file holds a " + std::string(to_string(kind_of(model))) + " model, expected " +
                std::string(to_string(*config.expected_kind)));
  }
  if (input_dimension(model) != config.features.dimension()) {
    throw Error("model expects " + std::to_string(input_dimension(model)) + " features but " +
                std::string(to_string(config.features.method)) + " produces " +
                std::to_string(config.features.dimension()));
  }
  const auto data = load_dataset(config.input);
  return run_pipeline(config, data, model);
}

PipelineResult run_pipeline(const PipelineConfig& config, const Dataset& data, const TrainedModel& model) {
  if (input_dimension(model) != config.features.dimension()) {
    throw Error("model expects " + std::to_string(input_dimension(model)) + " features but " +
                std::string(to_string(config.features.method)) + " produces " +
                std::to_string(config.features.dimension()));
  }
  PipelineResult result;
  auto [outliers, triggers] = stream_stations(data, config.detector);

  // stage 2
  std::vector<std::size_t> alert_rows;
  for (std::size_t s = 0; s < data.size(); ++s) {
    if (!triggers[s]) continue;
    try {
      result.alerts.push_back(
          classify_window(data[s].series, *triggers[s], model, config.features, config.window_budget));
      alert_rows.push_back(s);
    } catch (const Error& e) {
      result.warnings.push_back("station " + std::to_string(data[s].series.station.station_id) +
                                ": not classified: " + e.what());
    }
  }

  if (config.alerts_csv) write_alerts(result.alerts, *config.alerts_csv);
  if (config.outliers_csv) {
    std::vector<std::int64_t> ids;
    for (const auto& s : data) ids.push_back(s.series.station.station_id);
    write_outliers(ids, outliers, *config.outliers_csv);
  }
  if (config.heatmap_svg) {
    const auto scores = final_scores(outliers, config.heatmap_window);
    std::vector<StationMeta> stations;
    for (const auto& s : data) stations.push_back(s.series.station);
    csv::write_file(*config.heatmap_svg, heatmap_svg(stations, scores, config.heatmap_window));
  }

  // stage 3
  if (config.cluster) {
    const auto& cc = *config.cluster;
    std::vector<std::vector<double>> samples;
    std::vector<StationMeta> stations;
    for (std::size_t a = 0; a < result.alerts.size(); ++a) {
      if (result.alerts[a].label != cc.fault_class) continue;
      const auto& series = data[alert_rows[a]].series;
      const auto first = triggers[alert_rows[a]]->first_outlier;
      const std::span<const double> window(series.values.data() + first, result.alerts[a].latency);
      samples.push_back(minmax_normalize(window));
      stations.push_back(series.station);
    }
    if (samples.size() < static_cast<std::size_t>(cc.L)) {
      result.warnings.push_back("cluster stage skipped: " + std::to_string(samples.size()) + " " +
                                std::string(to_string(cc.fault_class)) + " alerts, need at least " +
                                std::to_string(cc.L));
    } else {
      const auto dist = dtw_matrix(samples, cc.band);
      result.clustering = pam_best(dist, cc.L, config.seed, cc.restarts);
      geo_export(*result.clustering, stations, cc.assignments_csv, cc.geo_svg);
    }
  }
  return result;
}

void write_alerts(std::span<const FaultAlert> alerts, const std::filesystem::path& path) {
  std::string out = "station_id,trigger_index,timestamp_s,label,confidence,latency_samples\n";
  for (const auto& a : alerts) {
    out += std::to_string(a.station_id) + "," + std::to_string(a.trigger_index) + "," +
           csv::format_double(a.timestamp) + "," + std::string(to_string(a.label)) + "," +
           csv::format_double(a.confidence) + "," + std::to_string(a.latency) + "\n";
  }
  csv::write_file(path, out);
}

void write_outliers(std::span<const std::int64_t> station_ids, std::span<const OutlierVector> outliers,
                    const std::filesystem::path& path) {
  if (station_ids.size() != outliers.size()) throw Error("station ids and outlier vectors differ in count");
  std::string out = "station_id,t,severity\n";
  for (std::size_t s = 0; s < outliers.size(); ++s) {
    const auto id = std::to_string(station_ids[s]);
    for (std::size_t t = 0; t < outliers[s].size(); ++t) {
      if (outliers[s][t] == 0) continue;
      out += id + "," + std::to_string(t + 1) + "," + std::to_string(outliers[s][t]) + "\n";
    }
  }
  csv::write_file(path, out);
}

std::string heatmap_svg(std::span<const StationMeta> stations, std::span<const int> scores, int window) {
  if (stations.size() != scores.size()) throw Error("stations and scores differ in count");
  std::vector<svg::Point> points;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    points.push_back({stations[i].latitude, stations[i].longitude,
                      svg::heat_color(scores[i], 2.0 * window),
                      "station " + std::to_string(stations[i].station_id) + " score " +
                          std::to_string(scores[i])});
  }
  return svg::scatter(points, "Outlier heat map (window " + std::to_string(window) + ")");
}

}  // namespace gridwatch
