// gridwatch: command line front end for the detection/classification/clustering toolkit.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gridwatch/anomaly.hpp"
#include "gridwatch/classify/dataset.hpp"
#include "gridwatch/classify/evaluate.hpp"
#include "gridwatch/classify/model.hpp"
#include "gridwatch/cluster.hpp"
#include "gridwatch/csv.hpp"
#include "gridwatch/error.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/ingest.hpp"
#include "gridwatch/pipeline.hpp"

namespace gw = gridwatch;

namespace {

void warn(const std::string& msg) { std::cerr << "gridwatch: warning: " << msg << "\n"; }

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

gw::Severity parse_severity(const std::string& text) {
  if (text == "moderate" || text == "1") return gw::Severity::Moderate;
  if (text == "severe" || text == "2") return gw::Severity::Severe;
  throw gw::Error("unknown severity '" + text + "' (expected moderate or severe)");
}

std::vector<gw::ModelKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<gw::ModelKind> kinds;
  for (const auto& n : names) kinds.push_back(gw::parse_model_kind(n));
  return kinds;
}

// "2..10" or "2,3,5"
std::vector<int> parse_range(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const auto lo = gw::csv::parse_int(std::string_view(text).substr(0, dots));
    const auto hi = gw::csv::parse_int(std::string_view(text).substr(dots + 2));
    if (!lo || !hi || *lo > *hi) throw gw::Error("bad range '" + text + "' (expected a..b)");
    for (auto v = *lo; v <= *hi; ++v) out.push_back(static_cast<int>(v));
    return out;
  }
  for (auto part : gw::csv::split(text)) {
    const auto v = gw::csv::parse_int(part);
    if (!v) throw gw::Error("bad list entry '" + std::string(part) + "'");
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

struct DetectorFlags {
  int trigger_n = 70;
  std::string severity = "severe";
  int warmup = 30;

  void add(CLI::App* cmd) {
    cmd->add_option("--trigger-n", trigger_n, "Consecutive outliers that raise a trigger");
    cmd->add_option("--severity", severity, "Minimum severity counted toward a trigger (moderate|severe)");
    cmd->add_option("--warmup", warmup, "Leading samples never flagged");
  }
  gw::DetectorConfig config() const {
    gw::DetectorConfig c;
    c.trigger_n = trigger_n;
    c.threshold = parse_severity(severity);
    c.warmup = warmup;
    c.validate();
    return c;
  }
};

struct FeatureFlags {
  std::string method = "acf";
  int lags = 20;
  std::size_t raw_length = 1802;

  void add(CLI::App* cmd) {
    cmd->add_option("--method", method, "Feature map (acf|pacf|periodogram|raw)");
    cmd->add_option("--lags", lags, "Feature dimension K for acf/pacf/periodogram");
    cmd->add_option("--raw-length", raw_length, "Fixed length of raw features");
  }
  gw::FeatureConfig config() const {
    gw::FeatureConfig c;
    c.method = gw::parse_feature_method(method);
    if (lags < 1) throw gw::Error("--lags must be at least 1");
    c.lags = lags;
    c.raw_length = raw_length;
    return c;
  }
};

struct ModelFlags {
  gw::ModelParams params;

  void add(CLI::App* cmd) {
    cmd->add_option("--gamma", params.svm.gamma, "SVM RBF kernel width");
    cmd->add_option("--C", params.svm.C, "SVM box constraint");
    cmd->add_option("--tolerance", params.svm.tolerance, "SVM KKT tolerance");
    cmd->add_option("--max-iter", params.svm.max_iterations, "SVM iteration cap per class pair");
    cmd->add_option("--trees", params.forest.n_trees, "Forest size");
    cmd->add_option("--mtry", params.forest.features_per_split, "Features sampled per split (0: ceil(sqrt(dim)))");
    cmd->add_option("--hidden", params.ann.hidden, "ANN hidden units");
    cmd->add_option("--epochs", params.ann.epochs, "ANN training epochs");
    cmd->add_option("--lr", params.ann.learning_rate, "ANN learning rate");
    cmd->add_option("--lr-decay", params.ann.lr_decay, "ANN learning rate decay");
    cmd->add_option("--batch", params.ann.batch_size, "ANN mini-batch size");
  }
};

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) warn(w);
}

// ---------------------------------------------------------------- generate

struct GenerateCmd {
  std::string out;
  std::uint64_t seed = 1;
  std::string scenario;
  std::string fault_class;
  int stations = 126;
  int length = 1802;
  double noise = 1e-4;
  double long_fraction = 0.1;
  double geo_attenuation = 1.0;
  std::uint64_t layout_seed = 2024;
  std::string truth;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("generate", "Write a synthetic labeled dataset");
    cmd->add_option("--out", out, "Dataset CSV to write")->required();
    seed_opt = cmd->add_option("--seed", seed, "Generator seed");
    cmd->add_option("--scenario", scenario, "Single-class scenario config file (key = value)");
    cmd->add_option("--class", fault_class, "Single-class scenario with default parameters");
    cmd->add_option("--stations", stations, "Stations per class");
    cmd->add_option("--length", length, "Samples per series");
    cmd->add_option("--noise", noise, "Gaussian noise sigma");
    cmd->add_option("--long-fraction", long_fraction, "Share of series extended to 3000 samples");
    cmd->add_option("--geo-attenuation", geo_attenuation, "Spread of the per-zone amplitude factor");
    cmd->add_option("--layout-seed", layout_seed, "Seed of the station geography");
    cmd->add_option("--truth", truth, "Optional CSV of planted zones and onsets");
    cmd->callback([this] { run(); });
  }

  void run() {
    std::vector<gw::GeneratedSeries> series;
    if (!scenario.empty() || !fault_class.empty()) {
      gw::ScenarioSpec spec;
      if (!scenario.empty()) {
        spec = gw::load_scenario_config(scenario);
        if (seed_opt->count() > 0) spec.seed = seed;
      } else {
        spec.fault_class = gw::parse_fault_label(fault_class);
        spec.signature = gw::default_signature(spec.fault_class);
        spec.n_stations = stations;
        spec.series_length = length;
        spec.onset_index = length / 3;
        spec.onset_jitter = std::max(0, std::min(300, std::min(spec.onset_index - 2, length - spec.onset_index - 1)));
        spec.noise_sigma = noise;
        spec.long_fraction = long_fraction;
        spec.geo_attenuation = geo_attenuation;
        spec.layout_seed = layout_seed;
        spec.seed = seed;
      }
      series = gw::generate_scenario(spec);
    } else {
      gw::CorpusSpec spec;
      spec.n_stations = stations;
      spec.series_length = length;
      spec.noise_sigma = noise;
      spec.long_fraction = long_fraction;
      spec.geo_attenuation = geo_attenuation;
      spec.seed = seed;
      spec.layout_seed = layout_seed;
      series = gw::generate_corpus(spec);
    }
    gw::save_dataset(gw::to_dataset(series), out);
    if (!truth.empty()) {
      std::string text = "station_id,label,zone,onset,amplitude,level_ratio\n";
      for (const auto& g : series) {
        text += std::to_string(g.data.series.station.station_id) + "," +
                std::string(gw::to_string(*g.data.label)) + "," + std::to_string(g.zone) + "," +
                std::to_string(g.onset) + "," + gw::csv::format_double(g.amplitude) + "," +
                gw::csv::format_double(g.level_ratio) + "\n";
      }
      gw::csv::write_file(truth, text);
    }
    std::cout << "wrote " << series.size() << " series to " << out << "\n";
  }
};

// ---------------------------------------------------------------- detect

struct DetectCmd {
  std::string input;
  DetectorFlags detector;
  bool no_freeze = false;
  std::string emit_outliers;
  std::string emit_heatmap;
  std::string emit_triggers;
  int heatmap_window = 40;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("detect", "Stream series through the outlier detector");
    cmd->add_option("--input", input, "Dataset CSV")->required();
    detector.add(cmd);
    cmd->add_flag("--no-freeze", no_freeze, "Keep consuming samples after a trigger");
    cmd->add_option("--emit-outliers", emit_outliers, "Outlier CSV (station_id,t,severity; nonzero rows)");
    cmd->add_option("--emit-heatmap", emit_heatmap, "Heat-map SVG at the final index");
    cmd->add_option("--emit-triggers", emit_triggers, "Trigger CSV (station_id,first_outlier,trigger_index)");
    cmd->add_option("--heatmap-window", heatmap_window, "Samples summed per heat-map score");
    cmd->callback([this] { run(); });
  }

  void run() {
    auto config = detector.config();
    config.freeze_on_trigger = !no_freeze;
    if (heatmap_window < 1) throw gw::Error("--heatmap-window must be at least 1");
    const auto data = gw::load_dataset(input);
    const auto r = gw::stream_stations(data, config);
    std::vector<std::int64_t> ids;
    std::vector<gw::StationMeta> stations;
    for (const auto& s : data) {
      ids.push_back(s.series.station.station_id);
      stations.push_back(s.series.station);
    }
    if (!emit_outliers.empty()) gw::write_outliers(ids, r.outliers, emit_outliers);
    if (!emit_heatmap.empty()) {
      gw::csv::write_file(emit_heatmap,
                          gw::heatmap_svg(stations, gw::final_scores(r.outliers, heatmap_window), heatmap_window));
    }
    std::size_t n_triggered = 0;
    std::string text = "station_id,first_outlier,trigger_index\n";
    for (std::size_t s = 0; s < data.size(); ++s) {
      if (!r.triggers[s]) continue;
      ++n_triggered;
      text += std::to_string(ids[s]) + "," + std::to_string(r.triggers[s]->first_outlier + 1) + "," +
              std::to_string(r.triggers[s]->trigger_index + 1) + "\n";
    }
    if (!emit_triggers.empty()) gw::csv::write_file(emit_triggers, text);
    std::cout << n_triggered << " of " << data.size() << " stations triggered\n";
  }
};

// ---------------------------------------------------------------- featurize

struct FeaturizeCmd {
  std::string input;
  std::string output;
  FeatureFlags features;
  int window_budget = 0;
  DetectorFlags detector;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("featurize", "Turn labeled series into feature vectors");
    cmd->add_option("--input", input, "Dataset CSV (labeled)")->required();
    cmd->add_option("--output", output, "Feature CSV (station_id,label,f1..fK)")->required();
    features.add(cmd);
    cmd->add_option("--window-budget", window_budget,
                    "Featurize only this many samples from the first outlier (0: whole series)");
    detector.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    gw::LabeledDataset data;
    if (window_budget > 0) {
      auto w = gw::featurize_windows(gw::load_dataset(input), detector.config(), features.config(), window_budget);
      print_warnings(w.warnings);
      data = std::move(w.data);
    } else {
      data = gw::featurize(gw::load_dataset(input), features.config());
    }
    gw::save_features(data, output);
    std::cout << "wrote " << data.size() << " feature vectors of dimension " << data.dim << " to " << output
              << "\n";
  }
};

// ---------------------------------------------------------------- train

struct TrainCmd {
  std::string model = "rf";
  std::string features;
  std::string out;
  std::uint64_t seed = 1;
  ModelFlags hyper;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("train", "Train a classifier on a feature CSV");
    cmd->add_option("--model", model, "Model kind (svm|rf|ann)");
    cmd->add_option("--features", features, "Feature CSV")->required();
    cmd->add_option("--out", out, "Model file to write")->required();
    cmd->add_option("--seed", seed, "Training seed (forest, ann)");
    hyper.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto kind = gw::parse_model_kind(model);
    const auto data = gw::load_features(features);
    const auto trained = gw::train_model(kind, data, hyper.params, seed);
    gw::save_model(trained, out);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (gw::predict(trained, data.row(i)).label == data.labels[i]) ++correct;
    }
    std::printf("trained %s on %zu samples, training accuracy %.4f\n", std::string(gw::to_string(kind)).c_str(),
                data.size(), static_cast<double>(correct) / static_cast<double>(data.size()));
  }
};

// ---------------------------------------------------------------- eval

struct EvalCmd {
  std::string features;
  std::string model_kind = "rf";
  int trials = 100;
  double train_frac = 0.8;
  std::uint64_t seed = 1;
  std::string report;
  std::string confusion;
  ModelFlags hyper;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "Repeated stratified train/test evaluation");
    cmd->add_option("--features", features, "Feature CSV")->required();
    cmd->add_option("--model-kind", model_kind, "Model kind (svm|rf|ann)");
    cmd->add_option("--trials", trials, "Number of random splits");
    cmd->add_option("--train-frac", train_frac, "Training share of each class");
    cmd->add_option("--seed", seed, "Evaluation seed");
    cmd->add_option("--report", report, "Per-trial CSV (trial,accuracy)");
    cmd->add_option("--confusion", confusion, "Pooled confusion CSV (true_label,pred_label,count)");
    hyper.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto kind = gw::parse_model_kind(model_kind);
    const auto data = gw::load_features(features);
    const auto r = gw::evaluate(data, kind, hyper.params, {trials, train_frac, seed});
    if (!report.empty()) {
      std::string text = "trial,accuracy\n";
      for (std::size_t t = 0; t < r.accuracies.size(); ++t) {
        text += std::to_string(t + 1) + "," + gw::csv::format_double(r.accuracies[t]) + "\n";
      }
      gw::csv::write_file(report, text);
    }
    if (!confusion.empty()) {
      std::string text = "true_label,pred_label,count\n";
      for (auto t : gw::kAllFaultLabels) {
        for (auto p : gw::kAllFaultLabels) {
          text += std::string(gw::to_string(t)) + "," + std::string(gw::to_string(p)) + "," +
                  std::to_string(r.confusion[static_cast<std::size_t>(gw::code_of(t))]
                                            [static_cast<std::size_t>(gw::code_of(p))]) +
                  "\n";
        }
      }
      gw::csv::write_file(confusion, text);
    }
    std::printf("%s: %d trials, mean accuracy %.4f, std %.4f, train %.2fs, predict %.2fs\n",
                std::string(gw::to_string(kind)).c_str(), trials, r.mean, r.stddev, r.train_seconds,
                r.predict_seconds);
  }
};

// ---------------------------------------------------------------- sweep

struct SweepCmd {
  std::string features;
  std::string fractions = "0.05,0.1,0.2,0.4,0.8";
  std::vector<std::string> kinds = {"svm", "rf", "ann"};
  int trials = 10;
  std::uint64_t seed = 1;
  std::string report;
  ModelFlags hyper;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("sweep", "Accuracy against training-set size");
    cmd->add_option("--features", features, "Feature CSV")->required();
    cmd->add_option("--fractions", fractions, "Comma-separated training fractions");
    cmd->add_option("--model-kind", kinds, "Model kinds")->delimiter(',');
    cmd->add_option("--trials", trials, "Splits per point");
    cmd->add_option("--seed", seed, "Evaluation seed");
    cmd->add_option("--report", report, "CSV (fraction,model,mean,stddev,trials)");
    hyper.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    std::vector<double> fr;
    for (auto part : gw::csv::split(fractions)) {
      const auto v = gw::csv::parse_double(part);
      if (!v) throw gw::Error("bad fraction '" + std::string(part) + "'");
      fr.push_back(*v);
    }
    const auto data = gw::load_features(features);
    const auto ks = parse_kinds(kinds);
    const auto r = gw::budget_sweep(data, ks, fr, trials, hyper.params, seed);
    print_warnings(r.warnings);
    std::string text = "fraction,model,mean,stddev,trials\n";
    for (const auto& row : r.rows) {
      text += gw::csv::format_double(row.fraction) + "," + std::string(gw::to_string(row.kind)) + "," +
              gw::csv::format_double(row.mean) + "," + gw::csv::format_double(row.stddev) + "," +
              std::to_string(row.trials) + "\n";
    }
    if (!report.empty()) gw::csv::write_file(report, text);
    std::cout << text;
  }
};

// ---------------------------------------------------------------- preempt

struct PreemptCmd {
  std::string input;
  std::string samples = "30,60,120,300,600";
  bool no_full = false;
  std::vector<std::string> kinds = {"svm", "rf", "ann"};
  int trials = 10;
  double train_frac = 0.8;
  std::uint64_t seed = 1;
  std::string report;
  DetectorFlags detector;
  FeatureFlags features;
  ModelFlags hyper;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("preempt", "Accuracy from the first c samples after the first outlier");
    cmd->add_option("--input", input, "Dataset CSV (labeled)")->required();
    cmd->add_option("--samples", samples, "Comma-separated window lengths");
    cmd->add_flag("--no-full", no_full, "Skip the full-window row");
    cmd->add_option("--model-kind", kinds, "Model kinds")->delimiter(',');
    cmd->add_option("--trials", trials, "Splits per point");
    cmd->add_option("--train-frac", train_frac, "Training share of each class");
    cmd->add_option("--seed", seed, "Evaluation seed");
    cmd->add_option("--report", report, "CSV (samples,model,mean,stddev,n_series)");
    detector.add(cmd);
    features.add(cmd);
    hyper.add(cmd);
    cmd->callback([this] { run(); });
  }

  void run() {
    gw::PreemptOptions options;
    options.detector = detector.config();
    options.features = features.config();
    options.sample_counts = parse_range(samples);
    options.include_full_window = !no_full;
    options.eval = {trials, train_frac, seed};
    const auto data = gw::load_dataset(input);
    const auto r = gw::preemptive_curve(data, parse_kinds(kinds), hyper.params, options);
    print_warnings(r.warnings);
    std::string text = "samples,model,mean,stddev,n_series\n";
    for (const auto& row : r.rows) {
      text += (row.samples ? std::to_string(*row.samples) : std::string("full")) + "," +
              std::string(gw::to_string(row.kind)) + "," + gw::csv::format_double(row.mean) + "," +
              gw::csv::format_double(row.stddev) + "," + std::to_string(row.n_series) + "\n";
    }
    if (!report.empty()) gw::csv::write_file(report, text);
    std::cout << text;
  }
};

// ---------------------------------------------------------------- cluster

struct ClusterCmd {
  std::string input;
  std::string fault_class = "GMD2";
  int L = 5;
  std::string elbow_range;
  int restarts = 5;
  std::uint64_t seed = 42;
  std::optional<std::size_t> band;
  std::string emit_assignments;
  std::string emit_geo;
  std::string emit_elbow;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("cluster", "DTW + PAM subgroups within one fault class");
    cmd->add_option("--input", input, "Dataset CSV (labeled)")->required();
    cmd->add_option("--class", fault_class, "Fault class to cluster");
    cmd->add_option("--L", L, "Number of clusters");
    cmd->add_option("--elbow", elbow_range, "Also tabulate L over a range, e.g. 2..10");
    cmd->add_option("--restarts", restarts, "PAM restarts (lowest cost kept)");
    cmd->add_option("--seed", seed, "PAM seed");
    cmd->add_option("--band", band, "Sakoe-Chiba band half-width (default: exact DTW)");
    cmd->add_option("--emit-assignments", emit_assignments, "CSV (station_id,lat,lon,cluster)");
    cmd->add_option("--emit-geo", emit_geo, "SVG scatter colored by cluster");
    cmd->add_option("--emit-elbow", emit_elbow, "Elbow CSV (L,mean_intra_distance,total_cost)");
    cmd->callback([this] { run(); });
  }

  void run() {
    const auto label = gw::parse_fault_label(fault_class);
    const auto data = gw::load_dataset(input);
    std::vector<std::vector<double>> samples;
    std::vector<gw::StationMeta> stations;
    for (const auto& s : data) {
      if (s.label != label) continue;
      samples.push_back(gw::minmax_normalize(s.series.values));
      stations.push_back(s.series.station);
    }
    if (samples.size() < 2) {
      throw gw::Error("need at least 2 " + fault_class + " series, found " + std::to_string(samples.size()));
    }
    const auto dist = gw::dtw_matrix(samples, band);
    const auto c = gw::pam_best(dist, L, seed, restarts);
    if (!emit_assignments.empty()) {
      std::optional<std::filesystem::path> svg;
      if (!emit_geo.empty()) svg = emit_geo;
      gw::geo_export(c, stations, emit_assignments, svg);
    } else if (!emit_geo.empty()) {
      throw gw::Error("--emit-geo needs --emit-assignments");
    }
    std::cout << "cluster,medoid_station,size,mean_distance\n";
    for (std::size_t k = 0; k < c.medoids.size(); ++k) {
      std::cout << k << "," << stations[c.medoids[k]].station_id << "," << c.sizes[k] << ","
                << gw::csv::format_double(c.mean_distance[k]) << "\n";
    }
    if (!elbow_range.empty()) {
      const auto Ls = parse_range(elbow_range);
      const auto rows = gw::elbow(dist, Ls, seed, restarts);
      std::string text = "L,mean_intra_distance,total_cost\n";
      for (const auto& r : rows) {
        text += std::to_string(r.L) + "," + gw::csv::format_double(r.mean_intra_distance) + "," +
                gw::csv::format_double(r.total_cost) + "\n";
      }
      if (!emit_elbow.empty()) gw::csv::write_file(emit_elbow, text);
      std::cout << text;
    }
  }
};

// ---------------------------------------------------------------- run

struct RunCmd {
  std::string input;
  std::string model;
  std::string model_kind;
  DetectorFlags detector;
  FeatureFlags features;
  int heatmap_window = 40;
  int budget = 600;
  std::string emit_alerts;
  std::string emit_outliers;
  std::string emit_heatmap;
  std::string cluster_class = "GMD2";
  int L = 5;
  int restarts = 5;
  std::optional<std::size_t> band;
  std::string emit_assignments;
  std::string emit_geo;
  std::uint64_t seed = 42;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("run", "Detect, classify and optionally cluster, end to end");
    cmd->add_option("--input", input, "Dataset CSV")->required();
    cmd->add_option("--model", model, "Trained model file")->required();
    cmd->add_option("--model-kind", model_kind, "Expected model kind (svm|rf|ann)");
    detector.add(cmd);
    features.add(cmd);
    cmd->add_option("--heatmap-window", heatmap_window, "Samples summed per heat-map score");
    cmd->add_option("--budget", budget, "Classification window in samples from the first outlier");
    cmd->add_option("--emit-alerts", emit_alerts, "Alert CSV");
    cmd->add_option("--emit-outliers", emit_outliers, "Outlier CSV (station_id,t,severity; nonzero rows)");
    cmd->add_option("--emit-heatmap", emit_heatmap, "Heat-map SVG at the final index");
    cmd->add_option("--cluster-class", cluster_class, "Predicted class clustered in stage 3");
    cmd->add_option("--L", L, "Stage-3 clusters");
    cmd->add_option("--restarts", restarts, "Stage-3 PAM restarts");
    cmd->add_option("--band", band, "Stage-3 DTW band");
    cmd->add_option("--emit-assignments", emit_assignments, "Stage-3 CSV; enables stage 3");
    cmd->add_option("--emit-geo", emit_geo, "Stage-3 SVG scatter");
    cmd->add_option("--seed", seed, "Stage-3 seed");
    cmd->callback([this] { run(); });
  }

  void run() {
    gw::PipelineConfig config;
    config.input = input;
    config.model = model;
    if (!model_kind.empty()) config.expected_kind = gw::parse_model_kind(model_kind);
    config.detector = detector.config();
    config.features = features.config();
    config.heatmap_window = heatmap_window;
    config.window_budget = budget;
    if (!emit_alerts.empty()) config.alerts_csv = emit_alerts;
    if (!emit_outliers.empty()) config.outliers_csv = emit_outliers;
    if (!emit_heatmap.empty()) config.heatmap_svg = emit_heatmap;
    if (!emit_assignments.empty()) {
      gw::ClusterStageConfig cc;
      cc.fault_class = gw::parse_fault_label(cluster_class);
      cc.L = L;
      cc.restarts = restarts;
      cc.band = band;
      cc.assignments_csv = emit_assignments;
      if (!emit_geo.empty()) cc.geo_svg = emit_geo;
      config.cluster = cc;
    } else if (!emit_geo.empty()) {
      throw gw::Error("--emit-geo needs --emit-assignments");
    }
    config.seed = seed;
    const auto r = gw::run_pipeline(config);
    print_warnings(r.warnings);
    std::cout << r.alerts.size() << " alerts\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridwatch: early warning of grid faults from PMU streams"};
  app.name("gridwatch");
  app.set_config("--config", "", "Read flags from an INI/TOML file ([subcommand] sections)");
  app.require_subcommand(1);
  app.fallthrough();  // lets `run --config x` reach the top-level option
  app.option_defaults()->always_capture_default();

  GenerateCmd generate;
  DetectCmd detect;
  FeaturizeCmd featurize;
  TrainCmd train;
  EvalCmd eval;
  SweepCmd sweep;
  PreemptCmd preempt;
  ClusterCmd cluster;
  RunCmd run;
  generate.add(app);
  detect.add(app);
  featurize.add(app);
  train.add(app);
  eval.add(app);
  sweep.add(app);
  preempt.add(app);
  cluster.add(app);
  run.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "gridwatch: error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gridwatch: error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
