// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: gridwatch_acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gridwatch/anomaly.hpp"
#include "gridwatch/classify/evaluate.hpp"
#include "gridwatch/cluster.hpp"
#include "gridwatch/csv.hpp"
#include "gridwatch/features.hpp"
#include "gridwatch/ingest.hpp"
#include "gridwatch/rng.hpp"
#include "oracles.hpp"

#ifndef GRIDWATCH_CLI
#error "GRIDWATCH_CLI must point at the gridwatch executable"
#endif

namespace gw = gridwatch;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// collects the first few failure messages
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass_ = false;
    if (++failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }
  Outcome done() const {
    std::string d = info_;
    if (!pass_) d += (d.empty() ? "" : " | ") + std::to_string(failures_) + " failure(s): " + notes_;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string notes_;
  std::string info_;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// full 2001-series corpus and its ACF features, built once
const std::vector<gw::GeneratedSeries>& corpus() {
  static const auto c = gw::generate_corpus({});
  return c;
}
const gw::Dataset& corpus_series() {
  static const auto d = gw::to_dataset(corpus());
  return d;
}
const gw::LabeledDataset& corpus_acf() {
  static const auto d = gw::featurize(corpus_series(), {});
  return d;
}

// ------------------------------------------------------------------ 1
Outcome quartile_oracle() {
  Verdict v;
  struct Stream {
    const char* name;
    std::function<double(std::mt19937_64&)> draw;
  };
  const std::vector<Stream> streams = {
      {"gaussian", [](auto& r) { return std::normal_distribution<double>(60.0, 0.02)(r); }},
      {"heavy-tail", [](auto& r) { return std::cauchy_distribution<double>(0.0, 1.0)(r); }},
      {"duplicates", [](auto& r) { return std::uniform_int_distribution<int>(0, 15)(r) * 0.25; }},
      {"drifting", [](auto& r) { return std::uniform_real_distribution<double>(-1.0, 1.0)(r); }},
      {"tiny-spread", [](auto& r) { return 1e9 + std::uniform_int_distribution<int>(0, 3)(r) * 1e-7; }},
  };
  const int per_stream = 2000;
  std::size_t prefixes = 0;
  double structure_seconds = 0;
  for (std::size_t s = 0; s < streams.size(); ++s) {
    auto rng = gw::stream_for(1001, s);
    gw::PrefixQuartiles pq;
    std::vector<double> seen;
    double drift = 0;
    for (int i = 0; i < per_stream; ++i) {
      double x = streams[s].draw(rng);
      if (s == 3) x = (drift += x);
      seen.push_back(x);
      const auto t0 = Clock::now();
      pq.insert(x);
      const auto q = pq.summary();
      structure_seconds += seconds_since(t0);
      const double o1 = oracle::quantile(seen, 0.25);
      const double o3 = oracle::quantile(seen, 0.75);
      // bitwise, not approximate
      v.require(std::memcmp(&q.q1, &o1, sizeof(double)) == 0 && std::memcmp(&q.q3, &o3, sizeof(double)) == 0,
                std::string(streams[s].name) + " prefix " + std::to_string(i + 1));
      ++prefixes;
    }
  }
  v.require(prefixes == 10000, "prefix count");
  v.require(structure_seconds < 10.0, "streaming quartiles took " + fmt(structure_seconds) + " s");
  v.note(std::to_string(prefixes) + " prefixes bitwise equal");
  v.note("streaming time " + fmt(structure_seconds, 3) + " s");
  return v.done();
}

// ------------------------------------------------------------------ 2
Outcome trigger_semantics() {
  Verdict v;
  auto rng = gw::stream_for(1002, 0);
  std::uniform_int_distribution<int> len(1, 400), n_dist(1, 80), coin(0, 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int fired = 0;
  for (int c = 0; c < 1000; ++c) {
    const int n = n_dist(rng);
    const auto threshold = coin(rng) ? gw::Severity::Severe : gw::Severity::Moderate;
    // bias toward long runs so both outcomes are common
    const double p_hit = 0.5 + 0.5 * u(rng);
    const bool severe_only = threshold == gw::Severity::Severe;
    std::vector<gw::Severity> seq(static_cast<std::size_t>(len(rng)));
    for (auto& s : seq) {
      if (u(rng) < p_hit) s = severe_only || coin(rng) ? gw::Severity::Severe : gw::Severity::Moderate;
      else s = severe_only && coin(rng) ? gw::Severity::Moderate : gw::Severity::Normal;
    }
    std::vector<bool> meets;
    for (auto s : seq) meets.push_back(static_cast<int>(s) >= static_cast<int>(threshold));
    const bool expected = oracle::has_run(meets, n);

    gw::TriggerCounter counter(n, threshold);
    int first_fire = -1;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (counter.observe(seq[i]) && first_fire < 0) first_fire = static_cast<int>(i);
    }
    v.require((first_fire >= 0) == expected, "case " + std::to_string(c));
    if (first_fire >= 0) {
      ++fired;
      // fires on the sample that completes the first run of length n
      bool all = true;
      for (int k = first_fire - n + 1; k <= first_fire; ++k) all = all && meets[static_cast<std::size_t>(k)];
      std::vector<bool> before(meets.begin(), meets.begin() + first_fire);
      v.require(all && !oracle::has_run(before, n), "case " + std::to_string(c) + " fired at the wrong sample");
    }
  }
  v.note("1000 severity sequences, " + std::to_string(fired) + " with a run");

  // same property through the detector, with severities from the sort oracle
  int detector_cases = 0;
  for (int c = 0; c < 200; ++c) {
    gw::DetectorConfig cfg;
    cfg.trigger_n = 1 + c % 25;
    cfg.warmup = 10;
    cfg.threshold = c % 2 ? gw::Severity::Severe : gw::Severity::Moderate;
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> x(200);
    double level = 0;
    for (auto& val : x) {
      if (u(rng) < 0.02) level += 8 * noise(rng);
      val = level + noise(rng);
    }
    std::vector<bool> meets;
    std::vector<double> prefix;
    for (std::size_t i = 0; i < x.size(); ++i) {
      prefix.push_back(x[i]);
      int s = 0;
      if (static_cast<int>(prefix.size()) > cfg.warmup) {
        const double q1 = oracle::quantile(prefix, 0.25), q3 = oracle::quantile(prefix, 0.75), iqr = q3 - q1;
        if (x[i] > q3 + 3 * iqr || x[i] < q1 - 3 * iqr) s = 2;
        else if (x[i] > q3 + 1.5 * iqr || x[i] < q1 - 1.5 * iqr) s = 1;
      }
      meets.push_back(s >= static_cast<int>(cfg.threshold));
    }
    gw::Detector d(cfg);
    bool triggered = false;
    for (double val : x) {
      if (d.feed(val).kind == gw::FeedEvent::Kind::Triggered) {
        triggered = true;
        break;
      }
    }
    v.require(triggered == oracle::has_run(meets, cfg.trigger_n), "detector case " + std::to_string(c));
    ++detector_cases;
  }
  v.note(std::to_string(detector_cases) + " detector streams against oracle severities");
  return v.done();
}

// ------------------------------------------------------------------ 3
Outcome onset_signature() {
  Verdict v;
  int series = 0;
  double min_post_zero = 1.0;
  int min_run = 1 << 30;
  for (auto label : gw::kAllFaultLabels) {
    gw::ScenarioSpec spec;
    spec.fault_class = label;
    spec.signature = gw::default_signature(label);
    spec.noise_sigma = 1e-300;  // below half an ulp of the baseline
    for (const auto& g : gw::generate_scenario(spec)) {
      const auto ov = gw::outlier_vector(g.data.series.values);
      const std::string who = std::string(gw::to_string(label)) + " station " +
                              std::to_string(g.data.series.station.station_id);
      std::size_t f = 0;
      while (f < ov.size() && ov[f] == 0) ++f;
      v.require(f >= static_cast<std::size_t>(g.onset), who + ": outlier before onset");
      std::size_t run = 0;
      while (f + run < ov.size() && ov[f + run] == 2) ++run;
      v.require(run >= 70, who + ": severe run of " + std::to_string(run));
      const auto hit = gw::find_trigger(g.data.series.values);
      v.require(hit && hit->first_outlier == f && hit->trigger_index == f + 69, who + ": trigger position");
      const std::size_t after = f + run;
      const bool back_to_zero = std::find(ov.begin() + static_cast<long>(std::min(after, ov.size())), ov.end(), 0) != ov.end();
      v.require(back_to_zero, who + ": never returns to 0");
      if (after < ov.size()) {
        const auto zeros = std::count(ov.begin() + static_cast<long>(after), ov.end(), 0);
        min_post_zero = std::min(min_post_zero, static_cast<double>(zeros) / static_cast<double>(ov.size() - after));
      }
      min_run = std::min(min_run, static_cast<int>(run));
      ++series;
    }
  }
  v.note(std::to_string(series) + " zero-noise series over 9 classes");
  v.note("shortest severe run " + std::to_string(min_run));
  v.note("lowest post-run share of zeros " + fmt(min_post_zero, 3));
  return v.done();
}

// ------------------------------------------------------------------ 4
Outcome acf_correctness() {
  Verdict v;
  auto rng = gw::stream_for(1004, 0);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> len(21, 2000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_affine = 0;
  for (int c = 0; c < 1000; ++c) {
    std::vector<double> x(static_cast<std::size_t>(len(rng)));
    const double phi = 2 * u(rng) - 1;
    const int kind = c % 4;
    double prev = 0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      switch (kind) {
        case 0: x[t] = n(rng); break;
        case 1: x[t] = prev = phi * prev + n(rng); break;
        case 2: x[t] = std::sin(0.1 * (1 + 20 * u(rng)) * static_cast<double>(t)) + 0.01 * n(rng); break;
        default: x[t] = prev += n(rng); break;
      }
    }
    const auto a = gw::acf(x).values;
    for (double r : a) v.require(std::abs(r) <= 1.0, "|rho| > 1 on case " + std::to_string(c));
    const double scale = std::exp(6 * u(rng) - 3) * (u(rng) < 0.5 ? 1 : -1);
    const double shift = 1e3 * (u(rng) - 0.5);
    std::vector<double> y(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) y[t] = scale * x[t] + shift;
    const auto b = gw::acf(y).values;
    // a negative scale leaves the autocorrelation unchanged too
    for (std::size_t h = 0; h < a.size(); ++h) worst_affine = std::max(worst_affine, std::abs(a[h] - b[h]));
  }
  v.require(worst_affine <= 1e-12, "affine deviation " + std::to_string(worst_affine));

  std::size_t inside = 0, lags = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t T = 2000;
    std::vector<double> x(T);
    for (auto& val : x) val = n(rng);
    const double bound = 3.0 / std::sqrt(static_cast<double>(T));
    for (double r : gw::acf(x).values) {
      inside += std::abs(r) < bound;
      ++lags;
    }
  }
  const double share = static_cast<double>(inside) / static_cast<double>(lags);
  v.require(share >= 0.99, "white-noise share " + fmt(share));
  v.note("1000 series bounded");
  v.note("max affine deviation " + std::to_string(worst_affine));
  v.note("white-noise lags within 3/sqrt(T): " + fmt(100 * share, 2) + "%");
  return v.done();
}

// ------------------------------------------------------------------ 5
Outcome ablation() {
  Verdict v;
  const gw::EvalOptions opts{10, 0.8, 1};
  const auto& series = corpus_series();

  auto t0 = Clock::now();
  const auto acf = gw::featurize(series, {});
  const double acf_featurize = seconds_since(t0);
  const auto r_acf = gw::evaluate(acf, gw::ModelKind::Svm, {}, opts);

  gw::FeatureConfig raw_cfg;
  raw_cfg.method = gw::FeatureMethod::Raw;
  t0 = Clock::now();
  const auto raw = gw::featurize(series, raw_cfg);
  const double raw_featurize = seconds_since(t0);
  const auto r_raw = gw::evaluate(raw, gw::ModelKind::Svm, {}, opts);

  const double acf_time = acf_featurize + r_acf.train_seconds;
  const double raw_time = raw_featurize + r_raw.train_seconds;
  v.require(r_acf.mean - r_raw.mean >= 0.10, "gap " + fmt(r_acf.mean - r_raw.mean));
  v.require(acf_time < raw_time, "ACF featurize+train not faster");
  v.note("SVM acf " + fmt(r_acf.mean) + " vs raw " + fmt(r_raw.mean) + " over " + std::to_string(opts.n_trials) +
         " trials");
  v.note("featurize+train " + fmt(acf_time, 2) + " s vs " + fmt(raw_time, 2) + " s");
  return v.done();
}

// ------------------------------------------------------------------ 6
Outcome classifier_floor() {
  Verdict v;
  const auto& data = corpus_acf();
  const gw::EvalOptions opts{100, 0.8, 1};
  gw::ModelParams params;  // RF 500 trees, SVM gamma 0.05 C 1, ANN 20-5-9 tanh
  std::map<gw::ModelKind, gw::EvalReport> reports;
  for (auto kind : {gw::ModelKind::Forest, gw::ModelKind::Svm, gw::ModelKind::Ann}) {
    const auto t0 = Clock::now();
    reports[kind] = gw::evaluate(data, kind, params, opts);
    const auto& r = reports[kind];
    v.require(r.mean >= 0.95, std::string(gw::to_string(kind)) + " mean " + fmt(r.mean));
    v.note(std::string(gw::to_string(kind)) + " " + fmt(r.mean) + " (sd " + fmt(r.stddev) + ", " +
           fmt(seconds_since(t0), 0) + " s)");
  }
  // the alternative is a documented deviation; with the std devs as measured it is not needed
  v.require(reports[gw::ModelKind::Forest].stddev <= reports[gw::ModelKind::Svm].stddev,
            "RF std dev above SVM std dev");
  return v.done();
}

// ------------------------------------------------------------------ 7
Outcome ann_gradient() {
  Verdict v;
  const auto& data = corpus_acf();
  auto rng = gw::stream_for(1007, 0);
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::uniform_int_distribution<int> batch(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  std::size_t checked = 0;
  // fourth-order central stencil; plain (f(x+h) - f(x-h)) / 2h loses ~1e-3 relative
  // to rounding on gradients near 1e-7, which says nothing about backprop
  const double h = 1e-3;
  for (int draw = 0; draw < 100; ++draw) {
    auto m = gw::AnnModel::zeros(data.dim, 5);
    auto theta = m.flatten();
    const double scale = 0.1 + 1.9 * u(rng);
    for (auto& w : theta) w = scale * (2 * u(rng) - 1);
    m.unflatten(theta);
    std::vector<std::size_t> rows(static_cast<std::size_t>(batch(rng)));
    for (auto& r : rows) r = pick(rng);
    std::vector<double> grad;
    gw::ann_loss(m, data, rows, &grad);
    auto loss_at = [&](std::size_t k, double step) {
      auto t = theta;
      t[k] += step;
      auto shifted = m;
      shifted.unflatten(t);
      return gw::ann_loss(shifted, data, rows);
    };
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const double num = (-loss_at(k, 2 * h) + 8 * loss_at(k, h) - 8 * loss_at(k, -h) + loss_at(k, -2 * h)) / (12 * h);
      const double denom = std::max(std::abs(num), std::abs(grad[k]));
      if (denom < 1e-12) continue;  // both zero
      worst = std::max(worst, std::abs(num - grad[k]) / denom);
      ++checked;
    }
  }
  v.require(worst < 1e-4, "max relative error " + std::to_string(worst));
  v.note("100 draws, " + std::to_string(checked) + " partials, max relative error " + fmt(worst * 1e6, 2) + "e-6");
  return v.done();
}

// ------------------------------------------------------------------ 8
Outcome svm_kkt() {
  Verdict v;
  const auto m = gw::train_svm(corpus_acf());
  double worst_sum = 0;
  std::size_t alphas = 0;
  for (const auto& b : m.machines) {
    double s = 0;
    for (std::size_t j = 0; j < b.alpha.size(); ++j) {
      v.require(b.alpha[j] >= 0.0 && b.alpha[j] <= m.params.C, "alpha out of [0, C]");
      const double y = b.coef[j] >= 0 ? 1.0 : -1.0;
      s += b.alpha[j] * y;
      ++alphas;
    }
    worst_sum = std::max(worst_sum, std::abs(s));
  }
  v.require(m.machines.size() == 36, "expected 36 class pairs");
  v.require(worst_sum <= 1e-6, "|sum alpha y| " + std::to_string(worst_sum));
  v.note(std::to_string(m.machines.size()) + " pairs, " + std::to_string(alphas) + " support multipliers");
  v.note("max |sum alpha y| " + std::to_string(worst_sum));
  return v.done();
}

// ------------------------------------------------------------------ 9
Outcome dtw_oracle() {
  Verdict v;
  auto rng = gw::stream_for(1009, 0);
  std::uniform_int_distribution<std::size_t> small(1, 8), big(1, 60);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto seq = [&](std::size_t n) {
    std::vector<double> x(n);
    for (auto& val : x) val = u(rng);
    return x;
  };
  for (int c = 0; c < 500; ++c) {
    const auto a = seq(small(rng)), b = seq(small(rng));
    const double brute = oracle::dtw_brute(a, b);
    v.require(gw::dtw(a, b).distance == brute, "pair " + std::to_string(c));
    v.require(gw::dtw_distance(a, b) == brute, "pair " + std::to_string(c) + " (two-row)");
  }
  for (int c = 0; c < 1000; ++c) {
    const auto a = seq(big(rng)), b = seq(big(rng));
    v.require(gw::dtw(a, a).distance == 0.0, "self distance");
    v.require(gw::dtw_distance(a, b) == gw::dtw_distance(b, a), "symmetry on pair " + std::to_string(c));
  }
  v.note("500 short pairs exact");
  v.note("1000 pairs zero self-distance and symmetric");
  return v.done();
}

// ------------------------------------------------------------------ 10
Outcome pam_properties() {
  Verdict v;
  gw::ScenarioSpec spec;
  spec.fault_class = gw::FaultLabel::GMD2;
  spec.signature = gw::default_signature(spec.fault_class);
  const auto gen = gw::generate_scenario(spec);
  std::vector<std::vector<double>> norm;
  std::vector<int> zones;
  for (const auto& g : gen) {
    norm.push_back(gw::minmax_normalize(g.data.series.values));
    zones.push_back(g.zone);
  }
  auto t0 = Clock::now();
  const auto dist = gw::dtw_matrix(norm);
  const double dtw_seconds = seconds_since(t0);

  int swaps = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int L = 2 + static_cast<int>(seed % 7);
    gw::pam(dist, L, seed, [&](double before, double after) {
      ++swaps;
      v.require(after <= before, "cost rose on seed " + std::to_string(seed));
    });
  }

  const auto one = gw::pam(dist, 1, 42);
  const auto med = oracle::one_median(dist.size(), dist);
  double got = 0, best = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    got += dist(i, one.medoids[0]);
    best += dist(i, med);
  }
  v.require(got == best, "L=1 medoid cost " + fmt(got) + " vs " + fmt(best));

  const auto five = gw::pam_best(dist, 5, 42, 5);
  const double ari = gw::adjusted_rand_index(five.assignment, zones);
  v.require(ari >= 0.9, "ARI " + fmt(ari));

  std::vector<int> Ls(8);
  std::iota(Ls.begin(), Ls.end(), 1);
  const auto rows = gw::elbow(dist, Ls, 42, 5);
  std::ostringstream table;
  int last_big_drop = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table << (i ? " " : "") << fmt(rows[i].mean_intra_distance, 2);
    if (i > 0 && rows[i].mean_intra_distance <= 0.9 * rows[i - 1].mean_intra_distance) last_big_drop = rows[i].L;
  }
  for (std::size_t i = 1; i < 5; ++i) {
    v.require(rows[i].mean_intra_distance <= rows[i - 1].mean_intra_distance, "elbow rises before L=5");
  }
  v.require(last_big_drop == 5, "last >=10% drop at L=" + std::to_string(last_big_drop));

  v.note(std::to_string(swaps) + " swaps over 100 runs");
  v.note("ARI " + fmt(ari, 3));
  v.note("elbow L=1..8: " + table.str());
  v.note("DTW matrix " + fmt(dtw_seconds, 0) + " s");
  return v.done();
}

// ------------------------------------------------------------------ 11
Outcome preempt_shape() {
  Verdict v;
  gw::ModelParams params;  // 500 trees
  gw::PreemptOptions o;
  o.sample_counts = {60};
  o.include_full_window = true;
  o.eval = {10, 0.8, 1};
  const std::vector<gw::ModelKind> kinds = {gw::ModelKind::Forest};
  const auto r = gw::preemptive_curve(corpus_series(), kinds, params, o);
  double at60 = -1, full = -1;
  for (const auto& row : r.rows) (row.samples ? at60 : full) = row.mean;
  v.require(at60 >= 0 && full >= 0, "missing curve points");
  v.require(std::abs(at60 - full) <= 0.02, "gap " + fmt(full - at60));
  v.note("RF at 60 samples " + fmt(at60) + " vs full window " + fmt(full));
  v.note(std::to_string(r.excluded_stations.size()) + " series never triggered");
  return v.done();
}

// ------------------------------------------------------------------ 12
int sh(const std::string& cmd) {
  const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return rc;
}

Outcome run_determinism() {
  Verdict v;
  fixture::TempDir dir;
  const std::string cli = GRIDWATCH_CLI;
  const auto p = [&](const char* name) { return (dir / name).string(); };
  v.require(sh(cli + " generate --out " + p("corpus.csv") + " --seed 1") == 0, "generate failed");
  v.require(sh(cli + " featurize --input " + p("corpus.csv") + " --output " + p("f.csv") + " --window-budget 600") == 0,
            "featurize failed");
  v.require(sh(cli + " train --model rf --features " + p("f.csv") + " --out " + p("rf.json") + " --seed 1") == 0,
            "train failed");

  const std::vector<std::string> outputs = {"alerts.csv", "outliers.csv", "heatmap.svg", "assignments.csv", "geo.svg"};
  for (const char* tag : {"a", "b"}) {
    std::filesystem::create_directories(dir / tag);
    std::string ini = "[run]\ninput = " + p("corpus.csv") + "\nmodel = " + p("rf.json") + "\nseed = 42\n";
    ini += "emit-alerts = " + (dir / tag / "alerts.csv").string() + "\n";
    ini += "emit-outliers = " + (dir / tag / "outliers.csv").string() + "\n";
    ini += "emit-heatmap = " + (dir / tag / "heatmap.svg").string() + "\n";
    ini += "emit-assignments = " + (dir / tag / "assignments.csv").string() + "\n";
    ini += "emit-geo = " + (dir / tag / "geo.svg").string() + "\n";
    fixture::write(dir / tag / "run.ini", ini);
    v.require(sh(cli + " run --config " + (dir / tag / "run.ini").string()) == 0, std::string("run ") + tag + " failed");
  }
  std::size_t bytes = 0;
  for (const auto& f : outputs) {
    const auto a = dir / "a" / f, b = dir / "b" / f;
    if (!std::filesystem::exists(a) || !std::filesystem::exists(b)) {
      v.require(false, f + " missing");
      continue;
    }
    const auto ta = gw::csv::read_file(a), tb = gw::csv::read_file(b);
    v.require(ta == tb, f + " differs");
    v.require(!ta.empty(), f + " empty");
    bytes += ta.size();
  }
  v.note(std::to_string(outputs.size()) + " outputs compared (" + std::to_string(bytes) + " bytes)");
  if (std::filesystem::exists(dir / "a" / "alerts.csv")) {
    const auto alerts = gw::csv::read_file(dir / "a" / "alerts.csv");
    v.note(std::to_string(std::count(alerts.begin(), alerts.end(), '\n') - 1) + " alerts");
  }
  return v.done();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"quartile oracle", quartile_oracle},
      {"trigger semantics", trigger_semantics},
      {"fault-onset signature", onset_signature},
      {"ACF correctness", acf_correctness},
      {"ablation direction", ablation},
      {"classifier floor", classifier_floor},
      {"ANN gradient check", ann_gradient},
      {"SVM KKT", svm_kkt},
      {"DTW oracle", dtw_oracle},
      {"PAM properties", pam_properties},
      {"preemptive curve shape", preempt_shape},
      {"end-to-end determinism", run_determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
