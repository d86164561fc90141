#include "gridwatch/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gridwatch/error.hpp"

namespace gridwatch {

namespace {

struct Position {
  std::size_t lo;
  double frac;
};

Position quantile_position(std::size_t n, double p) {
  const double pos = static_cast<double>(n - 1) * p;
  const double lo = std::floor(pos);
  return {static_cast<std::size_t>(lo), pos - lo};
}

double interpolate(double lo, double hi, double frac) { return lo + frac * (hi - lo); }

}  // namespace

double interpolated_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  const auto [lo, frac] = quantile_position(sorted.size(), p);
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return interpolate(sorted[lo], sorted[lo + 1], frac);
}

QuartileSummary quartiles(std::span<const double> sample) {
  if (sample.empty()) throw Error("quartiles of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw Error("quartiles: non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  QuartileSummary q;
  q.q1 = interpolated_quantile(sorted, 0.25);
  q.q3 = interpolated_quantile(sorted, 0.75);
  q.iqr = q.q3 - q.q1;
  return q;
}

void PrefixQuartiles::insert(double x) {
  if (!std::isfinite(x)) throw Error("non-finite sample");
  tree_.insert({x, next_tag_++});
}

double PrefixQuartiles::kth(std::size_t k) const {
  if (k >= tree_.size()) throw Error("rank out of range");
  return tree_.find_by_order(k)->first;
}

double PrefixQuartiles::quantile(double p) const {
  const auto [lo, frac] = quantile_position(tree_.size(), p);
  auto it = tree_.find_by_order(lo);
  const double lo_value = it->first;
  if (lo + 1 >= tree_.size()) return lo_value;
  ++it;
  return interpolate(lo_value, it->first, frac);
}

QuartileSummary PrefixQuartiles::summary() const {
  if (tree_.empty()) throw Error("quartiles of an empty prefix");
  QuartileSummary q;
  q.q1 = quantile(0.25);
  q.q3 = quantile(0.75);
  q.iqr = q.q3 - q.q1;
  return q;
}

Severity severity_against(double x, const QuartileSummary& q) {
  if (x > q.q3 + 3.0 * q.iqr || x < q.q1 - 3.0 * q.iqr) return Severity::Severe;
  if (x > q.q3 + 1.5 * q.iqr || x < q.q1 - 1.5 * q.iqr) return Severity::Moderate;
  return Severity::Normal;
}

void DetectorConfig::validate() const {
  if (trigger_n < 1) throw Error("trigger_n must be >= 1");
  if (warmup < 0) throw Error("warmup must be >= 0");
  if (threshold == Severity::Normal) throw Error("severity threshold must be moderate or severe");
}

TriggerCounter::TriggerCounter(int trigger_n, Severity threshold)
    : trigger_n_(trigger_n), threshold_(threshold) {
  if (trigger_n < 1) throw Error("trigger_n must be >= 1");
}

bool TriggerCounter::observe(Severity s) {
  if (s >= threshold_) {
    ++consecutive_;
    return consecutive_ == trigger_n_;
  }
  consecutive_ = 0;
  return false;
}

Detector::Detector(DetectorConfig config)
    : config_(config), counter_(config.trigger_n, config.threshold) {
  config_.validate();
}

Severity Detector::classify(double x) {
  if (frozen_) throw Error("station frozen");
  prefix_.insert(x);
  if (prefix_.size() <= static_cast<std::size_t>(config_.warmup)) return Severity::Normal;
  return severity_against(x, prefix_.summary());
}

FeedEvent Detector::feed(double x) {
  const Severity s = classify(x);
  if (counter_.observe(s)) {
    if (config_.freeze_on_trigger) frozen_ = true;
    return {FeedEvent::Kind::Triggered, s};
  }
  return {s == Severity::Normal ? FeedEvent::Kind::Normal : FeedEvent::Kind::Outlier, s};
}

std::optional<std::size_t> Detector::run_start() const {
  if (counter_.consecutive() == 0) return std::nullopt;
  return prefix_.size() - static_cast<std::size_t>(counter_.consecutive());
}

OutlierVector outlier_vector(std::span<const double> values, const DetectorConfig& config) {
  DetectorConfig c = config;
  c.freeze_on_trigger = false;
  Detector d(c);
  OutlierVector out;
  out.reserve(values.size());
  for (double x : values) out.push_back(static_cast<std::uint8_t>(d.feed(x).severity));
  return out;
}

std::optional<TriggerInfo> find_trigger(std::span<const double> values,
                                        const DetectorConfig& config) {
  DetectorConfig c = config;
  c.freeze_on_trigger = true;
  Detector d(c);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (d.feed(values[i]).kind == FeedEvent::Kind::Triggered) {
      return TriggerInfo{*d.run_start(), i};
    }
  }
  return std::nullopt;
}

int window_score(const OutlierVector& outliers, std::size_t t, int window) {
  if (t < 1) throw Error("heat map index must be >= 1");
  if (window < 1) throw Error("heat map window must be >= 1");
  if (t > outliers.size()) {
    throw Error("heat map index " + std::to_string(t) + " beyond series length " +
                std::to_string(outliers.size()));
  }
  const std::size_t begin = t > static_cast<std::size_t>(window) ? t - static_cast<std::size_t>(window) : 0;
  int sum = 0;
  for (std::size_t i = begin; i < t; ++i) sum += outliers[i];
  return sum;
}

std::vector<int> heatmap_scores(std::span<const OutlierVector> outliers, std::size_t t, int window) {
  std::vector<int> scores;
  scores.reserve(outliers.size());
  for (const auto& o : outliers) scores.push_back(window_score(o, t, window));
  return scores;
}

}  // namespace gridwatch
