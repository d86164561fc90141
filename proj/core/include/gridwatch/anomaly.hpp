#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>

#include "gridwatch/types.hpp"

namespace gridwatch {

struct QuartileSummary {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
};

/// Quantile by linear interpolation between order statistics at the 1-based
/// position 1 + (n - 1) p. `sorted` must be ascending.
double interpolated_quantile(std::span<const double> sorted, double p);

/// Quartiles of an arbitrary (unsorted) nonempty sample. Throws on empty or
/// non-finite input.
QuartileSummary quartiles(std::span<const double> sample);

/// Ordered multiset of every value seen so far with O(log n) insertion and
/// rank queries. Quartiles are exact, identical to sorting the prefix.
class PrefixQuartiles {
 public:
  void insert(double x);
  std::size_t size() const { return tree_.size(); }
  /// k-th smallest, 0-based.
  double kth(std::size_t k) const;
  QuartileSummary summary() const;

 private:
  using Key = std::pair<double, std::uint64_t>;
  using Tree = __gnu_pbds::tree<Key, __gnu_pbds::null_type, std::less<Key>, __gnu_pbds::rb_tree_tag,
                                __gnu_pbds::tree_order_statistics_node_update>;
  double quantile(double p) const;

  Tree tree_;
  std::uint64_t next_tag_ = 0;
};

enum class Severity : std::uint8_t { Normal = 0, Moderate = 1, Severe = 2 };

/// 2 beyond 3 IQR outside [Q1, Q3], 1 beyond 1.5 IQR, else 0. Strict
/// inequalities, so an IQR of zero flags anything off the constant.
Severity severity_against(double x, const QuartileSummary& q);

struct DetectorConfig {
  int trigger_n = 70;
  Severity threshold = Severity::Severe;  // minimum severity counted toward a trigger
  int warmup = 30;                         // samples forced to severity 0
  bool freeze_on_trigger = true;

  void validate() const;
};

/// Counts consecutive threshold-meeting severities; reports the moment the run
/// length reaches trigger_n.
class TriggerCounter {
 public:
  TriggerCounter(int trigger_n, Severity threshold);
  /// True exactly when the current run reaches trigger_n.
  bool observe(Severity s);
  int consecutive() const { return consecutive_; }

 private:
  int trigger_n_;
  Severity threshold_;
  int consecutive_ = 0;
};

struct FeedEvent {
  enum class Kind : std::uint8_t { Normal, Outlier, Triggered };
  Kind kind = Kind::Normal;
  Severity severity = Severity::Normal;
};

/// Online detector for one station. Single owner; movable between threads.
class Detector {
 public:
  explicit Detector(DetectorConfig config = {});

  /// Inserts x into the prefix and grades it against the prefix quartiles
  /// (the prefix includes x). Does not touch the consecutive counter.
  Severity classify(double x);

  /// classify() plus trigger bookkeeping. Throws "station frozen" once a
  /// trigger has frozen the detector.
  FeedEvent feed(double x);

  bool frozen() const { return frozen_; }
  std::size_t consumed() const { return prefix_.size(); }
  int consecutive() const { return counter_.consecutive(); }
  /// 0-based index of the first sample of the current threshold-meeting run.
  std::optional<std::size_t> run_start() const;
  const DetectorConfig& config() const { return config_; }

 private:
  DetectorConfig config_;
  PrefixQuartiles prefix_;
  TriggerCounter counter_;
  bool frozen_ = false;
};

using OutlierVector = std::vector<std::uint8_t>;

/// Per-sample severities of a whole series, as if fed online without freezing.
OutlierVector outlier_vector(std::span<const double> values, const DetectorConfig& config = {});
inline OutlierVector outlier_vector(const TimeSeries& series, const DetectorConfig& config = {}) {
  return outlier_vector(series.values, config);
}

struct TriggerInfo {
  std::size_t first_outlier = 0;  // 0-based start of the triggering run
  std::size_t trigger_index = 0;  // 0-based index of the sample that triggered
};

/// Replays a series through a fresh detector; nullopt if it never triggers.
std::optional<TriggerInfo> find_trigger(std::span<const double> values,
                                        const DetectorConfig& config = {});

/// Sum of the last `window` severities ending at 1-based index t (fewer when
/// t < window). Throws if t exceeds the vector length.
int window_score(const OutlierVector& outliers, std::size_t t, int window = 40);

/// window_score for every station at the same index t.
std::vector<int> heatmap_scores(std::span<const OutlierVector> outliers, std::size_t t,
                                int window = 40);

}  // namespace gridwatch
