#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gridwatch/types.hpp"

namespace gridwatch {

enum class FeatureMethod : std::uint8_t { Acf, Pacf, Periodogram, Raw };

std::string_view to_string(FeatureMethod method);
FeatureMethod parse_feature_method(std::string_view text);

struct FeatureVector {
  std::vector<double> values;
  FeatureMethod method = FeatureMethod::Acf;

  std::size_t size() const { return values.size(); }
};

/// First-order difference with a leading zero; same length as the input.
std::vector<double> difference(std::span<const double> values);
TimeSeries difference(const TimeSeries& series);

/// Sample autocorrelation at lags 1..max_lag using the biased (1/T)
/// autocovariance, so every value lies in [-1, 1]. Lag 0 is omitted.
/// Throws "zero variance" for constant input and when the input has no more
/// than max_lag samples.
FeatureVector acf(std::span<const double> values, int max_lag = 20);

/// Partial autocorrelation at lags 1..max_lag by Durbin-Levinson on the acf.
FeatureVector pacf(std::span<const double> values, int max_lag = 20);

/// Power spectrum of the mean-removed input, averaged into n_bins equal-width
/// bins over (0, Nyquist] and normalized to sum to 1.
FeatureVector periodogram(std::span<const double> values, int n_bins = 20);

/// Input truncated or zero-padded to `length`.
FeatureVector raw_features(std::span<const double> values, std::size_t length = 1802);

struct FeatureConfig {
  FeatureMethod method = FeatureMethod::Acf;
  int lags = 20;                  // K for acf/pacf/periodogram
  std::size_t raw_length = 1802;  // fixed input length for the raw baseline

  std::size_t dimension() const {
    return method == FeatureMethod::Raw ? raw_length : static_cast<std::size_t>(lags);
  }
};

/// Canonical representation of a series: the feature map applied to the
/// differenced series (raw features use the series as is).
FeatureVector extract(std::span<const double> values, const FeatureConfig& config = {});
FeatureVector extract(const TimeSeries& series, const FeatureConfig& config = {});

}  // namespace gridwatch
