#include "gridwatch/features.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "gridwatch/error.hpp"

namespace gridwatch {

std::string_view to_string(FeatureMethod method) {
  switch (method) {
    case FeatureMethod::Acf:
      return "acf";
    case FeatureMethod::Pacf:
      return "pacf";
    case FeatureMethod::Periodogram:
      return "periodogram";
    case FeatureMethod::Raw:
      return "raw";
  }
  return "acf";
}

FeatureMethod parse_feature_method(std::string_view text) {
  if (text == "acf") return FeatureMethod::Acf;
  if (text == "pacf") return FeatureMethod::Pacf;
  if (text == "periodogram") return FeatureMethod::Periodogram;
  if (text == "raw") return FeatureMethod::Raw;
  throw Error("unknown feature method '" + std::string(text) +
              "' (valid: acf, pacf, periodogram, raw)");
}

std::vector<double> difference(std::span<const double> values) {
  if (values.size() < 2) throw Error("difference needs at least 2 samples");
  std::vector<double> out(values.size());
  out[0] = 0.0;
  for (std::size_t t = 1; t < values.size(); ++t) out[t] = values[t] - values[t - 1];
  return out;
}

TimeSeries difference(const TimeSeries& series) {
  TimeSeries out = series;
  out.values = difference(series.values);
  return out;
}

FeatureVector acf(std::span<const double> values, int max_lag) {
  if (max_lag < 1) throw Error("max_lag must be >= 1");
  const std::size_t n = values.size();
  if (n <= static_cast<std::size_t>(max_lag)) {
    throw Error("series too short for acf: " + std::to_string(n) + " samples, need more than " +
                std::to_string(max_lag));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> centered(n);
  for (std::size_t t = 0; t < n; ++t) centered[t] = values[t] - mean;

  auto autocov = [&](std::size_t h) {
    double sum = 0.0;
    for (std::size_t t = 0; t + h < n; ++t) sum += centered[t + h] * centered[t];
    return sum / static_cast<double>(n);
  };

  const double gamma0 = autocov(0);
  if (!(gamma0 > 1e-24 * (mean * mean + gamma0))) throw Error("zero variance");

  FeatureVector out;
  out.method = FeatureMethod::Acf;
  out.values.resize(static_cast<std::size_t>(max_lag));
  for (int h = 1; h <= max_lag; ++h) {
    out.values[static_cast<std::size_t>(h - 1)] =
        std::clamp(autocov(static_cast<std::size_t>(h)) / gamma0, -1.0, 1.0);
  }
  return out;
}

FeatureVector pacf(std::span<const double> values, int max_lag) {
  const FeatureVector r = acf(values, max_lag);
  const auto& rho = r.values;  // rho[h - 1] is lag h
  const auto k_max = static_cast<std::size_t>(max_lag);

  FeatureVector out;
  out.method = FeatureMethod::Pacf;
  out.values.resize(k_max);

  std::vector<double> phi(k_max + 1, 0.0);
  std::vector<double> prev(k_max + 1, 0.0);
  for (std::size_t k = 1; k <= k_max; ++k) {
    double num = rho[k - 1];
    double den = 1.0;
    for (std::size_t j = 1; j < k; ++j) {
      num -= prev[j] * rho[k - j - 1];
      den -= prev[j] * rho[j - 1];
    }
    if (!(den > 0.0)) throw Error("pacf recursion degenerate at lag " + std::to_string(k));
    const double phi_kk = num / den;
    if (!(std::abs(phi_kk) < 1.0)) {
      throw Error("pacf recursion degenerate at lag " + std::to_string(k));
    }
    phi[k] = phi_kk;
    for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - phi_kk * prev[k - j];
    out.values[k - 1] = phi_kk;
    prev = phi;
  }
  return out;
}

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FeatureVector periodogram(std::span<const double> values, int n_bins) {
  if (n_bins < 1) throw Error("n_bins must be >= 1");
  const std::size_t n = values.size();
  if (n < 2 * static_cast<std::size_t>(n_bins)) {
    throw Error("series too short for periodogram: " + std::to_string(n) + " samples, need " +
                std::to_string(2 * n_bins));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> in(n);
  for (std::size_t t = 0; t < n; ++t) in[t] = values[t] - mean;
  std::vector<std::complex<double>> spectrum(n / 2 + 1);

  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
  }
  // ESTIMATE planning leaves the input untouched.
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  const auto bins = static_cast<std::size_t>(n_bins);
  std::vector<double> sum(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (std::size_t k = 1; k <= n / 2; ++k) {
    // frequency k/n lies in bin ceil(2 k bins / n) - 1 of (0, 1/2]
    std::size_t b = (2 * k * bins + n - 1) / n - 1;
    b = std::min(b, bins - 1);
    sum[b] += std::norm(spectrum[k]);
    ++count[b];
  }

  FeatureVector out;
  out.method = FeatureMethod::Periodogram;
  out.values.resize(bins);
  double total = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    out.values[b] = count[b] ? sum[b] / static_cast<double>(count[b]) : 0.0;
    total += out.values[b];
  }
  if (!(total > 0.0)) throw Error("zero variance");
  for (double& v : out.values) v /= total;
  return out;
}

FeatureVector raw_features(std::span<const double> values, std::size_t length) {
  FeatureVector out;
  out.method = FeatureMethod::Raw;
  out.values.assign(length, 0.0);
  std::copy_n(values.begin(), std::min(length, values.size()), out.values.begin());
  return out;
}

FeatureVector extract(std::span<const double> values, const FeatureConfig& config) {
  if (config.method == FeatureMethod::Raw) return raw_features(values, config.raw_length);
  const auto diff = difference(values);

  // Differences of an exact ramp carry rounding noise of the original
  // magnitude; treat spread at that level as constant.
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  const auto [lo, hi] = std::minmax_element(diff.begin() + 1, diff.end());
  if (*hi - *lo <= 1e-12 * scale) throw Error("zero variance: differenced series is constant");

  switch (config.method) {
    case FeatureMethod::Acf:
      return acf(diff, config.lags);
    case FeatureMethod::Pacf:
      return pacf(diff, config.lags);
    case FeatureMethod::Periodogram:
      return periodogram(diff, config.lags);
    case FeatureMethod::Raw:
      break;
  }
  return raw_features(values, config.raw_length);
}

FeatureVector extract(const TimeSeries& series, const FeatureConfig& config) {
  try {
    return extract(std::span<const double>(series.values), config);
  } catch (const Error& e) {
    throw Error("station " + std::to_string(series.station.station_id) + ": " + e.what());
  }
}

}  // namespace gridwatch
