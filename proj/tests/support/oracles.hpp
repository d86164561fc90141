#pragma once

// Reference implementations used only by tests. Each one is written the slow,
// obvious way and shares no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

// Sort a copy, interpolate at 0-based position (n-1)p.
inline double quantile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  const double pos = static_cast<double>(xs.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= xs.size()) return xs[lo];
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

// True if some run of >= n consecutive flags exists.
inline bool has_run(const std::vector<bool>& flags, int n) {
  int run = 0;
  for (bool f : flags) {
    run = f ? run + 1 : 0;
    if (run >= n) return true;
  }
  return false;
}

// Every monotone path from (0,0) to (m-1,n-1), minimum summed |u_a - v_b|.
// Exponential; meant for m, n <= 8. `band` restricts to |a - b| <= band.
inline double dtw_brute(const std::vector<double>& u, const std::vector<double>& v,
                        std::optional<std::size_t> band = std::nullopt) {
  const std::size_t m = u.size();
  const std::size_t n = v.size();
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t a, std::size_t b, double acc) {
    if (band && (a > b ? a - b : b - a) > *band) return;
    acc += std::abs(u[a] - v[b]);
    if (a == m - 1 && b == n - 1) {
      best = std::min(best, acc);
      return;
    }
    if (a + 1 < m) walk(a + 1, b, acc);
    if (b + 1 < n) walk(a, b + 1, acc);
    if (a + 1 < m && b + 1 < n) walk(a + 1, b + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

// ARI from explicit pair enumeration.
inline double ari_pairs(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0, only_a = 0, only_b = 0, neither = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      if (sa && sb) ++both;
      else if (sa) ++only_a;
      else if (sb) ++only_b;
      else ++neither;
    }
  }
  const double total = both + only_a + only_b + neither;
  const double pairs_a = both + only_a;
  const double pairs_b = both + only_b;
  const double expected = pairs_a * pairs_b / total;
  const double max_index = (pairs_a + pairs_b) / 2.0;
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

// Index minimizing the summed distance to all points (lowest index on ties).
template <class Dist>
std::size_t one_median(std::size_t n, const Dist& d) {
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += d(i, c);
    if (s < best_sum) {
      best_sum = s;
      best = c;
    }
  }
  return best;
}

// Naive DFT power at frequency bins 1..n/2 of mean-removed x.
inline std::vector<double> dft_power(const std::vector<double>& x) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> p;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double w = 2.0 * M_PI * static_cast<double>(k * t % n) / static_cast<double>(n);
      re += (x[t] - mean) * std::cos(w);
      im -= (x[t] - mean) * std::sin(w);
    }
    p.push_back(re * re + im * im);
  }
  return p;
}

// Spearman rank correlation without tie handling beyond average ranks.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (static_cast<double>(i + j) / 2.0) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
