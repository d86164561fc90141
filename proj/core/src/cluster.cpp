#include "gridwatch/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gridwatch/csv.hpp"
#include "gridwatch/error.hpp"
#include "gridwatch/rng.hpp"
#include "gridwatch/svg.hpp"

namespace gridwatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(std::span<const double> u, std::span<const double> v,
                  std::optional<std::size_t> band) {
  if (u.empty() || v.empty()) throw Error("dtw needs non-empty series");
  if (band) {
    const std::size_t gap = u.size() > v.size() ? u.size() - v.size() : v.size() - u.size();
    if (*band < gap) throw Error("band excludes all valid paths");
  }
}

bool in_band(std::size_t a, std::size_t b, std::optional<std::size_t> band) {
  if (!band) return true;
  return (a > b ? a - b : b - a) <= *band;
}

}  // namespace

std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  std::vector<double> out(values.size(), 0.5);
  if (range > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  }
  return out;
}

DtwResult dtw(std::span<const double> u, std::span<const double> v, std::optional<std::size_t> band) {
  check_inputs(u, v, band);
  const std::size_t m = u.size();
  const std::size_t n = v.size();
  // (m+1) x (n+1) with an infinite border row/column
  std::vector<double> D((m + 1) * (n + 1), kInf);
  auto at = [n](std::size_t i, std::size_t j) { return i * (n + 1) + j; };
  D[at(0, 0)] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (!in_band(i - 1, j - 1, band)) continue;
      const double best = std::min({D[at(i - 1, j - 1)], D[at(i - 1, j)], D[at(i, j - 1)]});
      D[at(i, j)] = std::abs(u[i - 1] - v[j - 1]) + best;
    }
  }

  DtwResult result;
  result.distance = D[at(m, n)];
  std::size_t i = m;
  std::size_t j = n;
  while (true) {
    result.path.steps.emplace_back(i - 1, j - 1);
    if (i == 1 && j == 1) break;
    // prefer the diagonal on ties
    double best = kInf;
    std::size_t ni = i;
    std::size_t nj = j;
    if (i > 1 && j > 1 && D[at(i - 1, j - 1)] < best) {
      best = D[at(i - 1, j - 1)];
      ni = i - 1;
      nj = j - 1;
    }
    if (i > 1 && D[at(i - 1, j)] < best) {
      best = D[at(i - 1, j)];
      ni = i - 1;
      nj = j;
    }
    if (j > 1 && D[at(i, j - 1)] < best) {
      ni = i;
      nj = j - 1;
    }
    i = ni;
    j = nj;
  }
  std::reverse(result.path.steps.begin(), result.path.steps.end());
  return result;
}

double dtw_distance(std::span<const double> u, std::span<const double> v, std::optional<std::size_t> band) {
  check_inputs(u, v, band);
  const std::size_t n = v.size();
  std::vector<double> prev(n + 1, kInf);
  std::vector<double> cur(n + 1, kInf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= u.size(); ++i) {
    cur[0] = kInf;
    std::size_t j_lo = 1;
    std::size_t j_hi = n;
    if (band) {
      j_lo = i > *band + 1 ? i - *band : 1;
      j_hi = std::min(n, i + *band);
    }
    std::fill(cur.begin() + 1, cur.end(), kInf);
    const double ui = u[i - 1];
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const double best = std::min({prev[j - 1], prev[j], cur[j - 1]});
      cur[j] = std::abs(ui - v[j - 1]) + best;
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

DistanceMatrix dtw_matrix(std::span<const std::vector<double>> samples, std::optional<std::size_t> band) {
  DistanceMatrix d(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      d.set(i, j, dtw_distance(samples[i], samples[j], band));
    }
  }
  return d;
}

namespace {

// nearest medoid, ties to the lower sample index
std::size_t nearest(const DistanceMatrix& dist, std::size_t i, const std::vector<std::size_t>& medoids) {
  std::size_t best = medoids.front();
  for (auto m : medoids) {
    const double dm = dist(i, m);
    const double db = dist(i, best);
    if (dm < db || (dm == db && m < best)) best = m;
  }
  return best;
}

double total_cost(const DistanceMatrix& dist, const std::vector<std::size_t>& medoids) {
  double cost = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) cost += dist(i, nearest(dist, i, medoids));
  return cost;
}

Clustering finalize(const DistanceMatrix& dist, int L, std::vector<std::size_t> medoids) {
  std::sort(medoids.begin(), medoids.end());
  Clustering c;
  c.L = L;
  c.medoids = medoids;
  c.assignment.resize(dist.size());
  c.sizes.assign(medoids.size(), 0);
  c.mean_distance.assign(medoids.size(), 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const auto m = nearest(dist, i, medoids);
    const auto k = static_cast<std::size_t>(std::lower_bound(medoids.begin(), medoids.end(), m) - medoids.begin());
    c.assignment[i] = static_cast<int>(k);
    ++c.sizes[k];
    c.mean_distance[k] += dist(i, m);
    c.total_cost += dist(i, m);
  }
  for (std::size_t k = 0; k < medoids.size(); ++k) {
    c.mean_distance[k] /= static_cast<double>(c.sizes[k]);  // medoid is its own member
  }
  return c;
}

}  // namespace

Clustering pam(const DistanceMatrix& dist, int L, std::uint64_t seed, const SwapObserver& on_swap) {
  const std::size_t n = dist.size();
  if (L < 1) throw Error("number of clusters must be at least 1");
  if (static_cast<std::size_t>(L) > n) {
    throw Error("cannot form " + std::to_string(L) + " clusters from " + std::to_string(n) + " samples");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto rng = stream_for(seed, 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> medoids(order.begin(), order.begin() + L);
  std::vector<bool> is_medoid(n, false);
  for (auto m : medoids) is_medoid[m] = true;

  double cost = total_cost(dist, medoids);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
      for (std::size_t cand = 0; cand < n; ++cand) {
        if (is_medoid[cand]) continue;
        const std::size_t old = medoids[slot];
        medoids[slot] = cand;
        const double trial = total_cost(dist, medoids);
        if (trial < cost) {
          if (on_swap) on_swap(cost, trial);
          cost = trial;
          is_medoid[old] = false;
          is_medoid[cand] = true;
          improved = true;
        } else {
          medoids[slot] = old;
        }
      }
    }
  }
  return finalize(dist, L, std::move(medoids));
}

Clustering pam_best(const DistanceMatrix& dist, int L, std::uint64_t seed, int restarts) {
  if (restarts < 1) throw Error("need at least one restart");
  Clustering best;
  for (int r = 0; r < restarts; ++r) {
    auto c = pam(dist, L, splitmix64(seed + static_cast<std::uint64_t>(r)));
    if (r == 0 || c.total_cost < best.total_cost) best = std::move(c);
  }
  return best;
}

std::vector<ElbowRow> elbow(const DistanceMatrix& dist, std::span<const int> L_values, std::uint64_t seed,
                            int restarts) {
  std::vector<ElbowRow> rows;
  for (int L : L_values) {
    const auto c = pam_best(dist, L, seed, restarts);
    const double mean =
        std::accumulate(c.mean_distance.begin(), c.mean_distance.end(), 0.0) / static_cast<double>(L);
    rows.push_back({L, mean, c.total_cost});
  }
  return rows;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error("partitions have different sizes");
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (std::size_t i = 0; i < n; ++i) {
    table[{a[i], b[i]}] += 1;
    rows[a[i]] += 1;
    cols[b[i]] += 1;
  }
  auto pairs = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0;
  for (const auto& [key, count] : table) index += pairs(count);
  double sum_a = 0.0;
  for (const auto& [key, count] : rows) sum_a += pairs(count);
  double sum_b = 0.0;
  for (const auto& [key, count] : cols) sum_b += pairs(count);
  const double expected = sum_a * sum_b / pairs(static_cast<double>(n));
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both trivial partitions
  return (index - expected) / (max_index - expected);
}

void geo_export(const Clustering& clustering, std::span<const StationMeta> stations,
                const std::filesystem::path& csv_path, const std::optional<std::filesystem::path>& svg_path) {
  if (stations.size() != clustering.assignment.size()) {
    throw Error("geo export: " + std::to_string(stations.size()) + " stations but " +
                std::to_string(clustering.assignment.size()) + " cluster assignments");
  }
  std::string out = "station_id,lat,lon,cluster\n";
  std::vector<svg::Point> points;
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const auto& s = stations[i];
    out += std::to_string(s.station_id) + "," + csv::format_double(s.latitude) + "," +
           csv::format_double(s.longitude) + "," + std::to_string(clustering.assignment[i]) + "\n";
    points.push_back({s.latitude, s.longitude, svg::cluster_color(clustering.assignment[i]),
                      "station " + std::to_string(s.station_id) + " cluster " +
                          std::to_string(clustering.assignment[i])});
  }
  csv::write_file(csv_path, out);
  if (svg_path) {
    csv::write_file(*svg_path,
                    svg::scatter(points, "Clusters (L=" + std::to_string(clustering.L) + ")"));
  }
}

}  // namespace gridwatch
