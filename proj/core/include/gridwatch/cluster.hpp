#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "gridwatch/types.hpp"

namespace gridwatch {

/// (x - min) / (max - min); a constant input maps to all 0.5.
std::vector<double> minmax_normalize(std::span<const double> values);

/// Monotone, contiguous alignment from (0, 0) to (m - 1, n - 1), 0-based.
struct WarpingPath {
  std::vector<std::pair<std::size_t, std::size_t>> steps;
};

struct DtwResult {
  double distance = 0.0;
  WarpingPath path;
};

/// Minimum summed |u_a - v_b| over warping paths with steps (1,0), (0,1),
/// (1,1). With a band, only cells with |a - b| <= band are allowed; a band
/// narrower than |m - n| throws "band excludes all valid paths".
DtwResult dtw(std::span<const double> u, std::span<const double> v,
              std::optional<std::size_t> band = std::nullopt);

/// Same distance as dtw() in O(n) memory, without the path.
double dtw_distance(std::span<const double> u, std::span<const double> v,
                    std::optional<std::size_t> band = std::nullopt);

/// Dense symmetric matrix with zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

DistanceMatrix dtw_matrix(std::span<const std::vector<double>> samples,
                          std::optional<std::size_t> band = std::nullopt);

struct Clustering {
  int L = 0;
  std::vector<std::size_t> medoids;  // ascending sample indices; cluster k has medoid medoids[k]
  std::vector<int> assignment;       // sample -> cluster id
  double total_cost = 0.0;           // sum of distances to assigned medoids
  std::vector<std::size_t> sizes;
  std::vector<double> mean_distance;  // per cluster, mean member-to-medoid distance
};

/// Called with (cost before, cost after) for every accepted swap.
using SwapObserver = std::function<void(double, double)>;

/// Partitioning around medoids: seeded initial medoids, nearest-medoid
/// assignment (ties to the lower sample index), then full swap passes until a
/// pass accepts no cost-decreasing swap.
Clustering pam(const DistanceMatrix& dist, int L, std::uint64_t seed,
               const SwapObserver& on_swap = {});

/// Lowest-cost result over `restarts` independently seeded runs.
Clustering pam_best(const DistanceMatrix& dist, int L, std::uint64_t seed, int restarts = 5);

struct ElbowRow {
  int L = 0;
  double mean_intra_distance = 0.0;  // mean over clusters of mean member-to-medoid distance
  double total_cost = 0.0;
};

std::vector<ElbowRow> elbow(const DistanceMatrix& dist, std::span<const int> L_values,
                            std::uint64_t seed, int restarts = 5);

/// Chance-corrected agreement of two partitions of the same samples.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

/// Writes `station_id,lat,lon,cluster` to csv_path and, when svg_path is set,
/// a scatter colored by cluster.
void geo_export(const Clustering& clustering, std::span<const StationMeta> stations,
                const std::filesystem::path& csv_path,
                const std::optional<std::filesystem::path>& svg_path = std::nullopt);

}  // namespace gridwatch
