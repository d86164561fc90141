#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "gridwatch/types.hpp"

namespace gridwatch {

/// Feature rows with labels, stored row-major.
struct LabeledDataset {
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<FaultLabel> labels;
  std::vector<StationMeta> stations;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dim, dim};
  }

  /// Appends a row; the first row fixes `dim`, later rows must match it.
  void add(std::span<const double> x, FaultLabel y, StationMeta meta = {});
  LabeledDataset subset(std::span<const std::size_t> indices) const;
  std::array<int, kNumFaultClasses> class_counts() const;
  /// Labels present, ascending by code.
  std::vector<FaultLabel> classes() const;
};

/// Throws unless at least two classes are present.
void require_trainable(const LabeledDataset& data);

// Feature CSV: station_id,label,f1,...,fK
void save_features(const LabeledDataset& data, const std::filesystem::path& path);
/// Every row must carry a label.
LabeledDataset load_features(const std::filesystem::path& path);

}  // namespace gridwatch
