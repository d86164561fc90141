#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gridwatch/classify/dataset.hpp"

namespace gridwatch {

struct ForestParams {
  int n_trees = 500;
  int features_per_split = 0;  // 0 means ceil(sqrt(dim))
  std::uint64_t seed = 1;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // x[feature] <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::array<std::uint32_t, kNumFaultClasses> counts{};  // leaf class histogram
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(std::span<const double> x) const;
  /// Majority of the leaf histogram, lowest label code on ties.
  FaultLabel predict(std::span<const double> x) const;
};

struct ForestModel {
  ForestParams params;
  std::size_t dim = 0;
  std::vector<DecisionTree> trees;
};

/// Bootstrap draw (with replacement, size n) used for tree `tree_index`.
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed, std::size_t tree_index);

/// CART tree grown to purity on the given rows with Gini splits at midpoints of
/// adjacent distinct values; `features_per_split` candidates per node.
DecisionTree grow_tree(const LabeledDataset& data, std::span<const std::size_t> rows,
                       int features_per_split, std::uint64_t seed, std::size_t tree_index);

ForestModel train_forest(const LabeledDataset& data, const ForestParams& params = {});

struct ForestVote {
  FaultLabel label = FaultLabel::DroppedLoad;
  double confidence = 0.0;  // fraction of trees voting for the winner
  std::array<int, kNumFaultClasses> votes{};
};

ForestVote forest_vote(const ForestModel& model, std::span<const double> x);

}  // namespace gridwatch
