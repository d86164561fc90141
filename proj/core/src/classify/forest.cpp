#include "gridwatch/classify/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gridwatch/error.hpp"
#include "gridwatch/rng.hpp"

namespace gridwatch {

namespace {

using Counts = std::array<std::uint32_t, kNumFaultClasses>;

std::size_t majority(const Counts& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

double impurity_mass(const Counts& counts, double n) {
  if (n <= 0.0) return 0.0;
  double sq = 0.0;
  for (auto c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
  return n - sq / n;
}

struct Split {
  bool found = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // weighted Gini mass of the children
};

// Best threshold on one feature; rows sorted by value, midpoints of adjacent
// distinct values.
void best_split_on(const LabeledDataset& data, std::span<const std::size_t> rows,
                   std::size_t feature, const Counts& total,
                   std::vector<std::pair<double, std::uint8_t>>& scratch, Split& best) {
  scratch.clear();
  for (auto r : rows) {
    scratch.emplace_back(data.row(r)[feature],
                         static_cast<std::uint8_t>(code_of(data.labels[r])));
  }
  std::sort(scratch.begin(), scratch.end());
  if (scratch.front().first == scratch.back().first) return;

  Counts left{};
  Counts right = total;
  const double n = static_cast<double>(scratch.size());
  for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
    ++left[scratch[i].second];
    --right[scratch[i].second];
    const double a = scratch[i].first;
    const double b = scratch[i + 1].first;
    if (a == b) continue;
    const double nl = static_cast<double>(i + 1);
    const double score = impurity_mass(left, nl) + impurity_mass(right, n - nl);
    if (!best.found || score < best.score) {
      double mid = a + (b - a) / 2.0;
      if (!(mid < b)) mid = a;  // adjacent doubles
      best = {true, static_cast<std::int32_t>(feature), mid, score};
    }
  }
}

}  // namespace

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& node = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes[i];
}

FaultLabel DecisionTree::predict(std::span<const double> x) const {
  return kAllFaultLabels[majority(leaf_for(x).counts)];
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed, std::size_t tree_index) {
  auto rng = stream_for(seed, 2 * tree_index);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = pick(rng);
  return rows;
}

DecisionTree grow_tree(const LabeledDataset& data, std::span<const std::size_t> rows,
                       int features_per_split, std::uint64_t seed, std::size_t tree_index) {
  if (rows.empty()) throw Error("cannot grow a tree on zero rows");
  auto rng = stream_for(seed, 2 * tree_index + 1);
  const std::size_t dim = data.dim;
  const auto mtry = static_cast<std::size_t>(std::clamp(features_per_split, 1, static_cast<int>(dim)));

  DecisionTree tree;
  struct Pending {
    std::size_t node;
    std::vector<std::size_t> rows;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, std::vector<std::size_t>(rows.begin(), rows.end())});

  std::vector<std::size_t> order(dim);
  std::vector<std::pair<double, std::uint8_t>> scratch;
  scratch.reserve(rows.size());

  while (!stack.empty()) {
    Pending job = std::move(stack.back());
    stack.pop_back();

    Counts counts{};
    for (auto r : job.rows) ++counts[static_cast<std::size_t>(code_of(data.labels[r]))];
    const auto nonzero = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; });

    Split best;
    if (nonzero > 1) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), rng);
      // Sampled candidates first; fall back to the rest only if none splits.
      for (std::size_t k = 0; k < dim && (k < mtry || !best.found); ++k) {
        best_split_on(data, job.rows, order[k], counts, scratch, best);
      }
    }

    if (!best.found) {
      tree.nodes[job.node].counts = counts;
      continue;
    }

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (auto r : job.rows) {
      (data.row(r)[static_cast<std::size_t>(best.feature)] <= best.threshold ? left_rows : right_rows)
          .push_back(r);
    }
    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const auto right = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    auto& node = tree.nodes[job.node];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    stack.push_back({static_cast<std::size_t>(right), std::move(right_rows)});
    stack.push_back({static_cast<std::size_t>(left), std::move(left_rows)});
  }
  return tree;
}

ForestModel train_forest(const LabeledDataset& data, const ForestParams& params) {
  require_trainable(data);
  if (params.n_trees < 1) throw Error("forest needs at least one tree");
  ForestModel model;
  model.params = params;
  model.dim = data.dim;
  const int mtry = params.features_per_split > 0
                       ? params.features_per_split
                       : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(data.dim))));
  model.params.features_per_split = mtry;
  model.trees.reserve(static_cast<std::size_t>(params.n_trees));
  for (int t = 0; t < params.n_trees; ++t) {
    const auto rows = bootstrap_sample(data.size(), params.seed, static_cast<std::size_t>(t));
    model.trees.push_back(grow_tree(data, rows, mtry, params.seed, static_cast<std::size_t>(t)));
  }
  return model;
}

ForestVote forest_vote(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.dim) {
    throw Error("feature dimension mismatch: model expects " + std::to_string(model.dim) +
                ", got " + std::to_string(x.size()));
  }
  ForestVote out;
  for (const auto& tree : model.trees) {
    ++out.votes[static_cast<std::size_t>(code_of(tree.predict(x)))];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumFaultClasses; ++c) {
    if (out.votes[c] > out.votes[best]) best = c;
  }
  out.label = kAllFaultLabels[best];
  out.confidence = static_cast<double>(out.votes[best]) / static_cast<double>(model.trees.size());
  return out;
}

}  // namespace gridwatch
