#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gridwatch/classify/dataset.hpp"

namespace gridwatch {

struct SvmParams {
  double gamma = 0.05;  // RBF kernel exp(-gamma |x - z|^2)
  double C = 1.0;
  double tolerance = 1e-3;  // KKT violation at which SMO stops
  std::int64_t max_iterations = 1'000'000;  // per class pair
};

/// One binary machine of the one-vs-one ensemble. Decision value is
/// sum_j coef_j K(sv_j, x) + bias; positive means `positive`.
struct BinarySvm {
  FaultLabel positive = FaultLabel::DroppedLoad;
  FaultLabel negative = FaultLabel::DroppedLoad;
  std::vector<std::uint32_t> support;  // indices into SvmModel::support_vectors rows
  std::vector<double> alpha;           // 0 < alpha <= C, aligned with `support`
  std::vector<double> coef;            // alpha * y
  double bias = 0.0;
  std::int64_t iterations = 0;
};

struct SvmModel {
  SvmParams params;
  std::size_t dim = 0;
  std::vector<FaultLabel> classes;
  std::vector<double> support_vectors;  // row-major pool shared by all machines
  std::vector<BinarySvm> machines;      // pairs (classes[a], classes[b]), a < b

  std::span<const double> support_vector(std::size_t i) const {
    return {support_vectors.data() + i * dim, dim};
  }
  std::size_t n_support() const { return dim ? support_vectors.size() / dim : 0; }
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// One-vs-one SVMs, each solved by SMO with maximal-violating-pair working
/// set selection. Throws on single-class data and on non-convergence (naming
/// the pair).
SvmModel train_svm(const LabeledDataset& data, const SvmParams& params = {});

struct SvmVote {
  FaultLabel label = FaultLabel::DroppedLoad;
  double confidence = 0.0;  // winner's votes / (n_classes - 1)
  std::vector<double> decisions;  // per machine
};

/// Pairwise voting; ties go to the larger summed decision value in favour of
/// the class, then to the lower label code.
SvmVote svm_vote(const SvmModel& model, std::span<const double> x);

}  // namespace gridwatch
