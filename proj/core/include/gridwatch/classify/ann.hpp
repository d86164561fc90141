#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gridwatch/classify/dataset.hpp"

namespace gridwatch {

struct AnnParams {
  int hidden = 5;
  int epochs = 2000;
  double learning_rate = 0.01;
  double lr_decay = 0.0;  // rate at epoch e is learning_rate / (1 + lr_decay * e)
  int batch_size = 32;
  double init_scale = 0.1;  // weights start in U(-init_scale, init_scale)
  std::uint64_t seed = 1;
};

/// input -> hidden (tanh) -> kNumFaultClasses (softmax). Output unit c scores
/// the label with code c.
struct AnnModel {
  AnnParams params;
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // hidden x inputs
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // outputs x hidden
  std::vector<double> b2;  // outputs
  std::vector<double> loss_history;  // mean training loss per epoch

  static constexpr std::size_t outputs = kNumFaultClasses;

  /// Zero-initialized network of the given shape.
  static AnnModel zeros(std::size_t inputs, std::size_t hidden);

  std::size_t n_parameters() const { return w1.size() + b1.size() + w2.size() + b2.size(); }
  /// Parameters in the order w1, b1, w2, b2.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> theta);

  /// Softmax class probabilities.
  std::array<double, kNumFaultClasses> forward(std::span<const double> x) const;
};

/// Mean cross-entropy over `rows` of `data`; when `gradient` is non-null it
/// receives d(loss)/d(theta) in flatten() order.
double ann_loss(const AnnModel& model, const LabeledDataset& data, std::span<const std::size_t> rows,
                std::vector<double>* gradient = nullptr);

/// Mini-batch gradient descent on softmax cross-entropy. Throws
/// "diverged; lower learning rate" if the loss stops being finite.
AnnModel train_ann(const LabeledDataset& data, const AnnParams& params = {});

struct AnnPrediction {
  FaultLabel label = FaultLabel::DroppedLoad;
  double confidence = 0.0;  // softmax probability of the winner
};

AnnPrediction ann_predict(const AnnModel& model, std::span<const double> x);

}  // namespace gridwatch
