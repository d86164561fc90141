#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <variant>

#include "gridwatch/classify/ann.hpp"
#include "gridwatch/classify/dataset.hpp"
#include "gridwatch/classify/forest.hpp"
#include "gridwatch/classify/svm.hpp"

namespace gridwatch {

enum class ModelKind : std::uint8_t { Svm, Forest, Ann };

std::string_view to_string(ModelKind kind);
/// Accepts "svm", "rf", "ann".
ModelKind parse_model_kind(std::string_view text);

using TrainedModel = std::variant<SvmModel, ForestModel, AnnModel>;

ModelKind kind_of(const TrainedModel& model);
std::size_t input_dimension(const TrainedModel& model);

struct ModelParams {
  SvmParams svm;
  ForestParams forest;
  AnnParams ann;
};

/// Trains `kind`; `seed` replaces the forest and network seeds.
TrainedModel train_model(ModelKind kind, const LabeledDataset& data, const ModelParams& params,
                         std::uint64_t seed);

struct Prediction {
  FaultLabel label = FaultLabel::DroppedLoad;
  double confidence = 0.0;
};

Prediction predict(const TrainedModel& model, std::span<const double> x);

inline constexpr std::string_view kModelMagic = "gridwatch-model";
inline constexpr int kModelFormatVersion = 1;

/// JSON container: magic, version, kind, hyperparameters, parameters. Loading
/// a saved model reproduces its predictions exactly.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace gridwatch
