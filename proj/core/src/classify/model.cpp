#include "gridwatch/classify/model.hpp"

#include <string>

#include <json.hpp>

#include "gridwatch/csv.hpp"
#include "gridwatch/error.hpp"

namespace gridwatch {

using nlohmann::json;

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Svm:
      return "svm";
    case ModelKind::Forest:
      return "rf";
    case ModelKind::Ann:
      return "ann";
  }
  return "svm";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "svm") return ModelKind::Svm;
  if (text == "rf") return ModelKind::Forest;
  if (text == "ann") return ModelKind::Ann;
  throw Error("unknown model kind '" + std::string(text) + "' (valid: svm, rf, ann)");
}

ModelKind kind_of(const TrainedModel& model) {
  return static_cast<ModelKind>(model.index());
}

std::size_t input_dimension(const TrainedModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, AnnModel>) return m.inputs;
        else return m.dim;
      },
      model);
}

TrainedModel train_model(ModelKind kind, const LabeledDataset& data, const ModelParams& params,
                         std::uint64_t seed) {
  switch (kind) {
    case ModelKind::Svm:
      return train_svm(data, params.svm);
    case ModelKind::Forest: {
      auto p = params.forest;
      p.seed = seed;
      return train_forest(data, p);
    }
    case ModelKind::Ann: {
      auto p = params.ann;
      p.seed = seed;
      return train_ann(data, p);
    }
  }
  throw Error("unknown model kind");
}

Prediction predict(const TrainedModel& model, std::span<const double> x) {
  return std::visit(
      [&](const auto& m) -> Prediction {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SvmModel>) {
          const auto v = svm_vote(m, x);
          return {v.label, v.confidence};
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          const auto v = forest_vote(m, x);
          return {v.label, v.confidence};
        } else {
          const auto v = ann_predict(m, x);
          return {v.label, v.confidence};
        }
      },
      model);
}

namespace {

std::vector<int> label_codes(const std::vector<FaultLabel>& labels) {
  std::vector<int> out;
  for (auto l : labels) out.push_back(code_of(l));
  return out;
}

std::vector<FaultLabel> labels_from(const json& codes) {
  std::vector<FaultLabel> out;
  for (const auto& c : codes) out.push_back(fault_label_from_code(c.get<int>()));
  return out;
}

json to_json(const SvmModel& m) {
  json machines = json::array();
  for (const auto& b : m.machines) {
    machines.push_back({{"positive", code_of(b.positive)},
                        {"negative", code_of(b.negative)},
                        {"support", b.support},
                        {"alpha", b.alpha},
                        {"coef", b.coef},
                        {"bias", b.bias},
                        {"iterations", b.iterations}});
  }
  return {{"hyperparameters",
           {{"gamma", m.params.gamma},
            {"C", m.params.C},
            {"tolerance", m.params.tolerance},
            {"max_iterations", m.params.max_iterations}}},
          {"dim", m.dim},
          {"classes", label_codes(m.classes)},
          {"support_vectors", m.support_vectors},
          {"machines", machines}};
}

SvmModel svm_from_json(const json& j) {
  SvmModel m;
  const auto& h = j.at("hyperparameters");
  m.params.gamma = h.at("gamma").get<double>();
  m.params.C = h.at("C").get<double>();
  m.params.tolerance = h.at("tolerance").get<double>();
  m.params.max_iterations = h.at("max_iterations").get<std::int64_t>();
  m.dim = j.at("dim").get<std::size_t>();
  m.classes = labels_from(j.at("classes"));
  m.support_vectors = j.at("support_vectors").get<std::vector<double>>();
  for (const auto& mj : j.at("machines")) {
    BinarySvm b;
    b.positive = fault_label_from_code(mj.at("positive").get<int>());
    b.negative = fault_label_from_code(mj.at("negative").get<int>());
    b.support = mj.at("support").get<std::vector<std::uint32_t>>();
    b.alpha = mj.at("alpha").get<std::vector<double>>();
    b.coef = mj.at("coef").get<std::vector<double>>();
    b.bias = mj.at("bias").get<double>();
    b.iterations = mj.at("iterations").get<std::int64_t>();
    for (auto s : b.support) {
      if (s >= m.n_support()) throw Error("model file: support index out of range");
    }
    m.machines.push_back(std::move(b));
  }
  return m;
}

json to_json(const ForestModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees) {
    std::vector<std::int32_t> feature;
    std::vector<double> threshold;
    std::vector<std::int32_t> left;
    std::vector<std::int32_t> right;
    std::vector<std::uint32_t> counts;
    for (const auto& n : t.nodes) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      counts.insert(counts.end(), n.counts.begin(), n.counts.end());
    }
    trees.push_back({{"feature", feature},
                     {"threshold", threshold},
                     {"left", left},
                     {"right", right},
                     {"counts", counts}});
  }
  return {{"hyperparameters",
           {{"n_trees", m.params.n_trees},
            {"features_per_split", m.params.features_per_split},
            {"seed", m.params.seed}}},
          {"dim", m.dim},
          {"trees", trees}};
}

ForestModel forest_from_json(const json& j) {
  ForestModel m;
  const auto& h = j.at("hyperparameters");
  m.params.n_trees = h.at("n_trees").get<int>();
  m.params.features_per_split = h.at("features_per_split").get<int>();
  m.params.seed = h.at("seed").get<std::uint64_t>();
  m.dim = j.at("dim").get<std::size_t>();
  for (const auto& tj : j.at("trees")) {
    const auto feature = tj.at("feature").get<std::vector<std::int32_t>>();
    const auto threshold = tj.at("threshold").get<std::vector<double>>();
    const auto left = tj.at("left").get<std::vector<std::int32_t>>();
    const auto right = tj.at("right").get<std::vector<std::int32_t>>();
    const auto counts = tj.at("counts").get<std::vector<std::uint32_t>>();
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n ||
        counts.size() != n * kNumFaultClasses || n == 0) {
      throw Error("model file: inconsistent tree arrays");
    }
    DecisionTree t;
    t.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& node = t.nodes[i];
      node.feature = feature[i];
      node.threshold = threshold[i];
      node.left = left[i];
      node.right = right[i];
      if (node.feature >= 0 &&
          (static_cast<std::size_t>(node.feature) >= m.dim || node.left <= 0 || node.right <= 0 ||
           static_cast<std::size_t>(node.left) >= n || static_cast<std::size_t>(node.right) >= n)) {
        throw Error("model file: bad tree node");
      }
      std::copy_n(counts.begin() + static_cast<std::ptrdiff_t>(i * kNumFaultClasses),
                  kNumFaultClasses, node.counts.begin());
    }
    m.trees.push_back(std::move(t));
  }
  return m;
}

json to_json(const AnnModel& m) {
  return {{"hyperparameters",
           {{"hidden", m.params.hidden},
            {"epochs", m.params.epochs},
            {"learning_rate", m.params.learning_rate},
            {"lr_decay", m.params.lr_decay},
            {"batch_size", m.params.batch_size},
            {"init_scale", m.params.init_scale},
            {"seed", m.params.seed}}},
          {"inputs", m.inputs},
          {"hidden", m.hidden},
          {"outputs", AnnModel::outputs},
          {"w1", m.w1},
          {"b1", m.b1},
          {"w2", m.w2},
          {"b2", m.b2}};
}

AnnModel ann_from_json(const json& j) {
  const auto& h = j.at("hyperparameters");
  AnnModel m = AnnModel::zeros(j.at("inputs").get<std::size_t>(), j.at("hidden").get<std::size_t>());
  if (j.at("outputs").get<std::size_t>() != AnnModel::outputs) {
    throw Error("model file: unexpected output layer size");
  }
  m.params.hidden = h.at("hidden").get<int>();
  m.params.epochs = h.at("epochs").get<int>();
  m.params.learning_rate = h.at("learning_rate").get<double>();
  m.params.lr_decay = h.at("lr_decay").get<double>();
  m.params.batch_size = h.at("batch_size").get<int>();
  m.params.init_scale = h.at("init_scale").get<double>();
  m.params.seed = h.at("seed").get<std::uint64_t>();
  auto load = [&](const char* key, std::vector<double>& dst) {
    auto v = j.at(key).get<std::vector<double>>();
    if (v.size() != dst.size()) throw Error(std::string("model file: bad size for ") + key);
    dst = std::move(v);
  };
  load("w1", m.w1);
  load("b1", m.b1);
  load("w2", m.w2);
  load("b2", m.b2);
  return m;
}

}  // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  json doc;
  doc["magic"] = kModelMagic;
  doc["version"] = kModelFormatVersion;
  doc["kind"] = to_string(kind_of(model));
  doc["model"] = std::visit([](const auto& m) { return to_json(m); }, model);
  csv::write_file(path, doc.dump() + "\n");
}

TrainedModel load_model(const std::filesystem::path& path) {
  const std::string text = csv::read_file(path);
  try {
    const json doc = json::parse(text);
    if (!doc.is_object() || doc.value("magic", "") != kModelMagic) {
      throw Error("not a gridwatch model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error("unsupported model format version " + std::to_string(version));
    }
    const auto kind = parse_model_kind(doc.at("kind").get<std::string>());
    const auto& body = doc.at("model");
    switch (kind) {
      case ModelKind::Svm:
        return svm_from_json(body);
      case ModelKind::Forest:
        return forest_from_json(body);
      case ModelKind::Ann:
        return ann_from_json(body);
    }
  } catch (const json::exception& e) {
    throw Error(path.string() + ": malformed model file: " + e.what());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  throw Error(path.string() + ": unknown model kind");
}

}  // namespace gridwatch
