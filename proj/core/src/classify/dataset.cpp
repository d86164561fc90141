#include "gridwatch/classify/dataset.hpp"

#include <cmath>
#include <string>

#include "gridwatch/csv.hpp"
#include "gridwatch/error.hpp"

namespace gridwatch {

void LabeledDataset::add(std::span<const double> x, FaultLabel y, StationMeta meta) {
  if (labels.empty() && features.empty()) {
    if (x.empty()) throw Error("feature rows must be nonempty");
    dim = x.size();
  } else if (x.size() != dim) {
    throw Error("feature dimension mismatch: expected " + std::to_string(dim) + ", got " +
                std::to_string(x.size()));
  }
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(y);
  stations.push_back(std::move(meta));
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.dim = dim;
  out.features.reserve(indices.size() * dim);
  out.labels.reserve(indices.size());
  out.stations.reserve(indices.size());
  for (auto i : indices) {
    if (i >= size()) throw Error("subset index out of range");
    const auto r = row(i);
    out.features.insert(out.features.end(), r.begin(), r.end());
    out.labels.push_back(labels[i]);
    out.stations.push_back(stations[i]);
  }
  return out;
}

std::array<int, kNumFaultClasses> LabeledDataset::class_counts() const {
  std::array<int, kNumFaultClasses> counts{};
  for (auto y : labels) ++counts[static_cast<std::size_t>(code_of(y))];
  return counts;
}

std::vector<FaultLabel> LabeledDataset::classes() const {
  std::vector<FaultLabel> out;
  const auto counts = class_counts();
  for (std::size_t c = 0; c < kNumFaultClasses; ++c) {
    if (counts[c] > 0) out.push_back(kAllFaultLabels[c]);
  }
  return out;
}

void require_trainable(const LabeledDataset& data) {
  if (data.classes().size() < 2) throw Error("training needs at least 2 classes");
}

void save_features(const LabeledDataset& data, const std::filesystem::path& path) {
  std::string buf = "station_id,label";
  for (std::size_t k = 1; k <= data.dim; ++k) buf += ",f" + std::to_string(k);
  buf += '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    buf += std::to_string(data.stations[i].station_id);
    buf += ',';
    buf += to_string(data.labels[i]);
    for (double v : data.row(i)) {
      buf += ',';
      buf += csv::format_double(v);
    }
    buf += '\n';
  }
  csv::write_file(path, buf);
}

LabeledDataset load_features(const std::filesystem::path& path) {
  const std::string text = csv::read_file(path);
  LabeledDataset out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<double> row;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    auto fail = [&](const std::string& msg) {
      return Error(path.string() + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (dim == 0) {
      if (fields.size() < 3 || fields[0] != "station_id" || fields[1] != "label") {
        throw fail("bad header, expected 'station_id,label,f1,...,fK'");
      }
      dim = fields.size() - 2;
      continue;
    }
    if (fields.size() != dim + 2) throw fail("expected " + std::to_string(dim + 2) + " fields");
    const auto id = csv::parse_int(fields[0]);
    if (!id) throw fail("bad station_id");
    if (fields[1].empty()) throw fail("unlabeled row");
    FaultLabel label;
    try {
      label = parse_fault_label(fields[1]);
    } catch (const Error& e) {
      throw fail(e.what());
    }
    row.clear();
    for (std::size_t k = 0; k < dim; ++k) {
      const auto v = csv::parse_double(fields[k + 2]);
      if (!v || !std::isfinite(*v)) throw fail("bad feature value in column " + std::to_string(k + 3));
      row.push_back(*v);
    }
    StationMeta meta;
    meta.station_id = *id;
    out.add(row, label, meta);
  }
  if (dim == 0) throw Error(path.string() + ": empty file, missing header");
  out.dim = dim;
  return out;
}

}  // namespace gridwatch
