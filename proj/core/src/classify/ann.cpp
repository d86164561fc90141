#include "gridwatch/classify/ann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "gridwatch/error.hpp"
#include "gridwatch/rng.hpp"

namespace gridwatch {

AnnModel AnnModel::zeros(std::size_t inputs, std::size_t hidden) {
  AnnModel m;
  m.inputs = inputs;
  m.hidden = hidden;
  m.w1.assign(hidden * inputs, 0.0);
  m.b1.assign(hidden, 0.0);
  m.w2.assign(outputs * hidden, 0.0);
  m.b2.assign(outputs, 0.0);
  return m;
}

std::vector<double> AnnModel::flatten() const {
  std::vector<double> theta;
  theta.reserve(n_parameters());
  theta.insert(theta.end(), w1.begin(), w1.end());
  theta.insert(theta.end(), b1.begin(), b1.end());
  theta.insert(theta.end(), w2.begin(), w2.end());
  theta.insert(theta.end(), b2.begin(), b2.end());
  return theta;
}

void AnnModel::unflatten(std::span<const double> theta) {
  if (theta.size() != n_parameters()) throw Error("ann: parameter vector has wrong size");
  auto it = theta.begin();
  for (auto* v : {&w1, &b1, &w2, &b2}) {
    std::copy_n(it, v->size(), v->begin());
    it += static_cast<std::ptrdiff_t>(v->size());
  }
}

namespace {

struct Activations {
  std::vector<double> h;  // tanh outputs
  std::array<double, kNumFaultClasses> p{};
};

void forward_into(const AnnModel& m, std::span<const double> x, Activations& a) {
  a.h.resize(m.hidden);
  for (std::size_t j = 0; j < m.hidden; ++j) {
    double z = m.b1[j];
    const double* w = m.w1.data() + j * m.inputs;
    for (std::size_t i = 0; i < m.inputs; ++i) z += w[i] * x[i];
    a.h[j] = std::tanh(z);
  }
  double zmax = -std::numeric_limits<double>::infinity();
  std::array<double, kNumFaultClasses> z{};
  for (std::size_t c = 0; c < AnnModel::outputs; ++c) {
    double s = m.b2[c];
    const double* w = m.w2.data() + c * m.hidden;
    for (std::size_t j = 0; j < m.hidden; ++j) s += w[j] * a.h[j];
    z[c] = s;
    zmax = std::max(zmax, s);
  }
  double norm = 0.0;
  for (std::size_t c = 0; c < AnnModel::outputs; ++c) {
    a.p[c] = std::exp(z[c] - zmax);
    norm += a.p[c];
  }
  for (auto& v : a.p) v /= norm;
}

}  // namespace

std::array<double, kNumFaultClasses> AnnModel::forward(std::span<const double> x) const {
  if (x.size() != inputs) {
    throw Error("feature dimension mismatch: model expects " + std::to_string(inputs) + ", got " +
                std::to_string(x.size()));
  }
  Activations a;
  forward_into(*this, x, a);
  return a.p;
}

double ann_loss(const AnnModel& m, const LabeledDataset& data, std::span<const std::size_t> rows,
                std::vector<double>* gradient) {
  if (data.dim != m.inputs) throw Error("ann: dataset dimension does not match the network");
  if (rows.empty()) throw Error("ann: empty batch");
  const std::size_t off_b1 = m.w1.size();
  const std::size_t off_w2 = off_b1 + m.b1.size();
  const std::size_t off_b2 = off_w2 + m.w2.size();
  if (gradient) gradient->assign(m.n_parameters(), 0.0);

  Activations a;
  std::vector<double> dh(m.hidden);
  const double scale = 1.0 / static_cast<double>(rows.size());
  double loss = 0.0;
  for (auto r : rows) {
    const auto x = data.row(r);
    const auto y = static_cast<std::size_t>(code_of(data.labels[r]));
    forward_into(m, x, a);
    loss -= std::log(std::max(a.p[y], std::numeric_limits<double>::min()));
    if (!gradient) continue;
    auto& g = *gradient;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t c = 0; c < AnnModel::outputs; ++c) {
      const double dz = (a.p[c] - (c == y ? 1.0 : 0.0)) * scale;
      g[off_b2 + c] += dz;
      for (std::size_t j = 0; j < m.hidden; ++j) {
        g[off_w2 + c * m.hidden + j] += dz * a.h[j];
        dh[j] += dz * m.w2[c * m.hidden + j];
      }
    }
    for (std::size_t j = 0; j < m.hidden; ++j) {
      const double dpre = dh[j] * (1.0 - a.h[j] * a.h[j]);
      g[off_b1 + j] += dpre;
      double* gw = g.data() + j * m.inputs;
      for (std::size_t i = 0; i < m.inputs; ++i) gw[i] += dpre * x[i];
    }
  }
  return loss * scale;
}

AnnModel train_ann(const LabeledDataset& data, const AnnParams& params) {
  require_trainable(data);
  if (params.hidden < 1 || params.epochs < 0 || params.batch_size < 1 ||
      !(params.learning_rate > 0.0)) {
    throw Error("ann: invalid hyperparameters");
  }
  AnnModel m = AnnModel::zeros(data.dim, static_cast<std::size_t>(params.hidden));
  m.params = params;

  auto rng = stream_for(params.seed, 0);
  std::uniform_real_distribution<double> init(-params.init_scale, params.init_scale);
  for (auto& w : m.w1) w = init(rng);
  for (auto& w : m.w2) w = init(rng);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad;
  std::vector<double> theta = m.flatten();
  const auto batch = static_cast<std::size_t>(params.batch_size);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = params.learning_rate / (1.0 + params.lr_decay * epoch);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const double l = ann_loss(m, data, rows, &grad);
      if (!std::isfinite(l)) throw Error("diverged; lower learning rate");
      epoch_loss += l * static_cast<double>(rows.size());
      for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= lr * grad[k];
      m.unflatten(theta);
    }
    epoch_loss /= static_cast<double>(order.size());
    if (!std::isfinite(epoch_loss)) throw Error("diverged; lower learning rate");
    m.loss_history.push_back(epoch_loss);
  }
  for (double v : theta) {
    if (!std::isfinite(v)) throw Error("diverged; lower learning rate");
  }
  return m;
}

AnnPrediction ann_predict(const AnnModel& model, std::span<const double> x) {
  const auto p = model.forward(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < p.size(); ++c) {
    if (p[c] > p[best]) best = c;
  }
  return {kAllFaultLabels[best], p[best]};
}

}  // namespace gridwatch
