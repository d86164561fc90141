#include "gridwatch/classify/svm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "gridwatch/error.hpp"

namespace gridwatch {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

namespace {

constexpr double kTau = 1e-12;

struct BinaryProblem {
  std::vector<std::size_t> rows;  // indices into the training set
  std::vector<signed char> y;
};

struct BinarySolution {
  std::vector<double> alpha;
  double rho = 0.0;  // decision = sum alpha y K - rho
  std::int64_t iterations = 0;
};

// Dual: min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0, with Q_ij = y_i y_j K_ij.
BinarySolution solve_smo(const BinaryProblem& prob, const std::vector<double>& kernel,
                         std::size_t n_total, const SvmParams& params, bool& converged) {
  const std::size_t n = prob.rows.size();
  const double C = params.C;
  auto K = [&](std::size_t i, std::size_t j) {
    return kernel[prob.rows[i] * n_total + prob.rows[j]];
  };
  const auto& y = prob.y;

  BinarySolution sol;
  sol.alpha.assign(n, 0.0);
  std::vector<double> G(n, -1.0);
  auto& alpha = sol.alpha;

  auto is_upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto is_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
  auto in_up = [&](std::size_t t) { return y[t] > 0 ? !is_upper(t) : !is_lower(t); };
  auto in_low = [&](std::size_t t) { return y[t] > 0 ? !is_lower(t) : !is_upper(t); };

  converged = false;
  std::int64_t iter = 0;
  while (iter < params.max_iterations) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n;
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * G[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    if (i == n || j == n || g_max - g_min < params.tolerance) {
      converged = true;
      break;
    }
    ++iter;

    const double Kii = K(i, i);
    const double Kjj = K(j, j);
    const double Kij = K(i, j);
    const double old_i = alpha[i];
    const double old_j = alpha[j];

    if (y[i] != y[j]) {
      double quad = Kii + Kjj - 2.0 * Kij;
      if (quad <= 0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = Kii + Kjj - 2.0 * Kij;
      if (quad <= 0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }

    const double d_i = alpha[i] - old_i;
    const double d_j = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      G[t] += y[t] * (y[i] * K(t, i) * d_i + y[j] * K(t, j) * d_j);
    }
  }
  sol.iterations = iter;

  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yG = y[t] * G[t];
    if (is_upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else if (is_lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yG);
      else lb = std::max(lb, yG);
    } else {
      ++n_free;
      sum_free += yG;
    }
  }
  sol.rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;
  return sol;
}

}  // namespace

SvmModel train_svm(const LabeledDataset& data, const SvmParams& params) {
  require_trainable(data);
  if (!(params.gamma > 0.0) || !(params.C > 0.0) || !(params.tolerance > 0.0)) {
    throw Error("svm: gamma, C and tolerance must be positive");
  }
  const std::size_t n = data.size();

  std::vector<double> kernel(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    kernel[a * n + a] = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      const double k = rbf_kernel(data.row(a), data.row(b), params.gamma);
      kernel[a * n + b] = k;
      kernel[b * n + a] = k;
    }
  }

  SvmModel model;
  model.params = params;
  model.dim = data.dim;
  model.classes = data.classes();

  std::map<std::size_t, std::uint32_t> pool_index;  // training row -> support pool row
  auto pool_row = [&](std::size_t r) {
    auto [it, inserted] = pool_index.try_emplace(r, static_cast<std::uint32_t>(pool_index.size()));
    if (inserted) {
      const auto x = data.row(r);
      model.support_vectors.insert(model.support_vectors.end(), x.begin(), x.end());
    }
    return it->second;
  };

  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      BinaryProblem prob;
      for (std::size_t r = 0; r < n; ++r) {
        if (data.labels[r] == model.classes[a]) {
          prob.rows.push_back(r);
          prob.y.push_back(+1);
        } else if (data.labels[r] == model.classes[b]) {
          prob.rows.push_back(r);
          prob.y.push_back(-1);
        }
      }
      bool converged = false;
      const auto sol = solve_smo(prob, kernel, n, params, converged);
      if (!converged) {
        throw Error("svm: SMO did not converge for class pair " +
                    std::string(to_string(model.classes[a])) + "/" +
                    std::string(to_string(model.classes[b])) + " after " +
                    std::to_string(params.max_iterations) + " iterations");
      }
      BinarySvm m;
      m.positive = model.classes[a];
      m.negative = model.classes[b];
      m.bias = -sol.rho;
      m.iterations = sol.iterations;
      for (std::size_t t = 0; t < prob.rows.size(); ++t) {
        if (sol.alpha[t] > 0.0) {
          m.support.push_back(pool_row(prob.rows[t]));
          m.alpha.push_back(sol.alpha[t]);
          m.coef.push_back(sol.alpha[t] * prob.y[t]);
        }
      }
      model.machines.push_back(std::move(m));
    }
  }
  return model;
}

SvmVote svm_vote(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dim) {
    throw Error("feature dimension mismatch: model expects " + std::to_string(model.dim) +
                ", got " + std::to_string(x.size()));
  }
  const std::size_t n_sv = model.n_support();
  std::vector<double> k(n_sv);
  for (std::size_t s = 0; s < n_sv; ++s) k[s] = rbf_kernel(model.support_vector(s), x, model.params.gamma);

  std::array<int, kNumFaultClasses> votes{};
  std::array<double, kNumFaultClasses> margin{};
  SvmVote out;
  out.decisions.reserve(model.machines.size());
  for (const auto& m : model.machines) {
    double d = m.bias;
    for (std::size_t s = 0; s < m.support.size(); ++s) d += m.coef[s] * k[m.support[s]];
    out.decisions.push_back(d);
    const auto pos = static_cast<std::size_t>(code_of(m.positive));
    const auto neg = static_cast<std::size_t>(code_of(m.negative));
    ++votes[d > 0 ? pos : neg];
    margin[pos] += d;
    margin[neg] -= d;
  }

  std::size_t best = static_cast<std::size_t>(code_of(model.classes.front()));
  for (auto c : model.classes) {
    const auto i = static_cast<std::size_t>(code_of(c));
    if (votes[i] > votes[best] || (votes[i] == votes[best] && margin[i] > margin[best])) best = i;
  }
  out.label = kAllFaultLabels[best];
  out.confidence = static_cast<double>(votes[best]) / static_cast<double>(model.classes.size() - 1);
  return out;
}

}  // namespace gridwatch
