// Copyright 2026 The Glotkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "glotkit/classify.hpp"
#include "glotkit/error.hpp"
#include "glotkit/io.hpp"

namespace glotkit {

namespace {

double poly_kernel(const std::vector<double>& u, const std::vector<double>& v, int degree,
                   double coef0) {
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  double k = dot + coef0;
  double acc = 1.0;
  for (int d = 0; d < degree; ++d) acc *= k;
  return acc;
}

// Dual solver state: g[i] = sum_j alpha_j y_j K(i, j) - y_i  (the bias-free
// prediction error). KKT feasibility is a set of bounds on the bias:
// v_i = -g_i is a lower bound for i in I_up and an upper bound for i in
// I_low, so the maximal violating pair is
//   i = argmax_{I_up} v_i,   j = argmin_{I_low} v_j
// and optimality holds when the gap v_i - v_j closes below tol; the bias is
// the midpoint of the two bounds.
struct Smo {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  const SvmConfig& cfg;
  std::vector<double> alpha;
  std::vector<double> g;
  std::vector<std::vector<double>> kernel;  // full matrix (training sets are small)

  explicit Smo(const std::vector<std::vector<double>>& x_, const std::vector<int>& y_,
               const SvmConfig& cfg_)
      : x(x_), y(y_), cfg(cfg_), alpha(x_.size(), 0.0), g(x_.size()) {
    const std::size_t n = x.size();
    kernel.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const double k = poly_kernel(x[i], x[j], cfg.degree, cfg.coef0);
        kernel[i][j] = k;
        kernel[j][i] = k;
      }
    }
    for (std::size_t i = 0; i < n; ++i) g[i] = -static_cast<double>(y[i]);
  }

  bool in_up(std::size_t i) const {
    return (y[i] > 0 && alpha[i] < cfg.c) || (y[i] < 0 && alpha[i] > 0.0);
  }
  bool in_low(std::size_t i) const {
    return (y[i] > 0 && alpha[i] > 0.0) || (y[i] < 0 && alpha[i] < cfg.c);
  }

  // Returns the optimality gap after selecting (i, j); gap <= tol means done.
  double select_pair(std::size_t& i_out, std::size_t& j_out) const {
    double up_best = -std::numeric_limits<double>::infinity();
    double low_best = std::numeric_limits<double>::infinity();
    std::size_t i = x.size(), j = x.size();
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double v = -g[k];
      if (in_up(k) && v > up_best) {
        up_best = v;
        i = k;
      }
      if (in_low(k) && v < low_best) {
        low_best = v;
        j = k;
      }
    }
    i_out = i;
    j_out = j;
    if (i >= x.size() || j >= x.size()) return 0.0;
    return up_best - low_best;
  }

  void update_pair(std::size_t i, std::size_t j) {
    const double yi = y[i], yj = y[j];
    const double old_ai = alpha[i], old_aj = alpha[j];
    double L, H;
    if (yi != yj) {
      L = std::max(0.0, old_aj - old_ai);
      H = std::min(cfg.c, cfg.c + old_aj - old_ai);
    } else {
      L = std::max(0.0, old_ai + old_aj - cfg.c);
      H = std::min(cfg.c, old_ai + old_aj);
    }
    double eta = kernel[i][i] + kernel[j][j] - 2.0 * kernel[i][j];
    if (eta <= 0.0) eta = 1e-12;  // PSD kernel; guards exact duplicates
    double aj = old_aj + yj * (g[i] - g[j]) / eta;
    aj = std::clamp(aj, L, H);
    const double ai = old_ai + yi * yj * (old_aj - aj);

    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    if (dai == 0.0 && daj == 0.0) return;
    for (std::size_t k = 0; k < x.size(); ++k)
      g[k] += dai * yi * kernel[i][k] + daj * yj * kernel[j][k];
    alpha[i] = ai;
    alpha[j] = aj;
  }
};

}  // namespace

SvmModel svm_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const SvmConfig& cfg) {
  if (x.size() != y.size()) raise(ErrorCode::dimension_mismatch, "svm: |x| != |y|");
  if (x.empty()) raise(ErrorCode::degenerate_input, "svm: empty training set");
  bool has_pos = false, has_neg = false;
  for (int label : y) {
    if (label == 1) has_pos = true;
    else if (label == -1) has_neg = true;
    else raise(ErrorCode::invalid_argument, "svm labels must be +1/-1");
  }
  if (!has_pos || !has_neg) raise(ErrorCode::degenerate_input, "svm needs both classes present");
  if (cfg.degree < 1) raise(ErrorCode::invalid_argument, "svm polynomial degree must be >= 1");
  if (!(cfg.c > 0.0)) raise(ErrorCode::invalid_argument, "svm c must be positive");

  Smo smo(x, y, cfg);
  long iter = 0;
  bool converged = false;
  while (iter < cfg.max_passes) {
    std::size_t i = 0, j = 0;
    const double gap = smo.select_pair(i, j);
    if (i >= x.size() || j >= x.size() || gap <= cfg.tol) {
      converged = true;
      break;
    }
    smo.update_pair(i, j);
    ++iter;
  }

  // bias: midpoint of the bounds set by the final gradient
  double up_best = -std::numeric_limits<double>::infinity();
  double low_best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = -smo.g[k];
    if (smo.in_up(k)) up_best = std::max(up_best, v);
    if (smo.in_low(k)) low_best = std::min(low_best, v);
  }
  double bias = 0.0;
  if (std::isfinite(up_best) && std::isfinite(low_best))
    bias = 0.5 * (up_best + low_best);
  else if (std::isfinite(up_best))
    bias = up_best;
  else if (std::isfinite(low_best))
    bias = low_best;

  SvmModel model;
  model.degree = cfg.degree;
  model.coef0 = cfg.coef0;
  model.c = cfg.c;
  model.bias = bias;
  model.converged = converged;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (smo.alpha[k] > 0.0) {
      model.support_vectors.push_back(x[k]);
      model.dual_coeffs.push_back(smo.alpha[k] * y[k]);
    }
  }

  // final pointwise KKT violation, measured with the reported bias
  double residual = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double f = smo.g[k] + static_cast<double>(y[k]) + bias;  // decision value
    const double yf = static_cast<double>(y[k]) * f;
    double viol = 0.0;
    if (smo.alpha[k] <= 0.0)
      viol = std::max(0.0, 1.0 - yf);
    else if (smo.alpha[k] >= cfg.c)
      viol = std::max(0.0, yf - 1.0);
    else
      viol = std::abs(1.0 - yf);
    residual = std::max(residual, viol);
  }
  model.kkt_residual = residual;
  return model;
}

double svm_decision(const SvmModel& model, const std::vector<double>& x) {
  if (!model.support_vectors.empty() && model.support_vectors.front().size() != x.size())
    raise(ErrorCode::dimension_mismatch, "svm input width does not match the training layout");
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
    f += model.dual_coeffs[i] * poly_kernel(model.support_vectors[i], x, model.degree, model.coef0);
  return f;
}

int svm_predict(const SvmModel& model, const std::vector<double>& x) {
  return svm_decision(model, x) >= 0.0 ? 1 : -1;
}

void svm_save(std::ostream& out, const SvmModel& model) {
  out << "glotkit-svm,1\n";
  out << "kernel,poly," << model.degree << "," << format_double(model.coef0) << "\n";
  out << "c," << format_double(model.c) << "\n";
  out << "bias," << format_double(model.bias) << "\n";
  out << "labels," << model.label_neg << "," << model.label_pos << "\n";
  out << "converged," << (model.converged ? 1 : 0) << "," << format_double(model.kkt_residual)
      << "\n";
  const std::size_t dim = model.support_vectors.empty() ? 0 : model.support_vectors.front().size();
  out << "sv," << model.support_vectors.size() << "," << dim << "\n";
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    out << format_double(model.dual_coeffs[i]);
    for (double v : model.support_vectors[i]) out << "," << format_double(v);
    out << "\n";
  }
}

SvmModel svm_load(std::istream& in) {
  SvmModel model;
  std::string line;
  auto next = [&]() {
    if (!std::getline(in, line)) raise(ErrorCode::io_failure, "truncated svm model");
    return split_csv_line(line);
  };
  std::vector<std::string> f = next();
  if (f.empty() || f[0] != "glotkit-svm") raise(ErrorCode::io_failure, "not an svm model stream");
  f = next();
  model.degree = static_cast<int>(parse_double(f.at(2)));
  model.coef0 = parse_double(f.at(3));
  f = next();
  model.c = parse_double(f.at(1));
  f = next();
  model.bias = parse_double(f.at(1));
  f = next();
  model.label_neg = f.at(1);
  model.label_pos = f.at(2);
  f = next();
  model.converged = parse_double(f.at(1)) != 0.0;
  model.kkt_residual = parse_double(f.at(2));
  f = next();
  const auto n_sv = static_cast<std::size_t>(parse_double(f.at(1)));
  const auto dim = static_cast<std::size_t>(parse_double(f.at(2)));
  for (std::size_t i = 0; i < n_sv; ++i) {
    f = next();
    if (f.size() != dim + 1) raise(ErrorCode::io_failure, "svm support vector width mismatch");
    model.dual_coeffs.push_back(parse_double(f[0]));
    std::vector<double> sv(dim);
    for (std::size_t d = 0; d < dim; ++d) sv[d] = parse_double(f[d + 1]);
    model.support_vectors.push_back(std::move(sv));
  }
  return model;
}

}  // namespace glotkit
