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
//
// Brute-force reference implementations used only by tests. Everything here
// is written from the definitions, independent of the library code paths it
// checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

// O(n^2) direct-sum DFT magnitudes, bins 0..n_fft/2.
inline std::vector<double> naive_dft_magnitude(const std::vector<double>& frame,
                                               std::size_t n_fft) {
  std::vector<double> mag(n_fft / 2 + 1, 0.0);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t n = 0; n < frame.size(); ++n) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                         static_cast<double>(n) / static_cast<double>(n_fft);
      acc += frame[n] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    mag[k] = std::abs(acc);
  }
  return mag;
}

// Direct-sum DFT magnitude of a single bin.
inline double naive_dft_bin(const std::vector<double>& frame, std::size_t n_fft, std::size_t k) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t n = 0; n < frame.size(); ++n) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) * static_cast<double>(n) /
                       static_cast<double>(n_fft);
    acc += frame[n] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return std::abs(acc);
}

// Dense Gaussian-elimination solve of the LPC normal equations R a = -r,
// ignoring the Toeplitz structure entirely.
inline std::vector<double> normal_equation_lpc(const std::vector<double>& x, std::size_t order) {
  std::vector<double> r(order + 1, 0.0);
  for (std::size_t k = 0; k <= order; ++k)
    for (std::size_t n = 0; n + k < x.size(); ++n) r[k] += x[n] * x[n + k];

  std::vector<std::vector<double>> m(order, std::vector<double>(order + 1, 0.0));
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < order; ++j)
      m[i][j] = r[static_cast<std::size_t>(std::llabs(static_cast<long long>(i) -
                                                      static_cast<long long>(j)))];
    m[i][order] = -r[i + 1];
  }
  for (std::size_t col = 0; col < order; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < order; ++row)
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    std::swap(m[col], m[pivot]);
    for (std::size_t row = 0; row < order; ++row) {
      if (row == col || m[col][col] == 0.0) continue;
      const double f = m[row][col] / m[col][col];
      for (std::size_t j = col; j <= order; ++j) m[row][j] -= f * m[col][j];
    }
  }
  std::vector<double> a(order, 0.0);
  for (std::size_t i = 0; i < order; ++i)
    if (m[i][i] != 0.0) a[i] = m[i][order] / m[i][i];
  return a;
}

// Max over integer lags of the mean-removed normalized cross-correlation.
inline double best_lag_ncc(const std::vector<double>& a, const std::vector<double>& b,
                           std::size_t max_lag) {
  auto centered = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    std::vector<double> c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i] - mean;
    return c;
  };
  const std::vector<double> ca = centered(a);
  const std::vector<double> cb = centered(b);
  double best = -1.0;
  for (long lag = -static_cast<long>(max_lag); lag <= static_cast<long>(max_lag); ++lag) {
    double num = 0.0, ea = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      const long j = static_cast<long>(i) + lag;
      if (j < 0 || j >= static_cast<long>(cb.size())) continue;
      num += ca[i] * cb[static_cast<std::size_t>(j)];
      ea += ca[i] * ca[i];
      eb += cb[static_cast<std::size_t>(j)] * cb[static_cast<std::size_t>(j)];
    }
    if (ea > 0.0 && eb > 0.0) best = std::max(best, num / std::sqrt(ea * eb));
  }
  return best;
}

// The 21 functionals computed straight from their definitions.
struct Functionals21 {
  double pos_max, pos_min, mean, stddev, skewness, kurtosis;
  double slope, offset, err_q, err_a;
  double q1, q2, q3, iqr21, iqr32, iqr31;
  double p1, p99, range_p;
  double uplevel75, uplevel90;

  std::vector<double> as_vector() const {
    return {pos_max, pos_min, mean,  stddev, skewness, kurtosis, slope,
            offset,  err_q,   err_a, q1,     q2,       q3,       iqr21,
            iqr32,   iqr31,   p1,    p99,    range_p,  uplevel75, uplevel90};
  }
};

inline double percentile_linear(std::vector<double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  if (lo == hi) return sorted[lo];
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline Functionals21 brute_functionals(const std::vector<double>& v) {
  Functionals21 f{};
  const std::size_t n = v.size();
  const double dn = static_cast<double>(n);

  std::size_t imax = 0, imin = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] > v[imax]) imax = i;
    if (v[i] < v[imin]) imin = i;
  }
  f.pos_max = n > 1 ? static_cast<double>(imax) / (dn - 1.0) : 0.0;
  f.pos_min = n > 1 ? static_cast<double>(imin) / (dn - 1.0) : 0.0;

  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= dn;
  f.mean = mean;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    m2 += std::pow(x - mean, 2.0);
    m3 += std::pow(x - mean, 3.0);
    m4 += std::pow(x - mean, 4.0);
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  f.stddev = std::sqrt(m2);
  f.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  f.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

  if (n > 1) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sx += static_cast<double>(i);
      sy += v[i];
      sxx += static_cast<double>(i) * static_cast<double>(i);
      sxy += static_cast<double>(i) * v[i];
    }
    f.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    f.offset = (sy - f.slope * sx) / dn;
  } else {
    f.slope = 0.0;
    f.offset = v[0];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = v[i] - (f.slope * static_cast<double>(i) + f.offset);
    f.err_q += r * r;
    f.err_a += std::abs(r);
  }
  f.err_q /= dn;
  f.err_a /= dn;

  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end());
  f.q1 = percentile_linear(sorted, 0.25);
  f.q2 = percentile_linear(sorted, 0.50);
  f.q3 = percentile_linear(sorted, 0.75);
  f.iqr21 = f.q2 - f.q1;
  f.iqr32 = f.q3 - f.q2;
  f.iqr31 = f.q3 - f.q1;
  f.p1 = percentile_linear(sorted, 0.01);
  f.p99 = percentile_linear(sorted, 0.99);
  f.range_p = f.p99 - f.p1;

  const double range = sorted.back() - sorted.front();
  if (range > 0.0) {
    std::size_t c75 = 0, c90 = 0;
    for (double x : v) {
      if (x > sorted.front() + 0.75 * range) ++c75;
      if (x > sorted.front() + 0.90 * range) ++c90;
    }
    f.uplevel75 = static_cast<double>(c75) / dn;
    f.uplevel90 = static_cast<double>(c90) / dn;
  }
  return f;
}

// Projected-gradient ascent on the SVM dual with exact projection onto
// {0 <= a <= C, sum a_i y_i = 0}; slow but independent of the SMO path.
struct DualQp {
  std::vector<double> alpha;
  double objective = 0.0;
};

inline DualQp solve_dual_qp(const std::vector<std::vector<double>>& k, const std::vector<int>& y,
                            double c, int iterations = 400000) {
  const std::size_t n = y.size();
  std::vector<double> a(n, 0.0);

  auto project = [&](std::vector<double> v) {
    // find lambda so that sum_i y_i clip(v_i - lambda y_i) = 0 by bisection
    auto shifted_sum = [&](double lambda) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += y[i] * std::clamp(v[i] - lambda * y[i], 0.0, c);
      return s;
    };
    double lo = -1e6, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (shifted_sum(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i] - lambda * y[i], 0.0, c);
    return v;
  };

  double lipschitz = 0.0;
  for (std::size_t i = 0; i < n; ++i) lipschitz += k[i][i];
  const double step = 1.0 / std::max(lipschitz, 1e-12);

  for (int it = 0; it < iterations; ++it) {
    std::vector<double> grad(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) grad[i] -= y[i] * y[j] * a[j] * k[i][j];
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = a[i] + step * grad[i];
    next = project(std::move(next));
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] - a[i]));
    a = std::move(next);
    if (delta < 1e-14) break;
  }

  DualQp result;
  result.alpha = a;
  for (std::size_t i = 0; i < n; ++i) {
    result.objective += a[i];
    for (std::size_t j = 0; j < n; ++j)
      result.objective -= 0.5 * a[i] * a[j] * y[i] * y[j] * k[i][j];
  }
  return result;
}

inline double dual_objective(const std::vector<double>& alpha,
                             const std::vector<std::vector<double>>& k, const std::vector<int>& y) {
  double obj = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    obj += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j)
      obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
  }
  return obj;
}

}  // namespace oracle
