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
#include <numbers>
#include <vector>

#include "glotkit/error.hpp"
#include "glotkit/features.hpp"

namespace glotkit {

namespace {

// A symmetric even-degree-p polynomial evaluated on the unit circle reduces
// to the real cosine series 2 sum_{k<m} c[k] cos((m-k) w) + c[m], m = p/2.
double cos_series(const std::vector<double>& c, double omega) {
  const std::size_t m = c.size() - 1;
  double acc = c[m];
  for (std::size_t k = 0; k < m; ++k)
    acc += 2.0 * c[k] * std::cos(static_cast<double>(m - k) * omega);
  return acc;
}

// All roots of the cosine series in (0, pi): grid scan for sign changes,
// then bisection. Returns however many it finds.
std::vector<double> series_roots(const std::vector<double>& c, std::size_t expected, int grid) {
  std::vector<double> roots;
  double w_prev = 0.0;
  double f_prev = cos_series(c, w_prev);
  for (int i = 1; i <= grid && roots.size() < expected; ++i) {
    const double w = std::numbers::pi * static_cast<double>(i) / static_cast<double>(grid);
    const double f = cos_series(c, w);
    if (f_prev == 0.0) {
      roots.push_back(w_prev);
    } else if (f_prev * f < 0.0) {
      double lo = w_prev, hi = w, flo = f_prev;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = cos_series(c, mid);
        if (flo * fmid <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fmid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    w_prev = w;
    f_prev = f;
  }
  return roots;
}

std::vector<double> neutral_grid(std::size_t p) {
  std::vector<double> lsp(p);
  for (std::size_t i = 0; i < p; ++i)
    lsp[i] = std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(p + 1);
  return lsp;
}

}  // namespace

std::vector<double> lpc_to_lsp(const LpcModel& model) {
  const std::size_t p = model.order();
  if (p == 0) return {};
  if (p % 2 != 0) raise(ErrorCode::invalid_argument, "lsp conversion expects an even lpc order");

  std::vector<double> a(p + 2, 0.0);
  a[0] = 1.0;
  for (std::size_t i = 0; i < p; ++i) a[i + 1] = model.coeffs[i];

  // Sum and difference polynomials A(z) +- z^-(p+1) A(1/z); for even p the
  // sum carries a root at z = -1 and the difference at z = +1, divided out
  // before the unit-circle search.
  std::vector<double> psum(p + 2), qsum(p + 2);
  for (std::size_t i = 0; i <= p + 1; ++i) {
    psum[i] = a[i] + a[p + 1 - i];
    qsum[i] = a[i] - a[p + 1 - i];
  }
  std::vector<double> pd(p + 1), qd(p + 1);
  pd[0] = psum[0];
  for (std::size_t i = 1; i <= p; ++i) pd[i] = psum[i] - pd[i - 1];
  qd[0] = qsum[0];
  for (std::size_t i = 1; i <= p; ++i) qd[i] = qsum[i] + qd[i - 1];

  const std::size_t m = p / 2;
  // both deflated polynomials are symmetric: keep the first m+1 coefficients
  std::vector<double> pc(pd.begin(), pd.begin() + static_cast<std::ptrdiff_t>(m + 1));
  std::vector<double> qc(qd.begin(), qd.begin() + static_cast<std::ptrdiff_t>(m + 1));

  for (int grid = 1024; grid <= 16384; grid *= 4) {
    std::vector<double> rp = series_roots(pc, m, grid);
    std::vector<double> rq = series_roots(qc, m, grid);
    if (rp.size() == m && rq.size() == m) {
      std::vector<double> lsp;
      lsp.reserve(p);
      lsp.insert(lsp.end(), rp.begin(), rp.end());
      lsp.insert(lsp.end(), rq.begin(), rq.end());
      std::sort(lsp.begin(), lsp.end());
      return lsp;
    }
  }
  return neutral_grid(p);  // numerically degenerate input
}

}  // namespace glotkit
