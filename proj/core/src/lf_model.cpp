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

#include "glotkit/lf_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "glotkit/error.hpp"

namespace glotkit {

namespace {

constexpr double kPi = std::numbers::pi;

// Newton iteration with bisection fallback on a bracketing interval.
template <typename F, typename DF>
double solve_root(F f, DF df, double x0, double lo, double hi) {
  double x = x0;
  for (int it = 0; it < 80; ++it) {
    const double fx = f(x);
    if (std::abs(fx) < 1e-13) return x;
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : lo;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    // keep the bracket valid
    if (f(lo) * f(next) <= 0.0)
      hi = next;
    else
      lo = next;
    x = next;
    if (hi - lo < 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return 0.5 * (lo + hi);
}

struct LfShape {
  double te, tp, ta, tc;  // fractions of the period
  double epsilon;         // return-phase decay rate (per unit period)
  double alpha;           // opening-phase growth rate (per unit period)
  double ee;

  // Flow derivative at normalized time t in [0, 1).
  double eval(double t) const {
    if (t <= te) {
      const double wg = kPi / tp;
      return -ee * std::exp(alpha * (t - te)) * std::sin(wg * t) / std::sin(wg * te);
    }
    if (t <= tc) {
      return -ee / (epsilon * ta) *
             (std::exp(-epsilon * (t - te)) - std::exp(-epsilon * (tc - te)));
    }
    return 0.0;
  }
};

// epsilon solves epsilon*ta = 1 - exp(-epsilon*(tc-te)), which makes the
// return phase continuous with value -ee at te.
double solve_epsilon(double ta, double te, double tc) {
  const double d = tc - te;
  auto f = [&](double e) { return 1.0 - std::exp(-e * d) - e * ta; };
  auto df = [&](double e) { return d * std::exp(-e * d) - ta; };
  // root lies in (0, 1/ta); the function is positive just above 0 when ta < d
  double hi = 1.0 / ta;
  double lo = 1e-9;
  if (f(hi) > 0.0) hi = 2.0 / ta;
  return solve_root(f, df, 1.0 / (ta + 1e-13), lo, hi);
}

// alpha solves the continuous area balance: the integral of the derivative
// over one period is zero.
double solve_alpha(const LfShape& s) {
  const double wg = kPi / s.tp;
  const double ste = std::sin(wg * s.te);
  const double d = s.tc - s.te;
  const double ret_area =
      (1.0 - std::exp(-s.epsilon * d)) / (s.epsilon * s.epsilon * s.ta) -
      d * std::exp(-s.epsilon * d) / (s.epsilon * s.ta);
  auto f = [&](double a) {
    return (a * a + wg * wg) * ste * ret_area + wg * std::exp(-a * s.te) + a * ste -
           wg * std::cos(wg * s.te);
  };
  auto df = [&](double a) {
    return (2.0 * ret_area * a + 1.0) * ste - wg * s.te * std::exp(-a * s.te);
  };
  // Bracket by scanning; the balance function is monotone-ish but the safe
  // bracket keeps Newton from escaping on extreme shapes.
  double lo = -200.0, hi = 400.0;
  double prev = f(lo), plo = lo;
  for (double x = lo + 2.0; x <= hi; x += 2.0) {
    const double fx = f(x);
    if (prev * fx <= 0.0) {
      lo = plo;
      hi = x;
      break;
    }
    prev = fx;
    plo = x;
  }
  return solve_root(f, df, std::clamp(4.42, lo, hi), lo, hi);
}

}  // namespace

void validate(const LfParams& p) {
  if (!(p.t0 > 0.0)) raise(ErrorCode::invalid_argument, "LF params violate t0 > 0");
  if (!(p.ee > 0.0)) raise(ErrorCode::invalid_argument, "LF params violate ee > 0");
  if (!(p.tp > 0.0)) raise(ErrorCode::invalid_argument, "LF params violate tp > 0");
  if (!(p.tp < p.te)) raise(ErrorCode::invalid_argument, "LF params violate tp < te");
  if (!(p.te < p.tc)) raise(ErrorCode::invalid_argument, "LF params violate te < tc");
  if (!(p.tc <= 1.0)) raise(ErrorCode::invalid_argument, "LF params violate tc <= 1");
  if (!(p.ta > 0.0)) raise(ErrorCode::invalid_argument, "LF params violate ta > 0");
  if (!(p.ta < 1.0 - p.te)) raise(ErrorCode::invalid_argument, "LF params violate ta < 1 - te");
}

std::vector<double> lf_pulse(const LfParams& params, int fs) {
  validate(params);
  if (fs <= 0) raise(ErrorCode::invalid_argument, "LF params violate fs > 0");
  const double n_real = params.t0 * fs;
  if (n_real < 16.0) raise(ErrorCode::invalid_argument, "LF params violate t0*fs >= 16");
  const std::size_t n = static_cast<std::size_t>(std::llround(n_real));

  // Snap tp and te to the sample grid so the discrete minimum is exactly -ee
  // at round(te*t0*fs).
  const double step = 1.0 / static_cast<double>(n);
  LfShape s;
  s.tp = std::max(1.0, std::round(params.tp * n)) * step;
  s.te = std::round(params.te * n) * step;
  s.tc = params.tc;
  s.ta = params.ta;
  s.ee = params.ee;
  if (!(s.tp < s.te)) raise(ErrorCode::invalid_argument, "LF params violate tp < te on the sample grid");
  if (!(s.te < s.tc)) raise(ErrorCode::invalid_argument, "LF params violate te < tc on the sample grid");
  if (!(s.ta < s.tc - s.te)) raise(ErrorCode::invalid_argument, "LF params violate ta < tc - te on the sample grid");

  s.epsilon = solve_epsilon(s.ta, s.te, s.tc);
  s.alpha = solve_alpha(s);

  auto discrete_area = [&](double alpha) {
    LfShape trial = s;
    trial.alpha = alpha;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += trial.eval(static_cast<double>(i) * step);
    return acc;
  };

  // The continuous balance leaves an O(1/n^2) discretization residue; a few
  // secant steps on the sampled sum push it to round-off so repeated pulses
  // cannot accumulate drift.
  double a0 = s.alpha;
  double a1 = s.alpha + 1e-3;
  double f0 = discrete_area(a0);
  double f1 = discrete_area(a1);
  for (int it = 0; it < 40 && std::abs(f1) > 1e-14 * n; ++it) {
    if (f1 == f0) break;
    const double a2 = a1 - f1 * (a1 - a0) / (f1 - f0);
    a0 = a1;
    f0 = f1;
    a1 = a2;
    f1 = discrete_area(a1);
  }
  s.alpha = (std::abs(f1) <= std::abs(f0)) ? a1 : a0;

  std::vector<double> pulse(n);
  for (std::size_t i = 0; i < n; ++i) pulse[i] = s.eval(static_cast<double>(i) * step);
  return pulse;
}

LpcModel make_vocal_tract(const std::vector<Formant>& formants, int fs) {
  if (fs <= 0) raise(ErrorCode::invalid_argument, "sample rate must be positive");
  LpcModel model;
  model.coeffs = {};
  model.gain = 1.0;
  std::vector<double> a = {1.0};
  for (const Formant& f : formants) {
    if (!(f.freq_hz > 0.0) || f.freq_hz >= fs / 2.0)
      raise(ErrorCode::invalid_argument, "formant frequency must lie below Nyquist");
    if (!(f.bandwidth_hz > 0.0))
      raise(ErrorCode::invalid_argument, "formant bandwidth must be positive");
    const double r = std::exp(-kPi * f.bandwidth_hz / fs);
    const double theta = 2.0 * kPi * f.freq_hz / fs;
    // multiply by (1 - 2 r cos(theta) z^-1 + r^2 z^-2)
    const double c1 = -2.0 * r * std::cos(theta);
    const double c2 = r * r;
    std::vector<double> next(a.size() + 2, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      next[i] += a[i];
      next[i + 1] += c1 * a[i];
      next[i + 2] += c2 * a[i];
    }
    a = std::move(next);
  }
  model.coeffs.assign(a.begin() + 1, a.end());
  return model;
}

Waveform synth_speech(const Waveform& glottal_derivative, const LpcModel& tract) {
  Waveform out = all_pole_filter(glottal_derivative, tract);
  double peak = 0.0;
  for (double v : out.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double scale = 0.9 / peak;
    for (double& v : out.samples) v *= scale;
  }
  return out;
}

}  // namespace glotkit
