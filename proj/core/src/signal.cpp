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

#include "glotkit/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "glotkit/error.hpp"

namespace glotkit {

void validate(const Waveform& w) {
  if (w.sample_rate <= 0)
    raise(ErrorCode::invalid_argument, "waveform sample_rate must be positive");
  for (double s : w.samples) {
    if (!std::isfinite(s)) raise(ErrorCode::invalid_argument, "waveform contains NaN or Inf");
  }
}

std::vector<double> make_window(WindowType type, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n == 0) return w;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (type) {
    case WindowType::rect:
      break;
    case WindowType::hann:
      for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n));
      break;
    case WindowType::hamming:
      if (n == 1) break;
      for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.54 - 0.46 * std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n - 1));
      break;
  }
  return w;
}

std::vector<std::vector<double>> frame_signal(const Waveform& signal, const FrameSpec& spec) {
  if (spec.frame_len == 0 || spec.hop == 0 || spec.frame_len < spec.hop)
    raise(ErrorCode::invalid_argument, "frame spec requires frame_len >= hop >= 1");
  if (signal.size() < spec.frame_len)
    raise(ErrorCode::degenerate_input, "signal shorter than one frame");

  const std::size_t n_frames = (signal.size() - spec.frame_len) / spec.hop + 1;
  const std::vector<double> win = make_window(spec.window, spec.frame_len);

  std::vector<std::vector<double>> frames(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    frames[f].resize(spec.frame_len);
    const double* src = signal.samples.data() + f * spec.hop;
    for (std::size_t i = 0; i < spec.frame_len; ++i) frames[f][i] = src[i] * win[i];
  }
  return frames;
}

std::vector<double> autocorrelation(std::span<const double> frame, std::size_t max_lag) {
  if (max_lag >= frame.size())
    raise(ErrorCode::invalid_argument, "autocorrelation max_lag must be < frame length");
  std::vector<double> r(max_lag + 1, 0.0);
  for (std::size_t k = 0; k <= max_lag; ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n + k < frame.size(); ++n) acc += frame[n] * frame[n + k];
    r[k] = acc;
  }
  return r;
}

LpcModel lpc(std::span<const double> frame, std::size_t order) {
  if (order < 1) raise(ErrorCode::invalid_argument, "lpc order must be >= 1");
  if (order >= frame.size()) raise(ErrorCode::invalid_argument, "lpc order must be < frame length");
  for (double v : frame) {
    if (!std::isfinite(v)) raise(ErrorCode::invalid_argument, "lpc frame contains NaN or Inf");
  }

  const std::vector<double> r = autocorrelation(frame, order);
  if (r[0] <= 0.0) raise(ErrorCode::degenerate_input, "lpc frame has zero energy");

  // Levinson-Durbin on the normal equations R a = -r.
  std::vector<double> a(order, 0.0);
  std::vector<double> prev(order, 0.0);
  double err = r[0];
  for (std::size_t m = 0; m < order; ++m) {
    double acc = r[m + 1];
    for (std::size_t i = 0; i < m; ++i) acc += a[i] * r[m - i];
    const double k = -acc / err;
    prev = a;
    a[m] = k;
    for (std::size_t i = 0; i < m; ++i) a[i] = prev[i] + k * prev[m - 1 - i];
    err *= (1.0 - k * k);
    if (err <= 0.0) err = 1e-300;  // autocorrelation not strictly positive definite
  }

  LpcModel model;
  model.coeffs = std::move(a);
  model.gain = std::sqrt(std::max(err, 0.0) / static_cast<double>(frame.size()));
  return model;
}

Waveform inverse_filter(const Waveform& signal, const LpcModel& model) {
  validate(signal);
  const std::size_t p = model.order();
  Waveform out;
  out.sample_rate = signal.sample_rate;
  out.samples.resize(signal.size());
  for (std::size_t n = 0; n < signal.size(); ++n) {
    double y = signal.samples[n];
    const std::size_t kmax = std::min(p, n);
    for (std::size_t k = 1; k <= kmax; ++k) y += model.coeffs[k - 1] * signal.samples[n - k];
    out.samples[n] = y;
  }
  return out;
}

bool is_minimum_phase(const LpcModel& model) {
  // Backward Levinson recursion: stable iff every reflection coefficient
  // has magnitude strictly below 1.
  std::vector<double> a = model.coeffs;
  for (std::size_t m = a.size(); m > 0; --m) {
    const double k = a[m - 1];
    if (!std::isfinite(k) || std::abs(k) >= 1.0) return false;
    const double denom = 1.0 - k * k;
    std::vector<double> b(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) b[i] = (a[i] - k * a[m - 2 - i]) / denom;
    a = std::move(b);
  }
  return true;
}

Waveform all_pole_filter(const Waveform& excitation, const LpcModel& model) {
  validate(excitation);
  if (!is_minimum_phase(model))
    raise(ErrorCode::unstable_model, "all-pole synthesis filter is not minimum-phase");
  const std::size_t p = model.order();
  Waveform out;
  out.sample_rate = excitation.sample_rate;
  out.samples.resize(excitation.size());
  for (std::size_t n = 0; n < excitation.size(); ++n) {
    double y = excitation.samples[n];
    const std::size_t kmax = std::min(p, n);
    for (std::size_t k = 1; k <= kmax; ++k) y -= model.coeffs[k - 1] * out.samples[n - k];
    out.samples[n] = y;
  }
  return out;
}

Waveform leaky_integrate(const Waveform& signal, double rho) {
  validate(signal);
  if (!(rho > 0.0 && rho <= 1.0))
    raise(ErrorCode::invalid_argument, "integrator leak rho must lie in (0, 1]");
  Waveform out;
  out.sample_rate = signal.sample_rate;
  out.samples.resize(signal.size());
  double y = 0.0;
  for (std::size_t n = 0; n < signal.size(); ++n) {
    y = rho * y + signal.samples[n];
    out.samples[n] = y;
  }
  return out;
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place.
void fft_inplace(std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = x[i + k];
        const std::complex<double> v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace

std::vector<double> dft_magnitude(std::span<const double> frame, std::size_t n_fft) {
  if (n_fft < frame.size())
    raise(ErrorCode::invalid_argument, "n_fft must be >= frame length");
  if (!is_power_of_two(n_fft))
    raise(ErrorCode::invalid_argument, "n_fft must be a power of two");

  std::vector<std::complex<double>> buf(n_fft, {0.0, 0.0});
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = {frame[i], 0.0};
  fft_inplace(buf);

  std::vector<double> mag(n_fft / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
  return mag;
}

}  // namespace glotkit
