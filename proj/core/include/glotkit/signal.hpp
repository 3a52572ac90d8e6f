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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glotkit {

/// Mono audio buffer. All DSP entry points take and return this type;
/// samples must be finite and sample_rate positive.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

/// Throws if the waveform breaks its invariants (non-positive rate, NaN/Inf).
void validate(const Waveform& w);

/// All-pole model A(z) = 1 + sum_k coeffs[k-1] z^-k. The synthesis filter is
/// 1/A(z); `gain` is the RMS scale of the residual that excites it.
struct LpcModel {
  std::vector<double> coeffs;
  double gain = 0.0;

  std::size_t order() const { return coeffs.size(); }
};

enum class WindowType { rect, hann, hamming };

struct FrameSpec {
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  WindowType window = WindowType::rect;
};

/// Window sample values for a frame of length n. hann is the periodic
/// variant so 50%-overlapped frames sum to a constant.
std::vector<double> make_window(WindowType type, std::size_t n);

/// Slices `signal` into windowed frames. Frame count is
/// floor((len - frame_len)/hop) + 1; a signal shorter than one frame is an error.
std::vector<std::vector<double>> frame_signal(const Waveform& signal, const FrameSpec& spec);

/// r(k) = sum_n x(n) x(n+k) for k = 0..max_lag. Requires max_lag < frame size.
std::vector<double> autocorrelation(std::span<const double> frame, std::size_t max_lag);

/// Autocorrelation-method LPC solved with Levinson-Durbin. The returned
/// synthesis filter is minimum-phase whenever the autocorrelation sequence is
/// positive definite. Zero-energy or non-finite frames are rejected.
LpcModel lpc(std::span<const double> frame, std::size_t order);

/// FIR analysis filtering: y(n) = x(n) + sum_k coeffs[k-1] x(n-k), zero initial state.
Waveform inverse_filter(const Waveform& signal, const LpcModel& model);

/// IIR synthesis filtering: y(n) = x(n) - sum_k coeffs[k-1] y(n-k), zero initial
/// state. The model must be strictly minimum-phase or the call throws.
Waveform all_pole_filter(const Waveform& excitation, const LpcModel& model);

/// True when every reflection coefficient of the model has magnitude < 1.
bool is_minimum_phase(const LpcModel& model);

/// y(n) = rho * y(n-1) + x(n), rho in (0, 1].
Waveform leaky_integrate(const Waveform& signal, double rho);

/// Magnitude of the zero-padded DFT, bins 0..n_fft/2. n_fft must be a power of
/// two and at least the frame length. Bin k sits at k*fs/n_fft.
std::vector<double> dft_magnitude(std::span<const double> frame, std::size_t n_fft);

}  // namespace glotkit
