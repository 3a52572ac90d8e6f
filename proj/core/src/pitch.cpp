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

#include "glotkit/pitch.hpp"

#include <algorithm>
#include <cmath>

#include "glotkit/error.hpp"

namespace glotkit {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double interp_magnitude(const std::vector<double>& mag, double bin) {
  if (bin <= 0.0) return mag.front();
  const auto hi = static_cast<std::size_t>(std::ceil(bin));
  if (hi >= mag.size()) return 0.0;
  const std::size_t lo = hi - (hi > 0 ? 1 : 0);
  const double frac = bin - static_cast<double>(lo);
  return mag[lo] * (1.0 - frac) + mag[hi] * frac;
}

}  // namespace

FrameSpec pitch_frame_spec(int fs) {
  FrameSpec spec;
  spec.frame_len = static_cast<std::size_t>(std::llround(0.060 * fs));
  spec.hop = static_cast<std::size_t>(std::llround(0.010 * fs));
  spec.window = WindowType::hann;
  return spec;
}

PitchTrack estimate_pitch(const Waveform& signal, const FrameSpec& spec, double fmin_hz,
                          double fmax_hz, const PitchConfig& config) {
  validate(signal);
  if (!(fmin_hz > 0.0) || !(fmin_hz < fmax_hz) || fmax_hz >= signal.sample_rate / 2.0)
    raise(ErrorCode::invalid_argument, "pitch range requires 0 < fmin < fmax < fs/2");

  const double fs = signal.sample_rate;
  const std::vector<std::vector<double>> frames = frame_signal(signal, spec);
  const std::size_t n_fft = next_pow2(spec.frame_len) * 4;
  const double bin_hz = fs / static_cast<double>(n_fft);

  // Log-spaced candidate grid.
  const double step = std::pow(2.0, 1.0 / config.steps_per_octave);
  std::vector<double> candidates;
  for (double f = fmin_hz; f <= fmax_hz * (1.0 + 1e-12); f *= step) candidates.push_back(f);

  PitchTrack track;
  track.frame_len = spec.frame_len;
  track.hop = spec.hop;
  track.sample_rate = signal.sample_rate;
  track.threshold = config.voicing_threshold;
  track.frames.reserve(frames.size());

  for (const std::vector<double>& frame : frames) {
    double energy = 0.0;
    for (double v : frame) energy += v * v;
    PitchFrame out;
    if (energy <= 1e-24) {
      track.frames.push_back(out);
      continue;
    }

    const std::vector<double> mag = dft_magnitude(frame, n_fft);

    // Cube-root compression flattens formant dominance so the harmonic sum
    // reflects harmonicity rather than where the spectral energy sits.
    std::vector<double> cmag(mag.size());
    for (std::size_t k = 0; k < mag.size(); ++k) cmag[k] = std::cbrt(mag[k]);

    auto comb_score = [&](double f, double offset) {
      double s = 0.0;
      double w = 1.0;
      for (int h = 1; h <= config.max_harmonics; ++h) {
        const double fh = f * (static_cast<double>(h) + offset);
        if (fh >= fs / 2.0) break;
        s += w * interp_magnitude(cmag, fh / bin_hz);
        w *= config.compression;
      }
      return s;
    };

    std::vector<double> score(candidates.size(), 0.0);
    for (std::size_t c = 0; c < candidates.size(); ++c) score[c] = comb_score(candidates[c], 0.0);

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
      if (score[c] > score[best]) best = c;

    // Parabolic refinement over the log-frequency grid.
    double f0 = candidates[best];
    if (best > 0 && best + 1 < candidates.size()) {
      const double y0 = score[best - 1], y1 = score[best], y2 = score[best + 1];
      const double denom = y0 - 2.0 * y1 + y2;
      if (denom < 0.0) {
        const double delta = 0.5 * (y0 - y2) / denom;
        f0 = candidates[best] * std::pow(step, std::clamp(delta, -1.0, 1.0));
      }
    }

    // Voicing strength: contrast between the harmonic comb and the comb
    // shifted onto half-odd multiples. Harmonic frames put everything on the
    // comb; noise scores both alike. Scale cancels in the ratio.
    const double on_comb = score[best];
    const double off_comb = comb_score(candidates[best], 0.5);
    const double denom = on_comb + off_comb;
    const double prob = denom > 0.0 ? std::clamp((on_comb - off_comb) / denom, 0.0, 1.0) : 0.0;
    out.voicing_prob = prob;
    if (prob >= config.voicing_threshold) out.f0_hz = std::clamp(f0, fmin_hz, fmax_hz);
    track.frames.push_back(out);
  }
  return track;
}

std::vector<double> f0_envelope(const PitchTrack& track) {
  std::vector<double> env(track.size(), 0.0);
  double first_voiced = 0.0;
  for (const PitchFrame& f : track.frames) {
    if (f.voiced()) {
      first_voiced = f.f0_hz;
      break;
    }
  }
  double hold = first_voiced;
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (track.frames[i].voiced()) hold = track.frames[i].f0_hz;
    env[i] = hold;
  }
  return env;
}

namespace {

// Pitch marks: local peaks stepped from the frame's strongest sample at the
// expected period, each refined inside a +-T/4 search window.
std::vector<std::size_t> pitch_marks(std::span<const double> x, double period) {
  std::vector<std::size_t> marks;
  if (x.size() < 2 * static_cast<std::size_t>(period) || period < 2.0) return marks;

  std::size_t anchor = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] > x[anchor]) anchor = i;

  const auto refine = [&](double center) -> std::ptrdiff_t {
    const double half = period / 4.0;
    const auto lo = static_cast<std::ptrdiff_t>(std::max(0.0, std::floor(center - half)));
    const auto hi = static_cast<std::ptrdiff_t>(
        std::min(static_cast<double>(x.size()) - 1.0, std::ceil(center + half)));
    if (lo > hi) return -1;
    std::ptrdiff_t best = lo;
    for (std::ptrdiff_t i = lo + 1; i <= hi; ++i)
      if (x[static_cast<std::size_t>(i)] > x[static_cast<std::size_t>(best)]) best = i;
    return best;
  };

  marks.push_back(anchor);
  // walk left
  double center = static_cast<double>(anchor) - period;
  while (center >= period / 4.0) {
    const std::ptrdiff_t m = refine(center);
    if (m < 0) break;
    marks.push_back(static_cast<std::size_t>(m));
    center = static_cast<double>(m) - period;
  }
  std::reverse(marks.begin(), marks.end());
  // walk right
  center = static_cast<double>(anchor) + period;
  while (center <= static_cast<double>(x.size()) - 1.0 - period / 4.0) {
    const std::ptrdiff_t m = refine(center);
    if (m < 0) break;
    marks.push_back(static_cast<std::size_t>(m));
    center = static_cast<double>(m) + period;
  }
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  return marks;
}

}  // namespace

std::vector<CycleStats> jitter_shimmer(const Waveform& signal, const PitchTrack& track) {
  validate(signal);
  std::vector<CycleStats> stats(track.size());
  for (std::size_t fi = 0; fi < track.size(); ++fi) {
    const PitchFrame& pf = track.frames[fi];
    if (!pf.voiced()) continue;
    const std::size_t start = fi * track.hop;
    if (start + track.frame_len > signal.size()) break;
    std::span<const double> x(signal.samples.data() + start, track.frame_len);
    const double period = signal.sample_rate / pf.f0_hz;
    const std::vector<std::size_t> marks = pitch_marks(x, period);
    if (marks.size() < 3) continue;

    std::vector<double> periods(marks.size() - 1);
    for (std::size_t i = 0; i + 1 < marks.size(); ++i)
      periods[i] = static_cast<double>(marks[i + 1] - marks[i]);
    std::vector<double> amps(marks.size());
    for (std::size_t i = 0; i < marks.size(); ++i) amps[i] = std::abs(x[marks[i]]);

    double mean_t = 0.0;
    for (double t : periods) mean_t += t;
    mean_t /= static_cast<double>(periods.size());

    double dsum = 0.0;
    for (std::size_t i = 1; i < periods.size(); ++i) dsum += std::abs(periods[i] - periods[i - 1]);
    if (periods.size() > 1 && mean_t > 0.0)
      stats[fi].jitter_local = dsum / static_cast<double>(periods.size() - 1) / mean_t;

    if (periods.size() > 2 && mean_t > 0.0) {
      double ddsum = 0.0;
      for (std::size_t i = 2; i < periods.size(); ++i)
        ddsum += std::abs((periods[i] - periods[i - 1]) - (periods[i - 1] - periods[i - 2]));
      stats[fi].jitter_ddp = ddsum / static_cast<double>(periods.size() - 2) / mean_t;
    }

    double mean_a = 0.0;
    for (double a : amps) mean_a += a;
    mean_a /= static_cast<double>(amps.size());
    if (amps.size() > 1 && mean_a > 0.0) {
      double asum = 0.0;
      for (std::size_t i = 1; i < amps.size(); ++i) asum += std::abs(amps[i] - amps[i - 1]);
      stats[fi].shimmer_local = asum / static_cast<double>(amps.size() - 1) / mean_a;
    }
  }
  return stats;
}

}  // namespace glotkit
