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

#include "glotkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "glotkit/error.hpp"
#include "glotkit/io.hpp"

namespace glotkit {

namespace {

struct VoicedRun {
  std::size_t first_frame = 0;
  std::size_t n_frames = 0;
};

// Longest run of consecutive voiced pitch frames.
VoicedRun longest_voiced_run(const PitchTrack& track) {
  VoicedRun best, cur;
  for (std::size_t i = 0; i < track.size(); ++i) {
    if (track.frames[i].voiced()) {
      if (cur.n_frames == 0) cur.first_frame = i;
      ++cur.n_frames;
      if (cur.n_frames > best.n_frames) best = cur;
    } else {
      cur.n_frames = 0;
    }
  }
  return best;
}

double sample_at(const std::vector<double>& x, double pos) {
  if (pos <= 0.0) return x.front();
  const double last = static_cast<double>(x.size()) - 1.0;
  if (pos >= last) return x.back();
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  return x[lo] * (1.0 - frac) + x[lo + 1] * frac;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

CycleOverlay extract_cycles(const Waveform& glottal, const PitchTrack& track,
                            std::size_t n_cycles, std::size_t n_points) {
  validate(glottal);
  if (n_cycles == 0 || n_points < 2)
    raise(ErrorCode::invalid_argument, "need n_cycles >= 1 and n_points >= 2");

  const VoicedRun run = longest_voiced_run(track);
  if (run.n_frames == 0) raise(ErrorCode::degenerate_input, "no voiced frames in pitch track");

  // Walk period boundaries from the start of the voiced run. The pitch frame
  // covering each boundary provides the period estimate; every new boundary
  // is then refined by aligning one cycle of the waveform against the
  // previous one, so boundary drift does not accumulate.
  std::vector<double> bounds;
  // anchor at the first voiced frame's center; the frame's edges may still
  // overlap unvoiced material
  double pos = static_cast<double>(run.first_frame * track.hop) +
               static_cast<double>(track.frame_len) / 2.0;
  const double run_end_sample = std::min<double>(
      static_cast<double>(glottal.size()),
      static_cast<double>((run.first_frame + run.n_frames - 1) * track.hop + track.frame_len));

  const auto align = [&](double prev, double next, double period) {
    // a full period on each side keeps the cycle's sharpest landmark inside
    // the correlation window regardless of the boundary phase
    const int w = std::max(8, static_cast<int>(std::llround(period)));
    const int search = std::max(2, static_cast<int>(std::llround(period / 8.0)));
    auto corr = [&](double delta) {
      double acc = 0.0;
      for (int i = -w; i <= w; ++i)
        acc += sample_at(glottal.samples, prev + i) * sample_at(glottal.samples, next + delta + i);
      return acc;
    };
    int best = 0;
    double best_val = corr(0.0);
    for (int d = -search; d <= search; ++d) {
      const double v = corr(d);
      if (v > best_val) {
        best_val = v;
        best = d;
      }
    }
    // parabolic refinement on the correlation peak
    const double y0 = corr(best - 1), y1 = best_val, y2 = corr(best + 1);
    const double denom = y0 - 2.0 * y1 + y2;
    double frac = 0.0;
    if (denom < 0.0) frac = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
    return next + static_cast<double>(best) + frac;
  };

  bounds.push_back(pos);
  while (bounds.size() <= n_cycles) {
    const auto frame_idx = static_cast<std::size_t>(std::clamp<double>(
        (pos - static_cast<double>(track.frame_len) / 2.0) / static_cast<double>(track.hop),
        static_cast<double>(run.first_frame),
        static_cast<double>(run.first_frame + run.n_frames - 1)));
    const PitchFrame& pf = track.frames[frame_idx];
    if (!pf.voiced()) break;
    const double period = glottal.sample_rate / pf.f0_hz;
    double next = align(pos, pos + period, period);
    if (next > run_end_sample || next <= pos) break;
    bounds.push_back(next);
    pos = next;
  }
  if (bounds.size() < n_cycles + 1)
    raise(ErrorCode::degenerate_input, "voiced span holds fewer consecutive cycles than requested");

  CycleOverlay overlay;
  overlay.n_cycles = n_cycles;
  overlay.n_points = n_points;
  overlay.resampled_cycles.assign(n_cycles, std::vector<double>(n_points, 0.0));

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t c = 0; c < n_cycles; ++c) {
    const double a = bounds[c];
    const double b = bounds[c + 1];
    for (std::size_t i = 0; i < n_points; ++i) {
      const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(n_points - 1);
      const double v = sample_at(glottal.samples, t);
      overlay.resampled_cycles[c][i] = v;
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }

  const double span = hi - lo;
  for (auto& row : overlay.resampled_cycles) {
    for (double& v : row) v = span > 0.0 ? (v - lo) / span : 0.0;
  }
  return overlay;
}

namespace {

struct PeakMeasure {
  double freq_hz = 0.0;
  double amp_db = 0.0;
  double bw_hz = 0.0;
};

// Local maximum nearest `target` within +-tol, with the -3 dB width around it.
PeakMeasure measure_peak(const std::vector<double>& mag, double bin_hz, double target_hz,
                         double tol_hz) {
  const auto lo = static_cast<std::size_t>(std::max(1.0, std::floor((target_hz - tol_hz) / bin_hz)));
  const auto hi = std::min(mag.size() - 2,
                           static_cast<std::size_t>(std::ceil((target_hz + tol_hz) / bin_hz)));
  std::size_t peak = lo;
  for (std::size_t k = lo; k <= hi; ++k)
    if (mag[k] > mag[peak]) peak = k;

  PeakMeasure m;
  m.freq_hz = static_cast<double>(peak) * bin_hz;
  const double peak_mag = std::max(mag[peak], 1e-300);
  m.amp_db = 20.0 * std::log10(peak_mag);

  const double half = peak_mag / std::sqrt(2.0);  // -3 dB
  double left = static_cast<double>(peak);
  for (std::size_t k = peak; k > 0; --k) {
    if (mag[k - 1] < half) {
      // linear interpolation of the crossing
      const double frac = (mag[k] - half) / std::max(mag[k] - mag[k - 1], 1e-300);
      left = static_cast<double>(k) - frac;
      break;
    }
    left = static_cast<double>(k - 1);
  }
  double right = static_cast<double>(peak);
  for (std::size_t k = peak; k + 1 < mag.size(); ++k) {
    if (mag[k + 1] < half) {
      const double frac = (mag[k] - half) / std::max(mag[k] - mag[k + 1], 1e-300);
      right = static_cast<double>(k) + frac;
      break;
    }
    right = static_cast<double>(k + 1);
  }
  m.bw_hz = std::max(right - left, 1e-9) * bin_hz;
  return m;
}

}  // namespace

SpectralMarkers spectral_markers(const Waveform& glottal, int fs, const PitchTrack& track) {
  validate(glottal);
  const VoicedRun run = longest_voiced_run(track);
  if (run.n_frames == 0) raise(ErrorCode::degenerate_input, "no voiced content");

  const std::size_t start = run.first_frame * track.hop;
  const std::size_t len = std::min(glottal.size() - start,
                                   (run.n_frames - 1) * track.hop + track.frame_len);
  if (len < 32) raise(ErrorCode::degenerate_input, "voiced region too short for spectral analysis");

  // Median tracked F0 over the run.
  std::vector<double> f0s;
  for (std::size_t i = run.first_frame; i < run.first_frame + run.n_frames; ++i)
    if (track.frames[i].voiced()) f0s.push_back(track.frames[i].f0_hz);
  std::sort(f0s.begin(), f0s.end());
  const double f0 = f0s[f0s.size() / 2];

  // Whole voiced region under one Hann window, zero-padded at least 8x for
  // bandwidth resolution.
  const std::vector<double> win = make_window(WindowType::hann, len);
  std::vector<double> seg(len);
  for (std::size_t i = 0; i < len; ++i) seg[i] = glottal.samples[start + i] * win[i];
  const std::size_t n_fft = next_pow2(len * 8);
  const std::vector<double> mag = dft_magnitude(seg, n_fft);
  const double bin_hz = static_cast<double>(fs) / static_cast<double>(n_fft);

  const double tol = 0.3 * f0;
  const PeakMeasure p1 = measure_peak(mag, bin_hz, f0, tol);
  const PeakMeasure p2 = measure_peak(mag, bin_hz, 2.0 * f0, tol);

  SpectralMarkers markers;
  markers.f0_hz = p1.freq_hz;
  markers.f0_amp_db = p1.amp_db;
  markers.f0_bw_hz = p1.bw_hz;
  markers.h2_amp_db = p2.amp_db;
  markers.h2_bw_hz = p2.bw_hz;
  return markers;
}

NormalizedSpectrum normalize_spectrum(const std::vector<double>& spectrum, double bin_hz,
                                      double f0_hz) {
  if (!(f0_hz > 0.0)) raise(ErrorCode::invalid_argument, "f0 must be positive");
  if (spectrum.empty()) raise(ErrorCode::invalid_argument, "spectrum is empty");
  const double peak = *std::max_element(spectrum.begin(), spectrum.end());
  if (!(peak > 0.0)) raise(ErrorCode::degenerate_input, "spectrum is identically zero");

  NormalizedSpectrum out;
  out.x.resize(spectrum.size());
  out.y.resize(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    out.x[k] = static_cast<double>(k) * bin_hz / f0_hz;
    out.y[k] = spectrum[k] / peak;
  }
  return out;
}

void write_overlay_csv(const std::string& path, const CycleOverlay& overlay) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::io_failure, "cannot open for writing: " + path);
  out << "cycle";
  for (std::size_t i = 0; i < overlay.n_points; ++i) out << ",p" << i;
  out << "\n";
  for (std::size_t c = 0; c < overlay.n_cycles; ++c) {
    out << c;
    for (double v : overlay.resampled_cycles[c]) out << "," << format_double(v);
    out << "\n";
  }
}

void write_markers_csv(const std::string& path,
                       const std::vector<std::pair<std::string, SpectralMarkers>>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::io_failure, "cannot open for writing: " + path);
  out << "utterance_id,f0_hz,f0_amp_db,f0_bw_hz,h2_amp_db,h2_bw_hz\n";
  for (const auto& [id, m] : rows) {
    out << id << "," << format_double(m.f0_hz) << "," << format_double(m.f0_amp_db) << ","
        << format_double(m.f0_bw_hz) << "," << format_double(m.h2_amp_db) << ","
        << format_double(m.h2_bw_hz) << "\n";
  }
}

}  // namespace glotkit
