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

#include "glotkit/iaif.hpp"

#include <algorithm>
#include <cmath>

#include "glotkit/error.hpp"

namespace glotkit {

std::size_t IaifConfig::t1_for(int fs) const {
  return t1 != 0 ? t1 : static_cast<std::size_t>(2 + std::llround(fs / 1000.0));
}

std::size_t IaifConfig::t2_for(int fs) const {
  return t2 != 0 ? t2 : static_cast<std::size_t>(2 + std::llround(fs / 1000.0));
}

FrameSpec IaifConfig::frame_spec(int fs) const {
  FrameSpec spec;
  spec.frame_len = static_cast<std::size_t>(std::llround(frame_len_ms * fs / 1000.0));
  spec.hop = static_cast<std::size_t>(std::llround(hop_ms * fs / 1000.0));
  spec.window = WindowType::rect;  // frames are filtered, not weighted
  return spec;
}

void validate(const IaifConfig& cfg) {
  if (!(cfg.alpha >= 0.96 && cfg.alpha < 1.0))
    raise(ErrorCode::invalid_argument, "iaif alpha must lie in [0.96, 1)");
  if (cfg.g2 < 1) raise(ErrorCode::invalid_argument, "iaif g2 order must be >= 1");
  if (!(cfg.rho > 0.0 && cfg.rho <= 1.0))
    raise(ErrorCode::invalid_argument, "iaif rho must lie in (0, 1]");
  if (!(cfg.frame_len_ms > 0.0) || !(cfg.hop_ms > 0.0) || cfg.hop_ms > cfg.frame_len_ms)
    raise(ErrorCode::invalid_argument, "iaif frame geometry requires frame_len >= hop > 0");
}

namespace {

std::vector<double> windowed(std::span<const double> x, const std::vector<double>& win) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] * win[i];
  return y;
}

// Zero-state filtering of a bare frame puts a spike of raw-signal size at
// the head (no prediction history) which the integrator then drags across
// the whole frame. A mirrored lead-in lets every filter and integrator
// settle on signal-like data before the real frame begins; the prefix is
// dropped afterwards.
struct PreambledFrame {
  Waveform extended;
  std::size_t prefix;
};

PreambledFrame with_preamble(std::span<const double> frame, int fs) {
  PreambledFrame p;
  p.prefix = frame.size() / 2;
  p.extended.sample_rate = fs;
  p.extended.samples.resize(p.prefix + frame.size());
  for (std::size_t i = 0; i < p.prefix; ++i) p.extended.samples[i] = frame[p.prefix - i];
  std::copy(frame.begin(), frame.end(), p.extended.samples.begin() + p.prefix);
  return p;
}

std::span<const double> tail(const Waveform& w, std::size_t prefix) {
  return {w.samples.data() + prefix, w.size() - prefix};
}

}  // namespace

IaifFrameResult iaif_frame(std::span<const double> speech_frame, int fs, const IaifConfig& cfg) {
  validate(cfg);
  double energy = 0.0;
  for (double v : speech_frame) energy += v * v;
  if (energy <= 0.0) raise(ErrorCode::degenerate_input, "iaif frame has zero energy");

  const std::vector<double> win = make_window(WindowType::hann, speech_frame.size());
  const PreambledFrame speech = with_preamble(speech_frame, fs);
  const std::size_t pre = speech.prefix;

  // Stage 1: cancel the combined glottal/lip-radiation tilt with the fixed
  // first-order filter (coefficient magnitude alpha; the polynomial carries
  // the LPC sign convention, a first-order fit of voiced speech lands at
  // a1 ~ -alpha), then fit the rough vocal tract and form a coarse glottal.
  LpcModel hg1;
  hg1.coeffs = {-cfg.alpha};
  const Waveform y0 = inverse_filter(speech.extended, hg1);
  const LpcModel hvt1 = lpc(windowed(tail(y0, pre), win), cfg.t1_for(fs));
  const Waveform g1 = leaky_integrate(inverse_filter(speech.extended, hvt1), cfg.rho);

  // Stage 2: glottal-contribution model from the coarse estimate, refit the
  // vocal tract on glottis-removed speech, final inverse filtering.
  const LpcModel hg2 = lpc(windowed(tail(g1, pre), win), cfg.g2);
  const Waveform y2 = leaky_integrate(inverse_filter(speech.extended, hg2), cfg.rho);
  const LpcModel hvt2 = lpc(windowed(tail(y2, pre), win), cfg.t2_for(fs));
  const Waveform g = leaky_integrate(inverse_filter(speech.extended, hvt2), cfg.rho);

  IaifFrameResult result;
  const std::span<const double> g_tail = tail(g, pre);
  result.glottal.assign(g_tail.begin(), g_tail.end());
  result.hvt2 = hvt2;
  result.hg2 = hg2;
  return result;
}

GlottalResult iaif_utterance(const Waveform& speech, const IaifConfig& cfg,
                             const std::vector<bool>& voicing) {
  validate(cfg);
  validate(speech);
  const FrameSpec spec = cfg.frame_spec(speech.sample_rate);
  if (speech.size() < spec.frame_len)
    raise(ErrorCode::degenerate_input, "signal shorter than one iaif frame");
  const std::size_t n_frames = (speech.size() - spec.frame_len) / spec.hop + 1;
  if (voicing.size() != n_frames)
    raise(ErrorCode::dimension_mismatch, "voicing mask length must equal the frame count");

  GlottalResult result;
  result.frame_len = spec.frame_len;
  result.hop = spec.hop;
  result.voicing_mask = voicing;
  result.per_frame.resize(n_frames);
  result.glottal.sample_rate = speech.sample_rate;
  result.glottal.samples.assign(speech.size(), 0.0);
  result.voiced_samples.assign(speech.size(), 0);

  const std::vector<double> win = make_window(WindowType::hann, spec.frame_len);
  std::vector<double> acc(speech.size(), 0.0);
  std::vector<double> wsum(speech.size(), 0.0);

  for (std::size_t f = 0; f < n_frames; ++f) {
    if (!voicing[f]) continue;
    const std::size_t start = f * spec.hop;
    std::span<const double> frame(speech.samples.data() + start, spec.frame_len);
    double energy = 0.0;
    for (double v : frame) energy += v * v;
    if (energy <= 0.0) continue;  // a silent frame has no glottal flow to estimate
    IaifFrameResult fr = iaif_frame(frame, speech.sample_rate, cfg);
    result.per_frame[f].hvt2 = std::move(fr.hvt2);
    result.per_frame[f].hg2 = std::move(fr.hg2);
    for (std::size_t i = 0; i < spec.frame_len; ++i) {
      acc[start + i] += fr.glottal[i] * win[i];
      wsum[start + i] += win[i];
      if (win[i] > 0.0) result.voiced_samples[start + i] = 1;
    }
  }

  for (std::size_t i = 0; i < speech.size(); ++i) {
    if (wsum[i] > 1e-8) result.glottal.samples[i] = acc[i] / wsum[i];
  }
  return result;
}

std::vector<bool> voicing_mask_for(const PitchTrack& track, std::size_t n_samples,
                                   const FrameSpec& frames) {
  if (n_samples < frames.frame_len)
    raise(ErrorCode::degenerate_input, "signal shorter than one frame");
  const std::size_t n_frames = (n_samples - frames.frame_len) / frames.hop + 1;
  std::vector<bool> mask(n_frames, false);
  if (track.size() == 0) return mask;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double center =
        static_cast<double>(f * frames.hop) + static_cast<double>(frames.frame_len) / 2.0;
    const double pitch_pos =
        (center - static_cast<double>(track.frame_len) / 2.0) / static_cast<double>(track.hop);
    const auto idx = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(pitch_pos), 0, static_cast<long long>(track.size()) - 1));
    mask[f] = track.frames[idx].voiced();
  }
  return mask;
}

namespace {

void require_voiced(const GlottalResult& g) {
  for (std::uint8_t v : g.voiced_samples)
    if (v) return;
  raise(ErrorCode::degenerate_input, "glottal result has no voiced samples");
}

}  // namespace

Waveform prep_for_analysis(const GlottalResult& g) {
  require_voiced(g);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < g.glottal.size(); ++i) {
    if (!g.voiced_samples[i]) continue;
    const double v = g.glottal.samples[i];
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) raise(ErrorCode::degenerate_input, "voiced glottal samples have zero span");

  Waveform out;
  out.sample_rate = g.glottal.sample_rate;
  out.samples.assign(g.glottal.size(), 0.0);
  const double scale = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < g.glottal.size(); ++i) {
    if (g.voiced_samples[i]) out.samples[i] = (g.glottal.samples[i] - lo) * scale;
  }
  return out;
}

Waveform prep_for_features(const GlottalResult& g) {
  require_voiced(g);
  double mean = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.glottal.size(); ++i) {
    if (g.voiced_samples[i]) {
      mean += g.glottal.samples[i];
      ++count;
    }
  }
  mean /= static_cast<double>(count);

  Waveform out;
  out.sample_rate = g.glottal.sample_rate;
  out.samples.assign(g.glottal.size(), 0.0);
  for (std::size_t i = 0; i < g.glottal.size(); ++i) {
    if (g.voiced_samples[i]) out.samples[i] = g.glottal.samples[i] - mean;
  }
  return out;
}

}  // namespace glotkit
