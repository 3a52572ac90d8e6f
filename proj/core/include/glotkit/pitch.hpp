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
#include <vector>

#include "glotkit/signal.hpp"

namespace glotkit {

struct PitchFrame {
  double f0_hz = 0.0;         // 0 marks unvoiced
  double voicing_prob = 0.0;  // normalized subharmonic-summation peak strength
  bool voiced() const { return f0_hz > 0.0; }
};

struct PitchTrack {
  std::vector<PitchFrame> frames;
  std::size_t frame_len = 0;  // analysis geometry, for mapping frames to samples
  std::size_t hop = 0;
  int sample_rate = 0;
  double threshold = 0.0;

  std::size_t size() const { return frames.size(); }
};

struct PitchConfig {
  double fmin_hz = 70.0;
  double fmax_hz = 400.0;
  double voicing_threshold = 0.45;
  int steps_per_octave = 96;  // candidate grid resolution
  int max_harmonics = 15;
  double compression = 0.84;  // per-harmonic weight decay
};

/// Default pitch analysis geometry: 60 ms Hann frames, 10 ms hop. Longer than
/// the LPC frames so one frame holds several cycles of a low F0.
FrameSpec pitch_frame_spec(int fs);

/// Subharmonic-summation F0 tracker. Per frame, candidate F0s on a log grid
/// are scored by summing compressed spectral magnitude at harmonic multiples;
/// the score normalized by total band magnitude gives the voicing probability
/// (scale-invariant), thresholded into the voiced/unvoiced decision.
PitchTrack estimate_pitch(const Waveform& signal, const FrameSpec& spec, double fmin_hz,
                          double fmax_hz, const PitchConfig& config = {});

/// F0 contour with unvoiced gaps filled by holding the last voiced value;
/// a leading gap is backfilled from the first voiced frame. All-unvoiced
/// tracks yield all zeros.
std::vector<double> f0_envelope(const PitchTrack& track);

struct CycleStats {
  double jitter_local = 0.0;    // mean |dT| / mean T over the frame's cycles
  double jitter_ddp = 0.0;      // mean |d2T| / mean T
  double shimmer_local = 0.0;   // mean |dA| / mean A over cycle peak amplitudes
};

/// Cycle-level period/amplitude perturbation per frame, measured on pitch
/// marks found near the expected period spacing. Unvoiced frames are all zero.
std::vector<CycleStats> jitter_shimmer(const Waveform& signal, const PitchTrack& track);

}  // namespace glotkit
