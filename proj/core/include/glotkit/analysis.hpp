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

#include <string>
#include <utility>
#include <vector>

#include "glotkit/pitch.hpp"
#include "glotkit/signal.hpp"

namespace glotkit {

/// Consecutive glottal cycles, each linearly resampled onto n_points and
/// jointly min-max normalized to [0, 1] for overlay comparison.
struct CycleOverlay {
  std::size_t n_cycles = 0;
  std::size_t n_points = 0;
  std::vector<std::vector<double>> resampled_cycles;  // n_cycles rows
};

CycleOverlay extract_cycles(const Waveform& glottal, const PitchTrack& track,
                            std::size_t n_cycles, std::size_t n_points);

/// Spectral landmarks of the voiced region: fundamental peak level and its
/// -3 dB width, and the same pair measured around the second harmonic.
struct SpectralMarkers {
  double f0_hz = 0.0;
  double f0_amp_db = 0.0;
  double f0_bw_hz = 0.0;
  double h2_amp_db = 0.0;
  double h2_bw_hz = 0.0;
};

SpectralMarkers spectral_markers(const Waveform& glottal, int fs, const PitchTrack& track);

/// Frequency axis divided by f0, amplitudes divided by the maximum.
struct NormalizedSpectrum {
  std::vector<double> x;  // frequency in F0 units
  std::vector<double> y;  // amplitude, max 1
};

NormalizedSpectrum normalize_spectrum(const std::vector<double>& spectrum, double bin_hz,
                                      double f0_hz);

void write_overlay_csv(const std::string& path, const CycleOverlay& overlay);
void write_markers_csv(const std::string& path,
                       const std::vector<std::pair<std::string, SpectralMarkers>>& rows);

}  // namespace glotkit
