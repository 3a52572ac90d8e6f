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

#include <vector>

#include "glotkit/signal.hpp"

namespace glotkit {

/// Liljencrants-Fant glottal pulse parameters. tp, te, ta, tc are fractions
/// of the period t0; ee is the magnitude of the flow-derivative minimum at te.
/// Requires 0 < tp < te < tc <= 1, ta > 0, ta < 1 - te, ee > 0.
struct LfParams {
  double t0 = 0.0;  // period, seconds
  double ee = 1.0;
  double tp = 0.45;
  double te = 0.62;
  double ta = 0.015;
  double tc = 1.0;
};

/// Throws invalid_argument naming the violated inequality.
void validate(const LfParams& params);

/// One period of the glottal flow derivative, round(t0*fs) samples.
///
/// tp and te are snapped to the sample grid so the waveform minimum lands
/// exactly on a sample with value -ee. The opening phase is the growing
/// sinusoid -ee * exp(alpha (t-te)) * sin(pi t/tp) / sin(pi te/tp); the return
/// phase decays with the constant epsilon solved from ta; alpha is solved so
/// the discrete pulse sums to zero (the flow returns to baseline).
std::vector<double> lf_pulse(const LfParams& params, int fs);

/// Builds a stable all-pole vocal tract from resonance specs: one conjugate
/// pole pair per formant at radius exp(-pi*bw/fs), angle 2*pi*f/fs.
struct Formant {
  double freq_hz = 0.0;
  double bandwidth_hz = 0.0;
};
LpcModel make_vocal_tract(const std::vector<Formant>& formants, int fs);

/// excitation -> 1/A(z) -> peak normalization to 0.9.
Waveform synth_speech(const Waveform& glottal_derivative, const LpcModel& tract);

}  // namespace glotkit
