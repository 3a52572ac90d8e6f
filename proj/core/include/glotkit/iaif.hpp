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

#include <cstdint>
#include <vector>

#include "glotkit/pitch.hpp"
#include "glotkit/signal.hpp"

namespace glotkit {

/// Two-stage iterative adaptive inverse filtering configuration.
///
/// Stage 1: a fixed first-order filter with coefficient magnitude alpha
/// cancels the combined glottal/lip-radiation spectral tilt (the filter a
/// first-order LPC of voiced speech converges to) before a rough vocal-tract
/// LPC of order t1 is fit; inverse filtering the speech through that and
/// integrating gives a coarse glottal estimate. Stage 2 fits a glottal model
/// of order g2 to the coarse estimate, removes it from the speech, refits
/// the vocal tract at order t2 and inverse filters once more; integrating
/// yields the glottal waveform.
struct IaifConfig {
  double alpha = 0.99;      // in [0.96, 1)
  std::size_t t1 = 0;       // 0 means 2 + round(fs/1000)
  std::size_t g2 = 4;
  std::size_t t2 = 0;       // 0 means 2 + round(fs/1000)
  double frame_len_ms = 32.0;
  double hop_ms = 16.0;
  double rho = 0.99;        // integrator leak

  std::size_t t1_for(int fs) const;
  std::size_t t2_for(int fs) const;
  FrameSpec frame_spec(int fs) const;
};

void validate(const IaifConfig& cfg);

struct IaifFrameResult {
  std::vector<double> glottal;  // estimated glottal flow, frame-length samples
  LpcModel hvt2;                // refined vocal tract
  LpcModel hg2;                 // glottal contribution model
};

/// Runs the full two-stage pipeline on one speech frame. The three LPC fits
/// see Hann-windowed copies; all filtering runs over the unwindowed frame
/// with zero initial state.
IaifFrameResult iaif_frame(std::span<const double> speech_frame, int fs, const IaifConfig& cfg);

struct FrameModels {
  LpcModel hvt2;
  LpcModel hg2;
};

/// Per-utterance result. Voiced frames are overlap-added with a Hann synthesis
/// window normalized by the accumulated voiced window sum; samples covered by
/// no voiced frame are exactly zero.
struct GlottalResult {
  Waveform glottal;
  std::vector<bool> voicing_mask;          // per analysis frame
  std::vector<FrameModels> per_frame;      // identity models on unvoiced frames
  std::vector<std::uint8_t> voiced_samples;  // 1 where a voiced frame contributed
  std::size_t frame_len = 0;
  std::size_t hop = 0;
};

/// Applies iaif_frame to every voiced frame and overlap-adds the results.
/// The mask length must equal the frame count for this signal and config.
/// A voiced-marked frame with zero energy contributes nothing (there is no
/// flow to estimate in silence).
GlottalResult iaif_utterance(const Waveform& speech, const IaifConfig& cfg,
                             const std::vector<bool>& voicing);

/// Maps a pitch track onto the IAIF frame grid: a frame is voiced when the
/// pitch frame nearest its center is voiced.
std::vector<bool> voicing_mask_for(const PitchTrack& track, std::size_t n_samples,
                                   const FrameSpec& frames);

/// Affine rescale of the voiced samples to span [0, 1]; unvoiced samples stay 0.
Waveform prep_for_analysis(const GlottalResult& g);

/// Subtracts the voiced-region mean from voiced samples; unvoiced samples stay 0.
Waveform prep_for_features(const GlottalResult& g);

}  // namespace glotkit
