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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "glotkit/corpus.hpp"
#include "glotkit/signal.hpp"

namespace glotkit {

inline constexpr std::size_t kNumLlds = 38;
inline constexpr std::size_t kNumContours = 2 * kNumLlds;  // LLDs plus deltas
inline constexpr std::size_t kNumFunctionals = 21;
inline constexpr std::size_t kFeatureDim = kNumContours * kNumFunctionals;  // 1596

/// Line spectral frequencies of A(z), strictly increasing in (0, pi).
/// Found on the unit circle via the Chebyshev-transformed symmetric and
/// antisymmetric polynomials (grid scan plus bisection).
std::vector<double> lpc_to_lsp(const LpcModel& model);

/// The 38 per-frame descriptor contours in canonical row order:
/// pcm_loudness, mfcc[0..14], log_mel_band[0..7], lsp_freq[0..7],
/// f0_shs, f0_env, voicing_prob, jitter_local, jitter_ddp, shimmer_local.
struct LldMatrix {
  std::vector<std::vector<double>> rows;  // kNumContours rows after add_deltas
  std::size_t n_frames = 0;
};

const std::array<std::string, kNumLlds>& lld_names();
const std::array<std::string, kNumFunctionals>& functional_names();

/// Canonical feature layout, kFeatureDim entries: "<lld>[_de]_<functional>".
const std::vector<std::string>& feature_layout();

/// Spectral rows on 25 ms / 10 ms Hamming frames; pitch-based rows on their
/// own 60 ms frames, resampled to the spectral frame grid. Degenerate frames
/// fall back to defined floor values, never NaN.
LldMatrix extract_llds(const Waveform& signal, int fs);

/// Per-frame least-squares slope over a centered window of +-window frames;
/// edges shrink to the available support.
std::vector<double> delta(const std::vector<double>& contour, std::size_t window);

/// The 21 functionals in canonical order: pos_max, pos_min, mean, stddev,
/// skewness, kurtosis, linreg_slope, linreg_offset, linreg_err_q,
/// linreg_err_a, quartile1/2/3, iqr2_1, iqr3_2, iqr3_1, percentile1,
/// percentile99, pctl_range_99_1, upleveltime75, upleveltime90.
/// Percentiles interpolate linearly between order statistics; zero-variance
/// contours give 0 for skewness/kurtosis and up-level times.
std::array<double, kNumFunctionals> functionals(const std::vector<double>& contour);

struct FeatureVector {
  std::vector<double> values;  // kFeatureDim, layout = feature_layout()
};

/// All functionals over all 76 contours of extract_llds + deltas.
FeatureVector extract_feature_vector(const Waveform& signal, int fs);

struct UtteranceMeta {
  std::string utterance_id;
  int speaker_id = 0;
  EmotionState state = EmotionState::neutral;
  std::string source;  // "speech" or "glottal"
};

struct FeatureMatrix {
  std::vector<std::string> layout;
  std::vector<UtteranceMeta> meta;
  std::vector<std::vector<double>> rows;
  bool normalized = false;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return layout.size(); }
};

/// Per-column min-max statistics fitted on training rows only.
struct NormStats {
  std::vector<double> mins;
  std::vector<double> maxs;
};

/// Min-max normalization to [0, 1]. Without `stats` the stats are fitted on
/// the matrix itself; with `stats` they are applied (values clipped to [0, 1]).
/// Constant columns map to 0.5.
struct NormalizeResult {
  FeatureMatrix matrix;
  NormStats stats;
};
NormalizeResult normalize_features(const FeatureMatrix& m,
                                   const std::optional<NormStats>& stats = std::nullopt);

/// CSV persistence: metadata columns first, then the canonical layout names.
void write_feature_csv(const std::string& path, const FeatureMatrix& m);
FeatureMatrix read_feature_csv(const std::string& path);

}  // namespace glotkit
