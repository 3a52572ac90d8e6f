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
#include <cstdint>
#include <string>
#include <vector>

#include "glotkit/lf_model.hpp"
#include "glotkit/signal.hpp"

namespace glotkit {

/// The seven emotional states: moderate and intense versions of joy, anger
/// and sadness, plus neutral. Enum order is the canonical ordering used for
/// pair enumeration and report layout.
enum class EmotionState {
  neutral,
  moderate_joy,
  intense_joy,
  moderate_anger,
  intense_anger,
  moderate_sadness,
  intense_sadness,
};

inline constexpr std::array<EmotionState, 7> kAllStates = {
    EmotionState::neutral,          EmotionState::moderate_joy,
    EmotionState::intense_joy,      EmotionState::moderate_anger,
    EmotionState::intense_anger,    EmotionState::moderate_sadness,
    EmotionState::intense_sadness,
};

/// Short display code: N, M-J, I-J, M-A, I-A, M-S, I-S.
std::string to_code(EmotionState s);
EmotionState state_from_code(const std::string& code);

/// Ordinal position on the activation axis, 1 (lowest) .. 7 (highest).
/// The two intense high-activation states hold the top two ranks.
int arousal_rank(EmotionState s);

/// Ordinal position on the pleasantness axis, 1 (most negative) .. 7.
/// Intense anger holds rank 1.
int valence_rank(EmotionState s);

/// Per-state synthesis recipe: mean F0 and contour span, LF shape means with
/// a relative per-utterance spread, and cycle-level jitter/shimmer fractions.
struct EmotionPreset {
  EmotionState state = EmotionState::neutral;
  double f0_mean_hz = 170.0;
  double f0_span_hz = 10.0;
  LfParams lf;               // t0 is ignored; per-cycle periods come from F0
  double lf_spread = 0.03;   // relative sigma applied to tp/te/ta per utterance
  double jitter = 0.0;       // relative sigma of per-cycle period perturbation
  double shimmer = 0.0;      // relative sigma of per-cycle amplitude perturbation
};

/// The shipped preset table. F0 means follow the qualitative ordering
/// joy > neutral, intense joy highest, moderate anger and moderate sadness
/// below neutral, intense sadness above; LF shapes differ per state. The
/// numeric values are implementation constants.
EmotionPreset preset_for(EmotionState s);

/// Glottal flow-derivative pulse train: per-cycle F0 follows a smooth random
/// contour around the preset mean with jitter and shimmer applied.
/// Deterministic under a fixed seed. Leading and trailing 80 ms are silent.
Waveform lf_train(const EmotionPreset& preset, double duration_s, int fs, std::uint64_t rng_seed);

struct CorpusEntry {
  std::string utterance_id;
  int speaker_id = 0;
  EmotionState state = EmotionState::neutral;
  std::string file_path;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
};

struct CorpusManifest {
  std::vector<CorpusEntry> entries;
};

struct CorpusConfig {
  int n_speakers = 2;
  int n_per_state_per_speaker = 1;
  int fs = 16000;
  double duration_s = 1.0;
  std::uint64_t seed = 1;
  std::string out_dir;
};

/// Speaker identity used by the corpus generator: a perturbed four-formant
/// vocal tract plus a global F0 scale, both deterministic in the speaker id.
struct SpeakerProfile {
  std::vector<Formant> formants;
  double f0_scale = 1.0;
};
SpeakerProfile speaker_profile(int speaker_id, std::uint64_t corpus_seed, int fs);

/// Writes one WAV per (speaker, state, index) plus a JSON-lines manifest.
/// Re-running with the same config reproduces every byte.
CorpusManifest generate_corpus(const CorpusConfig& config);

/// JSON-lines manifest, one entry per line.
void write_manifest(const std::string& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(const std::string& path);

}  // namespace glotkit
