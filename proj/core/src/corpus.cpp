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

#include "glotkit/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "glotkit/error.hpp"
#include "glotkit/rng.hpp"
#include "glotkit/wav.hpp"

namespace glotkit {

std::string to_code(EmotionState s) {
  switch (s) {
    case EmotionState::neutral: return "N";
    case EmotionState::moderate_joy: return "M-J";
    case EmotionState::intense_joy: return "I-J";
    case EmotionState::moderate_anger: return "M-A";
    case EmotionState::intense_anger: return "I-A";
    case EmotionState::moderate_sadness: return "M-S";
    case EmotionState::intense_sadness: return "I-S";
  }
  return "?";
}

EmotionState state_from_code(const std::string& code) {
  for (EmotionState s : kAllStates) {
    if (to_code(s) == code) return s;
  }
  raise(ErrorCode::invalid_argument, "unknown emotion state code: " + code);
}

int arousal_rank(EmotionState s) {
  switch (s) {
    case EmotionState::moderate_sadness: return 1;
    case EmotionState::moderate_anger: return 2;
    case EmotionState::neutral: return 3;
    case EmotionState::intense_sadness: return 4;
    case EmotionState::moderate_joy: return 5;
    case EmotionState::intense_joy: return 6;
    case EmotionState::intense_anger: return 7;
  }
  return 0;
}

int valence_rank(EmotionState s) {
  switch (s) {
    case EmotionState::intense_anger: return 1;
    case EmotionState::moderate_anger: return 2;
    case EmotionState::intense_sadness: return 3;
    case EmotionState::moderate_sadness: return 4;
    case EmotionState::neutral: return 5;
    case EmotionState::moderate_joy: return 6;
    case EmotionState::intense_joy: return 7;
  }
  return 0;
}

EmotionPreset preset_for(EmotionState s) {
  EmotionPreset p;
  p.state = s;
  p.lf.tc = 1.0;
  p.lf.ee = 1.0;
  const double base_f0 = 170.0;
  // Per-state F0 means keep the documented qualitative ordering; the LF
  // shapes are spread far enough apart that every pair stays separable from
  // the glottal source alone, which is what this corpus exists to guarantee.
  switch (s) {
    case EmotionState::neutral:
      p.f0_mean_hz = base_f0;
      p.f0_span_hz = 10.0;
      p.lf.tp = 0.450; p.lf.te = 0.620; p.lf.ta = 0.015;
      p.jitter = 0.005; p.shimmer = 0.025;
      break;
    case EmotionState::moderate_joy:
      p.f0_mean_hz = base_f0 * 1.22;
      p.f0_span_hz = 20.0;
      p.lf.tp = 0.390; p.lf.te = 0.550; p.lf.ta = 0.010;
      p.jitter = 0.007; p.shimmer = 0.040;
      break;
    case EmotionState::intense_joy:
      p.f0_mean_hz = base_f0 * 1.45;
      p.f0_span_hz = 34.0;
      p.lf.tp = 0.445; p.lf.te = 0.530; p.lf.ta = 0.005;
      p.jitter = 0.009; p.shimmer = 0.055;
      break;
    case EmotionState::moderate_anger:
      p.f0_mean_hz = base_f0 * 0.85;
      p.f0_span_hz = 12.0;
      p.lf.tp = 0.380; p.lf.te = 0.700; p.lf.ta = 0.012;
      p.jitter = 0.007; p.shimmer = 0.040;
      break;
    case EmotionState::intense_anger:
      p.f0_mean_hz = base_f0 * 0.97;
      p.f0_span_hz = 24.0;
      p.lf.tp = 0.430; p.lf.te = 0.580; p.lf.ta = 0.003;
      p.jitter = 0.018; p.shimmer = 0.080;
      break;
    case EmotionState::moderate_sadness:
      p.f0_mean_hz = base_f0 * 0.75;
      p.f0_span_hz = 8.0;
      p.lf.tp = 0.420; p.lf.te = 0.640; p.lf.ta = 0.050;
      p.jitter = 0.005; p.shimmer = 0.030;
      break;
    case EmotionState::intense_sadness:
      p.f0_mean_hz = base_f0 * 1.15;
      p.f0_span_hz = 14.0;
      p.lf.tp = 0.510; p.lf.te = 0.575; p.lf.ta = 0.007;
      p.jitter = 0.008; p.shimmer = 0.035;
      break;
  }
  return p;
}

Waveform lf_train(const EmotionPreset& preset, double duration_s, int fs, std::uint64_t rng_seed) {
  if (!(duration_s > 0.0)) raise(ErrorCode::invalid_argument, "duration must be positive");
  if (fs <= 0) raise(ErrorCode::invalid_argument, "sample rate must be positive");
  if (!(preset.f0_mean_hz > 0.0)) raise(ErrorCode::invalid_argument, "preset f0 must be positive");

  Rng rng(rng_seed);

  // Per-utterance LF shape draw around the preset means.
  LfParams shape = preset.lf;
  if (preset.lf_spread > 0.0) {
    shape.tp *= 1.0 + preset.lf_spread * rng.normal();
    shape.te *= 1.0 + preset.lf_spread * rng.normal();
    shape.ta *= 1.0 + preset.lf_spread * rng.normal();
    shape.tp = std::clamp(shape.tp, 0.15, 0.60);
    shape.te = std::clamp(shape.te, shape.tp + 0.05, 0.85);
    shape.ta = std::clamp(shape.ta, 0.002, 0.5 * (1.0 - shape.te));
  } else {
    rng.normal(); rng.normal(); rng.normal();  // keep the stream layout fixed
  }

  // Smooth F0 contour: two slow sinusoids plus a gentle declination, scaled
  // to the preset span.
  const double span = preset.f0_span_hz;
  const double nu1 = rng.uniform(0.5, 1.5);
  const double nu2 = rng.uniform(2.0, 4.0);
  const double ph1 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double ph2 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  auto contour_f0 = [&](double t) {
    const double c = 0.35 * std::sin(2.0 * std::numbers::pi * nu1 * t + ph1) +
                     0.15 * std::sin(2.0 * std::numbers::pi * nu2 * t + ph2) -
                     0.10 * (t / duration_s);
    return preset.f0_mean_hz + span * c;
  };

  const std::size_t total = static_cast<std::size_t>(std::llround(duration_s * fs));
  const double pad_s = 0.080;
  const std::size_t pad = std::min(total / 4, static_cast<std::size_t>(std::llround(pad_s * fs)));

  Waveform out;
  out.sample_rate = fs;
  out.samples.assign(total, 0.0);

  std::size_t pos = pad;
  const std::size_t voiced_end = total > pad ? total - pad : 0;
  while (pos < voiced_end) {
    const double t = static_cast<double>(pos) / fs;
    double f0 = contour_f0(t);
    if (preset.jitter > 0.0)
      f0 *= 1.0 + preset.jitter * rng.normal();
    else
      rng.normal();
    f0 = std::clamp(f0, 60.0, 420.0);

    LfParams cycle = shape;
    cycle.t0 = 1.0 / f0;
    double amp = 1.0;
    if (preset.shimmer > 0.0)
      amp = std::max(0.2, 1.0 + preset.shimmer * rng.normal());
    else
      rng.normal();

    const std::vector<double> pulse = lf_pulse(cycle, fs);
    if (pos + pulse.size() > voiced_end) break;
    for (std::size_t i = 0; i < pulse.size(); ++i) out.samples[pos + i] = amp * pulse[i];
    pos += pulse.size();
  }
  return out;
}

SpeakerProfile speaker_profile(int speaker_id, std::uint64_t corpus_seed, int fs) {
  Rng base(corpus_seed);
  Rng rng(base.fork(0x5350454bULL + static_cast<std::uint64_t>(speaker_id)));

  static const Formant kBase[4] = {{660.0, 80.0}, {1700.0, 110.0}, {2400.0, 150.0}, {3300.0, 200.0}};
  SpeakerProfile prof;
  for (const Formant& f : kBase) {
    Formant g = f;
    g.freq_hz *= 1.0 + rng.uniform(-0.07, 0.07);
    g.bandwidth_hz *= 1.0 + rng.uniform(-0.15, 0.15);
    g.freq_hz = std::min(g.freq_hz, 0.45 * fs);
    prof.formants.push_back(g);
  }
  prof.f0_scale = 1.0 + rng.uniform(-0.04, 0.04);
  return prof;
}

CorpusManifest generate_corpus(const CorpusConfig& config) {
  if (config.n_speakers < 1 || config.n_per_state_per_speaker < 1)
    raise(ErrorCode::invalid_argument, "corpus needs at least one speaker and one utterance per state");
  std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) raise(ErrorCode::io_failure, "cannot create output directory: " + config.out_dir);

  Rng base(config.seed);
  CorpusManifest manifest;
  for (int spk = 1; spk <= config.n_speakers; ++spk) {
    const SpeakerProfile prof = speaker_profile(spk, config.seed, config.fs);
    const LpcModel tract = make_vocal_tract(prof.formants, config.fs);
    for (EmotionState state : kAllStates) {
      EmotionPreset preset = preset_for(state);
      preset.f0_mean_hz *= prof.f0_scale;
      for (int k = 0; k < config.n_per_state_per_speaker; ++k) {
        const std::uint64_t label =
            (static_cast<std::uint64_t>(spk) << 32) ^
            (static_cast<std::uint64_t>(static_cast<int>(state)) << 16) ^
            static_cast<std::uint64_t>(k);
        Rng fork_src(config.seed);
        const std::uint64_t utt_seed = fork_src.fork(label);

        const Waveform source = lf_train(preset, config.duration_s, config.fs, utt_seed);
        const Waveform speech = synth_speech(source, tract);

        CorpusEntry entry;
        entry.speaker_id = spk;
        entry.state = state;
        entry.duration_s = config.duration_s;
        entry.seed = utt_seed;
        entry.utterance_id = "spk" + std::to_string(spk) + "_" + to_code(state) + "_" +
                             std::to_string(k);
        entry.file_path = (dir / (entry.utterance_id + ".wav")).string();
        write_wav(entry.file_path, speech);
        manifest.entries.push_back(std::move(entry));
      }
    }
  }

  write_manifest((dir / "manifest.jsonl").string(), manifest);
  return manifest;
}

void write_manifest(const std::string& path, const CorpusManifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::io_failure, "cannot open for writing: " + path);
  for (const CorpusEntry& e : manifest.entries) {
    nlohmann::json j;
    j["utterance_id"] = e.utterance_id;
    j["speaker_id"] = e.speaker_id;
    j["state"] = to_code(e.state);
    j["file_path"] = e.file_path;
    j["duration_s"] = e.duration_s;
    j["seed"] = e.seed;
    out << j.dump() << "\n";
  }
  if (!out) raise(ErrorCode::io_failure, "write failed: " + path);
}

CorpusManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_failure, "cannot open for reading: " + path);
  CorpusManifest manifest;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) raise(ErrorCode::io_failure, "malformed manifest line in " + path);
    CorpusEntry e;
    e.utterance_id = j.at("utterance_id").get<std::string>();
    e.speaker_id = j.at("speaker_id").get<int>();
    e.state = state_from_code(j.at("state").get<std::string>());
    e.file_path = j.at("file_path").get<std::string>();
    e.duration_s = j.at("duration_s").get<double>();
    e.seed = j.at("seed").get<std::uint64_t>();
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace glotkit
