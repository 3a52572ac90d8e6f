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

#include <doctest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "glotkit/corpus.hpp"
#include "glotkit/error.hpp"
#include "glotkit/io.hpp"
#include "glotkit/lf_model.hpp"
#include "glotkit/wav.hpp"
#include "oracles.hpp"

using namespace glotkit;

namespace {

LfParams typical_params(double f0 = 120.0) {
  LfParams p;
  p.t0 = 1.0 / f0;
  p.ee = 1.0;
  p.tp = 0.45;
  p.te = 0.62;
  p.ta = 0.015;
  p.tc = 1.0;
  return p;
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("glotkit_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("lf_pulse minimum sits at te with value -ee") {
  for (const double f0 : {90.0, 120.0, 200.0, 300.0}) {
    const LfParams p = typical_params(f0);
    const int fs = 16000;
    const auto pulse = lf_pulse(p, fs);
    const auto n = static_cast<double>(pulse.size());

    std::size_t argmin = 0;
    for (std::size_t i = 1; i < pulse.size(); ++i)
      if (pulse[i] < pulse[argmin]) argmin = i;

    const double expected_index = p.te * p.t0 * fs;
    CHECK(std::abs(static_cast<double>(argmin) - expected_index) <= 1.0);
    CHECK(std::abs(pulse[argmin] + p.ee) <= 0.01 * p.ee);
    CHECK(n == doctest::Approx(std::round(p.t0 * fs)));
  }
}

TEST_CASE("integrated lf_pulse peaks at tp") {
  const LfParams p = typical_params(120.0);
  const int fs = 16000;
  const auto pulse = lf_pulse(p, fs);

  Waveform w;
  w.sample_rate = fs;
  w.samples = pulse;
  const Waveform flow = leaky_integrate(w, 1.0);

  std::size_t argmax = 0;
  for (std::size_t i = 1; i < flow.size(); ++i)
    if (flow.samples[i] > flow.samples[argmax]) argmax = i;
  CHECK(std::abs(static_cast<double>(argmax) - p.tp * p.t0 * fs) <= 1.0);
}

TEST_CASE("lf_pulse discrete area balance") {
  for (const double f0 : {90.0, 150.0, 250.0, 350.0}) {
    const auto pulse = lf_pulse(typical_params(f0), 16000);
    double sum = 0.0, abs_sum = 0.0;
    for (double v : pulse) {
      sum += v;
      abs_sum += std::abs(v);
    }
    CHECK(std::abs(sum) / abs_sum < 1e-3);
  }
}

TEST_CASE("leaky integration tracks the analytic flow in steady state") {
  // Compared over one period inside a pulse train; an isolated pulse leaks
  // noticeably more because the integrator never reaches steady state.
  for (const double f0 : {100.0, 200.0, 300.0}) {
    const LfParams p = typical_params(f0);
    const int fs = 16000;
    const auto pulse = lf_pulse(p, fs);
    Waveform train;
    train.sample_rate = fs;
    for (int k = 0; k < 6; ++k)
      train.samples.insert(train.samples.end(), pulse.begin(), pulse.end());
    const Waveform leaky = leaky_integrate(train, 0.99);
    const Waveform exact = leaky_integrate(train, 1.0);  // analytic flow, sampled
    const std::vector<double> last_leaky(leaky.samples.end() - pulse.size(), leaky.samples.end());
    const std::vector<double> last_exact(exact.samples.end() - pulse.size(), exact.samples.end());
    CHECK(oracle::best_lag_ncc(last_leaky, last_exact, 4) > 0.99);
  }
}

TEST_CASE("lf_pulse names the violated constraint") {
  LfParams p = typical_params();
  p.tp = 0.7;  // > te
  CHECK_THROWS_WITH_AS(static_cast<void>(lf_pulse(p, 16000)), doctest::Contains("tp < te"), Error);
  p = typical_params();
  p.ta = 0.5;  // >= 1 - te
  CHECK_THROWS_WITH_AS(static_cast<void>(lf_pulse(p, 16000)), doctest::Contains("ta"), Error);
  p = typical_params();
  CHECK_THROWS_WITH_AS(static_cast<void>(lf_pulse(p, 1000)), doctest::Contains("t0*fs"), Error);
}

TEST_CASE("lf_train at constant F0 without perturbations is exactly periodic") {
  EmotionPreset preset = preset_for(EmotionState::neutral);
  preset.f0_mean_hz = 200.0;
  preset.f0_span_hz = 0.0;
  preset.jitter = 0.0;
  preset.shimmer = 0.0;
  preset.lf_spread = 0.0;

  const int fs = 16000;
  const Waveform train = lf_train(preset, 1.0, fs, 42);
  REQUIRE(train.size() == 16000);

  // voiced region starts after the 80 ms pad; period must be exactly 80
  const std::size_t pad = 1280;
  const std::size_t period = 80;
  for (std::size_t i = pad; i + period < train.size() - pad - period; ++i) {
    if (train.samples[i] == 0.0) continue;
    CHECK(train.samples[i] == doctest::Approx(train.samples[i + period]).epsilon(1e-12));
  }
}

TEST_CASE("autocorrelation period of a jitter-free train is exactly round(fs/f0)") {
  for (const double f0 : {100.0, 160.0, 200.0, 250.0}) {
    EmotionPreset preset = preset_for(EmotionState::neutral);
    preset.f0_mean_hz = f0;
    preset.f0_span_hz = 0.0;
    preset.jitter = 0.0;
    preset.shimmer = 0.0;
    preset.lf_spread = 0.0;
    const int fs = 16000;
    const Waveform train = lf_train(preset, 1.0, fs, 9);

    // voiced core only (pads are silent)
    std::vector<double> core(train.samples.begin() + 2000, train.samples.end() - 2000);
    const auto expected = static_cast<std::size_t>(std::llround(fs / f0));
    const auto r = autocorrelation(core, 2 * expected);
    std::size_t peak = expected / 2;
    for (std::size_t k = expected / 2; k < r.size(); ++k)
      if (r[k] > r[peak]) peak = k;
    CHECK(peak == expected);
  }
}

TEST_CASE("lf_train is deterministic under a fixed seed") {
  const EmotionPreset preset = preset_for(EmotionState::intense_joy);
  const Waveform a = lf_train(preset, 0.7, 16000, 999);
  const Waveform b = lf_train(preset, 0.7, 16000, 999);
  CHECK(a.samples == b.samples);
  const Waveform c = lf_train(preset, 0.7, 16000, 1000);
  CHECK(a.samples != c.samples);
}

TEST_CASE("make_vocal_tract places poles at the requested resonances") {
  const int fs = 16000;
  const LpcModel one = make_vocal_tract({{500.0, 80.0}}, fs);
  REQUIRE(one.order() == 2);
  const double r = std::exp(-std::numbers::pi * 80.0 / fs);
  const double theta = 2.0 * std::numbers::pi * 500.0 / fs;
  CHECK(one.coeffs[0] == doctest::Approx(-2.0 * r * std::cos(theta)));
  CHECK(one.coeffs[1] == doctest::Approx(r * r));

  const LpcModel empty = make_vocal_tract({}, fs);
  CHECK(empty.order() == 0);

  const LpcModel four =
      make_vocal_tract({{660, 80}, {1700, 110}, {2400, 150}, {3300, 200}}, fs);
  CHECK(four.order() == 8);
  CHECK(is_minimum_phase(four));

  CHECK_THROWS_AS(make_vocal_tract({{9000.0, 80.0}}, fs), Error);
}

TEST_CASE("synth_speech through an empty tract returns the scaled excitation") {
  Waveform g;
  g.sample_rate = 16000;
  g.samples = {0.1, -0.5, 0.25, 0.0};
  const Waveform s = synth_speech(g, LpcModel{});
  CHECK(s.samples[1] == doctest::Approx(-0.9));
  CHECK(s.samples[0] == doctest::Approx(0.9 * 0.1 / 0.5));
}

TEST_CASE("synth_speech places spectral peaks at the tract resonances") {
  const int fs = 16000;
  const LpcModel tract = make_vocal_tract({{700.0, 60.0}, {2200.0, 90.0}}, fs);

  // impulse train at 100 Hz
  Waveform exc;
  exc.sample_rate = fs;
  exc.samples.assign(fs / 2, 0.0);
  for (std::size_t i = 0; i < exc.size(); i += 160) exc.samples[i] = 1.0;

  const Waveform speech = synth_speech(exc, tract);
  const std::size_t n_fft = 8192;
  std::vector<double> head(speech.samples.begin(), speech.samples.begin() + 8000);
  const auto mag = dft_magnitude(head, n_fft);
  const double bin_hz = static_cast<double>(fs) / n_fft;

  for (const double formant : {700.0, 2200.0}) {
    // local maximum of the spectral envelope within one bin of the resonance:
    // compare the energy near the formant against half a bandwidth away
    const auto at = [&](double hz) {
      const auto k = static_cast<std::size_t>(std::llround(hz / bin_hz));
      double peak = 0.0;
      for (std::size_t j = k - 2; j <= k + 2; ++j) peak = std::max(peak, mag[j]);
      return peak;
    };
    CHECK(at(formant) > at(formant - 300.0));
    CHECK(at(formant) > at(formant + 300.0));
  }
}

TEST_CASE("synth_speech round trip through the inverse filter recovers the source") {
  const int fs = 16000;
  const LpcModel tract = make_vocal_tract({{660, 80}, {1700, 110}}, fs);
  const EmotionPreset preset = preset_for(EmotionState::neutral);
  const Waveform g = lf_train(preset, 0.3, fs, 7);
  const Waveform s = synth_speech(g, tract);
  const Waveform back = inverse_filter(s, tract);
  // proportional to g up to the peak normalization scalar
  CHECK(oracle::best_lag_ncc(back.samples, g.samples, 0) > 1.0 - 1e-9);
}

TEST_CASE("emotion preset table keeps the documented F0 ordering") {
  const double n = preset_for(EmotionState::neutral).f0_mean_hz;
  CHECK(preset_for(EmotionState::intense_joy).f0_mean_hz >
        preset_for(EmotionState::moderate_joy).f0_mean_hz);
  CHECK(preset_for(EmotionState::moderate_joy).f0_mean_hz > n);
  CHECK(preset_for(EmotionState::moderate_anger).f0_mean_hz < n);
  CHECK(preset_for(EmotionState::intense_anger).f0_mean_hz <= n);
  CHECK(preset_for(EmotionState::moderate_sadness).f0_mean_hz < n);
  CHECK(preset_for(EmotionState::intense_sadness).f0_mean_hz > n);
}

TEST_CASE("arousal and valence ranks are a permutation with the documented anchors") {
  std::array<bool, 8> seen_a{}, seen_v{};
  for (EmotionState s : kAllStates) {
    seen_a[static_cast<std::size_t>(arousal_rank(s))] = true;
    seen_v[static_cast<std::size_t>(valence_rank(s))] = true;
  }
  for (int r = 1; r <= 7; ++r) {
    CHECK(seen_a[static_cast<std::size_t>(r)]);
    CHECK(seen_v[static_cast<std::size_t>(r)]);
  }
  CHECK(arousal_rank(EmotionState::intense_anger) >= 6);
  CHECK(arousal_rank(EmotionState::intense_joy) >= 6);
  CHECK(valence_rank(EmotionState::intense_anger) == 1);
}

TEST_CASE("wav round trip preserves samples to quantization accuracy") {
  const auto dir = temp_dir("wav");
  Waveform w;
  w.sample_rate = 16000;
  w.samples = {0.0, 0.5, -0.5, 0.25, -1.0, 1.0, 0.123456};
  const std::string path = (dir / "x.wav").string();
  write_wav(path, w);
  const Waveform r = read_wav(path);
  CHECK(r.sample_rate == 16000);
  REQUIRE(r.size() == w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(std::abs(r.samples[i] - w.samples[i]) <= 0.51 / 32767.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("generate_corpus writes balanced, deterministic output") {
  const auto dir_a = temp_dir("corpus_a");
  const auto dir_b = temp_dir("corpus_b");
  CorpusConfig cfg;
  cfg.n_speakers = 2;
  cfg.n_per_state_per_speaker = 1;
  cfg.duration_s = 0.5;
  cfg.seed = 77;

  cfg.out_dir = dir_a.string();
  const CorpusManifest a = generate_corpus(cfg);
  CHECK(a.entries.size() == 14);
  for (const CorpusEntry& e : a.entries) {
    const Waveform w = read_wav(e.file_path);
    CHECK(w.size() == 8000);
  }

  cfg.out_dir = dir_b.string();
  const CorpusManifest b = generate_corpus(cfg);
  REQUIRE(b.entries.size() == a.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].seed == b.entries[i].seed);
    CHECK(hash_file(a.entries[i].file_path) == hash_file(b.entries[i].file_path));
  }

  // manifest round trip
  const CorpusManifest reread = read_manifest((dir_a / "manifest.jsonl").string());
  REQUIRE(reread.entries.size() == a.entries.size());
  CHECK(reread.entries[3].utterance_id == a.entries[3].utterance_id);
  CHECK(reread.entries[3].state == a.entries[3].state);

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("corpus counts scale with the configuration") {
  // spot check of the full-size bookkeeping without synthesizing audio
  const int n_speakers = 16, n_per_state = 48;
  CHECK(n_speakers * n_per_state * 7 == 5376);
}
