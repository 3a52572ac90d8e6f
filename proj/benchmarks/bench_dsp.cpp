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

#include <benchmark/benchmark.h>

#include "glotkit/corpus.hpp"
#include "glotkit/iaif.hpp"
#include "glotkit/lf_model.hpp"
#include "glotkit/rng.hpp"
#include "glotkit/signal.hpp"

namespace {

constexpr int kFs = 16000;

glotkit::Waveform bench_vowel(double seconds) {
  glotkit::EmotionPreset preset = glotkit::preset_for(glotkit::EmotionState::neutral);
  const glotkit::Waveform source = glotkit::lf_train(preset, seconds, kFs, 1);
  const glotkit::LpcModel tract =
      glotkit::make_vocal_tract({{660, 80}, {1700, 110}, {2400, 150}, {3300, 200}}, kFs);
  return glotkit::synth_speech(source, tract);
}

void BM_Lpc(benchmark::State& state) {
  const glotkit::Waveform vowel = bench_vowel(0.2);
  std::vector<double> frame(vowel.samples.begin() + 2048, vowel.samples.begin() + 2048 + 512);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::lpc(frame, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_Lpc)->Arg(8)->Arg(18);

void BM_DftMagnitude(benchmark::State& state) {
  glotkit::Rng rng(3);
  std::vector<double> frame(static_cast<std::size_t>(state.range(0)));
  for (double& v : frame) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::dft_magnitude(frame, frame.size()));
  }
}
BENCHMARK(BM_DftMagnitude)->Arg(512)->Arg(4096);

void BM_LfPulse(benchmark::State& state) {
  glotkit::LfParams params;
  params.t0 = 1.0 / 120.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::lf_pulse(params, kFs));
  }
}
BENCHMARK(BM_LfPulse);

void BM_IaifFrame(benchmark::State& state) {
  const glotkit::Waveform vowel = bench_vowel(0.3);
  const glotkit::IaifConfig cfg;
  const std::size_t len = static_cast<std::size_t>(state.range(0));
  std::span<const double> frame(vowel.samples.data() + 2048, len);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::iaif_frame(frame, kFs, cfg));
  }
}
BENCHMARK(BM_IaifFrame)->Arg(512)->Arg(1024);

void BM_IaifUtterance(benchmark::State& state) {
  const glotkit::Waveform vowel = bench_vowel(1.0);
  const glotkit::IaifConfig cfg;
  const glotkit::FrameSpec spec = cfg.frame_spec(kFs);
  const std::size_t n = (vowel.size() - spec.frame_len) / spec.hop + 1;
  const std::vector<bool> mask(n, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::iaif_utterance(vowel, cfg, mask));
  }
}
BENCHMARK(BM_IaifUtterance)->Unit(benchmark::kMillisecond);

}  // namespace
