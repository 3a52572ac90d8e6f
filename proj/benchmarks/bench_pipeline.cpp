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

#include "glotkit/classify.hpp"
#include "glotkit/corpus.hpp"
#include "glotkit/features.hpp"
#include "glotkit/pitch.hpp"
#include "glotkit/rng.hpp"

namespace {

constexpr int kFs = 16000;

void BM_EstimatePitch(benchmark::State& state) {
  glotkit::EmotionPreset preset = glotkit::preset_for(glotkit::EmotionState::neutral);
  const glotkit::Waveform train = glotkit::lf_train(preset, 1.0, kFs, 2);
  const glotkit::FrameSpec spec = glotkit::pitch_frame_spec(kFs);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::estimate_pitch(train, spec, 70.0, 400.0));
  }
}
BENCHMARK(BM_EstimatePitch)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatureVector(benchmark::State& state) {
  glotkit::EmotionPreset preset = glotkit::preset_for(glotkit::EmotionState::moderate_joy);
  const glotkit::Waveform train = glotkit::lf_train(preset, 1.0, kFs, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::extract_feature_vector(train, kFs));
  }
}
BENCHMARK(BM_ExtractFeatureVector)->Unit(benchmark::kMillisecond);

void BM_Functionals(benchmark::State& state) {
  glotkit::Rng rng(5);
  std::vector<double> contour(static_cast<std::size_t>(state.range(0)));
  for (double& v : contour) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::functionals(contour));
  }
}
BENCHMARK(BM_Functionals)->Arg(100)->Arg(1000);

void BM_SvmTrain(benchmark::State& state) {
  glotkit::Rng rng(6);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> x(n, std::vector<double>(64));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    for (double& v : x[i]) v = rng.uniform() + (pos ? 0.3 : 0.0);
    y[i] = pos ? 1 : -1;
  }
  const glotkit::SvmConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(glotkit::svm_train(x, y, cfg));
  }
}
BENCHMARK(BM_SvmTrain)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

}  // namespace
