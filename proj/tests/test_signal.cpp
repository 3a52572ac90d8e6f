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

#include <cmath>
#include <numbers>

#include "glotkit/error.hpp"
#include "glotkit/rng.hpp"
#include "glotkit/signal.hpp"
#include "oracles.hpp"

using namespace glotkit;

namespace {

Waveform wave(std::vector<double> samples, int fs = 16000) {
  Waveform w;
  w.samples = std::move(samples);
  w.sample_rate = fs;
  return w;
}

// random stable model via reflection coefficients bounded away from 1
LpcModel random_stable_model(Rng& rng, std::size_t order, double kmax = 0.9) {
  std::vector<double> a;
  for (std::size_t m = 0; m < order; ++m) {
    const double k = rng.uniform(-kmax, kmax);
    std::vector<double> next(m + 1);
    for (std::size_t i = 0; i < m; ++i) next[i] = a[i] + k * a[m - 1 - i];
    next[m] = k;
    a = std::move(next);
  }
  LpcModel model;
  model.coeffs = std::move(a);
  model.gain = 1.0;
  return model;
}

}  // namespace

TEST_CASE("frame_signal computes count, offsets and windowing") {
  std::vector<double> samples(100);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = static_cast<double>(i);
  FrameSpec spec{40, 30, WindowType::rect};
  const auto frames = frame_signal(wave(samples), spec);
  CHECK(frames.size() == 3);
  CHECK(frames[1][0] == doctest::Approx(30.0));
  CHECK(frames[2][39] == doctest::Approx(99.0));
}

TEST_CASE("frame_signal with hann window reproduces the window on constant input") {
  FrameSpec spec{64, 32, WindowType::hann};
  const auto frames = frame_signal(wave(std::vector<double>(128, 1.0)), spec);
  const auto win = make_window(WindowType::hann, 64);
  REQUIRE(frames.size() == 3);
  for (std::size_t i = 0; i < 64; ++i) CHECK(frames[0][i] == doctest::Approx(win[i]));
}

TEST_CASE("frame_signal rejects a signal shorter than one frame") {
  FrameSpec spec{40, 30, WindowType::rect};
  CHECK_THROWS_WITH_AS(frame_signal(wave(std::vector<double>(39, 1.0)), spec),
                       doctest::Contains("shorter than one frame"), Error);
}

TEST_CASE("autocorrelation of an impulse and of a constant") {
  CHECK(autocorrelation(std::vector<double>{1, 0, 0, 0}, 2) == std::vector<double>{1, 0, 0});
  CHECK(autocorrelation(std::vector<double>{1, 1, 1, 1}, 2) == std::vector<double>{4, 3, 2});
  CHECK_THROWS_AS(autocorrelation(std::vector<double>{1, 2}, 2), Error);
}

TEST_CASE("autocorrelation of an AR(1) decay approaches the pole") {
  // x(n) = 0.9^n for a long frame: r(1)/r(0) -> 0.9
  std::vector<double> x(400);
  x[0] = 1.0;
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = 0.9 * x[i - 1];
  const auto r = autocorrelation(x, 1);
  CHECK(r[1] / r[0] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("autocorrelation peak dominance holds on random frames") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(128);
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    const auto r = autocorrelation(x, 64);
    for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[0] >= std::abs(r[k]));
  }
}

TEST_CASE("lpc recovers a one-pole system from its impulse response") {
  // x(n) = -0.9 x(n-1) + impulse
  std::vector<double> x(400);
  x[0] = 1.0;
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = -0.9 * x[i - 1];
  const LpcModel m = lpc(x, 1);
  CHECK(m.coeffs[0] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("lpc rejects order 0 and zero-energy frames") {
  CHECK_THROWS_AS(lpc(std::vector<double>{1, 2, 3}, 0), Error);
  CHECK_THROWS_WITH_AS(lpc(std::vector<double>(16, 0.0), 2), doctest::Contains("zero energy"),
                       Error);
}

TEST_CASE("lpc recovers AR(2) coefficients with known poles") {
  // poles 0.9 e^{+-j pi/4}: A(z) = 1 - 2*0.9*cos(pi/4) z^-1 + 0.81 z^-2
  const double a1 = -2.0 * 0.9 * std::cos(std::numbers::pi / 4.0);
  const double a2 = 0.81;
  std::vector<double> x(2000, 0.0);
  x[0] = 1.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    x[i] = -a1 * x[i - 1] - (i >= 2 ? a2 * x[i - 2] : 0.0) + (i == 0 ? 1.0 : 0.0);
  }
  const LpcModel m = lpc(x, 2);
  CHECK(std::abs(m.coeffs[0] - a1) < 1e-3);
  CHECK(std::abs(m.coeffs[1] - a2) < 1e-3);
}

TEST_CASE("lpc matches the dense normal-equation solve on random data") {
  Rng rng(11);
  std::vector<double> x(256);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  const LpcModel m = lpc(x, 8);
  const auto direct = oracle::normal_equation_lpc(x, 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(m.coeffs[i] == doctest::Approx(direct[i]).epsilon(1e-8));
}

TEST_CASE("inverse_filter identity and hand convolution") {
  const Waveform x = wave({1.0, 2.0, 3.0});
  CHECK(inverse_filter(x, LpcModel{}).samples == x.samples);

  LpcModel m;
  m.coeffs = {-0.5};
  Waveform impulse = wave({1.0, 0.0, 0.0, 0.0});
  const Waveform y = inverse_filter(impulse, m);
  CHECK(y.samples[0] == doctest::Approx(1.0));
  CHECK(y.samples[1] == doctest::Approx(-0.5));
  CHECK(y.samples[2] == doctest::Approx(0.0));
}

TEST_CASE("all_pole_filter impulse response is a geometric series") {
  LpcModel m;
  m.coeffs = {-0.5};
  Waveform impulse = wave({1.0, 0.0, 0.0, 0.0, 0.0});
  const Waveform y = all_pole_filter(impulse, m);
  for (std::size_t i = 0; i < y.size(); ++i)
    CHECK(y.samples[i] == doctest::Approx(std::pow(0.5, static_cast<double>(i))));
}

TEST_CASE("all_pole_filter rejects non-minimum-phase models") {
  LpcModel unstable;
  unstable.coeffs = {-2.5, 1.2};  // root outside the unit circle
  CHECK(!is_minimum_phase(unstable));
  CHECK_THROWS_AS(all_pole_filter(wave({1.0, 0.0}), unstable), Error);
}

TEST_CASE("filter round trip is exact for random stable models") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t order = 1 + static_cast<std::size_t>(rng.next_u64() % 12);
    const LpcModel m = random_stable_model(rng, order);
    REQUIRE(is_minimum_phase(m));
    std::vector<double> e(256);
    for (double& v : e) v = rng.uniform(-1.0, 1.0);
    const Waveform through = all_pole_filter(wave(e), m);
    const Waveform back = inverse_filter(through, m);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(std::abs(back.samples[i] - e[i]) < 1e-9);
  }
}

TEST_CASE("leaky_integrate: step, decay and range checks") {
  Waveform impulse = wave({1.0, 0.0, 0.0, 0.0});
  const Waveform step = leaky_integrate(impulse, 1.0);
  CHECK(step.samples == std::vector<double>{1.0, 1.0, 1.0, 1.0});

  const Waveform decay = leaky_integrate(impulse, 0.99);
  for (std::size_t i = 0; i < decay.size(); ++i)
    CHECK(decay.samples[i] == doctest::Approx(std::pow(0.99, static_cast<double>(i))));

  CHECK_THROWS_AS(leaky_integrate(impulse, 0.0), Error);
  CHECK_THROWS_AS(leaky_integrate(impulse, 1.5), Error);
}

TEST_CASE("dft_magnitude isolates an exact-bin cosine") {
  const std::size_t n = 256;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::cos(2.0 * std::numbers::pi * 16.0 * static_cast<double>(i) / static_cast<double>(n));
  const auto mag = dft_magnitude(x, n);
  const double peak = mag[16];
  for (std::size_t k = 0; k < mag.size(); ++k) {
    if (k == 16) continue;
    CHECK(mag[k] < 1e-9 * peak);
  }
}

TEST_CASE("dft_magnitude of zero input is zero and preconditions hold") {
  const auto mag = dft_magnitude(std::vector<double>(64, 0.0), 64);
  for (double v : mag) CHECK(v == 0.0);
  CHECK_THROWS_AS(dft_magnitude(std::vector<double>(65, 1.0), 64), Error);
  CHECK_THROWS_AS(dft_magnitude(std::vector<double>(60, 1.0), 100), Error);
}

TEST_CASE("dft_magnitude matches the direct-sum oracle on random frames") {
  Rng rng(21);
  for (const std::size_t n : {64UL, 256UL, 1024UL, 4096UL}) {
    std::vector<double> x(n - 3);  // zero-padded path
    for (double& v : x) v = rng.uniform(-1.0, 1.0);
    const auto fast = dft_magnitude(x, n);
    const auto slow = oracle::naive_dft_magnitude(x, n);
    double ref = 0.0;
    for (double v : slow) ref = std::max(ref, v);
    for (std::size_t k = 0; k < fast.size(); ++k) CHECK(std::abs(fast[k] - slow[k]) <= 1e-9 * ref);
  }
}

TEST_CASE("operations are deterministic") {
  Rng rng(5);
  std::vector<double> x(300);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  const LpcModel m1 = lpc(x, 10);
  const LpcModel m2 = lpc(x, 10);
  CHECK(m1.coeffs == m2.coeffs);
  const auto d1 = dft_magnitude(x, 512);
  const auto d2 = dft_magnitude(x, 512);
  CHECK(d1 == d2);
}
