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

#include "glotkit/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "glotkit/error.hpp"
#include "glotkit/io.hpp"
#include "glotkit/pitch.hpp"

namespace glotkit {

namespace {

constexpr double kLoudnessI0 = 1e-6;   // reference intensity for 60 dB headroom
constexpr double kIntensityFloor = 1e-12;
constexpr double kLogFloor = 1e-10;
constexpr std::size_t kMelFilters = 26;
constexpr std::size_t kMfccCount = 15;
constexpr std::size_t kMelBands = 8;
constexpr std::size_t kLspOrder = 8;
constexpr std::size_t kDeltaWindow = 2;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Triangular mel filterbank over the power spectrum bins.
std::vector<std::vector<double>> mel_bank(std::size_t n_filters, std::size_t n_bins, double fs,
                                          std::size_t n_fft) {
  const double mel_max = hz_to_mel(fs / 2.0);
  std::vector<double> centers(n_filters + 2);
  for (std::size_t i = 0; i < centers.size(); ++i)
    centers[i] = mel_to_hz(mel_max * static_cast<double>(i) / static_cast<double>(n_filters + 1));

  std::vector<std::vector<double>> bank(n_filters, std::vector<double>(n_bins, 0.0));
  for (std::size_t f = 0; f < n_filters; ++f) {
    const double lo = centers[f], mid = centers[f + 1], hi = centers[f + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double freq = static_cast<double>(k) * fs / static_cast<double>(n_fft);
      if (freq <= lo || freq >= hi) continue;
      bank[f][k] = freq <= mid ? (freq - lo) / (mid - lo) : (hi - freq) / (hi - mid);
    }
  }
  return bank;
}

}  // namespace

const std::array<std::string, kNumLlds>& lld_names() {
  static const std::array<std::string, kNumLlds> names = [] {
    std::array<std::string, kNumLlds> n;
    std::size_t i = 0;
    n[i++] = "pcm_loudness";
    for (std::size_t k = 0; k < kMfccCount; ++k) n[i++] = "mfcc[" + std::to_string(k) + "]";
    for (std::size_t k = 0; k < kMelBands; ++k) n[i++] = "log_mel_band[" + std::to_string(k) + "]";
    for (std::size_t k = 0; k < kLspOrder; ++k) n[i++] = "lsp_freq[" + std::to_string(k) + "]";
    n[i++] = "f0_shs";
    n[i++] = "f0_env";
    n[i++] = "voicing_prob";
    n[i++] = "jitter_local";
    n[i++] = "jitter_ddp";
    n[i++] = "shimmer_local";
    return n;
  }();
  return names;
}

const std::array<std::string, kNumFunctionals>& functional_names() {
  static const std::array<std::string, kNumFunctionals> names = {
      "pos_max",      "pos_min",     "mean",          "stddev",        "skewness",
      "kurtosis",     "linreg_slope", "linreg_offset", "linreg_err_q",  "linreg_err_a",
      "quartile1",    "quartile2",   "quartile3",     "iqr2_1",        "iqr3_2",
      "iqr3_1",       "percentile1", "percentile99",  "pctl_range_99_1", "upleveltime75",
      "upleveltime90"};
  return names;
}

const std::vector<std::string>& feature_layout() {
  static const std::vector<std::string> layout = [] {
    std::vector<std::string> out;
    out.reserve(kFeatureDim);
    for (std::size_t c = 0; c < kNumContours; ++c) {
      const std::string base = c < kNumLlds ? lld_names()[c] : lld_names()[c - kNumLlds] + "_de";
      for (const std::string& f : functional_names()) out.push_back(base + "_" + f);
    }
    return out;
  }();
  return layout;
}

LldMatrix extract_llds(const Waveform& signal, int fs) {
  validate(signal);
  if (signal.size() == 0) raise(ErrorCode::degenerate_input, "empty signal");

  FrameSpec spec;
  spec.frame_len = static_cast<std::size_t>(std::llround(0.025 * fs));
  spec.hop = static_cast<std::size_t>(std::llround(0.010 * fs));
  spec.window = WindowType::hamming;
  if (signal.size() < spec.frame_len)
    raise(ErrorCode::degenerate_input, "signal shorter than one analysis frame");

  const std::vector<std::vector<double>> frames = frame_signal(signal, spec);
  const std::size_t n_frames = frames.size();
  const std::size_t n_fft = next_pow2(spec.frame_len);
  const std::size_t n_bins = n_fft / 2 + 1;

  static_assert(kNumLlds == 1 + kMfccCount + kMelBands + kLspOrder + 6);
  LldMatrix out;
  out.n_frames = n_frames;
  out.rows.assign(kNumContours, std::vector<double>(n_frames, 0.0));

  const std::vector<std::vector<double>> mel26 = mel_bank(kMelFilters, n_bins, fs, n_fft);
  const std::vector<std::vector<double>> mel8 = mel_bank(kMelBands, n_bins, fs, n_fft);
  const std::vector<double> ham = make_window(WindowType::hamming, spec.frame_len);
  double ham_sum = 0.0;
  for (double w : ham) ham_sum += w;

  // Unwindowed frames for LPC; the Hamming frames feed the spectral rows.
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double* raw = signal.samples.data() + f * spec.hop;

    // loudness: Hamming-weighted mean square through the standard power law
    double intensity = 0.0;
    for (std::size_t i = 0; i < spec.frame_len; ++i) intensity += ham[i] * raw[i] * raw[i];
    intensity = std::max(intensity / ham_sum, kIntensityFloor);
    out.rows[0][f] = std::pow(intensity / kLoudnessI0, 0.3);

    const std::vector<double> mag = dft_magnitude(frames[f], n_fft);
    std::vector<double> power(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) power[k] = mag[k] * mag[k];

    // mel filterbank -> log -> DCT-II (HTK scaling)
    std::array<double, kMelFilters> log_mel{};
    for (std::size_t m = 0; m < kMelFilters; ++m) {
      double e = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) e += mel26[m][k] * power[k];
      log_mel[m] = std::log(std::max(e, kLogFloor));
    }
    const double dct_scale = std::sqrt(2.0 / static_cast<double>(kMelFilters));
    for (std::size_t j = 0; j < kMfccCount; ++j) {
      double c = 0.0;
      for (std::size_t m = 0; m < kMelFilters; ++m)
        c += log_mel[m] * std::cos(std::numbers::pi * static_cast<double>(j) *
                                   (static_cast<double>(m) + 0.5) / static_cast<double>(kMelFilters));
      out.rows[1 + j][f] = dct_scale * c;
    }

    for (std::size_t b = 0; b < kMelBands; ++b) {
      double e = 0.0;
      for (std::size_t k = 0; k < n_bins; ++k) e += mel8[b][k] * power[k];
      out.rows[1 + kMfccCount + b][f] = std::log(std::max(e, kLogFloor));
    }

    // LSP from an order-8 LPC of the unwindowed frame; silent frames fall
    // back to the evenly spaced neutral grid.
    std::vector<double> lsp;
    double energy = 0.0;
    for (std::size_t i = 0; i < spec.frame_len; ++i) energy += raw[i] * raw[i];
    if (energy > 0.0) {
      std::vector<double> hann_frame(spec.frame_len);
      const std::vector<double> hann = make_window(WindowType::hann, spec.frame_len);
      for (std::size_t i = 0; i < spec.frame_len; ++i) hann_frame[i] = raw[i] * hann[i];
      double wenergy = 0.0;
      for (double v : hann_frame) wenergy += v * v;
      if (wenergy > 0.0) {
        lsp = lpc_to_lsp(lpc(hann_frame, kLspOrder));
      }
    }
    if (lsp.empty()) {
      lsp.resize(kLspOrder);
      for (std::size_t i = 0; i < kLspOrder; ++i)
        lsp[i] = std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(kLspOrder + 1);
    }
    for (std::size_t i = 0; i < kLspOrder; ++i) out.rows[1 + kMfccCount + kMelBands + i][f] = lsp[i];
  }

  // Pitch-based rows on their own 60 ms grid, mapped to this grid by frame center.
  const std::size_t base = 1 + kMfccCount + kMelBands + kLspOrder;
  const FrameSpec pitch_spec = pitch_frame_spec(fs);
  if (signal.size() >= pitch_spec.frame_len) {
    const PitchTrack track = estimate_pitch(signal, pitch_spec, 70.0, 400.0);
    const std::vector<double> env = f0_envelope(track);
    const std::vector<CycleStats> cycles = jitter_shimmer(signal, track);
    for (std::size_t f = 0; f < n_frames; ++f) {
      const double center = static_cast<double>(f * spec.hop) +
                            static_cast<double>(spec.frame_len) / 2.0;
      const double pos = (center - static_cast<double>(pitch_spec.frame_len) / 2.0) /
                         static_cast<double>(pitch_spec.hop);
      const auto idx = static_cast<std::size_t>(std::clamp<long long>(
          std::llround(pos), 0, static_cast<long long>(track.size()) - 1));
      out.rows[base + 0][f] = track.frames[idx].f0_hz;
      out.rows[base + 1][f] = env[idx];
      out.rows[base + 2][f] = track.frames[idx].voicing_prob;
      out.rows[base + 3][f] = cycles[idx].jitter_local;
      out.rows[base + 4][f] = cycles[idx].jitter_ddp;
      out.rows[base + 5][f] = cycles[idx].shimmer_local;
    }
  }

  // deltas fill the second half
  for (std::size_t c = 0; c < kNumLlds; ++c) out.rows[kNumLlds + c] = delta(out.rows[c], kDeltaWindow);
  return out;
}

std::vector<double> delta(const std::vector<double>& contour, std::size_t window) {
  if (window < 1) raise(ErrorCode::invalid_argument, "delta window must be >= 1");
  const std::size_t n = contour.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t lo = t >= window ? t - window : 0;
    const std::size_t hi = std::min(n - 1, t + window);
    // least-squares slope over the supported window
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double count = static_cast<double>(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
      const double x = static_cast<double>(i);
      sx += x;
      sy += contour[i];
      sxx += x * x;
      sxy += x * contour[i];
    }
    const double denom = count * sxx - sx * sx;
    out[t] = denom > 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  }
  return out;
}

namespace {

// Linear interpolation between order statistics: rank h = (n-1) * p.
double percentile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  if (lo == hi) return sorted[lo];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

std::array<double, kNumFunctionals> functionals(const std::vector<double>& contour) {
  if (contour.empty()) raise(ErrorCode::degenerate_input, "functionals need a non-empty contour");
  const std::size_t n = contour.size();
  const double dn = static_cast<double>(n);
  std::array<double, kNumFunctionals> out{};

  std::size_t argmax = 0, argmin = 0;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (contour[i] > contour[argmax]) argmax = i;
    if (contour[i] < contour[argmin]) argmin = i;
    mean += contour[i];
  }
  mean /= dn;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : contour) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  const double sd = std::sqrt(m2);

  out[0] = n > 1 ? static_cast<double>(argmax) / (dn - 1.0) : 0.0;
  out[1] = n > 1 ? static_cast<double>(argmin) / (dn - 1.0) : 0.0;
  out[2] = mean;
  out[3] = sd;
  out[4] = sd > 0.0 ? m3 / (sd * sd * sd) : 0.0;
  out[5] = sd > 0.0 ? m4 / (m2 * m2) : 0.0;

  // linear regression against the frame index
  double slope = 0.0, offset = mean;
  if (n > 1) {
    double sx = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i);
      sx += x;
      sxx += x * x;
      sxy += x * contour[i];
    }
    const double sy = mean * dn;
    const double denom = dn * sxx - sx * sx;
    slope = (dn * sxy - sx * sy) / denom;
    offset = (sy - slope * sx) / dn;
  }
  double err_q = 0.0, err_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = contour[i] - (slope * static_cast<double>(i) + offset);
    err_q += r * r;
    err_a += std::abs(r);
  }
  out[6] = slope;
  out[7] = offset;
  out[8] = err_q / dn;
  out[9] = err_a / dn;

  std::vector<double> sorted(contour);
  std::sort(sorted.begin(), sorted.end());
  const double q1 = percentile_sorted(sorted, 0.25);
  const double q2 = percentile_sorted(sorted, 0.50);
  const double q3 = percentile_sorted(sorted, 0.75);
  const double p1 = percentile_sorted(sorted, 0.01);
  const double p99 = percentile_sorted(sorted, 0.99);
  out[10] = q1;
  out[11] = q2;
  out[12] = q3;
  out[13] = q2 - q1;
  out[14] = q3 - q2;
  out[15] = q3 - q1;
  out[16] = p1;
  out[17] = p99;
  out[18] = p99 - p1;

  const double range = sorted.back() - sorted.front();
  if (range > 0.0) {
    const double t75 = sorted.front() + 0.75 * range;
    const double t90 = sorted.front() + 0.90 * range;
    std::size_t c75 = 0, c90 = 0;
    for (double v : contour) {
      if (v > t75) ++c75;
      if (v > t90) ++c90;
    }
    out[19] = static_cast<double>(c75) / dn;
    out[20] = static_cast<double>(c90) / dn;
  }
  return out;
}

FeatureVector extract_feature_vector(const Waveform& signal, int fs) {
  const LldMatrix llds = extract_llds(signal, fs);
  FeatureVector v;
  v.values.reserve(kFeatureDim);
  for (const std::vector<double>& row : llds.rows) {
    const std::array<double, kNumFunctionals> f = functionals(row);
    v.values.insert(v.values.end(), f.begin(), f.end());
  }
  return v;
}

NormalizeResult normalize_features(const FeatureMatrix& m, const std::optional<NormStats>& stats) {
  NormalizeResult result;
  result.matrix = m;
  const std::size_t cols = m.n_cols();

  if (stats.has_value()) {
    if (stats->mins.size() != cols || stats->maxs.size() != cols)
      raise(ErrorCode::dimension_mismatch, "normalization stats do not match the layout width");
    result.stats = *stats;
  } else {
    result.stats.mins.assign(cols, 0.0);
    result.stats.maxs.assign(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t r = 0; r < m.n_rows(); ++r) {
        const double v = m.rows[r][c];
        if (r == 0) {
          lo = hi = v;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      result.stats.mins[c] = lo;
      result.stats.maxs[c] = hi;
    }
  }

  for (std::size_t r = 0; r < result.matrix.n_rows(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double lo = result.stats.mins[c];
      const double hi = result.stats.maxs[c];
      double& v = result.matrix.rows[r][c];
      v = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.5;
    }
  }
  result.matrix.normalized = true;
  return result;
}

void write_feature_csv(const std::string& path, const FeatureMatrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::io_failure, "cannot open for writing: " + path);
  out << "utterance_id,speaker_id,state,source";
  for (const std::string& name : m.layout) out << "," << name;
  out << "\n";
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    const UtteranceMeta& meta = m.meta[r];
    out << meta.utterance_id << "," << meta.speaker_id << "," << to_code(meta.state) << ","
        << meta.source;
    for (double v : m.rows[r]) out << "," << format_double(v);
    out << "\n";
  }
  if (!out) raise(ErrorCode::io_failure, "write failed: " + path);
}

FeatureMatrix read_feature_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_failure, "cannot open for reading: " + path);
  FeatureMatrix m;
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::io_failure, "empty feature csv: " + path);
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 5) raise(ErrorCode::io_failure, "feature csv header too short: " + path);
  m.layout.assign(header.begin() + 4, header.end());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      raise(ErrorCode::io_failure, "feature csv row width mismatch in " + path);
    UtteranceMeta meta;
    meta.utterance_id = fields[0];
    meta.speaker_id = static_cast<int>(parse_double(fields[1]));
    meta.state = state_from_code(fields[2]);
    meta.source = fields[3];
    std::vector<double> row(m.layout.size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = parse_double(fields[4 + c]);
    m.meta.push_back(std::move(meta));
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace glotkit
