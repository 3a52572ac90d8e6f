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

#include "glotkit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "glotkit/error.hpp"

namespace glotkit {

std::string to_string(SourceKind s) { return s == SourceKind::speech ? "speech" : "glottal"; }

DensityEstimate estimate_density(const std::vector<double>& values, std::size_t n_bins) {
  if (values.empty()) raise(ErrorCode::degenerate_input, "density estimate needs at least one value");
  if (n_bins < 1) raise(ErrorCode::invalid_argument, "density estimate needs at least one bin");

  DensityEstimate d;
  d.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    d.bin_edges[i] = static_cast<double>(i) / static_cast<double>(n_bins);

  std::vector<double> counts(n_bins, 0.0);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0))
      raise(ErrorCode::invalid_argument, "density values must lie in [0, 1]");
    auto bin = static_cast<std::size_t>(v * static_cast<double>(n_bins));
    if (bin >= n_bins) bin = n_bins - 1;  // v == 1.0
    counts[bin] += 1.0;
  }

  // add-one smoothing keeps every bin strictly positive
  const double denom = static_cast<double>(values.size()) + static_cast<double>(n_bins);
  d.probs.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i) d.probs[i] = (counts[i] + 1.0) / denom;
  return d;
}

namespace {

std::size_t bin_of(const DensityEstimate& d, double value) {
  const std::size_t n_bins = d.probs.size();
  auto bin = static_cast<std::size_t>(value * static_cast<double>(n_bins));
  if (bin >= n_bins) bin = n_bins - 1;
  return bin;
}

}  // namespace

PairLabel bayes_predict(double value, const DensityEstimate& pdf_a, const DensityEstimate& pdf_b) {
  if (!(value >= 0.0 && value <= 1.0))
    raise(ErrorCode::invalid_argument, "prediction value must lie in [0, 1]");
  if (pdf_a.probs.size() != pdf_b.probs.size())
    raise(ErrorCode::dimension_mismatch, "density bin counts differ");
  const double pa = pdf_a.probs[bin_of(pdf_a, value)];
  const double pb = pdf_b.probs[bin_of(pdf_b, value)];
  return pa >= pb ? PairLabel::A : PairLabel::B;
}

namespace {

struct PairRows {
  std::vector<std::size_t> indices;  // rows belonging to either pair state
  std::vector<int> speakers;         // sorted unique speaker ids
};

PairRows collect_pair_rows(const FeatureMatrix& matrix, const PairTask& pair) {
  if (pair.state_a == pair.state_b)
    raise(ErrorCode::invalid_argument, "pair states must differ");
  PairRows rows;
  std::set<int> speakers;
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    const EmotionState s = matrix.meta[r].state;
    if (s == pair.state_a || s == pair.state_b) {
      rows.indices.push_back(r);
      speakers.insert(matrix.meta[r].speaker_id);
    }
  }
  rows.speakers.assign(speakers.begin(), speakers.end());
  if (rows.speakers.size() < 2)
    raise(ErrorCode::degenerate_input, "pair evaluation needs at least two speakers");
  return rows;
}

struct FoldSplit {
  std::vector<std::size_t> train_a, train_b, test;
};

FoldSplit fold_for_speaker(const FeatureMatrix& matrix, const PairRows& rows, const PairTask& pair,
                           int test_speaker) {
  FoldSplit fold;
  for (std::size_t r : rows.indices) {
    if (matrix.meta[r].speaker_id == test_speaker) {
      fold.test.push_back(r);
    } else if (matrix.meta[r].state == pair.state_a) {
      fold.train_a.push_back(r);
    } else {
      fold.train_b.push_back(r);
    }
  }
  if (fold.train_a.empty() || fold.train_b.empty())
    raise(ErrorCode::degenerate_input, "a pair state is missing from some training fold");
  return fold;
}

}  // namespace

double single_feature_accuracy(const FeatureMatrix& matrix, const PairTask& pair,
                               std::size_t feature_index, std::size_t n_bins) {
  if (feature_index >= matrix.n_cols())
    raise(ErrorCode::invalid_argument, "feature index out of range");
  const PairRows rows = collect_pair_rows(matrix, pair);

  long correct = 0, total = 0;
  for (int speaker : rows.speakers) {
    const FoldSplit fold = fold_for_speaker(matrix, rows, pair, speaker);

    // per-fold min-max over the training rows of this column
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto* group : {&fold.train_a, &fold.train_b}) {
      for (std::size_t r : *group) {
        const double v = matrix.rows[r][feature_index];
        if (first) {
          lo = hi = v;
          first = false;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    const double span = hi - lo;
    auto norm = [&](double v) {
      return span > 0.0 ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.5;
    };

    std::vector<double> va, vb;
    va.reserve(fold.train_a.size());
    vb.reserve(fold.train_b.size());
    for (std::size_t r : fold.train_a) va.push_back(norm(matrix.rows[r][feature_index]));
    for (std::size_t r : fold.train_b) vb.push_back(norm(matrix.rows[r][feature_index]));
    const DensityEstimate pdf_a = estimate_density(va, n_bins);
    const DensityEstimate pdf_b = estimate_density(vb, n_bins);

    for (std::size_t r : fold.test) {
      const PairLabel predicted =
          bayes_predict(norm(matrix.rows[r][feature_index]), pdf_a, pdf_b);
      const PairLabel truth =
          matrix.meta[r].state == pair.state_a ? PairLabel::A : PairLabel::B;
      if (predicted == truth) ++correct;
      ++total;
    }
  }
  return total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

std::vector<RankedFeature> rank_features(const FeatureMatrix& matrix, const PairTask& pair,
                                         std::size_t n_bins) {
  std::vector<RankedFeature> ranked(matrix.n_cols());
  for (std::size_t f = 0; f < matrix.n_cols(); ++f) {
    ranked[f].feature_index = f;
    ranked[f].accuracy = single_feature_accuracy(matrix, pair, f, n_bins);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
    return a.feature_index < b.feature_index;
  });
  return ranked;
}

double ConfusionMatrix::accuracy() const {
  long diag = 0, total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = 0; j < counts[i].size(); ++j) {
      total += counts[i][j];
      if (i == j) diag += counts[i][j];
    }
  }
  return total > 0 ? static_cast<double>(diag) / static_cast<double>(total) : 0.0;
}

LosoResult loso_evaluate(const FeatureMatrix& matrix, const StateGrouping& grouping,
                         const SvmConfig& cfg) {
  // two labels, in first-appearance order over the grouping
  std::vector<std::string> labels;
  for (const auto& [state, label] : grouping) {
    (void)state;
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) labels.push_back(label);
  }
  if (labels.size() != 2)
    raise(ErrorCode::invalid_argument, "loso grouping must map states onto exactly two labels");

  auto label_of = [&](EmotionState s) -> int {
    for (const auto& [state, label] : grouping) {
      if (state == s) return label == labels[0] ? -1 : +1;
    }
    return 0;  // state not part of the task
  };

  std::set<int> speaker_set;
  std::vector<std::size_t> task_rows;
  for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
    if (label_of(matrix.meta[r].state) != 0) {
      task_rows.push_back(r);
      speaker_set.insert(matrix.meta[r].speaker_id);
    }
  }
  if (speaker_set.size() < 2)
    raise(ErrorCode::degenerate_input, "loso evaluation needs at least two speakers");

  LosoResult result;
  result.confusion.labels = labels;
  result.confusion.counts.assign(2, std::vector<long>(2, 0));

  for (int speaker : speaker_set) {
    FeatureMatrix train, test;
    train.layout = matrix.layout;
    test.layout = matrix.layout;
    for (std::size_t r : task_rows) {
      if (matrix.meta[r].speaker_id == speaker) {
        test.meta.push_back(matrix.meta[r]);
        test.rows.push_back(matrix.rows[r]);
      } else {
        train.meta.push_back(matrix.meta[r]);
        train.rows.push_back(matrix.rows[r]);
      }
    }
    if (test.n_rows() == 0) continue;
    bool has_neg = false, has_pos = false;
    for (const UtteranceMeta& meta : train.meta) {
      (label_of(meta.state) < 0 ? has_neg : has_pos) = true;
    }
    if (!has_neg || !has_pos)
      raise(ErrorCode::degenerate_input, "a grouping side is missing from some training fold");

    const NormalizeResult fitted = normalize_features(train);
    const NormalizeResult applied = normalize_features(test, fitted.stats);

    std::vector<int> y(train.n_rows());
    for (std::size_t r = 0; r < train.n_rows(); ++r) y[r] = label_of(train.meta[r].state);
    const SvmModel model = svm_train(fitted.matrix.rows, y, cfg);

    for (std::size_t r = 0; r < test.n_rows(); ++r) {
      const int truth = label_of(test.meta[r].state);
      const int predicted = svm_predict(model, applied.matrix.rows[r]);
      const std::size_t ti = truth < 0 ? 0 : 1;
      const std::size_t pi = predicted < 0 ? 0 : 1;
      ++result.confusion.counts[ti][pi];
    }
    ++result.n_folds;
  }

  result.accuracy = result.confusion.accuracy();
  return result;
}

}  // namespace glotkit
