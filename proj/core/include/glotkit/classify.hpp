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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "glotkit/corpus.hpp"
#include "glotkit/features.hpp"

namespace glotkit {

/// Smoothed histogram over [0, 1] serving as a per-state feature density.
struct DensityEstimate {
  std::vector<double> bin_edges;  // n_bins + 1 edges
  std::vector<double> probs;      // n_bins, strictly positive, sums to 1
};

/// Histogram with add-one smoothing; values must lie in [0, 1].
DensityEstimate estimate_density(const std::vector<double>& values, std::size_t n_bins = 40);

enum class PairLabel { A, B };

/// Single-feature decision: A when the state-A density at the value is at
/// least the state-B density (ties go to A), otherwise B.
PairLabel bayes_predict(double value, const DensityEstimate& pdf_a, const DensityEstimate& pdf_b);

enum class SourceKind { speech, glottal };
std::string to_string(SourceKind s);

struct PairTask {
  EmotionState state_a = EmotionState::neutral;  // canonical: a before b in enum order
  EmotionState state_b = EmotionState::neutral;
  SourceKind source = SourceKind::speech;
};

/// Leave-one-speaker-out accuracy of the single-feature density classifier.
/// Each fold fits min-max normalization and both densities on the training
/// speakers only; the held-out speaker's values are clipped into [0, 1].
double single_feature_accuracy(const FeatureMatrix& matrix, const PairTask& pair,
                               std::size_t feature_index, std::size_t n_bins = 40);

struct RankedFeature {
  std::size_t feature_index = 0;
  double accuracy = 0.0;
};

/// Every feature scored with single_feature_accuracy, sorted descending;
/// ties break toward the lower feature index.
std::vector<RankedFeature> rank_features(const FeatureMatrix& matrix, const PairTask& pair,
                                         std::size_t n_bins = 40);

struct SvmConfig {
  double c = 1.0;
  int degree = 1;
  double coef0 = 0.0;
  double tol = 1e-3;
  long max_passes = 200000;  // working-pair updates before giving up
};

/// Binary SVM with polynomial kernel (u.v + coef0)^degree trained by
/// sequential minimal optimization.
struct SvmModel {
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> dual_coeffs;  // alpha_i * y_i
  double bias = 0.0;
  int degree = 1;
  double coef0 = 0.0;
  double c = 1.0;
  std::string label_neg;  // y = -1
  std::string label_pos;  // y = +1
  bool converged = true;
  double kkt_residual = 0.0;  // max pointwise violation at termination
};

/// Labels must contain exactly the two classes. Pair selection is the
/// maximal-violating-pair rule with index tie-breaking, so equal inputs give
/// equal models.
SvmModel svm_train(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const SvmConfig& cfg);

double svm_decision(const SvmModel& model, const std::vector<double>& x);
int svm_predict(const SvmModel& model, const std::vector<double>& x);

/// Text serialization (CSV blocks); round-trips through svm_load.
void svm_save(std::ostream& out, const SvmModel& model);
SvmModel svm_load(std::istream& in);

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<long>> counts;  // counts[truth][predicted]

  double accuracy() const;
};

/// Binary grouping of emotional states: states mapped to the same label form
/// one side. States absent from the map are excluded from the task.
using StateGrouping = std::vector<std::pair<EmotionState, std::string>>;

struct LosoResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;
  std::size_t n_folds = 0;
};

/// Leave-one-speaker-out SVM evaluation. Per fold: normalization stats are
/// fitted on the training rows, the test speaker's rows are transformed with
/// them, and one SVM is trained; counts pool over folds.
LosoResult loso_evaluate(const FeatureMatrix& matrix, const StateGrouping& grouping,
                         const SvmConfig& cfg);

}  // namespace glotkit
