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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "glotkit/classify.hpp"
#include "glotkit/corpus.hpp"
#include "glotkit/features.hpp"
#include "glotkit/iaif.hpp"

namespace glotkit {

/// An unordered binary split of a set of emotional states.
struct StateSplit {
  std::vector<EmotionState> left;
  std::vector<EmotionState> right;

  std::string key() const;  // canonical "L|R" string of state codes
};

/// All 35 ways of putting 3 of the 7 states on the left, in canonical
/// (enum-lexicographic) order.
std::vector<StateSplit> enumerate_top_splits(const std::vector<EmotionState>& states);

/// The 3 sub-splits of a branch: singleton-vs-pair for 3 states, the three
/// 2+2 partitions for 4 states (left is the subset holding the smallest state).
std::vector<StateSplit> enumerate_subsplits(const std::vector<EmotionState>& branch_states);

/// Accuracy of one candidate split on both sources, plus confusions when the
/// evaluation came from real LOSO runs.
struct NodeEval {
  double accuracy_speech = 0.0;
  double accuracy_glottal = 0.0;
  std::optional<ConfusionMatrix> confusion_speech;
  std::optional<ConfusionMatrix> confusion_glottal;
};

/// Candidate evaluation hook; the default runs loso_evaluate on both feature
/// matrices, tests can inject fixed accuracy tables.
using NodeEvaluator = std::function<NodeEval(const StateSplit&)>;

enum class SelectionCriterion { speech, glottal, mean };

struct HierarchyConfig {
  SvmConfig svm;
  SelectionCriterion criterion = SelectionCriterion::speech;
};

struct EvaluatedSplit {
  StateSplit split;
  NodeEval eval;
};

struct HierarchyNode {
  StateSplit split;
  NodeEval eval;
  std::vector<EvaluatedSplit> candidates;  // every candidate with its accuracies
};

/// Performance-driven three-level tree: top 3+4 split, one sub-split per
/// branch, pairwise leaf classifiers at the bottom.
struct HierarchyTree {
  HierarchyNode top;
  HierarchyNode second_left;
  HierarchyNode second_right;
  std::vector<HierarchyNode> bottom;  // one per two-state leaf pair
};

/// Selects, per level, the candidate maximizing the configured criterion
/// (exact ties keep the first candidate in canonical order).
HierarchyTree build_hierarchy_with(const NodeEvaluator& evaluate, const HierarchyConfig& cfg);

/// Production entry point: candidates evaluated by LOSO on both matrices.
HierarchyTree build_hierarchy(const FeatureMatrix& speech, const FeatureMatrix& glottal,
                              const HierarchyConfig& cfg);

struct CascadeResult {
  double accuracy = 0.0;
  ConfusionMatrix confusion;  // 7x7, canonical state order
};

/// Routes every LOSO test utterance through per-fold node classifiers down to
/// a leaf state; pooled 7-class accuracy and confusion.
CascadeResult cascade_evaluate(const HierarchyTree& tree, const FeatureMatrix& matrix,
                               const SvmConfig& cfg);

/// Test hook: route rows with an injected per-node decision function.
/// decide(split, row) returns true for the left side.
using NodeDecider = std::function<bool(const StateSplit&, std::size_t row)>;
CascadeResult cascade_route(const HierarchyTree& tree, const std::vector<EmotionState>& truths,
                            const NodeDecider& decide);

struct PairwiseRow {
  EmotionState state_a = EmotionState::neutral;
  EmotionState state_b = EmotionState::neutral;
  double accuracy_speech = 0.0;
  double accuracy_glottal = 0.0;
  double difference = 0.0;  // speech - glottal
};

struct PairwiseReport {
  std::vector<PairwiseRow> rows;  // 21 rows, canonical pair order
};

/// Evaluation hook for one pair on one source; the default runs loso_evaluate.
using PairEvaluator = std::function<double(EmotionState, EmotionState, SourceKind)>;

PairwiseReport pairwise_matrix_with(const PairEvaluator& evaluate);
PairwiseReport pairwise_matrix(const FeatureMatrix& speech, const FeatureMatrix& glottal,
                               const SvmConfig& cfg);

/// Differences grouped by arousal-rank and valence-rank distance of the pair.
struct GapGroup {
  int gap = 0;
  std::size_t n_pairs = 0;
  double mean_difference = 0.0;
};

struct SourceComparison {
  std::vector<GapGroup> by_arousal_gap;
  std::vector<GapGroup> by_valence_gap;
  PairwiseRow max_difference;
  PairwiseRow min_difference;
  double mean_difference = 0.0;
};

SourceComparison compare_sources(const PairwiseReport& report);

/// Full dual-source extraction: per utterance, pitch + IAIF + mean removal,
/// then the identical feature extractor on the raw speech and on the glottal
/// waveform. Failed files are collected; the run continues.
struct PipelineConfig {
  IaifConfig iaif;
  double pitch_fmin_hz = 70.0;
  double pitch_fmax_hz = 400.0;
};

struct PipelineResult {
  FeatureMatrix speech;
  FeatureMatrix glottal;
  std::vector<std::string> failures;  // "path: reason"
};

PipelineResult run_pipeline(const CorpusManifest& manifest, const PipelineConfig& cfg);

/// Report emission.
void write_pairwise_csv(const std::string& path, const PairwiseReport& report);
PairwiseReport read_pairwise_csv(const std::string& path);
void write_tree_json(const std::string& path, const HierarchyTree& tree);
std::string comparison_markdown(const SourceComparison& cmp);

/// Provenance sidecar: config digest, seed, and content hashes of outputs.
void write_provenance(const std::string& path, const std::string& config_json,
                      std::uint64_t seed,
                      const std::vector<std::pair<std::string, std::string>>& output_files);

}  // namespace glotkit
