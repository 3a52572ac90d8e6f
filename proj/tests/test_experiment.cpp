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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "glotkit/error.hpp"
#include "glotkit/experiment.hpp"
#include "glotkit/io.hpp"
#include "glotkit/rng.hpp"
#include "glotkit/wav.hpp"
#include "reference_tables.hpp"

using namespace glotkit;

namespace {

std::vector<EmotionState> all_states() {
  return {kAllStates.begin(), kAllStates.end()};
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("glotkit_exp_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("enumerate_top_splits yields 35 distinct 3-vs-4 partitions") {
  const auto splits = enumerate_top_splits(all_states());
  CHECK(splits.size() == 35);

  std::set<std::string> keys;
  std::map<EmotionState, int> left_appearances;
  for (const StateSplit& s : splits) {
    CHECK(s.left.size() == 3);
    CHECK(s.right.size() == 4);
    keys.insert(s.key());
    for (EmotionState st : s.left) ++left_appearances[st];
    // left and right together cover all seven states
    std::set<EmotionState> u(s.left.begin(), s.left.end());
    u.insert(s.right.begin(), s.right.end());
    CHECK(u.size() == 7);
  }
  CHECK(keys.size() == 35);  // no duplicates
  for (EmotionState st : all_states()) CHECK(left_appearances[st] == 15);  // C(6,2)

  auto bad = all_states();
  bad.pop_back();
  CHECK_THROWS_AS(enumerate_top_splits(bad), Error);
}

TEST_CASE("enumerate_subsplits gives the three documented patterns") {
  const std::vector<EmotionState> left3 = {EmotionState::moderate_joy, EmotionState::intense_joy,
                                           EmotionState::intense_anger};
  const auto s3 = enumerate_subsplits(left3);
  REQUIRE(s3.size() == 3);
  CHECK(s3[0].key() == "M-J|I-J,I-A");
  CHECK(s3[1].key() == "I-J|M-J,I-A");
  CHECK(s3[2].key() == "I-A|M-J,I-J");

  const std::vector<EmotionState> right4 = {EmotionState::neutral, EmotionState::moderate_anger,
                                            EmotionState::moderate_sadness,
                                            EmotionState::intense_sadness};
  const auto s4 = enumerate_subsplits(right4);
  REQUIRE(s4.size() == 3);
  CHECK(s4[0].key() == "N,M-A|M-S,I-S");
  CHECK(s4[1].key() == "N,M-S|M-A,I-S");
  CHECK(s4[2].key() == "N,I-S|M-A,M-S");

  CHECK_THROWS_AS(enumerate_subsplits(all_states()), Error);
}

TEST_CASE("build_hierarchy reproduces the reference tree from injected accuracies") {
  const HierarchyConfig cfg;
  const HierarchyTree tree = build_hierarchy_with(reference::table_evaluator(), cfg);

  CHECK(tree.top.split.key() == "M-J,I-J,I-A|N,M-A,M-S,I-S");
  CHECK(tree.top.eval.accuracy_glottal == doctest::Approx(80.38));
  CHECK(tree.top.eval.accuracy_speech == doctest::Approx(83.59));
  CHECK(tree.top.candidates.size() == 35);

  CHECK(tree.second_left.split.key() == "M-J|I-J,I-A");
  CHECK(tree.second_left.eval.accuracy_glottal == doctest::Approx(73.61));
  CHECK(tree.second_left.eval.accuracy_speech == doctest::Approx(77.26));

  CHECK(tree.second_right.split.key() == "N,M-A|M-S,I-S");
  CHECK(tree.second_right.eval.accuracy_glottal == doctest::Approx(67.12));
  CHECK(tree.second_right.eval.accuracy_speech == doctest::Approx(69.04));

  REQUIRE(tree.bottom.size() == 3);
  CHECK(tree.bottom[0].split.key() == "I-J|I-A");
  CHECK(tree.bottom[0].eval.accuracy_glottal == doctest::Approx(65.82));
  CHECK(tree.bottom[0].eval.accuracy_speech == doctest::Approx(68.95));
  CHECK(tree.bottom[1].split.key() == "N|M-A");
  CHECK(tree.bottom[1].eval.accuracy_glottal == doctest::Approx(62.17));
  CHECK(tree.bottom[2].split.key() == "M-S|I-S");
  CHECK(tree.bottom[2].eval.accuracy_glottal == doctest::Approx(71.03));
  CHECK(tree.bottom[2].eval.accuracy_speech == doctest::Approx(75.13));

  // every state sits in exactly one leaf
  std::set<EmotionState> leaves;
  auto add_leaf = [&](const std::vector<EmotionState>& side) {
    if (side.size() == 1) leaves.insert(side[0]);
  };
  add_leaf(tree.second_left.split.left);
  add_leaf(tree.second_left.split.right);
  add_leaf(tree.second_right.split.left);
  add_leaf(tree.second_right.split.right);
  for (const HierarchyNode& leaf : tree.bottom) {
    leaves.insert(leaf.split.left.front());
    leaves.insert(leaf.split.right.front());
  }
  CHECK(leaves.size() == 7);
}

TEST_CASE("build_hierarchy selection criterion is configurable") {
  // glottal criterion picks the same reference tree (the injected maxima agree)
  HierarchyConfig cfg;
  cfg.criterion = SelectionCriterion::glottal;
  const HierarchyTree tree = build_hierarchy_with(reference::table_evaluator(), cfg);
  CHECK(tree.top.split.key() == "M-J,I-J,I-A|N,M-A,M-S,I-S");
}

TEST_CASE("build_hierarchy keeps the first canonical split on exact ties") {
  NodeEvaluator flat = [](const StateSplit&) {
    NodeEval eval;
    eval.accuracy_speech = 0.5;
    eval.accuracy_glottal = 0.5;
    return eval;
  };
  const HierarchyTree tree = build_hierarchy_with(flat, HierarchyConfig{});
  const auto first = enumerate_top_splits(all_states()).front();
  CHECK(tree.top.split.key() == first.key());
}

TEST_CASE("cascade_route with always-correct deciders is perfect") {
  const HierarchyTree tree = build_hierarchy_with(reference::table_evaluator(), HierarchyConfig{});
  std::vector<EmotionState> truths;
  for (int i = 0; i < 10; ++i)
    for (EmotionState s : kAllStates) truths.push_back(s);

  NodeDecider oracle_decider = [&](const StateSplit& split, std::size_t row) {
    const EmotionState truth = truths[row];
    return std::find(split.left.begin(), split.left.end(), truth) != split.left.end();
  };
  const CascadeResult r = cascade_route(tree, truths, oracle_decider);
  CHECK(r.accuracy == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 7; ++i) CHECK(r.confusion.counts[i][i] == 10);
}

TEST_CASE("cascade_route under random decisions matches the analytic rate") {
  const HierarchyTree tree = build_hierarchy_with(reference::table_evaluator(), HierarchyConfig{});
  // the reference tree resolves M-J after 2 decisions, every other state
  // after 3: expected accuracy = (1*0.25 + 6*0.125) / 7
  const double expected = (1.0 * 0.25 + 6.0 * 0.125) / 7.0;

  Rng rng(99);
  std::vector<EmotionState> truths;
  for (int i = 0; i < 3000; ++i)
    for (EmotionState s : kAllStates) truths.push_back(s);
  NodeDecider coin = [&](const StateSplit&, std::size_t) { return rng.uniform() < 0.5; };
  const CascadeResult r = cascade_route(tree, truths, coin);
  // 21000 routes; 4 sigma of a binomial around 0.143 is ~ 0.01
  CHECK(std::abs(r.accuracy - expected) < 0.012);
}

TEST_CASE("pairwise report carries 21 rows with exact differences") {
  const PairwiseReport report = pairwise_matrix_with(reference::pairwise_evaluator());
  REQUIRE(report.rows.size() == 21);
  for (const PairwiseRow& row : report.rows) {
    CHECK(row.difference ==
          doctest::Approx(row.accuracy_speech - row.accuracy_glottal).epsilon(1e-12));
  }
  // canonical ordering: first row N vs M-J, last M-S vs I-S
  CHECK(to_code(report.rows.front().state_a) == "N");
  CHECK(to_code(report.rows.front().state_b) == "M-J");
  CHECK(to_code(report.rows.back().state_a) == "M-S");
  CHECK(to_code(report.rows.back().state_b) == "I-S");
}

TEST_CASE("compare_sources finds the reference extremes and grouping") {
  const PairwiseReport report = pairwise_matrix_with(reference::pairwise_evaluator());
  const SourceComparison cmp = compare_sources(report);

  CHECK(to_code(cmp.max_difference.state_a) == "M-J");
  CHECK(to_code(cmp.max_difference.state_b) == "I-A");
  CHECK(cmp.max_difference.difference == doctest::Approx(10.03));
  CHECK(to_code(cmp.min_difference.state_a) == "N");
  CHECK(to_code(cmp.min_difference.state_b) == "M-S");
  CHECK(cmp.min_difference.difference == doctest::Approx(0.85));

  std::size_t arousal_total = 0, valence_total = 0;
  for (const GapGroup& g : cmp.by_arousal_gap) arousal_total += g.n_pairs;
  for (const GapGroup& g : cmp.by_valence_gap) valence_total += g.n_pairs;
  CHECK(arousal_total == 21);
  CHECK(valence_total == 21);
}

TEST_CASE("pairwise csv round trips") {
  const PairwiseReport report = pairwise_matrix_with(reference::pairwise_evaluator());
  const auto dir = temp_dir("pairwise");
  const std::string path = (dir / "pairwise.csv").string();
  write_pairwise_csv(path, report);
  const PairwiseReport r = read_pairwise_csv(path);
  REQUIRE(r.rows.size() == 21);
  for (std::size_t i = 0; i < 21; ++i) {
    CHECK(r.rows[i].state_a == report.rows[i].state_a);
    CHECK(r.rows[i].accuracy_glottal == report.rows[i].accuracy_glottal);
    CHECK(r.rows[i].difference == report.rows[i].difference);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("run_pipeline extracts dual-source features from a mini corpus") {
  const auto dir = temp_dir("pipeline");
  CorpusConfig corpus_cfg;
  corpus_cfg.n_speakers = 2;
  corpus_cfg.n_per_state_per_speaker = 1;
  corpus_cfg.duration_s = 0.6;
  corpus_cfg.seed = 11;
  corpus_cfg.out_dir = dir.string();
  const CorpusManifest manifest = generate_corpus(corpus_cfg);
  REQUIRE(manifest.entries.size() == 14);

  PipelineConfig cfg;
  const PipelineResult result = run_pipeline(manifest, cfg);
  CHECK(result.failures.empty());
  CHECK(result.speech.n_rows() == 14);
  CHECK(result.glottal.n_rows() == 14);
  CHECK(result.speech.layout == result.glottal.layout);
  CHECK(result.speech.layout.size() == kFeatureDim);
  for (std::size_t r = 0; r < 14; ++r) {
    CHECK(result.speech.meta[r].utterance_id == result.glottal.meta[r].utterance_id);
    CHECK(result.speech.meta[r].source == "speech");
    CHECK(result.glottal.meta[r].source == "glottal");
    for (double v : result.glottal.rows[r]) CHECK(std::isfinite(v));
  }

  // determinism: rerun produces identical CSV bytes
  const std::string csv_a = (dir / "speech_a.csv").string();
  const std::string csv_b = (dir / "speech_b.csv").string();
  write_feature_csv(csv_a, result.speech);
  const PipelineResult again = run_pipeline(manifest, cfg);
  write_feature_csv(csv_b, again.speech);
  CHECK(hash_file(csv_a) == hash_file(csv_b));

  std::filesystem::remove_all(dir);
}

TEST_CASE("run_pipeline collects per-file failures and continues") {
  const auto dir = temp_dir("pipeline_fail");
  CorpusConfig corpus_cfg;
  corpus_cfg.n_speakers = 1;
  corpus_cfg.n_per_state_per_speaker = 1;
  corpus_cfg.duration_s = 0.6;
  corpus_cfg.seed = 12;
  corpus_cfg.out_dir = dir.string();
  CorpusManifest manifest = generate_corpus(corpus_cfg);

  // corrupt one file
  write_text_file(manifest.entries[3].file_path, "not a wav");
  PipelineConfig cfg;
  const PipelineResult result = run_pipeline(manifest, cfg);
  CHECK(result.failures.size() == 1);
  CHECK(result.speech.n_rows() == 6);
  CHECK(result.glottal.n_rows() == 6);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cascade accuracy respects the per-level routing bound on a synthetic run") {
  const auto dir = temp_dir("cascade_bound");
  CorpusConfig corpus_cfg;
  corpus_cfg.n_speakers = 2;
  corpus_cfg.n_per_state_per_speaker = 3;
  corpus_cfg.duration_s = 0.8;
  corpus_cfg.seed = 31;
  corpus_cfg.out_dir = dir.string();
  const CorpusManifest manifest = generate_corpus(corpus_cfg);
  const PipelineResult pipeline = run_pipeline(manifest, PipelineConfig{});
  REQUIRE(pipeline.failures.empty());

  HierarchyConfig cfg;
  const HierarchyTree tree = build_hierarchy(pipeline.speech, pipeline.glottal, cfg);
  const CascadeResult cascade = cascade_evaluate(tree, pipeline.glottal, cfg.svm);

  const double level1 = tree.top.eval.accuracy_glottal;
  const double level2 =
      std::min(tree.second_left.eval.accuracy_glottal, tree.second_right.eval.accuracy_glottal);
  double level3 = 1.0;
  for (const HierarchyNode& leaf : tree.bottom)
    level3 = std::min(level3, leaf.eval.accuracy_glottal);

  CHECK(cascade.accuracy >= level1 * level2 * level3 - 1e-9);

  // 7x7 confusion rows sum to the per-state test counts
  long total = 0;
  for (const auto& row : cascade.confusion.counts) {
    long row_sum = 0;
    for (long v : row) row_sum += v;
    CHECK(row_sum == 6);  // 2 speakers x 3 utterances per state
    total += row_sum;
  }
  CHECK(total == 42);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tree json and provenance sidecar are written") {
  const HierarchyTree tree = build_hierarchy_with(reference::table_evaluator(), HierarchyConfig{});
  const auto dir = temp_dir("report");
  const std::string tree_path = (dir / "tree.json").string();
  write_tree_json(tree_path, tree);
  const std::string text = read_text_file(tree_path);
  CHECK(text.find("M-J") != std::string::npos);
  CHECK(text.find("accuracy_glottal") != std::string::npos);
  CHECK(text.find("candidates") != std::string::npos);

  const std::string prov_path = (dir / "provenance.json").string();
  write_provenance(prov_path, R"({"note":"t"})", 42, {{"tree", tree_path}});
  const std::string prov = read_text_file(prov_path);
  CHECK(prov.find("content_hashes") != std::string::npos);
  CHECK(prov.find("\"seed\": 42") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("comparison markdown lists groups and extremes") {
  const SourceComparison cmp =
      compare_sources(pairwise_matrix_with(reference::pairwise_evaluator()));
  const std::string md = comparison_markdown(cmp);
  CHECK(md.find("max difference: M-J vs I-A") != std::string::npos);
  CHECK(md.find("min difference: N vs M-S") != std::string::npos);
  CHECK(md.find("| arousal gap |") != std::string::npos);
}
