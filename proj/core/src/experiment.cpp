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

#include "glotkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "glotkit/error.hpp"
#include "glotkit/io.hpp"
#include "glotkit/wav.hpp"

namespace glotkit {

std::string StateSplit::key() const {
  std::string k;
  for (std::size_t i = 0; i < left.size(); ++i) k += (i ? "," : "") + to_code(left[i]);
  k += "|";
  for (std::size_t i = 0; i < right.size(); ++i) k += (i ? "," : "") + to_code(right[i]);
  return k;
}

std::vector<StateSplit> enumerate_top_splits(const std::vector<EmotionState>& states) {
  if (states.size() != 7) raise(ErrorCode::invalid_argument, "top-level split needs exactly 7 states");
  std::set<EmotionState> unique(states.begin(), states.end());
  if (unique.size() != 7) raise(ErrorCode::invalid_argument, "top-level states must be distinct");

  std::vector<EmotionState> ordered(unique.begin(), unique.end());
  std::vector<StateSplit> splits;
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = i + 1; j < 7; ++j) {
      for (std::size_t k = j + 1; k < 7; ++k) {
        StateSplit s;
        s.left = {ordered[i], ordered[j], ordered[k]};
        for (std::size_t m = 0; m < 7; ++m) {
          if (m != i && m != j && m != k) s.right.push_back(ordered[m]);
        }
        splits.push_back(std::move(s));
      }
    }
  }
  return splits;
}

std::vector<StateSplit> enumerate_subsplits(const std::vector<EmotionState>& branch_states) {
  std::vector<EmotionState> s(branch_states);
  std::sort(s.begin(), s.end());
  std::vector<StateSplit> splits;
  if (s.size() == 3) {
    for (std::size_t i = 0; i < 3; ++i) {
      StateSplit split;
      split.left = {s[i]};
      for (std::size_t j = 0; j < 3; ++j)
        if (j != i) split.right.push_back(s[j]);
      splits.push_back(std::move(split));
    }
  } else if (s.size() == 4) {
    // the three 2+2 partitions; left always holds the smallest state
    const std::size_t partners[3] = {1, 2, 3};
    for (std::size_t partner : partners) {
      StateSplit split;
      split.left = {s[0], s[partner]};
      for (std::size_t j = 1; j < 4; ++j)
        if (j != partner) split.right.push_back(s[j]);
      splits.push_back(std::move(split));
    }
  } else {
    raise(ErrorCode::invalid_argument, "sub-split needs a branch of 3 or 4 states");
  }
  return splits;
}

namespace {

double criterion_value(const NodeEval& eval, SelectionCriterion criterion) {
  switch (criterion) {
    case SelectionCriterion::speech: return eval.accuracy_speech;
    case SelectionCriterion::glottal: return eval.accuracy_glottal;
    case SelectionCriterion::mean: return 0.5 * (eval.accuracy_speech + eval.accuracy_glottal);
  }
  return 0.0;
}

HierarchyNode select_best(const std::vector<StateSplit>& candidates, const NodeEvaluator& evaluate,
                          SelectionCriterion criterion) {
  HierarchyNode node;
  double best = -1.0;
  for (const StateSplit& split : candidates) {
    EvaluatedSplit es;
    es.split = split;
    es.eval = evaluate(split);
    const double value = criterion_value(es.eval, criterion);
    if (value > best) {  // strict: exact ties keep the earlier canonical split
      best = value;
      node.split = split;
      node.eval = es.eval;
    }
    node.candidates.push_back(std::move(es));
  }
  return node;
}

}  // namespace

HierarchyTree build_hierarchy_with(const NodeEvaluator& evaluate, const HierarchyConfig& cfg) {
  std::vector<EmotionState> all(kAllStates.begin(), kAllStates.end());

  HierarchyTree tree;
  tree.top = select_best(enumerate_top_splits(all), evaluate, cfg.criterion);
  tree.second_left = select_best(enumerate_subsplits(tree.top.split.left), evaluate, cfg.criterion);
  tree.second_right =
      select_best(enumerate_subsplits(tree.top.split.right), evaluate, cfg.criterion);

  // Bottom level: every two-state sub-branch becomes a leaf pair classifier.
  for (const HierarchyNode* node : {&tree.second_left, &tree.second_right}) {
    for (const std::vector<EmotionState>* side : {&node->split.left, &node->split.right}) {
      if (side->size() != 2) continue;
      StateSplit pair;
      pair.left = {(*side)[0]};
      pair.right = {(*side)[1]};
      HierarchyNode leaf;
      leaf.split = pair;
      leaf.eval = evaluate(pair);
      tree.bottom.push_back(std::move(leaf));
    }
  }
  return tree;
}

namespace {

StateGrouping grouping_for(const StateSplit& split) {
  StateGrouping g;
  for (EmotionState s : split.left) g.emplace_back(s, "L");
  for (EmotionState s : split.right) g.emplace_back(s, "R");
  return g;
}

}  // namespace

HierarchyTree build_hierarchy(const FeatureMatrix& speech, const FeatureMatrix& glottal,
                              const HierarchyConfig& cfg) {
  if (speech.n_rows() != glottal.n_rows())
    raise(ErrorCode::dimension_mismatch, "speech and glottal matrices must cover the same utterances");
  NodeEvaluator evaluate = [&](const StateSplit& split) {
    const StateGrouping grouping = grouping_for(split);
    const LosoResult rs = loso_evaluate(speech, grouping, cfg.svm);
    const LosoResult rg = loso_evaluate(glottal, grouping, cfg.svm);
    NodeEval eval;
    eval.accuracy_speech = rs.accuracy;
    eval.accuracy_glottal = rg.accuracy;
    eval.confusion_speech = rs.confusion;
    eval.confusion_glottal = rg.confusion;
    return eval;
  };
  return build_hierarchy_with(evaluate, cfg);
}

namespace {

std::size_t state_index(EmotionState s) {
  for (std::size_t i = 0; i < kAllStates.size(); ++i)
    if (kAllStates[i] == s) return i;
  return 0;
}

bool contains(const std::vector<EmotionState>& set, EmotionState s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

ConfusionMatrix empty_confusion7() {
  ConfusionMatrix m;
  for (EmotionState s : kAllStates) m.labels.push_back(to_code(s));
  m.counts.assign(7, std::vector<long>(7, 0));
  return m;
}

// Walks one utterance through the tree with an arbitrary decision function.
EmotionState route_one(const HierarchyTree& tree, const NodeDecider& decide, std::size_t row) {
  const std::vector<EmotionState>* branch =
      decide(tree.top.split, row) ? &tree.top.split.left : &tree.top.split.right;
  const HierarchyNode& second =
      branch == &tree.top.split.left ? tree.second_left : tree.second_right;
  const std::vector<EmotionState>* side =
      decide(second.split, row) ? &second.split.left : &second.split.right;
  if (side->size() == 1) return side->front();
  for (const HierarchyNode& leaf : tree.bottom) {
    if (contains(*side, leaf.split.left.front()) && contains(*side, leaf.split.right.front())) {
      return decide(leaf.split, row) ? leaf.split.left.front() : leaf.split.right.front();
    }
  }
  raise(ErrorCode::invalid_argument, "tree has no leaf classifier for a two-state branch");
}

}  // namespace

CascadeResult cascade_route(const HierarchyTree& tree, const std::vector<EmotionState>& truths,
                            const NodeDecider& decide) {
  CascadeResult result;
  result.confusion = empty_confusion7();
  for (std::size_t r = 0; r < truths.size(); ++r) {
    const EmotionState predicted = route_one(tree, decide, r);
    ++result.confusion.counts[state_index(truths[r])][state_index(predicted)];
  }
  result.accuracy = result.confusion.accuracy();
  return result;
}

CascadeResult cascade_evaluate(const HierarchyTree& tree, const FeatureMatrix& matrix,
                               const SvmConfig& cfg) {
  std::set<int> speakers;
  for (const UtteranceMeta& meta : matrix.meta) speakers.insert(meta.speaker_id);
  if (speakers.size() < 2)
    raise(ErrorCode::degenerate_input, "cascade evaluation needs at least two speakers");

  // All tree nodes that need a trained classifier per fold.
  std::vector<const StateSplit*> node_splits = {&tree.top.split, &tree.second_left.split,
                                                &tree.second_right.split};
  for (const HierarchyNode& leaf : tree.bottom) node_splits.push_back(&leaf.split);

  CascadeResult result;
  result.confusion = empty_confusion7();

  for (int speaker : speakers) {
    FeatureMatrix train, test;
    train.layout = matrix.layout;
    test.layout = matrix.layout;
    for (std::size_t r = 0; r < matrix.n_rows(); ++r) {
      if (matrix.meta[r].speaker_id == speaker) {
        test.meta.push_back(matrix.meta[r]);
        test.rows.push_back(matrix.rows[r]);
      } else {
        train.meta.push_back(matrix.meta[r]);
        train.rows.push_back(matrix.rows[r]);
      }
    }
    if (test.n_rows() == 0) continue;

    const NormalizeResult fitted = normalize_features(train);
    const NormalizeResult applied = normalize_features(test, fitted.stats);

    // one SVM per node, trained on this fold's rows of the node's states
    std::map<std::string, SvmModel> models;
    for (const StateSplit* split : node_splits) {
      std::vector<std::vector<double>> x;
      std::vector<int> y;
      for (std::size_t r = 0; r < train.n_rows(); ++r) {
        const EmotionState s = train.meta[r].state;
        if (contains(split->left, s)) {
          x.push_back(fitted.matrix.rows[r]);
          y.push_back(-1);
        } else if (contains(split->right, s)) {
          x.push_back(fitted.matrix.rows[r]);
          y.push_back(+1);
        }
      }
      models.emplace(split->key(), svm_train(x, y, cfg));
    }

    NodeDecider decide = [&](const StateSplit& split, std::size_t row) {
      const SvmModel& model = models.at(split.key());
      return svm_predict(model, applied.matrix.rows[row]) < 0;
    };
    for (std::size_t r = 0; r < test.n_rows(); ++r) {
      const EmotionState predicted = route_one(tree, decide, r);
      ++result.confusion.counts[state_index(test.meta[r].state)][state_index(predicted)];
    }
  }
  result.accuracy = result.confusion.accuracy();
  return result;
}

PairwiseReport pairwise_matrix_with(const PairEvaluator& evaluate) {
  PairwiseReport report;
  for (std::size_t i = 0; i < kAllStates.size(); ++i) {
    for (std::size_t j = i + 1; j < kAllStates.size(); ++j) {
      PairwiseRow row;
      row.state_a = kAllStates[i];
      row.state_b = kAllStates[j];
      row.accuracy_speech = evaluate(row.state_a, row.state_b, SourceKind::speech);
      row.accuracy_glottal = evaluate(row.state_a, row.state_b, SourceKind::glottal);
      row.difference = row.accuracy_speech - row.accuracy_glottal;
      report.rows.push_back(row);
    }
  }
  return report;
}

PairwiseReport pairwise_matrix(const FeatureMatrix& speech, const FeatureMatrix& glottal,
                               const SvmConfig& cfg) {
  if (speech.n_rows() != glottal.n_rows())
    raise(ErrorCode::dimension_mismatch, "speech and glottal matrices must cover the same utterances");
  PairEvaluator evaluate = [&](EmotionState a, EmotionState b, SourceKind source) {
    StateGrouping grouping = {{a, to_code(a)}, {b, to_code(b)}};
    const FeatureMatrix& m = source == SourceKind::speech ? speech : glottal;
    return loso_evaluate(m, grouping, cfg).accuracy;
  };
  return pairwise_matrix_with(evaluate);
}

SourceComparison compare_sources(const PairwiseReport& report) {
  if (report.rows.empty()) raise(ErrorCode::degenerate_input, "empty pairwise report");
  SourceComparison cmp;
  cmp.max_difference = report.rows.front();
  cmp.min_difference = report.rows.front();

  std::map<int, std::pair<std::size_t, double>> arousal, valence;
  double total = 0.0;
  for (const PairwiseRow& row : report.rows) {
    total += row.difference;
    if (row.difference > cmp.max_difference.difference) cmp.max_difference = row;
    if (row.difference < cmp.min_difference.difference) cmp.min_difference = row;
    const int a_gap = std::abs(arousal_rank(row.state_a) - arousal_rank(row.state_b));
    const int v_gap = std::abs(valence_rank(row.state_a) - valence_rank(row.state_b));
    arousal[a_gap].first += 1;
    arousal[a_gap].second += row.difference;
    valence[v_gap].first += 1;
    valence[v_gap].second += row.difference;
  }
  cmp.mean_difference = total / static_cast<double>(report.rows.size());
  for (const auto& [gap, acc] : arousal)
    cmp.by_arousal_gap.push_back({gap, acc.first, acc.second / static_cast<double>(acc.first)});
  for (const auto& [gap, acc] : valence)
    cmp.by_valence_gap.push_back({gap, acc.first, acc.second / static_cast<double>(acc.first)});
  return cmp;
}

PipelineResult run_pipeline(const CorpusManifest& manifest, const PipelineConfig& cfg) {
  PipelineResult result;
  result.speech.layout = feature_layout();
  result.glottal.layout = feature_layout();

  for (const CorpusEntry& entry : manifest.entries) {
    try {
      const Waveform speech = read_wav(entry.file_path);
      const PitchTrack track = estimate_pitch(speech, pitch_frame_spec(speech.sample_rate),
                                              cfg.pitch_fmin_hz, cfg.pitch_fmax_hz);
      const FrameSpec iaif_frames = cfg.iaif.frame_spec(speech.sample_rate);
      const std::vector<bool> voicing = voicing_mask_for(track, speech.size(), iaif_frames);
      GlottalResult glottal = iaif_utterance(speech, cfg.iaif, voicing);
      // unit-span scaling first, then mean removal: the estimate's absolute
      // gain is an artifact of the per-utterance filter fits
      glottal.glottal = prep_for_analysis(glottal);
      const Waveform glottal_centered = prep_for_features(glottal);

      UtteranceMeta meta;
      meta.utterance_id = entry.utterance_id;
      meta.speaker_id = entry.speaker_id;
      meta.state = entry.state;

      meta.source = "speech";
      result.speech.meta.push_back(meta);
      result.speech.rows.push_back(extract_feature_vector(speech, speech.sample_rate).values);

      meta.source = "glottal";
      result.glottal.meta.push_back(meta);
      result.glottal.rows.push_back(
          extract_feature_vector(glottal_centered, speech.sample_rate).values);
    } catch (const std::exception& e) {
      result.failures.push_back(entry.file_path + ": " + e.what());
    }
  }
  return result;
}

void write_pairwise_csv(const std::string& path, const PairwiseReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(ErrorCode::io_failure, "cannot open for writing: " + path);
  out << "state_a,state_b,accuracy_speech,accuracy_glottal,difference\n";
  for (const PairwiseRow& row : report.rows) {
    out << to_code(row.state_a) << "," << to_code(row.state_b) << ","
        << format_double(row.accuracy_speech) << "," << format_double(row.accuracy_glottal) << ","
        << format_double(row.difference) << "\n";
  }
}

PairwiseReport read_pairwise_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io_failure, "cannot open for reading: " + path);
  PairwiseReport report;
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::io_failure, "empty pairwise csv: " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 5) raise(ErrorCode::io_failure, "pairwise csv row width mismatch");
    PairwiseRow row;
    row.state_a = state_from_code(f[0]);
    row.state_b = state_from_code(f[1]);
    row.accuracy_speech = parse_double(f[2]);
    row.accuracy_glottal = parse_double(f[3]);
    row.difference = parse_double(f[4]);
    report.rows.push_back(row);
  }
  return report;
}

namespace {

nlohmann::json node_json(const HierarchyNode& node, bool with_candidates) {
  nlohmann::json j;
  nlohmann::json left = nlohmann::json::array(), right = nlohmann::json::array();
  for (EmotionState s : node.split.left) left.push_back(to_code(s));
  for (EmotionState s : node.split.right) right.push_back(to_code(s));
  j["left"] = left;
  j["right"] = right;
  j["accuracy_speech"] = node.eval.accuracy_speech;
  j["accuracy_glottal"] = node.eval.accuracy_glottal;
  if (with_candidates) {
    nlohmann::json cands = nlohmann::json::array();
    for (const EvaluatedSplit& es : node.candidates) {
      nlohmann::json c;
      c["split"] = es.split.key();
      c["accuracy_speech"] = es.eval.accuracy_speech;
      c["accuracy_glottal"] = es.eval.accuracy_glottal;
      cands.push_back(c);
    }
    j["candidates"] = cands;
  }
  return j;
}

}  // namespace

void write_tree_json(const std::string& path, const HierarchyTree& tree) {
  nlohmann::json j;
  j["top"] = node_json(tree.top, true);
  j["second_left"] = node_json(tree.second_left, true);
  j["second_right"] = node_json(tree.second_right, true);
  nlohmann::json bottom = nlohmann::json::array();
  for (const HierarchyNode& leaf : tree.bottom) bottom.push_back(node_json(leaf, false));
  j["bottom"] = bottom;
  write_text_file(path, j.dump(2) + "\n");
}

std::string comparison_markdown(const SourceComparison& cmp) {
  std::ostringstream out;
  out << "# Source comparison\n\n";
  out << "mean difference (speech - glottal): " << format_double(cmp.mean_difference) << "\n\n";
  out << "max difference: " << to_code(cmp.max_difference.state_a) << " vs "
      << to_code(cmp.max_difference.state_b) << " = " << format_double(cmp.max_difference.difference)
      << "\n";
  out << "min difference: " << to_code(cmp.min_difference.state_a) << " vs "
      << to_code(cmp.min_difference.state_b) << " = " << format_double(cmp.min_difference.difference)
      << "\n\n";
  out << "| arousal gap | pairs | mean difference |\n|---|---|---|\n";
  for (const GapGroup& g : cmp.by_arousal_gap)
    out << "| " << g.gap << " | " << g.n_pairs << " | " << format_double(g.mean_difference)
        << " |\n";
  out << "\n| valence gap | pairs | mean difference |\n|---|---|---|\n";
  for (const GapGroup& g : cmp.by_valence_gap)
    out << "| " << g.gap << " | " << g.n_pairs << " | " << format_double(g.mean_difference)
        << " |\n";
  return out.str();
}

void write_provenance(const std::string& path, const std::string& config_json, std::uint64_t seed,
                      const std::vector<std::pair<std::string, std::string>>& output_files) {
  nlohmann::json j;
  j["seed"] = seed;
  j["config"] = nlohmann::json::parse(config_json.empty() ? "{}" : config_json);
  nlohmann::json hashes;
  for (const auto& [name, file] : output_files) {
    std::ostringstream hex;
    hex << std::hex << hash_file(file);
    hashes[name] = hex.str();
  }
  j["content_hashes"] = hashes;
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace glotkit
