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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "glotkit/analysis.hpp"
#include "glotkit/classify.hpp"
#include "glotkit/corpus.hpp"
#include "glotkit/error.hpp"
#include "glotkit/experiment.hpp"
#include "glotkit/features.hpp"
#include "glotkit/io.hpp"
#include "glotkit/wav.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPartialFailure = 1;
constexpr int kExitConfigError = 2;

struct ToolConfig {
  glotkit::CorpusConfig corpus;
  glotkit::PipelineConfig pipeline;
  glotkit::SvmConfig svm;
  glotkit::SelectionCriterion criterion = glotkit::SelectionCriterion::speech;
  std::size_t n_cycles = 4;
  std::size_t n_points = 200;
  std::size_t rank_bins = 40;
  std::size_t rank_top = 25;
  json raw = json::object();
};

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ToolConfig load_config(const std::string& path) {
  ToolConfig cfg;
  if (path.empty()) return cfg;
  const std::string text = glotkit::read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    glotkit::raise(glotkit::ErrorCode::invalid_argument, "config is not valid JSON: " + path);
  cfg.raw = j;
  if (j.contains("corpus")) {
    const json& c = j["corpus"];
    maybe(c, "n_speakers", cfg.corpus.n_speakers);
    maybe(c, "n_per_state_per_speaker", cfg.corpus.n_per_state_per_speaker);
    maybe(c, "fs", cfg.corpus.fs);
    maybe(c, "duration_s", cfg.corpus.duration_s);
  }
  if (j.contains("iaif")) {
    const json& c = j["iaif"];
    maybe(c, "alpha", cfg.pipeline.iaif.alpha);
    maybe(c, "t1", cfg.pipeline.iaif.t1);
    maybe(c, "g2", cfg.pipeline.iaif.g2);
    maybe(c, "t2", cfg.pipeline.iaif.t2);
    maybe(c, "frame_len_ms", cfg.pipeline.iaif.frame_len_ms);
    maybe(c, "hop_ms", cfg.pipeline.iaif.hop_ms);
    maybe(c, "rho", cfg.pipeline.iaif.rho);
  }
  if (j.contains("pitch")) {
    const json& c = j["pitch"];
    maybe(c, "fmin_hz", cfg.pipeline.pitch_fmin_hz);
    maybe(c, "fmax_hz", cfg.pipeline.pitch_fmax_hz);
  }
  if (j.contains("svm")) {
    const json& c = j["svm"];
    maybe(c, "c", cfg.svm.c);
    maybe(c, "degree", cfg.svm.degree);
    maybe(c, "coef0", cfg.svm.coef0);
    maybe(c, "tol", cfg.svm.tol);
    maybe(c, "max_passes", cfg.svm.max_passes);
  }
  if (j.contains("hierarchy")) {
    std::string criterion = "speech";
    maybe(j["hierarchy"], "criterion", criterion);
    if (criterion == "speech")
      cfg.criterion = glotkit::SelectionCriterion::speech;
    else if (criterion == "glottal")
      cfg.criterion = glotkit::SelectionCriterion::glottal;
    else if (criterion == "mean")
      cfg.criterion = glotkit::SelectionCriterion::mean;
    else
      glotkit::raise(glotkit::ErrorCode::invalid_argument,
                     "unknown hierarchy criterion: " + criterion);
  }
  if (j.contains("analysis")) {
    maybe(j["analysis"], "n_cycles", cfg.n_cycles);
    maybe(j["analysis"], "n_points", cfg.n_points);
  }
  if (j.contains("rank")) {
    maybe(j["rank"], "n_bins", cfg.rank_bins);
    maybe(j["rank"], "top", cfg.rank_top);
  }
  return cfg;
}

glotkit::PairTask parse_pair(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    glotkit::raise(glotkit::ErrorCode::invalid_argument,
                   "pair must look like A:B with state codes, e.g. N:I-A");
  glotkit::PairTask pair;
  pair.state_a = glotkit::state_from_code(text.substr(0, colon));
  pair.state_b = glotkit::state_from_code(text.substr(colon + 1));
  if (static_cast<int>(pair.state_a) > static_cast<int>(pair.state_b))
    std::swap(pair.state_a, pair.state_b);
  return pair;
}

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out.empty() ? "." : out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) glotkit::raise(glotkit::ErrorCode::io_failure, "cannot create output directory: " + out);
  return dir;
}

int cmd_synth(const ToolConfig& cfg_in, std::uint64_t seed, const std::string& out) {
  glotkit::CorpusConfig corpus = cfg_in.corpus;
  corpus.seed = seed;
  corpus.out_dir = ensure_out_dir(out).string();
  const glotkit::CorpusManifest manifest = glotkit::generate_corpus(corpus);
  std::cout << "wrote " << manifest.entries.size() << " utterances and manifest.jsonl to "
            << corpus.out_dir << "\n";
  return kExitOk;
}

int cmd_extract(const ToolConfig& cfg, std::uint64_t seed, const std::string& out,
                const std::string& manifest_path, const std::string& source) {
  const auto dir = ensure_out_dir(out);
  const glotkit::CorpusManifest manifest = glotkit::read_manifest(manifest_path);
  const glotkit::PipelineResult result = glotkit::run_pipeline(manifest, cfg.pipeline);

  std::vector<std::pair<std::string, std::string>> outputs;
  if (source == "speech" || source == "both") {
    const std::string path = (dir / "features_speech.csv").string();
    glotkit::write_feature_csv(path, result.speech);
    outputs.emplace_back("features_speech", path);
    std::cout << "features_speech.csv: " << result.speech.n_rows() << " rows\n";
  }
  if (source == "glottal" || source == "both") {
    const std::string path = (dir / "features_glottal.csv").string();
    glotkit::write_feature_csv(path, result.glottal);
    outputs.emplace_back("features_glottal", path);
    std::cout << "features_glottal.csv: " << result.glottal.n_rows() << " rows\n";
  }
  glotkit::write_provenance((dir / "provenance.json").string(), cfg.raw.dump(), seed, outputs);

  for (const std::string& failure : result.failures) std::cerr << "failed: " << failure << "\n";
  return result.failures.empty() ? kExitOk : kExitPartialFailure;
}

int cmd_analyze(const ToolConfig& cfg, const std::string& out, const std::string& manifest_path) {
  const auto dir = ensure_out_dir(out);
  const glotkit::CorpusManifest manifest = glotkit::read_manifest(manifest_path);
  std::vector<std::pair<std::string, glotkit::SpectralMarkers>> marker_rows;
  std::size_t failures = 0;
  for (const glotkit::CorpusEntry& entry : manifest.entries) {
    try {
      const glotkit::Waveform speech = glotkit::read_wav(entry.file_path);
      const glotkit::PitchTrack track =
          glotkit::estimate_pitch(speech, glotkit::pitch_frame_spec(speech.sample_rate),
                                  cfg.pipeline.pitch_fmin_hz, cfg.pipeline.pitch_fmax_hz);
      const glotkit::FrameSpec frames = cfg.pipeline.iaif.frame_spec(speech.sample_rate);
      const auto mask = glotkit::voicing_mask_for(track, speech.size(), frames);
      const glotkit::GlottalResult glottal =
          glotkit::iaif_utterance(speech, cfg.pipeline.iaif, mask);
      const glotkit::Waveform scaled = glotkit::prep_for_analysis(glottal);

      const glotkit::CycleOverlay overlay =
          glotkit::extract_cycles(scaled, track, cfg.n_cycles, cfg.n_points);
      glotkit::write_overlay_csv((dir / ("overlay_" + entry.utterance_id + ".csv")).string(),
                                 overlay);
      marker_rows.emplace_back(entry.utterance_id,
                               glotkit::spectral_markers(scaled, speech.sample_rate, track));
    } catch (const std::exception& e) {
      std::cerr << "failed: " << entry.file_path << ": " << e.what() << "\n";
      ++failures;
    }
  }
  glotkit::write_markers_csv((dir / "markers.csv").string(), marker_rows);
  std::cout << "markers.csv: " << marker_rows.size() << " rows, overlays written to " << dir
            << "\n";
  return failures == 0 ? kExitOk : kExitPartialFailure;
}

int cmd_rank(const ToolConfig& cfg, const std::string& out, const std::string& features_path,
             const std::string& pair_text) {
  const auto dir = ensure_out_dir(out);
  const glotkit::FeatureMatrix matrix = glotkit::read_feature_csv(features_path);
  const glotkit::PairTask pair = parse_pair(pair_text);
  const auto ranked = glotkit::rank_features(matrix, pair, cfg.rank_bins);

  const std::string path = (dir / "rank.csv").string();
  std::ofstream file(path, std::ios::trunc);
  file << "rank,feature_index,feature_name,accuracy\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    file << i + 1 << "," << ranked[i].feature_index << ","
         << matrix.layout[ranked[i].feature_index] << ","
         << glotkit::format_double(ranked[i].accuracy) << "\n";
  }
  std::cout << "top features for " << glotkit::to_code(pair.state_a) << " vs "
            << glotkit::to_code(pair.state_b) << ":\n";
  for (std::size_t i = 0; i < std::min(cfg.rank_top, ranked.size()); ++i) {
    std::cout << "  " << i + 1 << ". " << matrix.layout[ranked[i].feature_index] << "  "
              << glotkit::format_double(ranked[i].accuracy) << "\n";
  }
  std::cout << "full ranking written to " << path << "\n";
  return kExitOk;
}

int cmd_pairwise(const ToolConfig& cfg, std::uint64_t seed, const std::string& out,
                 const std::string& speech_path, const std::string& glottal_path) {
  const auto dir = ensure_out_dir(out);
  const glotkit::FeatureMatrix speech = glotkit::read_feature_csv(speech_path);
  const glotkit::FeatureMatrix glottal = glotkit::read_feature_csv(glottal_path);
  const glotkit::PairwiseReport report = glotkit::pairwise_matrix(speech, glottal, cfg.svm);
  const std::string path = (dir / "pairwise.csv").string();
  glotkit::write_pairwise_csv(path, report);
  glotkit::write_provenance((dir / "provenance.json").string(), cfg.raw.dump(), seed,
                            {{"pairwise", path}});
  for (const glotkit::PairwiseRow& row : report.rows) {
    std::cout << glotkit::to_code(row.state_a) << " vs " << glotkit::to_code(row.state_b)
              << ": speech " << glotkit::format_double(row.accuracy_speech) << ", glottal "
              << glotkit::format_double(row.accuracy_glottal) << ", difference "
              << glotkit::format_double(row.difference) << "\n";
  }
  std::cout << "report written to " << path << "\n";
  return kExitOk;
}

int cmd_hierarchy(const ToolConfig& cfg, std::uint64_t seed, const std::string& out,
                  const std::string& speech_path, const std::string& glottal_path) {
  const auto dir = ensure_out_dir(out);
  const glotkit::FeatureMatrix speech = glotkit::read_feature_csv(speech_path);
  const glotkit::FeatureMatrix glottal = glotkit::read_feature_csv(glottal_path);
  glotkit::HierarchyConfig hier_cfg;
  hier_cfg.svm = cfg.svm;
  hier_cfg.criterion = cfg.criterion;
  const glotkit::HierarchyTree tree = glotkit::build_hierarchy(speech, glottal, hier_cfg);

  const std::string tree_path = (dir / "tree.json").string();
  glotkit::write_tree_json(tree_path, tree);

  const glotkit::CascadeResult cascade_speech = glotkit::cascade_evaluate(tree, speech, cfg.svm);
  const glotkit::CascadeResult cascade_glottal = glotkit::cascade_evaluate(tree, glottal, cfg.svm);

  json cascade;
  cascade["accuracy_7class_speech"] = cascade_speech.accuracy;
  cascade["accuracy_7class_glottal"] = cascade_glottal.accuracy;
  auto confusion_json = [](const glotkit::ConfusionMatrix& m) {
    json j;
    j["labels"] = m.labels;
    j["counts"] = m.counts;
    return j;
  };
  cascade["confusion_speech"] = confusion_json(cascade_speech.confusion);
  cascade["confusion_glottal"] = confusion_json(cascade_glottal.confusion);
  const std::string cascade_path = (dir / "cascade.json").string();
  glotkit::write_text_file(cascade_path, cascade.dump(2) + "\n");
  glotkit::write_provenance((dir / "provenance.json").string(), cfg.raw.dump(), seed,
                            {{"tree", tree_path}, {"cascade", cascade_path}});

  std::cout << "selected top split: " << tree.top.split.key() << "\n";
  std::cout << "left second level:  " << tree.second_left.split.key() << "\n";
  std::cout << "right second level: " << tree.second_right.split.key() << "\n";
  std::cout << "7-class cascade accuracy: speech "
            << glotkit::format_double(cascade_speech.accuracy) << ", glottal "
            << glotkit::format_double(cascade_glottal.accuracy) << "\n";
  std::cout << "tree written to " << tree_path << "\n";
  return kExitOk;
}

int cmd_report(const std::string& out, const std::string& pairwise_path) {
  const auto dir = ensure_out_dir(out);
  const glotkit::PairwiseReport report = glotkit::read_pairwise_csv(pairwise_path);
  const glotkit::SourceComparison cmp = glotkit::compare_sources(report);
  const std::string md = glotkit::comparison_markdown(cmp);
  glotkit::write_text_file((dir / "comparison.md").string(), md);
  std::cout << md;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "glottal-waveform toolkit: corpus synthesis, inverse filtering, "
      "feature extraction and comparative emotion classification"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string source = "both";
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "master random seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--source", source, "feature source: speech, glottal or both")
      ->check(CLI::IsMember({"speech", "glottal", "both"}));

  auto* synth = app.add_subcommand("synth", "generate the synthetic corpus");

  auto* extract = app.add_subcommand("extract", "run the dual-source feature pipeline");
  std::string manifest_path;
  extract->add_option("--manifest", manifest_path, "corpus manifest (JSON lines)")->required();

  auto* analyze = app.add_subcommand("analyze", "write cycle overlays and spectral markers");
  std::string analyze_manifest;
  analyze->add_option("--manifest", analyze_manifest, "corpus manifest (JSON lines)")->required();

  auto* rank = app.add_subcommand("rank", "rank features for one emotion pair");
  std::string rank_features_path, pair_text;
  rank->add_option("--features", rank_features_path, "feature matrix CSV")->required();
  rank->add_option("--pair", pair_text, "emotion pair, e.g. N:I-A")->required();

  auto* pairwise = app.add_subcommand("pairwise", "21-pair comparative classification");
  std::string speech_path, glottal_path;
  pairwise->add_option("--speech", speech_path, "speech feature CSV")->required();
  pairwise->add_option("--glottal", glottal_path, "glottal feature CSV")->required();

  auto* hierarchy = app.add_subcommand("hierarchy", "performance-driven hierarchical classifier");
  std::string h_speech_path, h_glottal_path;
  hierarchy->add_option("--speech", h_speech_path, "speech feature CSV")->required();
  hierarchy->add_option("--glottal", h_glottal_path, "glottal feature CSV")->required();

  auto* report = app.add_subcommand("report", "group pairwise differences by affect distance");
  std::string report_pairwise_path;
  report->add_option("--pairwise", report_pairwise_path, "pairwise report CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    const ToolConfig cfg = load_config(config_path);
    if (synth->parsed()) return cmd_synth(cfg, seed, out);
    if (extract->parsed()) return cmd_extract(cfg, seed, out, manifest_path, source);
    if (analyze->parsed()) return cmd_analyze(cfg, out, analyze_manifest);
    if (rank->parsed()) return cmd_rank(cfg, out, rank_features_path, pair_text);
    if (pairwise->parsed()) return cmd_pairwise(cfg, seed, out, speech_path, glottal_path);
    if (hierarchy->parsed()) return cmd_hierarchy(cfg, seed, out, h_speech_path, h_glottal_path);
    if (report->parsed()) return cmd_report(out, report_pairwise_path);
  } catch (const std::exception& e) {
    // per-file failures are reported inside the commands with exit code 1;
    // anything reaching this point means the run could not be set up at all
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
