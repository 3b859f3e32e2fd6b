// Copyright 2026 The revgen Authors.
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

// Pipeline configuration, the on-disk workspace and the stage runners.
//
// Workspace layout:
//   workspace.lock
//   index/corpus.jsonl, index/ingest_report.jsonl
//   graph/search.tsv, graph/edges.tsv, graph/topics.tsv, graph/levels.tsv
//   labels/blocks.jsonl
//   models/model.json, models/training_log.tsv
//   reviews/review.{tsv,md,json}, reviews/annotation_report.md
//   bench/bench.tsv, bench/summary.tsv

#ifndef REVGEN_PIPELINE_HPP_
#define REVGEN_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revgen/citation_graph.hpp"
#include "revgen/corpus.hpp"
#include "revgen/eval.hpp"
#include "revgen/labels.hpp"
#include "revgen/review.hpp"
#include "revgen/scorer.hpp"

namespace revgen {

struct PipelineConfig {
  std::string corpus;
  CorpusFormat format = CorpusFormat::kJsonl;
  HybridWeights weights;
  std::size_t block_size = 10;
  std::size_t intersection = 5;
  std::size_t context_window = 0;
  std::string scorer = "baseline";  // baseline | oracle | random | external:<command>
  RankBy rank_by = RankBy::kCited;
  std::size_t k = 20;
  std::size_t per_paper = 1;
  std::uint64_t seed = 0;
  std::size_t search_limit = 200;
  double resolution = 1.0;
  int epochs = 3000;
  double learning_rate = 0.1;
  std::set<std::string> holdout;
  bool include_abstract = false;
  bool include_captions = false;
  Aggregation aggregation = Aggregation::kMean;
  ReviewFormat review_format = ReviewFormat::kTsv;

  SentenceSource source() const { return {include_abstract, include_captions}; }
  LabelOptions label_options() const { return {block_size, intersection, context_window, source()}; }
  ScoringOptions scoring_options() const { return {block_size, intersection, aggregation, source()}; }
};

// Every accepted key, in canonical order.
std::span<const std::string_view> config_keys();

// Throws Error(kInvalidConfig) for an unknown key or a malformed value.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const PipelineConfig& config, std::string_view key);

// "key = value" lines; '#' starts a comment; blank lines are ignored.
// Errors name the offending line.
PipelineConfig parse_config(std::istream& in);
// As parse_config; a relative corpus path is resolved against the file's
// directory.
PipelineConfig load_config(const std::filesystem::path& path);
std::string dump_config(const PipelineConfig& config);

// Cross-field invariants: block_size > intersection, k >= 1, per_paper >= 1,
// weights usable, epochs >= 1, learning_rate > 0, resolution > 0.
void validate_config(const PipelineConfig& config);

// A workspace directory held under an exclusive lock for the object's
// lifetime. Throws Error(kWorkspaceLocked) if another holder exists.
class Workspace {
 public:
  explicit Workspace(const std::filesystem::path& root);
  ~Workspace();
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(std::string_view relative) const { return root_ / relative; }

 private:
  std::filesystem::path root_;
  int lock_fd_ = -1;
};

struct StageResult {
  std::vector<std::string> artifacts;  // workspace-relative paths written
  std::vector<std::string> warnings;
  std::string output;                  // primary human-readable result
};

StageResult run_ingest(Workspace& ws, const PipelineConfig& config);
StageResult run_graph(Workspace& ws, const PipelineConfig& config, std::string_view query);
StageResult run_labels(Workspace& ws, const PipelineConfig& config);
StageResult run_train(Workspace& ws, const PipelineConfig& config);
StageResult run_review(Workspace& ws, const PipelineConfig& config, std::string_view query);
StageResult run_benchmark(Workspace& ws, const PipelineConfig& config, std::span<const std::size_t> n_values);
StageResult run_report(Workspace& ws, const PipelineConfig& config, const std::filesystem::path& annotations);

// Loads the ingested index; Error(kMissingArtifact) names the ingest stage.
CorpusIndex load_workspace_index(const Workspace& ws);

// Key papers for a query: search, similarity graph, topics.
struct QueryAnalysis {
  std::vector<std::string> ranked;
  SimilarityGraph graph;
  TopicPartition partition;
  std::vector<std::string> key_papers;
};

QueryAnalysis analyze_query(const CorpusIndex& index, const PipelineConfig& config, std::string_view query);

}  // namespace revgen

#endif  // REVGEN_PIPELINE_HPP_
