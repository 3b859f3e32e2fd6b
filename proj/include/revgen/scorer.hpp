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

// Sentence review-worthiness scoring: explicit features, a linear baseline
// trained by full-batch gradient descent on the MSE loss, scorer backends,
// and reconciliation of overlapping block scores.

#ifndef REVGEN_SCORER_HPP_
#define REVGEN_SCORER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revgen/citation_graph.hpp"
#include "revgen/corpus.hpp"
#include "revgen/labels.hpp"

namespace revgen {

inline constexpr int kFeatureVersion = 1;
inline constexpr std::size_t kFeatureCount = 6;

struct SentenceFeatures {
  double relative_position = 0.0;  // i / (n - 1), 0 for single-sentence papers
  double relative_length = 0.0;    // tokens / max tokens in the paper
  double abstract_rouge = 0.0;     // rouge_combined({abstract}, sentence)
  double title_rouge = 0.0;        // rouge_combined({title}, sentence)
  double mean_tfidf = 0.0;         // mean corpus idf over the sentence's tokens
  double has_number = 0.0;         // 1 if the sentence contains a digit

  std::array<double, kFeatureCount> values() const {
    return {relative_position, relative_length, abstract_rouge, title_rouge, mean_tfidf, has_number};
  }
};

// Corpus-level state needed for features (the idf table). Immutable.
class Featurizer {
 public:
  explicit Featurizer(const CorpusIndex& index, SentenceSource source = {});

  const CorpusIndex& index() const { return *index_; }
  const SentenceSource& source() const { return source_; }

  std::vector<SentenceFeatures> featurize_paper(std::string_view pmid) const;
  // Throws Error(kInvalidArgument) when the sentence index is out of range.
  SentenceFeatures featurize(std::string_view pmid, std::size_t sentence_index) const;

 private:
  const CorpusIndex* index_;
  SentenceSource source_;
  TfIdfModel idf_;
};

SentenceFeatures featurize(const CorpusIndex& index, std::string_view pmid, std::size_t sentence_index);

struct ScorerModel {
  std::vector<double> weights = std::vector<double>(kFeatureCount, 0.0);
  double bias = 0.0;
  std::vector<std::pair<int, double>> training_log;  // (epoch, mse)

  double predict(const SentenceFeatures& features) const;
};

struct TrainOptions {
  int epochs = 3000;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
};

// Full-batch gradient descent on mse(w.x + b, R) over every block sentence.
// Features are standardized internally and folded back into raw-space
// weights on return. Throws on empty input or a non-positive learning rate.
ScorerModel train_baseline(std::span<const LabeledBlock> blocks, const Featurizer& featurizer,
                           const TrainOptions& options = {});

void save_model(const ScorerModel& model, std::ostream& out);
// Throws Error(kParse) on malformed JSON or a feature_version mismatch.
ScorerModel load_model(std::istream& in);

struct SentenceBlock {
  std::string pmid;
  std::size_t start = 0;
  std::vector<std::string> sentences;
};

class SentenceScorer {
 public:
  virtual ~SentenceScorer() = default;
  // One score per sentence of the block.
  virtual std::vector<double> score(const SentenceBlock& block) = 0;
};

// w.features + b on the baseline model.
class LinearScorer final : public SentenceScorer {
 public:
  LinearScorer(ScorerModel model, const Featurizer& featurizer) : model_(std::move(model)), featurizer_(&featurizer) {}
  std::vector<double> score(const SentenceBlock& block) override;

 private:
  ScorerModel model_;
  const Featurizer* featurizer_;
};

// Scores are the true targets computed from every citing review.
// Papers without contexts score 0.
class OracleScorer final : public SentenceScorer {
 public:
  OracleScorer(const CorpusIndex& index, LabelOptions options) : index_(&index), options_(std::move(options)) {}
  std::vector<double> score(const SentenceBlock& block) override;

 private:
  const CorpusIndex* index_;
  LabelOptions options_;
};

// Uniform [0, 1) scores, a pure function of (seed, pmid, sentence index).
class RandomScorer final : public SentenceScorer {
 public:
  explicit RandomScorer(std::uint64_t seed) : seed_(seed) {}
  std::vector<double> score(const SentenceBlock& block) override;

 private:
  std::uint64_t seed_;
};

// Child process speaking the line-delimited JSON scorer protocol on its
// stdin/stdout. The session dies on the first malformed line.
class ExternalScorer final : public SentenceScorer {
 public:
  // Runs `command` through /bin/sh and reads the handshake.
  explicit ExternalScorer(const std::string& command);
  ~ExternalScorer() override;
  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  std::size_t max_block() const { return max_block_; }
  std::vector<double> score(const SentenceBlock& block) override;

 private:
  std::string read_line();
  void write_line(const std::string& line);
  [[noreturn]] void fail(const std::string& message);
  void shutdown();

  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::size_t max_block_ = 0;
  std::int64_t next_id_ = 0;
  bool alive_ = false;
};

// Scores each block; failures are rethrown as Error(kBackend) naming the
// block. Every result is checked for length and finiteness.
std::vector<std::vector<double>> score_blocks(SentenceScorer& scorer, std::span<const SentenceBlock> blocks);

enum class Aggregation { kMean, kMax };

std::optional<Aggregation> parse_aggregation(std::string_view name);

// Y_i = mean (or max) of all block scores covering sentence i. Throws
// Error(kInternal) if a sentence is not covered.
std::vector<double> aggregate_scores(std::span<const std::vector<double>> block_scores,
                                     std::span<const BlockRange> blocks, std::size_t sentence_count,
                                     Aggregation mode = Aggregation::kMean);

struct ScoringOptions {
  std::size_t block_size = 10;
  std::size_t intersection = 5;
  Aggregation aggregation = Aggregation::kMean;
  SentenceSource source;
};

// Blocks the paper's scoring sentences, scores every block and aggregates.
std::vector<double> score_paper(SentenceScorer& scorer, const PaperRecord& paper, const ScoringOptions& options);

}  // namespace revgen

#endif  // REVGEN_SCORER_HPP_
