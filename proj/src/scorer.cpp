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

#include "revgen/scorer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include <json.hpp>

#include "revgen/error.hpp"
#include "revgen/text_metrics.hpp"

namespace revgen {
namespace {

using nlohmann::json;

std::vector<std::vector<std::string>> corpus_documents(const CorpusIndex& index, const SentenceSource& source) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(index.size());
  for (const auto& paper : index.papers()) {
    auto tokens = tokenize(paper.title + " " + paper.abstract);
    for (const auto& s : scoring_sentences(paper, source)) {
      auto more = tokenize(s);
      tokens.insert(tokens.end(), more.begin(), more.end());
    }
    docs.push_back(std::move(tokens));
  }
  return docs;
}

bool contains_digit(std::string_view text) {
  return std::any_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

Featurizer::Featurizer(const CorpusIndex& index, SentenceSource source)
    : index_(&index), source_(source), idf_(corpus_documents(index, source)) {}

std::vector<SentenceFeatures> Featurizer::featurize_paper(std::string_view pmid) const {
  const auto& paper = index_->at(pmid);
  const auto sentences = scoring_sentences(paper, source_);
  const std::vector<std::string> abstract_ref{strip_citation_markers(paper.abstract)};
  const std::vector<std::string> title_ref{paper.title};

  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(sentences.size());
  std::size_t max_tokens = 0;
  for (const auto& s : sentences) {
    tokens.push_back(tokenize(s));
    max_tokens = std::max(max_tokens, tokens.back().size());
  }

  std::vector<SentenceFeatures> out(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto& f = out[i];
    f.relative_position = sentences.size() > 1 ? static_cast<double>(i) / static_cast<double>(sentences.size() - 1) : 0.0;
    f.relative_length = max_tokens > 0 ? static_cast<double>(tokens[i].size()) / static_cast<double>(max_tokens) : 0.0;
    f.abstract_rouge = rouge_combined(abstract_ref, sentences[i]);
    f.title_rouge = rouge_combined(title_ref, sentences[i]);
    double idf_sum = 0.0;
    for (const auto& t : tokens[i]) idf_sum += idf_.idf(t);
    f.mean_tfidf = tokens[i].empty() ? 0.0 : idf_sum / static_cast<double>(tokens[i].size());
    f.has_number = contains_digit(strip_citation_markers(sentences[i])) ? 1.0 : 0.0;
  }
  return out;
}

SentenceFeatures Featurizer::featurize(std::string_view pmid, std::size_t sentence_index) const {
  auto all = featurize_paper(pmid);
  if (sentence_index >= all.size()) {
    throw_invalid_argument("sentence index " + std::to_string(sentence_index) + " out of range for paper " +
                           std::string(pmid) + " with " + std::to_string(all.size()) + " sentences");
  }
  return all[sentence_index];
}

SentenceFeatures featurize(const CorpusIndex& index, std::string_view pmid, std::size_t sentence_index) {
  return Featurizer(index).featurize(pmid, sentence_index);
}

double ScorerModel::predict(const SentenceFeatures& features) const {
  const auto x = features.values();
  double y = bias;
  for (std::size_t j = 0; j < kFeatureCount; ++j) y += weights[j] * x[j];
  return y;
}

ScorerModel train_baseline(std::span<const LabeledBlock> blocks, const Featurizer& featurizer,
                           const TrainOptions& options) {
  if (blocks.empty()) throw_invalid_argument("cannot train on an empty block list");
  if (!(options.learning_rate > 0.0)) throw_invalid_argument("learning rate must be positive");
  if (options.epochs < 0) throw_invalid_argument("epochs must be non-negative");

  std::map<std::string, std::vector<SentenceFeatures>, std::less<>> cache;
  std::vector<std::array<double, kFeatureCount>> rows;
  std::vector<double> targets;
  for (const auto& block : blocks) {
    auto it = cache.find(block.pmid);
    if (it == cache.end()) it = cache.emplace(block.pmid, featurizer.featurize_paper(block.pmid)).first;
    if (block.start + block.targets.size() > it->second.size()) {
      throw_invalid_argument("block of " + block.pmid + " starting at " + std::to_string(block.start) +
                             " exceeds the paper's sentence count");
    }
    for (std::size_t i = 0; i < block.targets.size(); ++i) {
      rows.push_back(it->second[block.start + i].values());
      targets.push_back(block.targets[i]);
    }
  }
  if (rows.empty()) throw_invalid_argument("blocks hold no sentences");

  const double n = static_cast<double>(rows.size());
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> scale{};
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) mean[j] += r[j] / n;
  }
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) scale[j] += (r[j] - mean[j]) * (r[j] - mean[j]) / n;
  }
  for (auto& s : scale) s = std::sqrt(s);
  for (auto& r : rows) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) r[j] = scale[j] > 1e-12 ? (r[j] - mean[j]) / scale[j] : 0.0;
  }

  std::mt19937_64 rng(options.seed);
  std::array<double, kFeatureCount> theta{};
  for (auto& t : theta) t = (unit_double(rng()) - 0.5) * 0.02;
  double beta = 0.0;

  ScorerModel model;
  std::vector<double> residual(rows.size());
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::array<double, kFeatureCount> grad{};
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double y = beta;
      for (std::size_t j = 0; j < kFeatureCount; ++j) y += theta[j] * rows[i][j];
      residual[i] = y - targets[i];
      grad_bias += residual[i];
      for (std::size_t j = 0; j < kFeatureCount; ++j) grad[j] += residual[i] * rows[i][j];
    }
    beta -= options.learning_rate * 2.0 * grad_bias / n;
    for (std::size_t j = 0; j < kFeatureCount; ++j) theta[j] -= options.learning_rate * 2.0 * grad[j] / n;

    double loss = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double y = beta;
      for (std::size_t j = 0; j < kFeatureCount; ++j) y += theta[j] * rows[i][j];
      loss += (y - targets[i]) * (y - targets[i]);
    }
    model.training_log.emplace_back(epoch, loss / n);
  }

  model.bias = beta;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    model.weights[j] = scale[j] > 1e-12 ? theta[j] / scale[j] : 0.0;
    model.bias -= model.weights[j] * mean[j];
  }
  return model;
}

void save_model(const ScorerModel& model, std::ostream& out) {
  out << json{{"weights", model.weights}, {"bias", model.bias}, {"feature_version", kFeatureVersion}}.dump() << '\n';
}

ScorerModel load_model(std::istream& in) {
  try {
    const json j = json::parse(in);
    if (j.at("feature_version").get<int>() != kFeatureVersion) {
      throw std::invalid_argument("feature_version " + j.at("feature_version").dump() + " is not supported");
    }
    ScorerModel model;
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    if (model.weights.size() != kFeatureCount) throw std::invalid_argument("expected 6 weights");
    if (!std::isfinite(model.bias) ||
        !std::all_of(model.weights.begin(), model.weights.end(), [](double w) { return std::isfinite(w); })) {
      throw std::invalid_argument("model parameters must be finite");
    }
    return model;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid model file: ") + e.what());
  }
}

std::vector<double> LinearScorer::score(const SentenceBlock& block) {
  const auto features = featurizer_->featurize_paper(block.pmid);
  if (block.start + block.sentences.size() > features.size()) {
    throw_invalid_argument("block exceeds the sentence count of " + block.pmid);
  }
  std::vector<double> out;
  out.reserve(block.sentences.size());
  for (std::size_t i = 0; i < block.sentences.size(); ++i) out.push_back(model_.predict(features[block.start + i]));
  return out;
}

std::vector<double> OracleScorer::score(const SentenceBlock& block) {
  const auto targets = compute_targets(*index_, block.pmid, options_);
  std::vector<double> out(block.sentences.size(), 0.0);
  if (!targets) return out;
  for (std::size_t i = 0; i < out.size() && block.start + i < targets->size(); ++i) out[i] = (*targets)[block.start + i];
  return out;
}

std::vector<double> RandomScorer::score(const SentenceBlock& block) {
  std::vector<double> out;
  const std::uint64_t paper_hash = fnv1a(block.pmid);
  for (std::size_t i = 0; i < block.sentences.size(); ++i) {
    out.push_back(unit_double(splitmix64(seed_ ^ splitmix64(paper_hash + block.start + i))));
  }
  return out;
}

std::vector<std::vector<double>> score_blocks(SentenceScorer& scorer, std::span<const SentenceBlock> blocks) {
  std::vector<std::vector<double>> out;
  out.reserve(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    const std::string label =
        "block " + std::to_string(b) + " (pmid " + block.pmid + ", start " + std::to_string(block.start) + ")";
    if (block.sentences.empty()) throw_invalid_argument(label + " is empty");
    std::vector<double> scores;
    try {
      scores = scorer.score(block);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kBackend, label + ": " + e.what());
    }
    if (scores.size() != block.sentences.size()) {
      throw Error(ErrorCode::kBackend, label + ": expected " + std::to_string(block.sentences.size()) +
                                           " scores, got " + std::to_string(scores.size()));
    }
    if (!std::all_of(scores.begin(), scores.end(), [](double s) { return std::isfinite(s); })) {
      throw Error(ErrorCode::kBackend, label + ": non-finite score");
    }
    out.push_back(std::move(scores));
  }
  return out;
}

std::optional<Aggregation> parse_aggregation(std::string_view name) {
  if (name == "mean") return Aggregation::kMean;
  if (name == "max") return Aggregation::kMax;
  return std::nullopt;
}

std::vector<double> aggregate_scores(std::span<const std::vector<double>> block_scores,
                                     std::span<const BlockRange> blocks, std::size_t sentence_count,
                                     Aggregation mode) {
  if (block_scores.size() != blocks.size()) throw_invalid_argument("block score and range counts differ");
  // Per-sentence values are sorted before summing.
  std::vector<std::vector<double>> values(sentence_count);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (block_scores[b].size() != blocks[b].length) throw_invalid_argument("block score length mismatch");
    if (blocks[b].end() > sentence_count) throw_invalid_argument("block range exceeds sentence count");
    for (std::size_t i = 0; i < blocks[b].length; ++i) values[blocks[b].start + i].push_back(block_scores[b][i]);
  }
  std::vector<double> out(sentence_count);
  for (std::size_t s = 0; s < sentence_count; ++s) {
    auto& v = values[s];
    if (v.empty()) throw Error(ErrorCode::kInternal, "sentence " + std::to_string(s) + " not covered by any block");
    std::sort(v.begin(), v.end());
    if (mode == Aggregation::kMax) {
      out[s] = v.back();
    } else {
      double sum = 0.0;
      for (const double x : v) sum += x;
      out[s] = sum / static_cast<double>(v.size());
    }
  }
  return out;
}

std::vector<double> score_paper(SentenceScorer& scorer, const PaperRecord& paper, const ScoringOptions& options) {
  const auto sentences = scoring_sentences(paper, options.source);
  const auto ranges = make_blocks(sentences.size(), options.block_size, options.intersection);
  std::vector<SentenceBlock> blocks;
  blocks.reserve(ranges.size());
  for (const auto& r : ranges) {
    blocks.push_back({paper.pmid, r.start,
                      {sentences.begin() + static_cast<std::ptrdiff_t>(r.start),
                       sentences.begin() + static_cast<std::ptrdiff_t>(r.end())}});
  }
  const auto scores = score_blocks(scorer, blocks);
  return aggregate_scores(scores, ranges, sentences.size(), options.aggregation);
}

}  // namespace revgen
