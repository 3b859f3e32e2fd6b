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

// Query search, pairwise citation similarities, the hybrid similarity graph
// and Louvain topic detection.

#ifndef REVGEN_CITATION_GRAPH_HPP_
#define REVGEN_CITATION_GRAPH_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revgen/corpus.hpp"
#include "revgen/error.hpp"

namespace revgen {

enum class RankBy { kCited, kRecent, kRelevant };

std::optional<RankBy> parse_rank_by(std::string_view name);

// Papers whose title+abstract contain every query token, ranked by the
// primary key and then by (citations desc, year desc, pmid asc).
// Throws Error(kInvalidArgument) for a query without tokens or limit < 1.
std::vector<std::string> search_papers(const CorpusIndex& index, std::string_view query, RankBy rank_by,
                                       std::size_t limit);

// Dense symmetric matrix over an ordered candidate list.
template <typename T>
class PairMatrix {
 public:
  PairMatrix() = default;
  explicit PairMatrix(std::vector<std::string> ids)
      : ids_(std::move(ids)), values_(ids_.size() * ids_.size(), T{}) {}

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }

  T operator()(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }
  void set(std::size_t i, std::size_t j, T value) {
    values_[i * ids_.size() + j] = value;
    values_[j * ids_.size() + i] = value;
  }

  // Value for a pair of pmids; throws for pmids not in the candidate list.
  T at(std::string_view a, std::string_view b) const { return (*this)(position(a), position(b)); }

  std::size_t position(std::string_view id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) throw_invalid_argument("not a candidate: " + std::string(id));
    return static_cast<std::size_t>(it - ids_.begin());
  }

  T max_off_diagonal() const {
    T best{};
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      for (std::size_t j = i + 1; j < ids_.size(); ++j) best = std::max(best, (*this)(i, j));
    }
    return best;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<T> values_;
};

using PairCounts = PairMatrix<std::size_t>;
using PairSimilarities = PairMatrix<double>;

// Candidates are deduplicated and sorted; pmids outside the corpus throw
// Error(kInvalidArgument). Diagonal entries stay zero.
std::vector<std::string> normalize_candidates(const CorpusIndex& index, std::span<const std::string> candidates);

// count(p, q) = number of distinct corpus papers citing both p and q.
PairCounts cocitation_counts(const CorpusIndex& index, std::span<const std::string> candidates);

// count(p, q) = |cited(p) ∩ cited(q)|, including citations outside the corpus.
PairCounts bibliographic_coupling(const CorpusIndex& index, std::span<const std::string> candidates);

// Sparse TF-IDF over a document collection with idf(t) = ln((1+N)/(1+df)) + 1.
class TfIdfModel {
 public:
  using Vector = std::map<std::string, double>;  // term -> weight, unit length

  explicit TfIdfModel(std::span<const std::vector<std::string>> documents);

  double idf(const std::string& term) const;
  std::size_t document_count() const { return document_count_; }
  Vector vectorize(std::span<const std::string> tokens) const;

  static double cosine(const Vector& a, const Vector& b);

 private:
  std::size_t document_count_ = 0;
  std::map<std::string, std::size_t> document_frequency_;
};

// Title + abstract tokens of a paper.
std::vector<std::string> paper_text_tokens(const PaperRecord& paper);

// Cosine of TF-IDF vectors fitted on the candidates' title+abstract text.
// Requires at least two candidates.
PairSimilarities tfidf_cosine(const CorpusIndex& index, std::span<const std::string> candidates);

struct HybridWeights {
  double citation = 1.0;
  double cocitation = 1.0;
  double coupling = 1.0;
  double text = 1.0;
};

struct SimilarityEdge {
  std::string source;  // source < target
  std::string target;
  double weight = 0.0;
  int citation = 0;
  std::size_t cocitation = 0;
  std::size_t coupling = 0;
  double text = 0.0;
};

struct SimilarityGraph {
  std::vector<std::string> nodes;  // sorted
  std::vector<SimilarityEdge> edges;  // sorted by (source, target)
  HybridWeights weights;
};

// weight = w_cit*citation + w_cocit*cocit/max_cocit + w_coup*coup/max_coup + w_text*text.
// Edges exist only where the weight is positive.
SimilarityGraph build_similarity_graph(const CorpusIndex& index, std::span<const std::string> candidates,
                                       const HybridWeights& weights = {});

struct TopicPartition {
  std::map<std::string, int> assignment;  // pmid -> dense topic id
  double modularity = 0.0;
  std::vector<double> level_modularity;  // after each aggregation level
  int topic_count() const;
};

// Newman modularity with resolution gamma of a node -> community assignment.
double modularity(const SimilarityGraph& graph, const std::map<std::string, int>& assignment,
                  double resolution = 1.0);

// Louvain: repeated local moving over a seeded node order followed by
// community aggregation until no move improves modularity.
// Throws Error(kInvalidArgument) on an empty graph.
TopicPartition detect_topics(const SimilarityGraph& graph, double resolution = 1.0, std::uint64_t seed = 0);

std::vector<std::string> select_key_papers(std::span<const std::string> ranked, std::size_t k);

void write_graph_tsv(const SimilarityGraph& graph, std::ostream& out);
void write_partition_tsv(const TopicPartition& partition, std::ostream& out);

}  // namespace revgen

#endif  // REVGEN_CITATION_GRAPH_HPP_
