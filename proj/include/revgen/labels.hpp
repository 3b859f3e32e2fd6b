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

// Regression targets from review citation contexts, and the overlapping
// sentence blocks the scorer consumes.

#ifndef REVGEN_LABELS_HPP_
#define REVGEN_LABELS_HPP_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revgen/corpus.hpp"

namespace revgen {

struct CitationContext {
  std::string source_review;
  std::string target_paper;
  std::string context_text;
};

struct LabelOptions {
  std::size_t block_size = 10;
  std::size_t intersection = 5;
  std::size_t context_window = 0;  // sentences taken on each side of a citing sentence
  SentenceSource source;
};

// Half-open sentence range [start, start + length).
struct BlockRange {
  std::size_t start = 0;
  std::size_t length = 0;

  std::size_t end() const { return start + length; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

struct LabeledBlock {
  std::string pmid;
  std::size_t start = 0;
  std::vector<std::string> sentences;
  std::vector<double> targets;

  BlockRange range() const { return {start, sentences.size()}; }
  friend bool operator==(const LabeledBlock&, const LabeledBlock&) = default;
};

// The literal inline marker text for a pmid: "[[CIT:<pmid>]]".
std::string citation_marker(std::string_view pmid);

// One context per citing review (in review pmid order): every review body
// sentence carrying the paper's marker, widened by `window` sentences on each
// side, concatenated in document order. Reviews in `excluded` are skipped.
std::vector<CitationContext> extract_citation_contexts(const CorpusIndex& index, std::string_view pmid,
                                                       std::size_t window = 0,
                                                       const std::set<std::string>& excluded = {});

// target_i = rouge_combined(all context texts, sentence_i) over the paper's scoring
// sentences. Returns nullopt when the paper has no usable context.
std::optional<std::vector<double>> compute_targets(const CorpusIndex& index, std::string_view pmid,
                                                   const LabelOptions& options = {},
                                                   const std::set<std::string>& excluded = {});

// Blocks start at multiples of block_size - intersection; the last one is
// truncated at sentence_count. Throws if block_size <= intersection.
std::vector<BlockRange> make_blocks(std::size_t sentence_count, std::size_t block_size, std::size_t intersection);

// Labeled blocks for every non-review paper with a context from a review
// outside `holdout_reviews`, in pmid order.
std::vector<LabeledBlock> build_training_set(const CorpusIndex& index, const std::set<std::string>& holdout_reviews,
                                             const LabelOptions& options = {});

void write_labeled_blocks(std::span<const LabeledBlock> blocks, std::ostream& out);
// Throws Error(kParse) with the offending line number.
std::vector<LabeledBlock> read_labeled_blocks(std::istream& in);

}  // namespace revgen

#endif  // REVGEN_LABELS_HPP_
