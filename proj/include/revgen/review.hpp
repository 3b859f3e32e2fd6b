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

#ifndef REVGEN_REVIEW_HPP_
#define REVGEN_REVIEW_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revgen/citation_graph.hpp"
#include "revgen/corpus.hpp"

namespace revgen {

struct ReviewEntry {
  std::string pmid;
  std::string title;
  int year = 0;
  int topic = -1;  // -1 when the paper is outside the partition
  std::size_t citations = 0;
  std::optional<std::string> doi;
  std::size_t sentence_index = 0;
  std::string sentence;  // verbatim scoring sentence with citation markers stripped
  double score = 0.0;

  friend bool operator==(const ReviewEntry&, const ReviewEntry&) = default;
};

struct ReviewTable {
  std::vector<ReviewEntry> entries;
  std::vector<std::string> warnings;
};

// For each key paper (in the given order) emits its `per_paper` best
// sentences, highest score first, earlier sentence index on ties.
// Papers without sentences are skipped with a warning; a key paper without a
// score vector, or with one of the wrong length, throws.
ReviewTable assemble_review(const CorpusIndex& index, std::span<const std::string> key_papers,
                            const std::map<std::string, std::vector<double>>& scores,
                            const TopicPartition& partition, std::size_t per_paper = 1,
                            const SentenceSource& source = {});

enum class ReviewFormat { kTsv, kMarkdown, kJson };

std::optional<ReviewFormat> parse_review_format(std::string_view name);

// tsv: pmid, title, year, topic, citations, doi, sentence, score (3 decimals),
//      with backslash, tab, CR and LF escaped.
// markdown: Paper | Year | Summary sentence | Score.
// json: array of objects with every ReviewEntry field at full precision.
std::string render(std::span<const ReviewEntry> entries, ReviewFormat format);

std::vector<ReviewEntry> parse_review_json(std::string_view text);

std::string escape_tsv(std::string_view field);
std::string unescape_tsv(std::string_view field);

}  // namespace revgen

#endif  // REVGEN_REVIEW_HPP_
