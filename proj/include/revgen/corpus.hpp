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

#ifndef REVGEN_CORPUS_HPP_
#define REVGEN_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace revgen {

struct PaperRecord {
  std::string pmid;
  std::string title;
  std::string abstract;
  std::vector<std::string> body_sentences;
  std::vector<std::string> figure_captions;
  std::vector<std::string> table_captions;
  std::vector<std::string> cited_pmids;
  bool is_review = false;
  int year = 0;
  std::optional<std::string> doi;

  friend bool operator==(const PaperRecord&, const PaperRecord&) = default;
};

// Which texts of a paper count as its scorable sentences. Body sentences are
// always included; abstract sentences go first and captions last when enabled.
struct SentenceSource {
  bool include_abstract = false;
  bool include_captions = false;
};

std::vector<std::string> scoring_sentences(const PaperRecord& paper, const SentenceSource& source = {});

// Immutable lookup tables keyed by pmid. Papers are stored sorted by pmid so
// iteration order is deterministic.
class CorpusIndex {
 public:
  CorpusIndex() = default;

  // Throws Error(kDuplicateId) naming the first repeated pmid.
  static CorpusIndex build(std::vector<PaperRecord> papers);

  std::size_t size() const { return papers_.size(); }
  bool empty() const { return papers_.empty(); }
  std::span<const PaperRecord> papers() const { return papers_; }

  bool contains(std::string_view pmid) const { return find(pmid) != nullptr; }
  const PaperRecord* find(std::string_view pmid) const;
  // Throws Error(kInvalidArgument) for unknown pmids.
  const PaperRecord& at(std::string_view pmid) const;

  // In-corpus citers, sorted by pmid. Empty for unknown pmids.
  const std::vector<std::string>& reverse_citations(std::string_view pmid) const;
  const std::vector<std::string>& review_citers(std::string_view pmid) const;
  std::size_t citation_count(std::string_view pmid) const { return reverse_citations(pmid).size(); }

 private:
  std::ptrdiff_t position(std::string_view pmid) const;

  std::vector<PaperRecord> papers_;
  std::vector<std::vector<std::string>> reverse_;
  std::vector<std::vector<std::string>> review_citers_;
};

enum class CorpusFormat { kJsonl, kJatsXml };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

struct IngestIssue {
  std::size_t line = 0;  // 1-based line (JSONL) or article ordinal (JATS)
  std::string error;
};

struct IngestResult {
  CorpusIndex index;
  std::vector<IngestIssue> report;
};

// Parses a corpus snapshot. Malformed entries are skipped and listed in the
// report; a duplicate pmid aborts with Error(kDuplicateId).
IngestResult ingest_corpus(const std::filesystem::path& source, CorpusFormat format);

// Stream variants used by the file readers.
IngestResult ingest_jsonl(std::istream& in);
IngestResult ingest_jats_xml(std::string_view xml);

// Canonical JSONL, one paper per line in pmid order.
void write_corpus_jsonl(const CorpusIndex& index, std::ostream& out);
void write_ingest_report(std::span<const IngestIssue> report, std::ostream& out);

// Rule-based splitter: breaks after '.', '?' or '!' (plus closing quotes or
// brackets) when whitespace and an uppercase letter follow. Abbreviations
// from docs/sentence_splitting.md and digit-flanked periods never break.
// Whitespace runs inside sentences collapse to a single space.
std::vector<std::string> split_sentences(std::string_view raw_text);

}  // namespace revgen

#endif  // REVGEN_CORPUS_HPP_
