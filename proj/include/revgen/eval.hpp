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

#ifndef REVGEN_EVAL_HPP_
#define REVGEN_EVAL_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revgen/corpus.hpp"
#include "revgen/scorer.hpp"

namespace revgen {

struct BenchmarkRow {
  std::string review_pmid;
  std::size_t n = 0;
  double rouge = 0.0;
};

struct BenchmarkSummary {
  std::size_t n = 0;
  double mean_rouge = 0.0;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;          // review pmid asc, then n in request order
  std::vector<BenchmarkSummary> summary;   // one per n; empty if no review was evaluated
  std::vector<std::string> warnings;
};

// A candidate sentence drawn from one of a review's cited papers.
struct PooledSentence {
  std::string pmid;
  std::size_t index = 0;
  std::string text;
  double score = 0.0;
};

// Orders by score desc, pmid asc, sentence index asc.
void rank_pool(std::vector<PooledSentence>& pool);

// Concatenation of the first min(n, pool size) ranked sentences.
std::string top_n_text(std::span<const PooledSentence> ranked, std::size_t n);

// For each holdout review: pools the scoring sentences of its in-corpus cited
// papers, scores them, and compares the top-n concatenation against the
// review body with rouge_combined. Reviews without in-corpus citations are
// skipped with a warning. Throws Error(kInvalidArgument) for an unknown
// holdout pmid or an empty / zero-containing n list.
BenchmarkResult benchmark(const CorpusIndex& index, const std::set<std::string>& holdout_reviews,
                          SentenceScorer& scorer, std::span<const std::size_t> n_values,
                          const ScoringOptions& options = {});

void write_benchmark_tsv(const BenchmarkResult& result, std::ostream& out);
void write_benchmark_summary_tsv(const BenchmarkResult& result, std::ostream& out);

enum class AnnotationLabel { kNotRelevant = 0, kRelevant = 1, kUseful = 2 };

// Accepts "not_relevant", "not relevant", "not-relevant", "relevant",
// "useful", case-insensitively and ignoring surrounding whitespace.
std::optional<AnnotationLabel> parse_annotation_label(std::string_view text);

struct AnnotationRecord {
  std::string query;
  std::string pmid;
  std::string sentence;
  AnnotationLabel label = AnnotationLabel::kNotRelevant;
};

struct AnnotationIssue {
  std::size_t line = 0;
  std::string error;
};

struct AnnotationFile {
  std::vector<AnnotationRecord> records;
  std::vector<AnnotationIssue> issues;  // rejected records
};

// RFC 4180 CSV with header query,pmid,sentence,label (any column order).
// Throws Error(kParse) on a missing column or an unterminated quote.
AnnotationFile parse_annotation_csv(std::istream& in);

// Splits CSV text into records of fields; each record carries the line it
// starts on.
std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv(std::istream& in);

struct AnnotationRow {
  std::string query;
  std::size_t count = 0;
  std::array<double, 3> fractions{};  // indexed by AnnotationLabel
  std::array<long, 3> percents{};     // fractions rounded to integer percent
};

struct AnnotationReport {
  std::vector<AnnotationRow> rows;  // sorted by query
  AnnotationRow mean;               // query "Mean Values:"; fractions averaged over queries
};

// Throws Error(kInvalidArgument) when there are no records.
AnnotationReport annotation_report(std::span<const AnnotationRecord> records);

// Markdown table with columns Query | Not Relevant | Relevant | Useful.
std::string render_annotation_report(const AnnotationReport& report);

}  // namespace revgen

#endif  // REVGEN_EVAL_HPP_
