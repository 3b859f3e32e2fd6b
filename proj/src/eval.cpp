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

#include "revgen/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>

#include "parallel.hpp"
#include "revgen/error.hpp"
#include "revgen/text_metrics.hpp"

namespace revgen {
namespace {

std::string format_double(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, r.ptr);
}

std::string join_body(const PaperRecord& review) {
  std::string text;
  for (const auto& s : review.body_sentences) {
    if (!text.empty()) text += ' ';
    text += s;
  }
  return text;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

constexpr std::array<const char*, 3> kLabelHeaders = {"Not Relevant", "Relevant", "Useful"};

}  // namespace

void rank_pool(std::vector<PooledSentence>& pool) {
  std::sort(pool.begin(), pool.end(), [](const PooledSentence& a, const PooledSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pmid != b.pmid) return a.pmid < b.pmid;
    return a.index < b.index;
  });
}

std::string top_n_text(std::span<const PooledSentence> ranked, std::size_t n) {
  std::string text;
  const std::size_t take = std::min(n, ranked.size());
  for (std::size_t i = 0; i < take; ++i) {
    if (i > 0) text += ' ';
    text += ranked[i].text;
  }
  return text;
}

BenchmarkResult benchmark(const CorpusIndex& index, const std::set<std::string>& holdout_reviews,
                          SentenceScorer& scorer, std::span<const std::size_t> n_values,
                          const ScoringOptions& options) {
  if (n_values.empty()) throw_invalid_argument("benchmark needs at least one n value");
  for (const auto n : n_values) {
    if (n < 1) throw_invalid_argument("n values must be >= 1");
  }
  for (const auto& pmid : holdout_reviews) {
    if (!index.contains(pmid)) throw_invalid_argument("holdout review " + pmid + " is not in the corpus");
  }

  BenchmarkResult result;
  std::vector<std::string> evaluated;
  std::vector<std::vector<PooledSentence>> pools;
  // Scoring is serial; ROUGE below runs in parallel.
  for (const auto& pmid : holdout_reviews) {
    const auto& review = index.at(pmid);
    std::vector<PooledSentence> pool;
    std::size_t cited_in_corpus = 0;
    for (const auto& cited : review.cited_pmids) {
      const auto* paper = index.find(cited);
      if (paper == nullptr) continue;
      ++cited_in_corpus;
      const auto sentences = scoring_sentences(*paper, options.source);
      if (sentences.empty()) continue;
      const auto scores = score_paper(scorer, *paper, options);
      for (std::size_t i = 0; i < sentences.size(); ++i) pool.push_back({paper->pmid, i, sentences[i], scores[i]});
    }
    if (cited_in_corpus == 0) {
      result.warnings.push_back("review " + pmid + " cites no in-corpus paper; skipped");
      continue;
    }
    rank_pool(pool);
    evaluated.push_back(pmid);
    pools.push_back(std::move(pool));
  }

  std::vector<std::vector<double>> scores(evaluated.size(), std::vector<double>(n_values.size(), 0.0));
  detail::parallel_for(
      evaluated.size(),
      [&](std::size_t r) {
        const std::vector<std::string> reference = {join_body(index.at(evaluated[r]))};
        for (std::size_t j = 0; j < n_values.size(); ++j) {
          scores[r][j] = rouge_combined(reference, top_n_text(pools[r], n_values[j]));
        }
      },
      2);

  for (std::size_t r = 0; r < evaluated.size(); ++r) {
    for (std::size_t j = 0; j < n_values.size(); ++j) result.rows.push_back({evaluated[r], n_values[j], scores[r][j]});
  }
  if (!evaluated.empty()) {
    for (std::size_t j = 0; j < n_values.size(); ++j) {
      double sum = 0.0;
      for (std::size_t r = 0; r < evaluated.size(); ++r) sum += scores[r][j];
      result.summary.push_back({n_values[j], sum / static_cast<double>(evaluated.size())});
    }
  }
  return result;
}

void write_benchmark_tsv(const BenchmarkResult& result, std::ostream& out) {
  out << "review_pmid\tn\trouge\n";
  for (const auto& row : result.rows) out << row.review_pmid << '\t' << row.n << '\t' << format_double(row.rouge) << '\n';
}

void write_benchmark_summary_tsv(const BenchmarkResult& result, std::ostream& out) {
  out << "n\tmean_rouge\n";
  for (const auto& row : result.summary) out << row.n << '\t' << format_double(row.mean_rouge) << '\n';
}

std::optional<AnnotationLabel> parse_annotation_label(std::string_view text) {
  std::string key;
  for (const char c : trim(text)) {
    if (c == ' ' || c == '-') {
      key += '_';
    } else {
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (key == "not_relevant") return AnnotationLabel::kNotRelevant;
  if (key == "relevant") return AnnotationLabel::kRelevant;
  if (key == "useful") return AnnotationLabel::kUseful;
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::vector<std::string> fields;
  std::string field;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool quoted = false;
  bool field_started = false;
  std::size_t quote_line = 0;

  const auto end_record = [&] {
    fields.push_back(std::move(field));
    field.clear();
    const bool blank = fields.size() == 1 && fields[0].empty() && !field_started;
    if (!blank) records.emplace_back(record_line, std::move(fields));
    fields.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_started = true;
        quote_line = line;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kParse, "unterminated quoted field starting on line " + std::to_string(quote_line));
  if (!field.empty() || !fields.empty() || field_started) end_record();
  return records;
}

AnnotationFile parse_annotation_csv(std::istream& in) {
  const auto rows = parse_csv(in);
  if (rows.empty()) throw Error(ErrorCode::kParse, "annotation file is empty");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].second.size(); ++i) column[trim(rows[0].second[i])] = i;
  std::array<std::size_t, 4> pos{};
  const std::array<const char*, 4> names = {"query", "pmid", "sentence", "label"};
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = column.find(names[k]);
    if (it == column.end()) throw Error(ErrorCode::kParse, std::string("annotation header lacks column ") + names[k]);
    pos[k] = it->second;
  }

  AnnotationFile file;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, fields] = rows[r];
    if (fields.size() != rows[0].second.size()) {
      file.issues.push_back({line, "expected " + std::to_string(rows[0].second.size()) + " fields, got " +
                                       std::to_string(fields.size())});
      continue;
    }
    const auto label = parse_annotation_label(fields[pos[3]]);
    if (!label) {
      file.issues.push_back({line, "unknown label \"" + fields[pos[3]] + "\""});
      continue;
    }
    const std::string query = trim(fields[pos[0]]);
    if (query.empty()) {
      file.issues.push_back({line, "empty query"});
      continue;
    }
    file.records.push_back({query, trim(fields[pos[1]]), fields[pos[2]], *label});
  }
  return file;
}

namespace {

std::array<long, 3> to_percents(const std::array<double, 3>& fractions) {
  std::array<long, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = std::lround(fractions[i] * 100.0);
  return out;
}

}  // namespace

AnnotationReport annotation_report(std::span<const AnnotationRecord> records) {
  if (records.empty()) throw_invalid_argument("annotation report needs at least one record");
  std::map<std::string, std::array<std::size_t, 3>> counts;
  for (const auto& r : records) ++counts[r.query][static_cast<std::size_t>(r.label)];

  AnnotationReport report;
  report.mean.query = "Mean Values:";
  for (const auto& [query, c] : counts) {
    AnnotationRow row;
    row.query = query;
    row.count = c[0] + c[1] + c[2];
    for (std::size_t i = 0; i < 3; ++i) {
      row.fractions[i] = static_cast<double>(c[i]) / static_cast<double>(row.count);
      report.mean.fractions[i] += row.fractions[i];
    }
    row.percents = to_percents(row.fractions);
    report.mean.count += row.count;
    report.rows.push_back(std::move(row));
  }
  for (auto& f : report.mean.fractions) f /= static_cast<double>(report.rows.size());
  report.mean.percents = to_percents(report.mean.fractions);
  return report;
}

std::string render_annotation_report(const AnnotationReport& report) {
  std::ostringstream out;
  out << "| Query | " << kLabelHeaders[0] << " | " << kLabelHeaders[1] << " | " << kLabelHeaders[2] << " |\n";
  out << "|---|---|---|---|\n";
  const auto emit = [&](const AnnotationRow& row) {
    std::string query;
    for (const char c : row.query) {
      if (c == '|') query += '\\';
      query += c;
    }
    out << "| " << query << " | " << row.percents[0] << "% | " << row.percents[1] << "% | " << row.percents[2]
        << "% |\n";
  };
  for (const auto& row : report.rows) emit(row);
  emit(report.mean);
  return out.str();
}

}  // namespace revgen
