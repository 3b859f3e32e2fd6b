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

#include "revgen/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "revgen/error.hpp"

namespace revgen {
namespace {

using nlohmann::json;

const std::vector<std::string> kNoPmids;

constexpr std::array<std::string_view, 5> kAbbreviations = {"e.g.", "i.e.", "al.", "fig.", "vs."};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// True if the word that ends at `period` is a listed abbreviation.
bool ends_with_abbreviation(std::string_view text, std::size_t period) {
  std::size_t begin = period;
  while (begin > 0 && !is_space(text[begin - 1])) --begin;
  std::string word(text.substr(begin, period - begin + 1));
  for (auto& ch : word) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) != kAbbreviations.end();
}

std::vector<std::string> string_list(const json& entry, const char* key) {
  std::vector<std::string> out;
  const auto it = entry.find(key);
  if (it == entry.end() || it->is_null()) return out;
  if (!it->is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be an array");
  for (const auto& item : *it) {
    if (item.is_string()) {
      out.push_back(item.get<std::string>());
    } else if (item.is_number_integer()) {
      out.push_back(std::to_string(item.get<long long>()));
    } else {
      throw std::invalid_argument(std::string("field '") + key + "' must hold strings");
    }
  }
  return out;
}

PaperRecord paper_from_json(const json& entry) {
  if (!entry.is_object()) throw std::invalid_argument("entry is not a JSON object");
  PaperRecord paper;
  const auto pmid = entry.find("pmid");
  if (pmid == entry.end() || pmid->is_null()) throw std::invalid_argument("missing pmid");
  if (pmid->is_string()) {
    paper.pmid = pmid->get<std::string>();
  } else if (pmid->is_number_integer()) {
    paper.pmid = std::to_string(pmid->get<long long>());
  } else {
    throw std::invalid_argument("pmid must be a string");
  }
  if (paper.pmid.empty()) throw std::invalid_argument("empty pmid");

  const auto title = entry.find("title");
  if (title == entry.end() || !title->is_string()) throw std::invalid_argument("missing title");
  paper.title = title->get<std::string>();

  if (const auto it = entry.find("abstract"); it != entry.end() && !it->is_null()) {
    if (!it->is_string()) throw std::invalid_argument("abstract must be a string");
    paper.abstract = it->get<std::string>();
  }
  paper.body_sentences = string_list(entry, "sentences");
  paper.figure_captions = string_list(entry, "fig_captions");
  paper.table_captions = string_list(entry, "table_captions");
  paper.cited_pmids = string_list(entry, "citations");
  if (const auto it = entry.find("is_review"); it != entry.end() && !it->is_null()) {
    if (!it->is_boolean()) throw std::invalid_argument("is_review must be a boolean");
    paper.is_review = it->get<bool>();
  }
  if (const auto it = entry.find("year"); it != entry.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw std::invalid_argument("year must be an integer");
    paper.year = it->get<int>();
  }
  if (const auto it = entry.find("doi"); it != entry.end() && !it->is_null()) {
    if (!it->is_string()) throw std::invalid_argument("doi must be a string or null");
    paper.doi = it->get<std::string>();
  }
  return paper;
}

json paper_to_json(const PaperRecord& paper) {
  json j;
  j["pmid"] = paper.pmid;
  j["title"] = paper.title;
  j["abstract"] = paper.abstract;
  j["sentences"] = paper.body_sentences;
  j["fig_captions"] = paper.figure_captions;
  j["table_captions"] = paper.table_captions;
  j["citations"] = paper.cited_pmids;
  j["is_review"] = paper.is_review;
  j["year"] = paper.year;
  j["doi"] = paper.doi ? json(*paper.doi) : json(nullptr);
  return j;
}

// Drops repeated and self citations, keeping first-occurrence order.
void normalize_citations(PaperRecord& paper) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> kept;
  for (auto& cited : paper.cited_pmids) {
    if (cited.empty() || cited == paper.pmid || !seen.insert(cited).second) continue;
    kept.push_back(std::move(cited));
  }
  paper.cited_pmids = std::move(kept);
}

}  // namespace

std::vector<std::string> scoring_sentences(const PaperRecord& paper, const SentenceSource& source) {
  std::vector<std::string> out;
  if (source.include_abstract) out = split_sentences(paper.abstract);
  out.insert(out.end(), paper.body_sentences.begin(), paper.body_sentences.end());
  if (source.include_captions) {
    out.insert(out.end(), paper.figure_captions.begin(), paper.figure_captions.end());
    out.insert(out.end(), paper.table_captions.begin(), paper.table_captions.end());
  }
  return out;
}

CorpusIndex CorpusIndex::build(std::vector<PaperRecord> papers) {
  std::sort(papers.begin(), papers.end(),
            [](const PaperRecord& a, const PaperRecord& b) { return a.pmid < b.pmid; });
  for (std::size_t i = 1; i < papers.size(); ++i) {
    if (papers[i].pmid == papers[i - 1].pmid) {
      throw Error(ErrorCode::kDuplicateId, "duplicate pmid: " + papers[i].pmid);
    }
  }
  CorpusIndex index;
  index.papers_ = std::move(papers);
  for (auto& paper : index.papers_) normalize_citations(paper);

  index.reverse_.resize(index.papers_.size());
  index.review_citers_.resize(index.papers_.size());
  // Citers are visited in pmid order, so every list comes out sorted.
  for (const auto& citer : index.papers_) {
    for (const auto& cited : citer.cited_pmids) {
      const auto pos = index.position(cited);
      if (pos < 0) continue;
      index.reverse_[pos].push_back(citer.pmid);
      if (citer.is_review) index.review_citers_[pos].push_back(citer.pmid);
    }
  }
  return index;
}

std::ptrdiff_t CorpusIndex::position(std::string_view pmid) const {
  const auto it = std::lower_bound(papers_.begin(), papers_.end(), pmid,
                                   [](const PaperRecord& p, std::string_view key) { return p.pmid < key; });
  if (it == papers_.end() || it->pmid != pmid) return -1;
  return it - papers_.begin();
}

const PaperRecord* CorpusIndex::find(std::string_view pmid) const {
  const auto pos = position(pmid);
  return pos < 0 ? nullptr : &papers_[pos];
}

const PaperRecord& CorpusIndex::at(std::string_view pmid) const {
  const auto* paper = find(pmid);
  if (paper == nullptr) throw_invalid_argument("unknown pmid: " + std::string(pmid));
  return *paper;
}

const std::vector<std::string>& CorpusIndex::reverse_citations(std::string_view pmid) const {
  const auto pos = position(pmid);
  return pos < 0 ? kNoPmids : reverse_[pos];
}

const std::vector<std::string>& CorpusIndex::review_citers(std::string_view pmid) const {
  const auto pos = position(pmid);
  return pos < 0 ? kNoPmids : review_citers_[pos];
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "jats_xml" || name == "jats") return CorpusFormat::kJatsXml;
  return std::nullopt;
}

IngestResult ingest_jsonl(std::istream& in) {
  std::vector<PaperRecord> papers;
  std::vector<IngestIssue> report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    try {
      papers.push_back(paper_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      report.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const std::invalid_argument& e) {
      report.push_back({line_no, e.what()});
    }
  }
  return {CorpusIndex::build(std::move(papers)), std::move(report)};
}

IngestResult ingest_corpus(const std::filesystem::path& source, CorpusFormat format) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open corpus file: " + source.string());
  if (format == CorpusFormat::kJsonl) return ingest_jsonl(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ingest_jats_xml(buffer.str());
}

void write_corpus_jsonl(const CorpusIndex& index, std::ostream& out) {
  for (const auto& paper : index.papers()) out << paper_to_json(paper).dump() << '\n';
}

void write_ingest_report(std::span<const IngestIssue> report, std::ostream& out) {
  for (const auto& issue : report) {
    out << json{{"line", issue.line}, {"error", issue.error}}.dump() << '\n';
  }
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::string current;
  auto emit = [&] {
    while (!current.empty() && current.back() == ' ') current.pop_back();
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };

  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (is_space(c)) {
      if (!current.empty() && current.back() != ' ') current.push_back(' ');
      ++i;
      continue;
    }
    current.push_back(c);
    ++i;
    if (c != '.' && c != '?' && c != '!') continue;

    std::size_t j = i;
    while (j < n && is_closer(text[j])) ++j;
    std::size_t k = j;
    while (k < n && is_space(text[k])) ++k;
    if (k == j || k >= n || !is_upper(text[k])) continue;
    if (c == '.') {
      const std::size_t period = i - 1;
      if (period > 0 && is_digit(text[period - 1]) && i < n && is_digit(text[i])) continue;
      if (ends_with_abbreviation(text, period)) continue;
    }
    current.append(text.substr(i, j - i));
    emit();
    i = k;
  }
  emit();
  return sentences;
}

}  // namespace revgen
