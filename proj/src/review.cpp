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

#include "revgen/review.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "revgen/error.hpp"
#include "revgen/text_metrics.hpp"

namespace revgen {
namespace {

using nlohmann::json;

std::string format_score(double score) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", score);
  return buf;
}

std::string escape_markdown(std::string_view text) {
  std::string out;
  for (const char c : text) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

ReviewTable assemble_review(const CorpusIndex& index, std::span<const std::string> key_papers,
                            const std::map<std::string, std::vector<double>>& scores,
                            const TopicPartition& partition, std::size_t per_paper, const SentenceSource& source) {
  if (per_paper < 1) throw_invalid_argument("per_paper must be >= 1");
  ReviewTable table;
  for (const auto& pmid : key_papers) {
    const auto& paper = index.at(pmid);
    const auto sentences = scoring_sentences(paper, source);
    if (sentences.empty()) {
      table.warnings.push_back("paper " + pmid + " has no sentences; skipped");
      continue;
    }
    const auto it = scores.find(pmid);
    if (it == scores.end()) throw_invalid_argument("no score vector for key paper " + pmid);
    const auto& y = it->second;
    if (y.size() != sentences.size()) {
      throw_invalid_argument("score vector of " + pmid + " has " + std::to_string(y.size()) + " entries for " +
                             std::to_string(sentences.size()) + " sentences");
    }
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });

    const auto topic = partition.assignment.find(pmid);
    for (std::size_t r = 0; r < std::min(per_paper, order.size()); ++r) {
      const std::size_t i = order[r];
      ReviewEntry e;
      e.pmid = pmid;
      e.title = paper.title;
      e.year = paper.year;
      e.topic = topic == partition.assignment.end() ? -1 : topic->second;
      e.citations = index.citation_count(pmid);
      e.doi = paper.doi;
      e.sentence_index = i;
      e.sentence = strip_citation_markers(sentences[i]);
      e.score = y[i];
      table.entries.push_back(std::move(e));
    }
  }
  return table;
}

std::optional<ReviewFormat> parse_review_format(std::string_view name) {
  if (name == "tsv") return ReviewFormat::kTsv;
  if (name == "markdown" || name == "md") return ReviewFormat::kMarkdown;
  if (name == "json") return ReviewFormat::kJson;
  return std::nullopt;
}

std::string escape_tsv(std::string_view field) {
  std::string out;
  for (const char c : field) {
    switch (c) {
      case '\\':
        out += "\\\\";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string unescape_tsv(std::string_view field) {
  std::string out;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 == field.size()) {
      out += field[i];
      continue;
    }
    const char next = field[++i];
    switch (next) {
      case 't':
        out += '\t';
        break;
      case 'n':
        out += '\n';
        break;
      case 'r':
        out += '\r';
        break;
      default:
        out += next;
    }
  }
  return out;
}

std::string render(std::span<const ReviewEntry> entries, ReviewFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReviewFormat::kTsv:
      out << "pmid\ttitle\tyear\ttopic\tcitations\tdoi\tsentence\tscore\n";
      for (const auto& e : entries) {
        out << escape_tsv(e.pmid) << '\t' << escape_tsv(e.title) << '\t' << e.year << '\t' << e.topic << '\t'
            << e.citations << '\t' << escape_tsv(e.doi.value_or("")) << '\t' << escape_tsv(e.sentence) << '\t'
            << format_score(e.score) << '\n';
      }
      break;
    case ReviewFormat::kMarkdown:
      out << "| Paper | Year | Summary sentence | Score |\n";
      out << "|---|---|---|---|\n";
      for (const auto& e : entries) {
        out << "| " << escape_markdown(e.title) << " | " << e.year << " | " << escape_markdown(e.sentence) << " | "
            << format_score(e.score) << " |\n";
      }
      break;
    case ReviewFormat::kJson: {
      json array = json::array();
      for (const auto& e : entries) {
        array.push_back({{"pmid", e.pmid},
                         {"title", e.title},
                         {"year", e.year},
                         {"topic", e.topic},
                         {"citations", e.citations},
                         {"doi", e.doi ? json(*e.doi) : json(nullptr)},
                         {"sentence_index", e.sentence_index},
                         {"sentence", e.sentence},
                         {"score", e.score}});
      }
      out << array.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::vector<ReviewEntry> parse_review_json(std::string_view text) {
  std::vector<ReviewEntry> entries;
  try {
    for (const auto& j : json::parse(text)) {
      ReviewEntry e;
      e.pmid = j.at("pmid").get<std::string>();
      e.title = j.at("title").get<std::string>();
      e.year = j.at("year").get<int>();
      e.topic = j.at("topic").get<int>();
      e.citations = j.at("citations").get<std::size_t>();
      if (!j.at("doi").is_null()) e.doi = j.at("doi").get<std::string>();
      e.sentence_index = j.at("sentence_index").get<std::size_t>();
      e.sentence = j.at("sentence").get<std::string>();
      e.score = j.at("score").get<double>();
      entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid review JSON: ") + e.what());
  }
  return entries;
}

}  // namespace revgen
