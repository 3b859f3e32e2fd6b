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

#include "revgen/labels.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "parallel.hpp"
#include "revgen/error.hpp"
#include "revgen/text_metrics.hpp"

namespace revgen {

using nlohmann::json;

std::string citation_marker(std::string_view pmid) { return "[[CIT:" + std::string(pmid) + "]]"; }

std::vector<CitationContext> extract_citation_contexts(const CorpusIndex& index, std::string_view pmid,
                                                       std::size_t window, const std::set<std::string>& excluded) {
  index.at(pmid);
  const std::string marker = citation_marker(pmid);
  std::vector<CitationContext> contexts;
  for (const auto& review_id : index.review_citers(pmid)) {
    if (excluded.count(review_id)) continue;
    const auto& sentences = index.at(review_id).body_sentences;
    std::vector<bool> selected(sentences.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (sentences[i].find(marker) == std::string::npos) continue;
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(sentences.size() - 1, i + window);
      for (std::size_t j = lo; j <= hi; ++j) selected[j] = true;
      any = true;
    }
    if (!any) continue;
    std::string text;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (!selected[i]) continue;
      if (!text.empty()) text.push_back(' ');
      text.append(sentences[i]);
    }
    contexts.push_back({review_id, std::string(pmid), std::move(text)});
  }
  return contexts;
}

std::optional<std::vector<double>> compute_targets(const CorpusIndex& index, std::string_view pmid,
                                                   const LabelOptions& options,
                                                   const std::set<std::string>& excluded) {
  const auto contexts = extract_citation_contexts(index, pmid, options.context_window, excluded);
  if (contexts.empty()) return std::nullopt;
  std::vector<std::vector<std::string>> references;
  references.reserve(contexts.size());
  for (const auto& c : contexts) references.push_back(tokenize(c.context_text));

  const auto sentences = scoring_sentences(index.at(pmid), options.source);
  std::vector<double> targets;
  targets.reserve(sentences.size());
  for (const auto& s : sentences) targets.push_back(rouge_combined_tokens(references, tokenize(s)));
  return targets;
}

std::vector<BlockRange> make_blocks(std::size_t sentence_count, std::size_t block_size, std::size_t intersection) {
  if (block_size <= intersection) {
    throw_invalid_argument("block_size (" + std::to_string(block_size) + ") must exceed intersection (" +
                           std::to_string(intersection) + ")");
  }
  const std::size_t stride = block_size - intersection;
  std::vector<BlockRange> blocks;
  for (std::size_t start = 0; start < sentence_count; start += stride) {
    blocks.push_back({start, std::min(block_size, sentence_count - start)});
    if (start + block_size >= sentence_count) break;
  }
  return blocks;
}

std::vector<LabeledBlock> build_training_set(const CorpusIndex& index, const std::set<std::string>& holdout_reviews,
                                             const LabelOptions& options) {
  make_blocks(0, options.block_size, options.intersection);  // validates the geometry up front
  const auto papers = index.papers();
  std::vector<std::vector<LabeledBlock>> per_paper(papers.size());
  detail::parallel_for(
      papers.size(),
      [&](std::size_t p) {
        const auto& paper = papers[p];
        if (paper.is_review) return;
        const auto targets = compute_targets(index, paper.pmid, options, holdout_reviews);
        if (!targets) return;
        const auto sentences = scoring_sentences(paper, options.source);
        for (const auto& range : make_blocks(sentences.size(), options.block_size, options.intersection)) {
          LabeledBlock block;
          block.pmid = paper.pmid;
          block.start = range.start;
          block.sentences.assign(sentences.begin() + static_cast<std::ptrdiff_t>(range.start),
                                 sentences.begin() + static_cast<std::ptrdiff_t>(range.end()));
          block.targets.assign(targets->begin() + static_cast<std::ptrdiff_t>(range.start),
                               targets->begin() + static_cast<std::ptrdiff_t>(range.end()));
          per_paper[p].push_back(std::move(block));
        }
      },
      8);
  std::vector<LabeledBlock> out;
  for (auto& blocks : per_paper) {
    for (auto& b : blocks) out.push_back(std::move(b));
  }
  return out;
}

void write_labeled_blocks(std::span<const LabeledBlock> blocks, std::ostream& out) {
  for (const auto& b : blocks) {
    out << json{{"pmid", b.pmid}, {"start", b.start}, {"sentences", b.sentences}, {"targets", b.targets}}.dump()
        << '\n';
  }
}

std::vector<LabeledBlock> read_labeled_blocks(std::istream& in) {
  std::vector<LabeledBlock> blocks;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      LabeledBlock b;
      b.pmid = j.at("pmid").get<std::string>();
      b.start = j.at("start").get<std::size_t>();
      b.sentences = j.at("sentences").get<std::vector<std::string>>();
      b.targets = j.at("targets").get<std::vector<double>>();
      if (b.sentences.size() != b.targets.size()) throw std::invalid_argument("sentences/targets length mismatch");
      if (b.sentences.empty()) throw std::invalid_argument("empty block");
      blocks.push_back(std::move(b));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParse, "labeled blocks line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return blocks;
}

}  // namespace revgen
