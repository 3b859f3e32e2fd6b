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

// JATS XML -> PaperRecord mapping.
//
//   article/@article-type = "review-article"     -> is_review
//   article-meta/article-id[@pub-id-type=pmid]   -> pmid
//   article-meta/article-id[@pub-id-type=doi]    -> doi
//   title-group/article-title                    -> title
//   abstract                                     -> abstract
//   pub-date/year (first)                        -> year
//   body//p (outside fig, table-wrap)            -> body_sentences (split)
//   fig/caption, table-wrap/caption              -> figure/table captions
//   ref-list/ref//pub-id[@pub-id-type=pmid]      -> cited_pmids, ref order
//   xref[@ref-type=bibr] inside body paragraphs  -> [[CIT:<pmid>]] markers
//
// Several <article> elements may share one file under any wrapper element.

#include <cctype>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <expat.h>

#include "revgen/corpus.hpp"
#include "revgen/error.hpp"

namespace revgen {
namespace {

constexpr std::string_view kRidOpen = "[[RID:";

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  for (const char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string attribute(const XML_Char** attrs, std::string_view name) {
  for (int i = 0; attrs[i] != nullptr; i += 2) {
    if (name == attrs[i]) return attrs[i + 1];
  }
  return {};
}

struct ArticleState {
  std::size_t line = 0;
  bool review = false;
  std::string pmid;
  std::string doi;
  std::string title;
  std::string abstract;
  std::string year;
  bool have_year = false;
  std::deque<std::string> paragraphs;
  std::deque<std::string> fig_captions;
  std::deque<std::string> table_captions;
  std::string scratch;  // article-id, pub-id and year text
  std::string current_ref;
  std::vector<std::string> ref_order;
  std::map<std::string, std::string> ref_pmid;
};

struct Frame {
  std::string name;
  std::string* sink = nullptr;
};

class JatsParser {
 public:
  JatsParser() : parser_(XML_ParserCreate(nullptr)) {
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &JatsParser::on_start, &JatsParser::on_end);
    XML_SetCharacterDataHandler(parser_, &JatsParser::on_text);
  }
  ~JatsParser() { XML_ParserFree(parser_); }
  JatsParser(const JatsParser&) = delete;
  JatsParser& operator=(const JatsParser&) = delete;

  IngestResult parse(std::string_view xml) {
    if (XML_Parse(parser_, xml.data(), static_cast<int>(xml.size()), XML_TRUE) == XML_STATUS_ERROR) {
      const auto line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_));
      report_.push_back({article_ ? article_->line : line,
                         std::string("XML error at line ") + std::to_string(line) + ": " +
                             XML_ErrorString(XML_GetErrorCode(parser_))});
    }
    return {CorpusIndex::build(std::move(papers_)), std::move(report_)};
  }

 private:
  static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    static_cast<JatsParser*>(data)->start(name, attrs);
  }
  static void on_end(void* data, const XML_Char* name) { static_cast<JatsParser*>(data)->end(name); }
  static void on_text(void* data, const XML_Char* text, int len) {
    auto* self = static_cast<JatsParser*>(data);
    if (!self->frames_.empty() && self->frames_.back().sink != nullptr) {
      self->frames_.back().sink->append(text, static_cast<std::size_t>(len));
    }
  }

  bool inside(std::string_view name) const {
    for (const auto& f : frames_) {
      if (f.name == name) return true;
    }
    return false;
  }

  void start(std::string_view name, const XML_Char** attrs) {
    Frame frame{std::string(name), frames_.empty() ? nullptr : frames_.back().sink};
    if (name == "article" && !article_) {
      article_.emplace();
      article_->line = static_cast<std::size_t>(XML_GetCurrentLineNumber(parser_));
      article_->review = attribute(attrs, "article-type") == "review-article";
      frames_.push_back(frame);
      return;
    }
    if (!article_) {
      frames_.push_back(frame);
      return;
    }
    auto& a = *article_;
    const bool in_ref = inside("ref");
    if (name == "article-id" && !in_ref) {
      a.scratch.clear();
      frame.sink = &a.scratch;
    } else if (name == "article-title" && inside("title-group") && !in_ref) {
      frame.sink = &a.title;
    } else if (name == "abstract" && !in_ref) {
      frame.sink = &a.abstract;
    } else if (name == "year" && inside("pub-date") && !a.have_year) {
      a.scratch.clear();
      frame.sink = &a.scratch;
    } else if (name == "caption" && inside("fig")) {
      a.fig_captions.emplace_back();
      frame.sink = &a.fig_captions.back();
    } else if (name == "caption" && inside("table-wrap")) {
      a.table_captions.emplace_back();
      frame.sink = &a.table_captions.back();
    } else if (name == "p" && inside("body") && !inside("fig") && !inside("table-wrap")) {
      a.paragraphs.emplace_back();
      frame.sink = &a.paragraphs.back();
    } else if (name == "fig" || name == "table-wrap") {
      frame.sink = nullptr;
    } else if (name == "ref") {
      a.current_ref = attribute(attrs, "id");
      a.ref_order.push_back(a.current_ref);
    } else if (name == "pub-id" && in_ref && attribute(attrs, "pub-id-type") == "pmid") {
      a.scratch.clear();
      frame.sink = &a.scratch;
    } else if (name == "xref" && attribute(attrs, "ref-type") == "bibr") {
      if (frame.sink != nullptr && inside("body")) {
        std::istringstream rids(attribute(attrs, "rid"));
        std::string rid;
        while (rids >> rid) frame.sink->append(" ").append(kRidOpen).append(rid).append("]]");
      }
      frame.sink = nullptr;
    } else if (frame.sink != nullptr && (name == "p" || name == "title" || name == "sec")) {
      frame.sink->push_back(' ');
    }
    pending_id_type_ = name == "article-id" ? attribute(attrs, "pub-id-type") : pending_id_type_;
    frames_.push_back(frame);
  }

  void end(std::string_view name) {
    Frame frame = std::move(frames_.back());
    frames_.pop_back();
    if (!article_) return;
    auto& a = *article_;
    if (name == "article" && !inside("article")) {
      finish_article();
      return;
    }
    if (name == "article-id" && !inside("ref")) {
      if (pending_id_type_ == "pmid") a.pmid = collapse_whitespace(a.scratch);
      if (pending_id_type_ == "doi") a.doi = collapse_whitespace(a.scratch);
    } else if (name == "year" && frame.sink == &a.scratch && !a.have_year) {
      a.year = collapse_whitespace(a.scratch);
      a.have_year = true;
    } else if (name == "pub-id" && frame.sink == &a.scratch && !a.current_ref.empty()) {
      a.ref_pmid[a.current_ref] = collapse_whitespace(a.scratch);
    } else if (frame.sink != nullptr && (name == "p" || name == "title" || name == "sec")) {
      frame.sink->push_back(' ');
    }
  }

  std::string resolve_markers(std::string_view text) const {
    std::string out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto open = text.find(kRidOpen, pos);
      if (open == std::string_view::npos) break;
      const auto close = text.find("]]", open);
      if (close == std::string_view::npos) break;
      out.append(text.substr(pos, open - pos));
      const std::string rid(text.substr(open + kRidOpen.size(), close - open - kRidOpen.size()));
      const auto it = article_->ref_pmid.find(rid);
      if (it != article_->ref_pmid.end() && !it->second.empty()) {
        out.append("[[CIT:" + it->second + "]]");
      } else {
        while (!out.empty() && out.back() == ' ') out.pop_back();
      }
      pos = close + 2;
    }
    out.append(text.substr(pos));
    return out;
  }

  void finish_article() {
    auto& a = *article_;
    PaperRecord paper;
    paper.pmid = a.pmid;
    paper.title = collapse_whitespace(a.title);
    if (paper.pmid.empty()) {
      report_.push_back({a.line, "missing pmid"});
    } else if (paper.title.empty()) {
      report_.push_back({a.line, "missing title"});
    } else {
      paper.abstract = collapse_whitespace(a.abstract);
      paper.is_review = a.review;
      if (!a.doi.empty()) paper.doi = a.doi;
      if (!a.year.empty()) {
        try {
          paper.year = std::stoi(a.year);
        } catch (const std::exception&) {
          report_.push_back({a.line, "invalid year: " + a.year});
        }
      }
      for (const auto& para : a.paragraphs) {
        for (auto& s : split_sentences(resolve_markers(para))) paper.body_sentences.push_back(std::move(s));
      }
      for (const auto& c : a.fig_captions) paper.figure_captions.push_back(collapse_whitespace(c));
      for (const auto& c : a.table_captions) paper.table_captions.push_back(collapse_whitespace(c));
      for (const auto& rid : a.ref_order) {
        const auto it = a.ref_pmid.find(rid);
        if (it != a.ref_pmid.end() && !it->second.empty()) paper.cited_pmids.push_back(it->second);
      }
      papers_.push_back(std::move(paper));
    }
    article_.reset();
  }

  XML_Parser parser_;
  std::vector<Frame> frames_;
  std::optional<ArticleState> article_;
  std::string pending_id_type_;
  std::vector<PaperRecord> papers_;
  std::vector<IngestIssue> report_;
};

}  // namespace

IngestResult ingest_jats_xml(std::string_view xml) {
  JatsParser parser;
  return parser.parse(xml);
}

}  // namespace revgen
