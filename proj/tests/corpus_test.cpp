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

#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "revgen/corpus.hpp"
#include "revgen/error.hpp"

namespace revgen {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

PaperRecord paper(std::string pmid, std::vector<std::string> cites = {}, bool review = false) {
  PaperRecord p;
  p.pmid = std::move(pmid);
  p.title = "Title " + p.pmid;
  p.cited_pmids = std::move(cites);
  p.is_review = review;
  return p;
}

TEST(CorpusIndexTest, ReverseCitationsAreTheTranspose) {
  const auto index = CorpusIndex::build({paper("A", {"B"}), paper("B"), paper("R", {"B"}, true)});
  EXPECT_THAT(index.reverse_citations("B"), ElementsAre("A", "R"));
  EXPECT_THAT(index.review_citers("B"), ElementsAre("R"));
  EXPECT_THAT(index.reverse_citations("A"), IsEmpty());
  EXPECT_THAT(index.reverse_citations("unknown"), IsEmpty());
  EXPECT_EQ(index.citation_count("B"), 2u);
}

TEST(CorpusIndexTest, SortedLookupAndErrors) {
  const auto index = CorpusIndex::build({paper("3"), paper("1"), paper("2")});
  ASSERT_EQ(index.size(), 3u);
  EXPECT_EQ(index.papers()[0].pmid, "1");
  EXPECT_EQ(index.papers()[2].pmid, "3");
  EXPECT_TRUE(index.contains("2"));
  EXPECT_FALSE(index.contains("4"));
  EXPECT_EQ(index.find("4"), nullptr);
  EXPECT_THROW(index.at("4"), Error);
}

TEST(CorpusIndexTest, DuplicatePmidIsFatal) {
  try {
    CorpusIndex::build({paper("1"), paper("1")});
    FAIL() << "expected a duplicate id error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
    EXPECT_THAT(e.what(), HasSubstr("1"));
  }
}

TEST(CorpusIndexTest, CitationListsNormalized) {
  const auto index = CorpusIndex::build({paper("A", {"B", "A", "B", "", "X"}), paper("B")});
  EXPECT_THAT(index.at("A").cited_pmids, ElementsAre("B", "X"));
  EXPECT_THAT(index.reverse_citations("B"), ElementsAre("A"));
  EXPECT_THAT(index.reverse_citations("A"), IsEmpty());
}

TEST(ScoringSentencesTest, SourceSelection) {
  PaperRecord p = paper("1");
  p.abstract = "First claim. Second claim.";
  p.body_sentences = {"Body one.", "Body two."};
  p.figure_captions = {"Fig cap."};
  p.table_captions = {"Table cap."};
  EXPECT_THAT(scoring_sentences(p), ElementsAre("Body one.", "Body two."));
  EXPECT_THAT(scoring_sentences(p, {true, false}), ElementsAre("First claim.", "Second claim.", "Body one.", "Body two."));
  EXPECT_THAT(scoring_sentences(p, {false, true}), ElementsAre("Body one.", "Body two.", "Fig cap.", "Table cap."));
}

TEST(IngestJsonlTest, EmptyInput) {
  std::istringstream in("");
  const auto r = ingest_jsonl(in);
  EXPECT_TRUE(r.index.empty());
  EXPECT_TRUE(r.report.empty());
}

TEST(IngestJsonlTest, BadEntriesReportedAndSkipped) {
  std::istringstream in(
      R"({"pmid": "1", "title": "One", "abstract": "A.", "sentences": ["S."], "citations": [2], "year": 2001})"
      "\n\n"
      R"({"title": "No pmid"})"
      "\n"
      "{broken\n"
      R"({"pmid": 2, "title": "Two", "is_review": true, "doi": "10.1/x"})"
      "\n"
      R"({"pmid": "3", "title": 5})"
      "\n");
  const auto r = ingest_jsonl(in);
  ASSERT_EQ(r.index.size(), 2u);
  EXPECT_EQ(r.index.at("1").year, 2001);
  EXPECT_THAT(r.index.at("1").cited_pmids, ElementsAre("2"));
  EXPECT_TRUE(r.index.at("2").is_review);
  EXPECT_EQ(r.index.at("2").doi, "10.1/x");
  ASSERT_EQ(r.report.size(), 3u);
  EXPECT_EQ(r.report[0].line, 3u);
  EXPECT_THAT(r.report[0].error, HasSubstr("pmid"));
  EXPECT_EQ(r.report[1].line, 4u);
  EXPECT_EQ(r.report[2].line, 6u);
}

TEST(IngestJsonlTest, DuplicatePmidAborts) {
  std::istringstream in("{\"pmid\": \"1\", \"title\": \"a\"}\n{\"pmid\": \"1\", \"title\": \"b\"}\n");
  EXPECT_THROW(ingest_jsonl(in), Error);
}

TEST(IngestJsonlTest, RoundTripIsLossless) {
  const auto original = ingest_corpus(REVGEN_FIXTURE_DIR "/corpus.jsonl", CorpusFormat::kJsonl);
  ASSERT_TRUE(original.report.empty());
  std::ostringstream out;
  write_corpus_jsonl(original.index, out);
  std::istringstream in(out.str());
  const auto again = ingest_jsonl(in);
  ASSERT_EQ(again.index.size(), original.index.size());
  for (std::size_t i = 0; i < again.index.size(); ++i) EXPECT_EQ(again.index.papers()[i], original.index.papers()[i]);
}

TEST(IngestTest, MissingFileIsIoError) {
  try {
    ingest_corpus("/nonexistent/corpus.jsonl", CorpusFormat::kJsonl);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(IngestTest, ReportSerialization) {
  const std::vector<IngestIssue> issues = {{3, "missing pmid"}};
  std::ostringstream out;
  write_ingest_report(issues, out);
  EXPECT_EQ(out.str(), "{\"error\":\"missing pmid\",\"line\":3}\n");
}

TEST(FixtureCorpusTest, Shape) {
  const auto r = ingest_corpus(REVGEN_FIXTURE_DIR "/corpus.jsonl", CorpusFormat::kJsonl);
  EXPECT_EQ(r.index.size(), 50u);
  std::size_t reviews = 0;
  for (const auto& p : r.index.papers()) reviews += p.is_review ? 1 : 0;
  EXPECT_EQ(reviews, 5u);
}

TEST(JatsTest, ParsesArticles) {
  const auto r = ingest_corpus(REVGEN_FIXTURE_DIR "/sample_jats.xml", CorpusFormat::kJatsXml);
  ASSERT_EQ(r.index.size(), 2u);
  ASSERT_EQ(r.report.size(), 1u);
  EXPECT_THAT(r.report[0].error, HasSubstr("pmid"));

  const auto& research = r.index.at("1001");
  EXPECT_FALSE(research.is_review);
  EXPECT_EQ(research.title, "Plasmid virulence in Klebsiella.");
  EXPECT_EQ(research.doi, "10.1000/jats.1001");
  EXPECT_EQ(research.year, 2019);
  EXPECT_EQ(research.abstract, "Hypervirulent strains carry a large plasmid.");
  EXPECT_THAT(research.body_sentences, ElementsAre("The plasmid encodes siderophores [[CIT:1002]].",
                                                   "Loss of the plasmid reduced virulence, e.g. in mice.",
                                                   "Serum resistance was unchanged."));
  EXPECT_THAT(research.figure_captions, ElementsAre("Plasmid map."));
  EXPECT_THAT(research.table_captions, ElementsAre("Strain list."));
  EXPECT_THAT(research.cited_pmids, ElementsAre("1002", "5555"));

  const auto& review = r.index.at("1002");
  EXPECT_TRUE(review.is_review);
  EXPECT_FALSE(review.doi.has_value());
  EXPECT_THAT(review.body_sentences, ElementsAre("Siderophore genes sit on the plasmid [[CIT:1001]]."));
  EXPECT_THAT(r.index.review_citers("1001"), ElementsAre("1002"));
}

TEST(JatsTest, MalformedXmlReported) {
  const auto r = ingest_jats_xml("<article-set><article><front></article-set>");
  EXPECT_TRUE(r.index.empty());
  ASSERT_FALSE(r.report.empty());
}

TEST(SplitSentencesTest, TerminalPunctuation) {
  EXPECT_THAT(split_sentences("A b. C d?"), ElementsAre("A b.", "C d?"));
  EXPECT_THAT(split_sentences(""), IsEmpty());
  EXPECT_THAT(split_sentences("Wow! Really? Yes."), ElementsAre("Wow!", "Really?", "Yes."));
}

TEST(SplitSentencesTest, AbbreviationAndDecimalGuards) {
  EXPECT_THAT(split_sentences("e.g. value 3.5 rises."), ElementsAre("e.g. value 3.5 rises."));
  EXPECT_THAT(split_sentences("Smith et al. Reported it. See Fig. 2 for details."),
              ElementsAre("Smith et al. Reported it.", "See Fig. 2 for details."));
  EXPECT_THAT(split_sentences("Drug vs. Placebo differed. Done."), ElementsAre("Drug vs. Placebo differed.", "Done."));
}

TEST(SplitSentencesTest, LowercaseContinuationAndWhitespace) {
  EXPECT_THAT(split_sentences("It rose. then fell."), ElementsAre("It rose. then fell."));
  EXPECT_THAT(split_sentences("  One   two.\n\nThree.  "), ElementsAre("One two.", "Three."));
  EXPECT_THAT(split_sentences("He said \"Stop.\" Then left."), ElementsAre("He said \"Stop.\"", "Then left."));
}

}  // namespace
}  // namespace revgen
