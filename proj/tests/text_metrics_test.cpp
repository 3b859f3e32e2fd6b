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

#include <random>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "revgen/error.hpp"
#include "revgen/text_metrics.hpp"

namespace revgen {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

TEST(TokenizeTest, DropsPunctuationAndLowercases) {
  EXPECT_THAT(tokenize("The cat, sat."), ElementsAre("the", "cat", "sat"));
  EXPECT_THAT(tokenize(""), IsEmpty());
  EXPECT_THAT(tokenize("  ...  "), IsEmpty());
}

TEST(TokenizeTest, GreekCommandsDollarAndHyphen) {
  EXPECT_THAT(tokenize("A$\\beta$ A-beta"), ElementsAre("aβ", "a", "beta"));
  EXPECT_THAT(tokenize("\\alpha-synuclein"), ElementsAre("α", "synuclein"));
  EXPECT_THAT(tokenize("\\Delta"), ElementsAre("δ"));
}

TEST(TokenizeTest, UnicodeLettersKeptPunctuationSplits) {
  EXPECT_THAT(tokenize("Über naïve"), ElementsAre("über", "naïve"));
  EXPECT_THAT(tokenize("one\u2014two three"), ElementsAre("one", "two", "three"));
  EXPECT_THAT(tokenize("«quoted»"), ElementsAre("quoted"));
}

TEST(TokenizeTest, DigitsKept) { EXPECT_THAT(tokenize("IL-6 rose 3.5 fold"), ElementsAre("il", "6", "rose", "3", "5", "fold")); }

TEST(TokenizeTest, CitationMarkersDropped) {
  EXPECT_THAT(tokenize("X drives Y [[CIT:123]]."), ElementsAre("x", "drives", "y"));
  EXPECT_EQ(strip_citation_markers("X drives Y [[CIT:123]]."), "X drives Y.");
  EXPECT_EQ(strip_citation_markers("a [[CIT:1]] [[CIT:2]] b"), "a b");
  EXPECT_EQ(strip_citation_markers("no markers"), "no markers");
}

TEST(NgramCountsTest, HandCounts) {
  const std::vector<std::string> aba = {"a", "b", "a"};
  const auto uni = ngram_counts(aba, 1);
  EXPECT_EQ(uni.counts.size(), 2u);
  EXPECT_EQ(uni.count("a"), 2u);
  EXPECT_EQ(uni.count("b"), 1u);
  EXPECT_EQ(uni.total(), 3u);

  const std::vector<std::string> abc = {"a", "b", "c"};
  const auto tri = ngram_counts(abc, 3);
  EXPECT_EQ(tri.counts.size(), 1u);
  EXPECT_EQ(tri.count(ngram_key(abc)), 1u);

  const std::vector<std::string> a = {"a"};
  EXPECT_TRUE(ngram_counts(a, 2).counts.empty());
  EXPECT_THROW(ngram_counts(a, 0), Error);
}

TEST(RougeTest, HandCases) {
  const std::vector<std::string> same = {"the cat sat"};
  EXPECT_DOUBLE_EQ(rouge_n(same, "the cat sat", 1), 1.0);

  const std::vector<std::string> mat = {"the cat sat on the mat"};
  EXPECT_DOUBLE_EQ(rouge_n(mat, "the cat ran", 1), 2.0 / 6.0);

  const std::vector<std::string> abcd = {"a b c d"};
  EXPECT_DOUBLE_EQ(rouge_n(abcd, "b c", 2), 1.0 / 3.0);
  EXPECT_EQ(rouge_combined(abcd, "b c"), 5.0 / 12.0);

  const std::vector<std::string> x = {"x"};
  EXPECT_EQ(rouge_n(x, "x", 2), 0.0);
}

TEST(RougeTest, CombinedIdentityAndDisjoint) {
  const std::vector<std::string> ref = {"amyloid plaques drive synapse loss"};
  EXPECT_DOUBLE_EQ(rouge_combined(ref, "amyloid plaques drive synapse loss"), 1.0);
  EXPECT_EQ(rouge_combined(ref, "yeast prion propagation"), 0.0);
}

TEST(RougeTest, SumsOverReferencesAndClips) {
  // Refs: "a a b" and "a c". Unigram totals 3 + 2 = 5.
  // Candidate "a b": ref1 matches min(2,1)=1 for a, 1 for b; ref2 matches 1 for a.
  const std::vector<std::string> refs = {"a a b", "a c"};
  EXPECT_DOUBLE_EQ(rouge_n(refs, "a b", 1), 3.0 / 5.0);
  const std::vector<std::string> none;
  EXPECT_EQ(rouge_n(none, "a b", 1), 0.0);
}

TEST(RougeTest, AgreesWithBruteForceOracle) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  const auto words = [&](std::size_t len) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(vocab[rng() % vocab.size()]);
    return out;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<std::string>> refs;
    const std::size_t ref_count = 1 + rng() % 3;
    for (std::size_t r = 0; r < ref_count; ++r) refs.push_back(words(rng() % 12));
    const auto cand = words(rng() % 12);
    for (int n = 1; n <= 3; ++n) {
      EXPECT_NEAR(rouge_n_tokens(refs, cand, n), oracle::rouge_n(refs, cand, static_cast<std::size_t>(n)), 1e-12);
    }
  }
}

TEST(RougeTest, InvalidN) {
  const std::vector<std::string> ref = {"a"};
  EXPECT_THROW(rouge_n(ref, "a", 0), Error);
}

TEST(MseTest, HandCases) {
  const std::vector<double> y = {0.3, 0.7};
  EXPECT_EQ(mse(y, y), 0.0);
  const std::vector<double> a = {0.0, 1.0};
  const std::vector<double> b = {1.0, 0.0};
  EXPECT_DOUBLE_EQ(mse(a, b), 1.0);
  const std::vector<double> half = {0.5};
  const std::vector<double> zero = {0.0};
  EXPECT_DOUBLE_EQ(mse(half, zero), 0.25);
}

TEST(MseTest, RejectsBadShapes) {
  const std::vector<double> empty;
  const std::vector<double> one = {1.0};
  const std::vector<double> two = {1.0, 2.0};
  EXPECT_THROW(mse(empty, empty), Error);
  EXPECT_THROW(mse(one, two), Error);
}

}  // namespace
}  // namespace revgen
