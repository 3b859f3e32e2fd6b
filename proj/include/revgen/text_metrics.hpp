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

// Tokenization, n-gram counting, ROUGE-n recall and the mean squared error
// used as the sentence-score regression loss.

#ifndef REVGEN_TEXT_METRICS_HPP_
#define REVGEN_TEXT_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revgen {

// Removes inline citation markers of the form [[CIT:<pmid>]] together with
// any whitespace directly in front of them.
std::string strip_citation_markers(std::string_view text);

// Lowercased, punctuation-free word tokens. Citation markers are dropped,
// LaTeX Greek commands (\beta) become the Greek letter, '$' is removed
// without splitting, other ASCII punctuation and the Unicode punctuation
// blocks listed in docs/tokenizer.md act as separators. Digits and
// non-ASCII letters are kept.
std::vector<std::string> tokenize(std::string_view text);

// Occurrence counts of every contiguous n-gram of a token sequence.
// Keys are the tokens joined with '\x1f', which the tokenizer never emits.
struct NgramCounts {
  int n = 1;
  std::unordered_map<std::string, std::size_t> counts;

  std::size_t total() const;
  std::size_t count(std::string_view key) const;
};

std::string ngram_key(std::span<const std::string> tokens);

// Throws Error(kInvalidArgument) when n < 1.
NgramCounts ngram_counts(std::span<const std::string> tokens, int n);

// ROUGE-n recall with clipped matches, summed over all references:
//   sum_S sum_g min(count_S(g), count_cand(g)) / sum_S sum_g count_S(g).
// Returns 0 when the references hold no n-grams.
double rouge_n(std::span<const std::string> references, std::string_view candidate, int n);

// Same quantity on pre-tokenized input.
double rouge_n_tokens(std::span<const std::vector<std::string>> references,
                      std::span<const std::string> candidate, int n);

// (ROUGE-1 + ROUGE-2) / 2.
double rouge_combined(std::span<const std::string> references, std::string_view candidate);
double rouge_combined_tokens(std::span<const std::vector<std::string>> references,
                             std::span<const std::string> candidate);

// (1/n) sum (predicted_i - target_i)^2. Throws on empty or mismatched input.
double mse(std::span<const double> predicted, std::span<const double> target);

}  // namespace revgen

#endif  // REVGEN_TEXT_METRICS_HPP_
