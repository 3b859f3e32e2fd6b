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

#include "revgen/text_metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <utility>

#include "revgen/error.hpp"

namespace revgen {
namespace {

constexpr std::string_view kMarkerOpen = "[[CIT:";
constexpr std::string_view kMarkerClose = "]]";
constexpr char kKeySeparator = '\x1f';

// LaTeX Greek commands; capitals map straight to the lowercase letter.
constexpr std::array<std::pair<std::string_view, std::string_view>, 40> kGreek = {{
    {"alpha", "α"},   {"beta", "β"},     {"gamma", "γ"},    {"delta", "δ"},
    {"epsilon", "ε"}, {"varepsilon", "ε"}, {"zeta", "ζ"},  {"eta", "η"},
    {"theta", "θ"},   {"vartheta", "θ"}, {"iota", "ι"},     {"kappa", "κ"},
    {"lambda", "λ"},  {"mu", "μ"},       {"nu", "ν"},       {"xi", "ξ"},
    {"pi", "π"},      {"rho", "ρ"},      {"varrho", "ρ"},   {"sigma", "σ"},
    {"varsigma", "ς"}, {"tau", "τ"},     {"upsilon", "υ"},  {"phi", "φ"},
    {"varphi", "φ"},  {"chi", "χ"},      {"psi", "ψ"},      {"omega", "ω"},
    {"Gamma", "γ"},   {"Delta", "δ"},    {"Theta", "θ"},    {"Lambda", "λ"},
    {"Xi", "ξ"},      {"Pi", "π"},       {"Sigma", "σ"},    {"Upsilon", "υ"},
    {"Phi", "φ"},     {"Psi", "ψ"},      {"Omega", "ω"},    {"omicron", "ο"},
}};

struct Decoded {
  std::uint32_t code;
  std::size_t length;
};

// Invalid sequences decode as a single byte.
Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto lead = static_cast<unsigned char>(s[i]);
  std::size_t len = 0;
  std::uint32_t code = 0;
  if (lead < 0x80) return {lead, 1};
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    code = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    code = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    code = lead & 0x07;
  } else {
    return {lead, 1};
  }
  if (i + len > s.size()) return {lead, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto c = static_cast<unsigned char>(s[i + k]);
    if ((c & 0xC0) != 0x80) return {lead, 1};
    code = (code << 6) | (c & 0x3F);
  }
  return {code, len};
}

void append_utf8(std::string& out, std::uint32_t code) {
  if (code < 0x80) {
    out.push_back(static_cast<char>(code));
  } else if (code < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (code >> 6)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  } else if (code < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (code >> 12)));
    out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (code >> 18)));
    out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
  }
}

bool is_unicode_separator(std::uint32_t code) {
  return (code >= 0x00A0 && code <= 0x00BF) || code == 0x00D7 || code == 0x00F7 ||
         (code >= 0x2000 && code <= 0x206F) || (code >= 0x2190 && code <= 0x22FF) ||
         (code >= 0x3000 && code <= 0x303F) || code == 0xFEFF;
}

std::uint32_t unicode_lower(std::uint32_t code) {
  if (code >= 0x00C0 && code <= 0x00DE && code != 0x00D7) return code + 0x20;
  if (code >= 0x0391 && code <= 0x03A9 && code != 0x03A2) return code + 0x20;
  if (code >= 0x0410 && code <= 0x042F) return code + 0x20;
  return code;
}

}  // namespace

std::string strip_citation_markers(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find(kMarkerOpen, pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find(kMarkerClose, open + kMarkerOpen.size());
    if (close == std::string_view::npos) break;
    out.append(text.substr(pos, open - pos));
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    pos = close + kMarkerClose.size();
  }
  out.append(text.substr(pos));
  return out;
}

std::vector<std::string> tokenize(std::string_view raw) {
  const std::string text = strip_citation_markers(raw);
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '$') {
      ++i;
      continue;
    }
    if (c == '\\') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
      const std::string_view command(text.data() + i + 1, j - i - 1);
      const auto greek = std::find_if(kGreek.begin(), kGreek.end(),
                                      [&](const auto& entry) { return entry.first == command; });
      if (greek != kGreek.end()) {
        current.append(greek->second);
      } else {
        flush();
      }
      i = std::max(j, i + 1);
      continue;
    }
    const auto byte = static_cast<unsigned char>(c);
    if (byte < 0x80) {
      if (std::isalnum(byte)) {
        current.push_back(static_cast<char>(std::tolower(byte)));
      } else {
        flush();
      }
      ++i;
      continue;
    }
    const Decoded d = decode_utf8(text, i);
    if (d.length == 1) {
      current.push_back(c);
    } else if (is_unicode_separator(d.code)) {
      flush();
    } else {
      append_utf8(current, unicode_lower(d.code));
    }
    i += d.length;
  }
  flush();
  return tokens;
}

std::size_t NgramCounts::total() const {
  std::size_t sum = 0;
  for (const auto& [key, value] : counts) sum += value;
  return sum;
}

std::size_t NgramCounts::count(std::string_view key) const {
  const auto it = counts.find(std::string(key));
  return it == counts.end() ? 0 : it->second;
}

std::string ngram_key(std::span<const std::string> tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key.push_back(kKeySeparator);
    key.append(tokens[i]);
  }
  return key;
}

NgramCounts ngram_counts(std::span<const std::string> tokens, int n) {
  if (n < 1) throw_invalid_argument("n-gram order must be >= 1, got " + std::to_string(n));
  NgramCounts result;
  result.n = n;
  const auto order = static_cast<std::size_t>(n);
  if (tokens.size() < order) return result;
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    ++result.counts[ngram_key(tokens.subspan(i, order))];
  }
  return result;
}

namespace {

struct Overlap {
  std::uint64_t matched = 0;
  std::uint64_t total = 0;
};

Overlap clipped_overlap(std::span<const std::vector<std::string>> references, std::span<const std::string> candidate,
                        int n) {
  const NgramCounts cand = ngram_counts(candidate, n);
  Overlap o;
  for (const auto& reference : references) {
    const NgramCounts ref = ngram_counts(reference, n);
    for (const auto& [gram, count] : ref.counts) {
      o.total += count;
      const auto it = cand.counts.find(gram);
      if (it != cand.counts.end()) o.matched += std::min(count, it->second);
    }
  }
  return o;
}

}  // namespace

double rouge_n_tokens(std::span<const std::vector<std::string>> references,
                      std::span<const std::string> candidate, int n) {
  const Overlap o = clipped_overlap(references, candidate, n);
  if (o.total == 0) return 0.0;
  return static_cast<double>(o.matched) / static_cast<double>(o.total);
}

namespace {

std::vector<std::vector<std::string>> tokenize_all(std::span<const std::string> texts) {
  std::vector<std::vector<std::string>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(tokenize(t));
  return out;
}

}  // namespace

double rouge_n(std::span<const std::string> references, std::string_view candidate, int n) {
  if (n < 1) throw_invalid_argument("n-gram order must be >= 1, got " + std::to_string(n));
  const auto refs = tokenize_all(references);
  const auto cand = tokenize(candidate);
  return rouge_n_tokens(refs, cand, n);
}

double rouge_combined_tokens(std::span<const std::vector<std::string>> references,
                             std::span<const std::string> candidate) {
  const Overlap a = clipped_overlap(references, candidate, 1);
  const Overlap b = clipped_overlap(references, candidate, 2);
  if (a.total == 0) return 0.0;
  if (b.total == 0) return static_cast<double>(a.matched) / (2.0 * static_cast<double>(a.total));
  // (m1*t2 + m2*t1) / (2*t1*t2) as one correctly rounded division.
  constexpr std::uint64_t kExact = std::uint64_t{1} << 53;
  if (a.total < (1u << 26) && b.total < (1u << 26)) {
    const std::uint64_t num = a.matched * b.total + b.matched * a.total;
    const std::uint64_t den = 2 * a.total * b.total;
    if (num < kExact && den < kExact) return static_cast<double>(num) / static_cast<double>(den);
  }
  return 0.5 * (static_cast<double>(a.matched) / static_cast<double>(a.total) +
                static_cast<double>(b.matched) / static_cast<double>(b.total));
}

double rouge_combined(std::span<const std::string> references, std::string_view candidate) {
  const auto refs = tokenize_all(references);
  const auto cand = tokenize(candidate);
  return rouge_combined_tokens(refs, cand);
}

double mse(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.empty()) throw_invalid_argument("mse of an empty vector");
  if (predicted.size() != target.size()) {
    throw_invalid_argument("mse length mismatch: " + std::to_string(predicted.size()) + " vs " +
                           std::to_string(target.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - target[i];
    sum += d * d;
  }
  return sum / static_cast<double>(predicted.size());
}

}  // namespace revgen
