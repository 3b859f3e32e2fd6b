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

#include "revgen/citation_graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <unordered_set>

#include "parallel.hpp"
#include "revgen/text_metrics.hpp"

namespace revgen {
namespace {

std::size_t sorted_intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

template <typename T>
PairMatrix<T> pairwise(const std::vector<std::string>& ids, auto&& value) {
  PairMatrix<T> out(ids);
  // Row i only writes pairs (i, j > i), so rows never overlap.
  detail::parallel_for(ids.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) out.set(i, j, value(i, j));
  });
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

// Adjacency-list form used by Louvain; supports self loops after aggregation.
struct LouvainGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency;  // no self entries
  std::vector<double> self_loop;  // A_ii, internal weight counted over ordered pairs
  std::vector<double> degree;
  double total = 0.0;  // sum of degrees = 2m

  std::size_t size() const { return adjacency.size(); }

  void finalize() {
    degree.assign(size(), 0.0);
    total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      std::sort(adjacency[i].begin(), adjacency[i].end());
      degree[i] = self_loop[i];
      for (const auto& [j, w] : adjacency[i]) degree[i] += w;
      total += degree[i];
    }
  }
};

LouvainGraph to_louvain_graph(const SimilarityGraph& graph) {
  LouvainGraph g;
  g.adjacency.resize(graph.nodes.size());
  g.self_loop.assign(graph.nodes.size(), 0.0);
  auto index_of = [&](const std::string& id) {
    const auto it = std::lower_bound(graph.nodes.begin(), graph.nodes.end(), id);
    if (it == graph.nodes.end() || *it != id) throw_invalid_argument("edge endpoint not a node: " + id);
    return static_cast<std::size_t>(it - graph.nodes.begin());
  };
  for (const auto& e : graph.edges) {
    if (e.weight <= 0.0) continue;
    const auto a = index_of(e.source);
    const auto b = index_of(e.target);
    if (a == b) continue;
    g.adjacency[a].emplace_back(b, e.weight);
    g.adjacency[b].emplace_back(a, e.weight);
  }
  g.finalize();
  return g;
}

// One local-moving phase. Returns true if any node changed community.
bool local_moving(const LouvainGraph& g, const std::vector<std::size_t>& order, double resolution,
                  std::vector<std::size_t>& community) {
  const std::size_t n = g.size();
  community.resize(n);
  std::iota(community.begin(), community.end(), 0);
  if (g.total <= 0.0) return false;

  std::vector<double> tot = g.degree;
  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  constexpr double kMinGain = 1e-12;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (const std::size_t node : order) {
      const std::size_t current = community[node];
      touched.clear();
      for (const auto& [nbr, w] : g.adjacency[node]) {
        const std::size_t c = community[nbr];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[current] -= g.degree[node];
      const double k = g.degree[node];
      std::size_t best = current;
      double best_gain = link[current] - resolution * tot[current] * k / g.total;
      for (const std::size_t c : touched) {
        const double gain = link[c] - resolution * tot[c] * k / g.total;
        if (gain > best_gain + kMinGain) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += k;
      community[node] = best;
      if (best != current) {
        moved = true;
        any_move = true;
      }
      for (const std::size_t c : touched) link[c] = 0.0;
    }
  }
  return any_move;
}

// Renumbers communities densely in order of first appearance.
std::size_t renumber(std::vector<std::size_t>& community) {
  std::vector<std::size_t> remap(community.size(), SIZE_MAX);
  std::size_t next = 0;
  for (auto& c : community) {
    if (remap[c] == SIZE_MAX) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

LouvainGraph aggregate(const LouvainGraph& g, const std::vector<std::size_t>& community, std::size_t count) {
  LouvainGraph out;
  out.adjacency.resize(count);
  out.self_loop.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> links(count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t ci = community[i];
    out.self_loop[ci] += g.self_loop[i];
    for (const auto& [j, w] : g.adjacency[i]) {
      const std::size_t cj = community[j];
      if (ci == cj) {
        out.self_loop[ci] += w;
      } else {
        links[ci][cj] += w;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    for (const auto& [d, w] : links[c]) out.adjacency[c].emplace_back(d, w);
  }
  out.finalize();
  return out;
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

std::optional<RankBy> parse_rank_by(std::string_view name) {
  if (name == "cited") return RankBy::kCited;
  if (name == "recent") return RankBy::kRecent;
  if (name == "relevant") return RankBy::kRelevant;
  return std::nullopt;
}

std::vector<std::string> paper_text_tokens(const PaperRecord& paper) {
  return tokenize(paper.title + " " + paper.abstract);
}

std::vector<std::string> search_papers(const CorpusIndex& index, std::string_view query, RankBy rank_by,
                                       std::size_t limit) {
  if (limit < 1) throw_invalid_argument("search limit must be >= 1");
  const auto query_tokens = tokenize(query);
  if (query_tokens.empty()) throw_invalid_argument("empty query");

  struct Hit {
    const PaperRecord* paper;
    double key;
    std::size_t citations;
  };
  std::vector<Hit> hits;
  std::vector<std::vector<std::string>> documents;
  if (rank_by == RankBy::kRelevant) {
    for (const auto& paper : index.papers()) documents.push_back(paper_text_tokens(paper));
  }
  const std::optional<TfIdfModel> model =
      rank_by == RankBy::kRelevant ? std::optional<TfIdfModel>(TfIdfModel(documents)) : std::nullopt;
  const auto query_vector = model ? model->vectorize(query_tokens) : TfIdfModel::Vector{};

  for (std::size_t i = 0; i < index.papers().size(); ++i) {
    const auto& paper = index.papers()[i];
    const auto tokens = rank_by == RankBy::kRelevant ? documents[i] : paper_text_tokens(paper);
    const std::unordered_set<std::string> vocabulary(tokens.begin(), tokens.end());
    const bool match = std::all_of(query_tokens.begin(), query_tokens.end(),
                                   [&](const std::string& t) { return vocabulary.count(t) > 0; });
    if (!match) continue;
    const std::size_t citations = index.citation_count(paper.pmid);
    double key = 0.0;
    switch (rank_by) {
      case RankBy::kCited:
        key = static_cast<double>(citations);
        break;
      case RankBy::kRecent:
        key = paper.year;
        break;
      case RankBy::kRelevant:
        key = TfIdfModel::cosine(query_vector, model->vectorize(tokens));
        break;
    }
    hits.push_back({&paper, key, citations});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.citations != b.citations) return a.citations > b.citations;
    if (a.paper->year != b.paper->year) return a.paper->year > b.paper->year;
    return a.paper->pmid < b.paper->pmid;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < hits.size() && i < limit; ++i) out.push_back(hits[i].paper->pmid);
  return out;
}

std::vector<std::string> normalize_candidates(const CorpusIndex& index, std::span<const std::string> candidates) {
  std::vector<std::string> ids(candidates.begin(), candidates.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const auto& id : ids) {
    if (!index.contains(id)) throw_invalid_argument("candidate not in corpus: " + id);
  }
  return ids;
}

PairCounts cocitation_counts(const CorpusIndex& index, std::span<const std::string> candidates) {
  const auto ids = normalize_candidates(index, candidates);
  return pairwise<std::size_t>(ids, [&](std::size_t i, std::size_t j) {
    return sorted_intersection_size(index.reverse_citations(ids[i]), index.reverse_citations(ids[j]));
  });
}

PairCounts bibliographic_coupling(const CorpusIndex& index, std::span<const std::string> candidates) {
  const auto ids = normalize_candidates(index, candidates);
  std::vector<std::vector<std::string>> references;
  references.reserve(ids.size());
  for (const auto& id : ids) {
    auto cited = index.at(id).cited_pmids;
    std::sort(cited.begin(), cited.end());
    references.push_back(std::move(cited));
  }
  return pairwise<std::size_t>(
      ids, [&](std::size_t i, std::size_t j) { return sorted_intersection_size(references[i], references[j]); });
}

TfIdfModel::TfIdfModel(std::span<const std::vector<std::string>> documents) : document_count_(documents.size()) {
  for (const auto& doc : documents) {
    const std::set<std::string> unique(doc.begin(), doc.end());
    for (const auto& term : unique) ++document_frequency_[term];
  }
}

double TfIdfModel::idf(const std::string& term) const {
  const auto it = document_frequency_.find(term);
  const double df = it == document_frequency_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(document_count_)) / (1.0 + df)) + 1.0;
}

TfIdfModel::Vector TfIdfModel::vectorize(std::span<const std::string> tokens) const {
  Vector v;
  for (const auto& t : tokens) v[t] += 1.0;
  double norm = 0.0;
  for (auto& [term, weight] : v) {
    weight *= idf(term);
    norm += weight * weight;
  }
  if (norm <= 0.0) return {};
  norm = std::sqrt(norm);
  for (auto& [term, weight] : v) weight /= norm;
  return v;
}

double TfIdfModel::cosine(const Vector& a, const Vector& b) {
  // Merge over sorted keys.
  double dot = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      dot += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return std::clamp(dot, 0.0, 1.0);
}

PairSimilarities tfidf_cosine(const CorpusIndex& index, std::span<const std::string> candidates) {
  const auto ids = normalize_candidates(index, candidates);
  if (ids.size() < 2) throw_invalid_argument("tfidf_cosine needs at least two candidates");
  std::vector<std::vector<std::string>> documents;
  documents.reserve(ids.size());
  for (const auto& id : ids) documents.push_back(paper_text_tokens(index.at(id)));
  const TfIdfModel model(documents);
  std::vector<TfIdfModel::Vector> vectors;
  vectors.reserve(ids.size());
  for (const auto& doc : documents) vectors.push_back(model.vectorize(doc));
  return pairwise<double>(ids,
                          [&](std::size_t i, std::size_t j) { return TfIdfModel::cosine(vectors[i], vectors[j]); });
}

SimilarityGraph build_similarity_graph(const CorpusIndex& index, std::span<const std::string> candidates,
                                       const HybridWeights& weights) {
  const std::array<double, 4> w = {weights.citation, weights.cocitation, weights.coupling, weights.text};
  if (std::any_of(w.begin(), w.end(), [](double x) { return !(x >= 0.0) || !std::isfinite(x); })) {
    throw_invalid_argument("hybrid weights must be finite and non-negative");
  }
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) {
    throw_invalid_argument("hybrid weights must not all be zero");
  }

  SimilarityGraph graph;
  graph.weights = weights;
  graph.nodes = normalize_candidates(index, candidates);
  const auto& ids = graph.nodes;
  if (ids.size() < 2) return graph;

  const PairCounts cocitation = cocitation_counts(index, ids);
  const PairCounts coupling = bibliographic_coupling(index, ids);
  const PairSimilarities text = tfidf_cosine(index, ids);
  const double max_cocitation = static_cast<double>(cocitation.max_off_diagonal());
  const double max_coupling = static_cast<double>(coupling.max_off_diagonal());

  std::vector<std::unordered_set<std::string>> cites;
  cites.reserve(ids.size());
  for (const auto& id : ids) {
    const auto& cited = index.at(id).cited_pmids;
    cites.emplace_back(cited.begin(), cited.end());
  }

  std::vector<std::vector<SimilarityEdge>> rows(ids.size());
  detail::parallel_for(ids.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      SimilarityEdge e;
      e.source = ids[i];
      e.target = ids[j];
      e.citation = cites[i].count(ids[j]) || cites[j].count(ids[i]) ? 1 : 0;
      e.cocitation = cocitation(i, j);
      e.coupling = coupling(i, j);
      e.text = text(i, j);
      const double norm_cocitation = max_cocitation > 0 ? static_cast<double>(e.cocitation) / max_cocitation : 0.0;
      const double norm_coupling = max_coupling > 0 ? static_cast<double>(e.coupling) / max_coupling : 0.0;
      e.weight = weights.citation * e.citation + weights.cocitation * norm_cocitation +
                 weights.coupling * norm_coupling + weights.text * e.text;
      if (e.weight > 0.0) rows[i].push_back(std::move(e));
    }
  });
  for (auto& row : rows) {
    for (auto& e : row) graph.edges.push_back(std::move(e));
  }
  return graph;
}

int TopicPartition::topic_count() const {
  int count = 0;
  for (const auto& [pmid, topic] : assignment) count = std::max(count, topic + 1);
  return count;
}

double modularity(const SimilarityGraph& graph, const std::map<std::string, int>& assignment, double resolution) {
  double total = 0.0;  // 2m
  std::map<int, double> internal;
  std::map<int, double> degree;
  for (const auto& e : graph.edges) {
    if (e.weight <= 0.0) continue;
    const int a = assignment.at(e.source);
    const int b = assignment.at(e.target);
    total += 2.0 * e.weight;
    degree[a] += e.weight;
    degree[b] += e.weight;
    if (a == b) internal[a] += 2.0 * e.weight;
  }
  if (total <= 0.0) return 0.0;
  double q = 0.0;
  for (const auto& [c, in] : internal) q += in / total;
  for (const auto& [c, d] : degree) q -= resolution * (d / total) * (d / total);
  return q;
}

TopicPartition detect_topics(const SimilarityGraph& graph, double resolution, std::uint64_t seed) {
  if (graph.nodes.empty()) throw_invalid_argument("cannot detect topics on an empty graph");
  if (!(resolution > 0.0)) throw_invalid_argument("resolution must be positive");

  LouvainGraph level_graph = to_louvain_graph(graph);
  std::vector<std::size_t> membership(graph.nodes.size());
  std::iota(membership.begin(), membership.end(), 0);
  std::mt19937_64 rng(seed);

  auto to_assignment = [&] {
    std::vector<std::size_t> dense = membership;
    renumber(dense);
    std::map<std::string, int> out;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) out[graph.nodes[i]] = static_cast<int>(dense[i]);
    return out;
  };

  TopicPartition result;
  while (true) {
    std::vector<std::size_t> order(level_graph.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    std::vector<std::size_t> community;
    if (!local_moving(level_graph, order, resolution, community)) break;
    const std::size_t count = renumber(community);
    for (auto& m : membership) m = community[m];
    result.level_modularity.push_back(modularity(graph, to_assignment(), resolution));
    if (count == level_graph.size()) break;
    level_graph = aggregate(level_graph, community, count);
  }
  result.assignment = to_assignment();
  result.modularity = modularity(graph, result.assignment, resolution);
  return result;
}

std::vector<std::string> select_key_papers(std::span<const std::string> ranked, std::size_t k) {
  if (k < 1) throw_invalid_argument("k must be >= 1");
  const std::size_t take = std::min(k, ranked.size());
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take)};
}

void write_graph_tsv(const SimilarityGraph& graph, std::ostream& out) {
  out << "pmid1\tpmid2\tweight\tcitation\tcocitation\tcoupling\ttext\n";
  for (const auto& e : graph.edges) {
    out << e.source << '\t' << e.target << '\t' << format_double(e.weight) << '\t' << e.citation << '\t'
        << e.cocitation << '\t' << e.coupling << '\t' << format_double(e.text) << '\n';
  }
}

void write_partition_tsv(const TopicPartition& partition, std::ostream& out) {
  out << "pmid\ttopic\n";
  for (const auto& [pmid, topic] : partition.assignment) out << pmid << '\t' << topic << '\n';
}

}  // namespace revgen
