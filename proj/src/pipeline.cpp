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

#include "revgen/pipeline.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "revgen/error.hpp"

namespace revgen {
namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 20> kKeys = {
    "corpus",       "format",         "weights",          "block_size",       "intersection",
    "context_window", "scorer",       "rank_by",          "k",                "per_paper",
    "seed",         "search_limit",   "resolution",       "epochs",           "learning_rate",
    "holdout",      "include_abstract", "include_captions", "aggregation",    "review_format"};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(ErrorCode::kInvalidConfig,
              "invalid value \"" + std::string(value) + "\" for " + std::string(key) + ": expected " + std::string(expected));
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = comma == std::string_view::npos ? value.size() : comma;
    auto item = trim(value.substr(start, end - start));
    if (!item.empty()) items.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T out{};
  const auto s = trim(value);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) bad_value(key, value, "an integer");
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto s = trim(value);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const auto s = trim(value);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad_value(key, value, "true or false");
}

std::string format_real(double value) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, r.ptr);
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

const char* format_name(CorpusFormat f) { return f == CorpusFormat::kJsonl ? "jsonl" : "jats_xml"; }

const char* rank_name(RankBy r) {
  switch (r) {
    case RankBy::kCited:
      return "cited";
    case RankBy::kRecent:
      return "recent";
    case RankBy::kRelevant:
      return "relevant";
  }
  return "cited";
}

const char* review_format_name(ReviewFormat f) {
  switch (f) {
    case ReviewFormat::kTsv:
      return "tsv";
    case ReviewFormat::kMarkdown:
      return "markdown";
    case ReviewFormat::kJson:
      return "json";
  }
  return "tsv";
}

const char* review_extension(ReviewFormat f) {
  switch (f) {
    case ReviewFormat::kTsv:
      return "tsv";
    case ReviewFormat::kMarkdown:
      return "md";
    case ReviewFormat::kJson:
      return "json";
  }
  return "tsv";
}

// Writes a temporary file, then renames it over the artifact.
void write_artifact(const Workspace& ws, StageResult& result, const std::string& relative, const std::string& content) {
  const fs::path target = ws.path(relative);
  fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
  result.artifacts.push_back(relative);
}

std::ifstream open_artifact(const Workspace& ws, const std::string& relative, std::string_view stage) {
  const fs::path p = ws.path(relative);
  if (!fs::exists(p)) {
    throw Error(ErrorCode::kMissingArtifact,
                "missing artifact " + relative + "; run the " + std::string(stage) + " stage first");
  }
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + p.string());
  return in;
}

struct ScorerBundle {
  std::unique_ptr<Featurizer> featurizer;
  std::unique_ptr<SentenceScorer> scorer;
};

ScorerBundle make_scorer(const Workspace& ws, const PipelineConfig& config, const CorpusIndex& index) {
  ScorerBundle bundle;
  const std::string& name = config.scorer;
  if (name == "baseline") {
    auto in = open_artifact(ws, "models/model.json", "train");
    auto model = load_model(in);
    bundle.featurizer = std::make_unique<Featurizer>(index, config.source());
    bundle.scorer = std::make_unique<LinearScorer>(std::move(model), *bundle.featurizer);
  } else if (name == "oracle") {
    bundle.scorer = std::make_unique<OracleScorer>(index, config.label_options());
  } else if (name == "random") {
    bundle.scorer = std::make_unique<RandomScorer>(config.seed);
  } else if (name.starts_with("external:")) {
    bundle.scorer = std::make_unique<ExternalScorer>(name.substr(9));
  } else {
    bad_value("scorer", name, "baseline, oracle, random or external:<command>");
  }
  return bundle;
}

}  // namespace

std::span<const std::string_view> config_keys() { return kKeys; }

void set_config_value(PipelineConfig& c, std::string_view key, std::string_view raw) {
  const std::string value = trim(raw);
  if (key == "corpus") {
    c.corpus = value;
  } else if (key == "format") {
    const auto f = parse_corpus_format(value);
    if (!f) bad_value(key, value, "jsonl or jats_xml");
    c.format = *f;
  } else if (key == "weights") {
    const auto items = split_list(value);
    if (items.size() != 4) bad_value(key, value, "four comma-separated numbers");
    c.weights = {parse_real(key, items[0]), parse_real(key, items[1]), parse_real(key, items[2]),
                 parse_real(key, items[3])};
  } else if (key == "block_size") {
    c.block_size = parse_integer<std::size_t>(key, value);
  } else if (key == "intersection") {
    c.intersection = parse_integer<std::size_t>(key, value);
  } else if (key == "context_window") {
    c.context_window = parse_integer<std::size_t>(key, value);
  } else if (key == "scorer") {
    if (value != "baseline" && value != "oracle" && value != "random" &&
        !(value.starts_with("external:") && value.size() > 9)) {
      bad_value(key, value, "baseline, oracle, random or external:<command>");
    }
    c.scorer = value;
  } else if (key == "rank_by") {
    const auto r = parse_rank_by(value);
    if (!r) bad_value(key, value, "cited, recent or relevant");
    c.rank_by = *r;
  } else if (key == "k") {
    c.k = parse_integer<std::size_t>(key, value);
  } else if (key == "per_paper") {
    c.per_paper = parse_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "search_limit") {
    c.search_limit = parse_integer<std::size_t>(key, value);
  } else if (key == "resolution") {
    c.resolution = parse_real(key, value);
  } else if (key == "epochs") {
    c.epochs = parse_integer<int>(key, value);
  } else if (key == "learning_rate") {
    c.learning_rate = parse_real(key, value);
  } else if (key == "holdout") {
    const auto items = split_list(value);
    c.holdout = std::set<std::string>(items.begin(), items.end());
  } else if (key == "include_abstract") {
    c.include_abstract = parse_bool(key, value);
  } else if (key == "include_captions") {
    c.include_captions = parse_bool(key, value);
  } else if (key == "aggregation") {
    const auto a = parse_aggregation(value);
    if (!a) bad_value(key, value, "mean or max");
    c.aggregation = *a;
  } else if (key == "review_format") {
    const auto f = parse_review_format(value);
    if (!f) bad_value(key, value, "tsv, markdown or json");
    c.review_format = *f;
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown config key \"" + std::string(key) + "\"");
  }
}

std::string get_config_value(const PipelineConfig& c, std::string_view key) {
  if (key == "corpus") return c.corpus;
  if (key == "format") return format_name(c.format);
  if (key == "weights") {
    return format_real(c.weights.citation) + "," + format_real(c.weights.cocitation) + "," +
           format_real(c.weights.coupling) + "," + format_real(c.weights.text);
  }
  if (key == "block_size") return std::to_string(c.block_size);
  if (key == "intersection") return std::to_string(c.intersection);
  if (key == "context_window") return std::to_string(c.context_window);
  if (key == "scorer") return c.scorer;
  if (key == "rank_by") return rank_name(c.rank_by);
  if (key == "k") return std::to_string(c.k);
  if (key == "per_paper") return std::to_string(c.per_paper);
  if (key == "seed") return std::to_string(c.seed);
  if (key == "search_limit") return std::to_string(c.search_limit);
  if (key == "resolution") return format_real(c.resolution);
  if (key == "epochs") return std::to_string(c.epochs);
  if (key == "learning_rate") return format_real(c.learning_rate);
  if (key == "holdout") return join({c.holdout.begin(), c.holdout.end()}, ",");
  if (key == "include_abstract") return c.include_abstract ? "true" : "false";
  if (key == "include_captions") return c.include_captions ? "true" : "false";
  if (key == "aggregation") return c.aggregation == Aggregation::kMean ? "mean" : "max";
  if (key == "review_format") return review_format_name(c.review_format);
  throw Error(ErrorCode::kInvalidConfig, "unknown config key \"" + std::string(key) + "\"");
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig config;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(number) + ": expected key = value");
    }
    try {
      set_config_value(config, trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config file " + path.string());
  PipelineConfig config;
  try {
    config = parse_config(in);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  }
  if (!config.corpus.empty() && fs::path(config.corpus).is_relative()) {
    config.corpus = (path.parent_path() / config.corpus).lexically_normal().string();
  }
  return config;
}

std::string dump_config(const PipelineConfig& config) {
  std::string out;
  for (const auto key : kKeys) out += std::string(key) + " = " + get_config_value(config, key) + "\n";
  return out;
}

void validate_config(const PipelineConfig& c) {
  const auto fail = [](const std::string& m) { throw Error(ErrorCode::kInvalidConfig, m); };
  if (c.block_size <= c.intersection) fail("block_size must exceed intersection");
  if (c.k < 1) fail("k must be >= 1");
  if (c.per_paper < 1) fail("per_paper must be >= 1");
  if (c.search_limit < 1) fail("search_limit must be >= 1");
  if (c.epochs < 1) fail("epochs must be >= 1");
  if (!(c.learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (!(c.resolution > 0.0)) fail("resolution must be > 0");
  const std::array<double, 4> w = {c.weights.citation, c.weights.cocitation, c.weights.coupling, c.weights.text};
  bool any = false;
  for (const double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail("weights must be finite and non-negative");
    any = any || x > 0.0;
  }
  if (!any) fail("weights must not all be zero");
}

Workspace::Workspace(const fs::path& root) : root_(root) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create workspace " + root_.string() + ": " + ec.message());
  const fs::path lock = root_ / "workspace.lock";
  lock_fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) throw Error(ErrorCode::kIo, "cannot open " + lock.string() + ": " + std::strerror(errno));
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    const int err = errno;
    ::close(lock_fd_);
    lock_fd_ = -1;
    if (err == EWOULDBLOCK) throw Error(ErrorCode::kWorkspaceLocked, "workspace " + root_.string() + " is in use");
    throw Error(ErrorCode::kIo, "cannot lock " + lock.string() + ": " + std::strerror(err));
  }
}

Workspace::~Workspace() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

CorpusIndex load_workspace_index(const Workspace& ws) {
  auto in = open_artifact(ws, "index/corpus.jsonl", "ingest");
  auto result = ingest_jsonl(in);
  if (!result.report.empty()) {
    throw Error(ErrorCode::kParse, "index/corpus.jsonl line " + std::to_string(result.report.front().line) + ": " +
                                       result.report.front().error);
  }
  return std::move(result.index);
}

QueryAnalysis analyze_query(const CorpusIndex& index, const PipelineConfig& config, std::string_view query) {
  QueryAnalysis a;
  a.ranked = search_papers(index, query, config.rank_by, config.search_limit);
  if (a.ranked.empty()) throw_invalid_argument("no paper matches query \"" + std::string(query) + "\"");
  a.graph = build_similarity_graph(index, a.ranked, config.weights);
  a.partition = detect_topics(a.graph, config.resolution, config.seed);
  a.key_papers = select_key_papers(a.ranked, config.k);
  return a;
}

StageResult run_ingest(Workspace& ws, const PipelineConfig& config) {
  validate_config(config);
  if (config.corpus.empty()) throw Error(ErrorCode::kInvalidConfig, "corpus path is not set");
  auto ingested = ingest_corpus(config.corpus, config.format);
  StageResult result;
  std::ostringstream corpus;
  write_corpus_jsonl(ingested.index, corpus);
  std::ostringstream report;
  write_ingest_report(ingested.report, report);
  write_artifact(ws, result, "index/corpus.jsonl", corpus.str());
  write_artifact(ws, result, "index/ingest_report.jsonl", report.str());
  for (const auto& issue : ingested.report) {
    result.warnings.push_back("entry " + std::to_string(issue.line) + " skipped: " + issue.error);
  }
  std::size_t reviews = 0;
  for (const auto& p : ingested.index.papers()) reviews += p.is_review ? 1 : 0;
  result.output = "ingested " + std::to_string(ingested.index.size()) + " papers (" + std::to_string(reviews) +
                  " reviews), rejected " + std::to_string(ingested.report.size()) + "\n";
  return result;
}

StageResult run_graph(Workspace& ws, const PipelineConfig& config, std::string_view query) {
  validate_config(config);
  const auto index = load_workspace_index(ws);
  const auto a = analyze_query(index, config, query);
  StageResult result;

  std::ostringstream search;
  search << "rank\tpmid\ttitle\tyear\tcitations\ttopic\n";
  for (std::size_t i = 0; i < a.ranked.size(); ++i) {
    const auto& p = index.at(a.ranked[i]);
    search << (i + 1) << '\t' << p.pmid << '\t' << escape_tsv(p.title) << '\t' << p.year << '\t'
           << index.citation_count(p.pmid) << '\t' << a.partition.assignment.at(p.pmid) << '\n';
  }
  std::ostringstream edges;
  write_graph_tsv(a.graph, edges);
  std::ostringstream topics;
  write_partition_tsv(a.partition, topics);
  std::ostringstream levels;
  levels << "level\tmodularity\n";
  for (std::size_t i = 0; i < a.partition.level_modularity.size(); ++i) {
    levels << (i + 1) << '\t' << format_real(a.partition.level_modularity[i]) << '\n';
  }
  write_artifact(ws, result, "graph/search.tsv", search.str());
  write_artifact(ws, result, "graph/edges.tsv", edges.str());
  write_artifact(ws, result, "graph/topics.tsv", topics.str());
  write_artifact(ws, result, "graph/levels.tsv", levels.str());
  result.output = std::to_string(a.ranked.size()) + " papers, " + std::to_string(a.graph.edges.size()) + " edges, " +
                  std::to_string(a.partition.topic_count()) + " topics, modularity " +
                  format_real(a.partition.modularity) + "\n";
  return result;
}

StageResult run_labels(Workspace& ws, const PipelineConfig& config) {
  validate_config(config);
  const auto index = load_workspace_index(ws);
  for (const auto& pmid : config.holdout) {
    if (!index.contains(pmid)) throw Error(ErrorCode::kInvalidConfig, "holdout review " + pmid + " is not in the corpus");
  }
  const auto blocks = build_training_set(index, config.holdout, config.label_options());
  StageResult result;
  std::ostringstream out;
  write_labeled_blocks(blocks, out);
  write_artifact(ws, result, "labels/blocks.jsonl", out.str());
  std::set<std::string> papers;
  for (const auto& b : blocks) papers.insert(b.pmid);
  if (blocks.empty()) result.warnings.push_back("no paper has citation contexts outside the holdout");
  result.output = std::to_string(blocks.size()) + " blocks from " + std::to_string(papers.size()) + " papers\n";
  return result;
}

StageResult run_train(Workspace& ws, const PipelineConfig& config) {
  validate_config(config);
  const auto index = load_workspace_index(ws);
  auto in = open_artifact(ws, "labels/blocks.jsonl", "labels");
  const auto blocks = read_labeled_blocks(in);
  if (blocks.empty()) throw Error(ErrorCode::kInvalidArgument, "labels/blocks.jsonl holds no training blocks");
  const Featurizer featurizer(index, config.source());
  const auto model = train_baseline(blocks, featurizer, {config.epochs, config.learning_rate, config.seed});
  StageResult result;
  std::ostringstream model_out;
  save_model(model, model_out);
  std::ostringstream log;
  log << "epoch\tmse\n";
  for (const auto& [epoch, loss] : model.training_log) log << epoch << '\t' << format_real(loss) << '\n';
  write_artifact(ws, result, "models/model.json", model_out.str());
  write_artifact(ws, result, "models/training_log.tsv", log.str());
  const double final_loss = model.training_log.empty() ? 0.0 : model.training_log.back().second;
  result.output = "trained on " + std::to_string(blocks.size()) + " blocks, final mse " + format_real(final_loss) + "\n";
  return result;
}

StageResult run_review(Workspace& ws, const PipelineConfig& config, std::string_view query) {
  validate_config(config);
  const auto index = load_workspace_index(ws);
  const auto a = analyze_query(index, config, query);
  auto bundle = make_scorer(ws, config, index);
  const auto options = config.scoring_options();
  std::map<std::string, std::vector<double>> scores;
  for (const auto& pmid : a.key_papers) {
    const auto& paper = index.at(pmid);
    if (scoring_sentences(paper, options.source).empty()) continue;
    scores[pmid] = score_paper(*bundle.scorer, paper, options);
  }
  const auto table = assemble_review(index, a.key_papers, scores, a.partition, config.per_paper, options.source);
  StageResult result;
  result.warnings = table.warnings;
  result.output = render(table.entries, config.review_format);
  write_artifact(ws, result, std::string("reviews/review.") + review_extension(config.review_format), result.output);
  return result;
}

StageResult run_benchmark(Workspace& ws, const PipelineConfig& config, std::span<const std::size_t> n_values) {
  validate_config(config);
  if (config.holdout.empty()) throw Error(ErrorCode::kInvalidConfig, "benchmark requires a non-empty holdout");
  const auto index = load_workspace_index(ws);
  for (const auto& pmid : config.holdout) {
    if (!index.contains(pmid)) throw Error(ErrorCode::kInvalidConfig, "holdout review " + pmid + " is not in the corpus");
  }
  auto bundle = make_scorer(ws, config, index);
  const auto bench = benchmark(index, config.holdout, *bundle.scorer, n_values, config.scoring_options());
  StageResult result;
  result.warnings = bench.warnings;
  std::ostringstream rows;
  write_benchmark_tsv(bench, rows);
  std::ostringstream summary;
  write_benchmark_summary_tsv(bench, summary);
  write_artifact(ws, result, "bench/bench.tsv", rows.str());
  write_artifact(ws, result, "bench/summary.tsv", summary.str());
  result.output = summary.str();
  return result;
}

StageResult run_report(Workspace& ws, const PipelineConfig& config, const fs::path& annotations) {
  validate_config(config);
  std::ifstream in(annotations, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read annotations " + annotations.string());
  const auto file = parse_annotation_csv(in);
  StageResult result;
  for (const auto& issue : file.issues) {
    result.warnings.push_back("line " + std::to_string(issue.line) + " rejected: " + issue.error);
  }
  if (file.records.empty()) throw_invalid_argument("no valid annotation records in " + annotations.string());
  result.output = render_annotation_report(annotation_report(file.records));
  write_artifact(ws, result, "reviews/annotation_report.md", result.output);
  return result;
}

}  // namespace revgen
