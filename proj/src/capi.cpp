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

#include "revgen/revgen.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "revgen/error.hpp"
#include "revgen/pipeline.hpp"
#include "revgen/text_metrics.hpp"

struct revgen_config {
  revgen::PipelineConfig value;
};

struct revgen_workspace {
  std::unique_ptr<revgen::Workspace> value;
};

struct revgen_corpus {
  revgen::CorpusIndex value;
};

namespace {

thread_local std::string last_error;

revgen_status to_status(revgen::ErrorCode code) { return static_cast<revgen_status>(static_cast<int>(code)); }

template <typename Fn>
revgen_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return REVGEN_OK;
  } catch (const revgen::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return REVGEN_ERR_INTERNAL;
}

void require(const void* p, const char* name) {
  if (p == nullptr) revgen::throw_invalid_argument(std::string(name) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

char* stage_json(const revgen::StageResult& r) {
  const nlohmann::json j = {{"artifacts", r.artifacts}, {"warnings", r.warnings}, {"output", r.output}};
  return copy_string(j.dump());
}

std::vector<std::string> collect(const char* const* refs, size_t count) {
  if (count > 0) require(refs, "references");
  std::vector<std::string> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    require(refs[i], "reference");
    out.emplace_back(refs[i]);
  }
  return out;
}

template <typename Run>
revgen_status run_stage(revgen_workspace* ws, const revgen_config* config, char** result, Run&& run) {
  return guarded([&] {
    require(ws, "workspace");
    require(config, "config");
    require(result, "result");
    *result = stage_json(run(*ws->value, config->value));
  });
}

}  // namespace

extern "C" {

const char* revgen_version(void) { return "0.1.0"; }

const char* revgen_status_name(revgen_status status) {
  switch (status) {
    case REVGEN_OK:
      return "ok";
    case REVGEN_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case REVGEN_ERR_INVALID_CONFIG:
      return "invalid config";
    case REVGEN_ERR_MISSING_ARTIFACT:
      return "missing artifact";
    case REVGEN_ERR_WORKSPACE_LOCKED:
      return "workspace locked";
    case REVGEN_ERR_IO:
      return "i/o error";
    case REVGEN_ERR_PARSE:
      return "parse error";
    case REVGEN_ERR_DUPLICATE_ID:
      return "duplicate id";
    case REVGEN_ERR_BACKEND:
      return "scorer backend error";
    case REVGEN_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* revgen_last_error(void) { return last_error.c_str(); }

void revgen_string_free(char* s) { std::free(s); }

revgen_status revgen_config_new(revgen_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new revgen_config{};
  });
}

revgen_status revgen_config_load(const char* path, revgen_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto config = std::make_unique<revgen_config>();
    config->value = revgen::load_config(path);
    *out = config.release();
  });
}

revgen_status revgen_config_set(revgen_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    revgen::set_config_value(config->value, key, value);
  });
}

revgen_status revgen_config_get(const revgen_config* config, const char* key, char** out) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(out, "out");
    *out = copy_string(revgen::get_config_value(config->value, key));
  });
}

revgen_status revgen_config_dump(const revgen_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = copy_string(revgen::dump_config(config->value));
  });
}

revgen_status revgen_config_validate(const revgen_config* config) {
  return guarded([&] {
    require(config, "config");
    revgen::validate_config(config->value);
  });
}

void revgen_config_free(revgen_config* config) { delete config; }

revgen_status revgen_workspace_open(const char* path, revgen_workspace** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto ws = std::make_unique<revgen_workspace>();
    ws->value = std::make_unique<revgen::Workspace>(path);
    *out = ws.release();
  });
}

void revgen_workspace_close(revgen_workspace* workspace) { delete workspace; }

revgen_status revgen_run_ingest(revgen_workspace* ws, const revgen_config* config, char** result) {
  return run_stage(ws, config, result, [](auto& w, const auto& c) { return revgen::run_ingest(w, c); });
}

revgen_status revgen_run_graph(revgen_workspace* ws, const revgen_config* config, const char* query, char** result) {
  return run_stage(ws, config, result, [&](auto& w, const auto& c) {
    require(query, "query");
    return revgen::run_graph(w, c, query);
  });
}

revgen_status revgen_run_labels(revgen_workspace* ws, const revgen_config* config, char** result) {
  return run_stage(ws, config, result, [](auto& w, const auto& c) { return revgen::run_labels(w, c); });
}

revgen_status revgen_run_train(revgen_workspace* ws, const revgen_config* config, char** result) {
  return run_stage(ws, config, result, [](auto& w, const auto& c) { return revgen::run_train(w, c); });
}

revgen_status revgen_run_review(revgen_workspace* ws, const revgen_config* config, const char* query, char** result) {
  return run_stage(ws, config, result, [&](auto& w, const auto& c) {
    require(query, "query");
    return revgen::run_review(w, c, query);
  });
}

revgen_status revgen_run_benchmark(revgen_workspace* ws, const revgen_config* config, const size_t* n_values,
                                   size_t n_count, char** result) {
  return run_stage(ws, config, result, [&](auto& w, const auto& c) {
    if (n_count > 0) require(n_values, "n_values");
    const std::vector<std::size_t> n(n_values, n_values + n_count);
    return revgen::run_benchmark(w, c, n);
  });
}

revgen_status revgen_run_report(revgen_workspace* ws, const revgen_config* config, const char* annotations_path,
                                char** result) {
  return run_stage(ws, config, result, [&](auto& w, const auto& c) {
    require(annotations_path, "annotations_path");
    return revgen::run_report(w, c, annotations_path);
  });
}

revgen_status revgen_corpus_load(const char* path, const char* format, revgen_corpus** out) {
  return guarded([&] {
    require(path, "path");
    require(format, "format");
    require(out, "out");
    const auto f = revgen::parse_corpus_format(format);
    if (!f) revgen::throw_invalid_argument(std::string("unknown corpus format ") + format);
    auto corpus = std::make_unique<revgen_corpus>();
    corpus->value = revgen::ingest_corpus(path, *f).index;
    *out = corpus.release();
  });
}

size_t revgen_corpus_size(const revgen_corpus* corpus) { return corpus == nullptr ? 0 : corpus->value.size(); }

void revgen_corpus_free(revgen_corpus* corpus) { delete corpus; }

revgen_status revgen_search(const revgen_corpus* corpus, const char* query, const char* rank_by, size_t limit,
                            char** out) {
  return guarded([&] {
    require(corpus, "corpus");
    require(query, "query");
    require(rank_by, "rank_by");
    require(out, "out");
    const auto r = revgen::parse_rank_by(rank_by);
    if (!r) revgen::throw_invalid_argument(std::string("unknown rank_by ") + rank_by);
    std::string text;
    for (const auto& pmid : revgen::search_papers(corpus->value, query, *r, limit)) text += pmid + "\n";
    *out = copy_string(text);
  });
}

revgen_status revgen_rouge_n(const char* const* references, size_t reference_count, const char* candidate, int n,
                             double* out) {
  return guarded([&] {
    require(candidate, "candidate");
    require(out, "out");
    const auto refs = collect(references, reference_count);
    *out = revgen::rouge_n(refs, candidate, n);
  });
}

revgen_status revgen_rouge_combined(const char* const* references, size_t reference_count, const char* candidate,
                                    double* out) {
  return guarded([&] {
    require(candidate, "candidate");
    require(out, "out");
    const auto refs = collect(references, reference_count);
    *out = revgen::rouge_combined(refs, candidate);
  });
}

}  // extern "C"
