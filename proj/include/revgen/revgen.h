/*
 * Copyright 2026 The revgen Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to librevgen.
 *
 * Every fallible call returns a revgen_status. On failure the message is
 * available from revgen_last_error() on the same thread until the next call.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with revgen_string_free(). Handles are not thread-safe; distinct
 * handles may be used from distinct threads.
 *
 * Stage calls return a JSON object:
 *   {"artifacts": [<workspace-relative path>...],
 *    "warnings": [<string>...],
 *    "output": <string>}
 */

#ifndef REVGEN_REVGEN_H_
#define REVGEN_REVGEN_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define REVGEN_API __attribute__((visibility("default")))
#else
#define REVGEN_API
#endif

typedef enum revgen_status {
  REVGEN_OK = 0,
  REVGEN_ERR_INVALID_ARGUMENT = 1,
  REVGEN_ERR_INVALID_CONFIG = 2,
  REVGEN_ERR_MISSING_ARTIFACT = 3,
  REVGEN_ERR_WORKSPACE_LOCKED = 4,
  REVGEN_ERR_IO = 5,
  REVGEN_ERR_PARSE = 6,
  REVGEN_ERR_DUPLICATE_ID = 7,
  REVGEN_ERR_BACKEND = 8,
  REVGEN_ERR_INTERNAL = 9
} revgen_status;

typedef struct revgen_config revgen_config;
typedef struct revgen_workspace revgen_workspace;
typedef struct revgen_corpus revgen_corpus;

REVGEN_API const char* revgen_version(void);
REVGEN_API const char* revgen_status_name(revgen_status status);
/* Never NULL; empty when the last call on this thread succeeded. */
REVGEN_API const char* revgen_last_error(void);
REVGEN_API void revgen_string_free(char* s);

/* Configuration: defaults, "key = value" files and per-key overrides. */
REVGEN_API revgen_status revgen_config_new(revgen_config** out);
REVGEN_API revgen_status revgen_config_load(const char* path, revgen_config** out);
REVGEN_API revgen_status revgen_config_set(revgen_config* config, const char* key, const char* value);
REVGEN_API revgen_status revgen_config_get(const revgen_config* config, const char* key, char** out);
REVGEN_API revgen_status revgen_config_dump(const revgen_config* config, char** out);
REVGEN_API revgen_status revgen_config_validate(const revgen_config* config);
REVGEN_API void revgen_config_free(revgen_config* config);

/* Opens (creating if needed) and locks a workspace directory. */
REVGEN_API revgen_status revgen_workspace_open(const char* path, revgen_workspace** out);
REVGEN_API void revgen_workspace_close(revgen_workspace* workspace);

REVGEN_API revgen_status revgen_run_ingest(revgen_workspace* ws, const revgen_config* config, char** result);
REVGEN_API revgen_status revgen_run_graph(revgen_workspace* ws, const revgen_config* config, const char* query,
                                          char** result);
REVGEN_API revgen_status revgen_run_labels(revgen_workspace* ws, const revgen_config* config, char** result);
REVGEN_API revgen_status revgen_run_train(revgen_workspace* ws, const revgen_config* config, char** result);
REVGEN_API revgen_status revgen_run_review(revgen_workspace* ws, const revgen_config* config, const char* query,
                                           char** result);
REVGEN_API revgen_status revgen_run_benchmark(revgen_workspace* ws, const revgen_config* config,
                                              const size_t* n_values, size_t n_count, char** result);
REVGEN_API revgen_status revgen_run_report(revgen_workspace* ws, const revgen_config* config,
                                           const char* annotations_path, char** result);

/* Direct corpus access. format is "jsonl" or "jats_xml". */
REVGEN_API revgen_status revgen_corpus_load(const char* path, const char* format, revgen_corpus** out);
REVGEN_API size_t revgen_corpus_size(const revgen_corpus* corpus);
REVGEN_API void revgen_corpus_free(revgen_corpus* corpus);
/* Matching pmids, one per line. rank_by is "cited", "recent" or "relevant". */
REVGEN_API revgen_status revgen_search(const revgen_corpus* corpus, const char* query, const char* rank_by,
                                       size_t limit, char** out);

REVGEN_API revgen_status revgen_rouge_n(const char* const* references, size_t reference_count,
                                        const char* candidate, int n, double* out);
REVGEN_API revgen_status revgen_rouge_combined(const char* const* references, size_t reference_count,
                                               const char* candidate, double* out);

#ifdef __cplusplus
}
#endif

#endif /* REVGEN_REVGEN_H_ */
