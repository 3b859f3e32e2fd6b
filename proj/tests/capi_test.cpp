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

#include <filesystem>
#include <memory>
#include <string>

#include <unistd.h>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "revgen/revgen.h"

namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using ::testing::StartsWith;

struct StringFree {
  void operator()(char* s) const { revgen_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringFree>;

std::string take(char* s) {
  OwnedString owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("revgen_capi_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    ASSERT_EQ(revgen_config_load(REVGEN_FIXTURE_DIR "/pipeline.conf", &config_), REVGEN_OK) << revgen_last_error();
  }
  void TearDown() override {
    revgen_config_free(config_);
    fs::remove_all(dir_);
  }

  fs::path dir_;
  revgen_config* config_ = nullptr;
};

TEST(CApiBasics, VersionAndStatusNames) {
  EXPECT_STREQ(revgen_version(), "0.1.0");
  EXPECT_STREQ(revgen_status_name(REVGEN_OK), "ok");
  EXPECT_STREQ(revgen_status_name(REVGEN_ERR_WORKSPACE_LOCKED), "workspace locked");
  EXPECT_STREQ(revgen_status_name(static_cast<revgen_status>(99)), "unknown status");
}

TEST(CApiBasics, RougeEntryPoints) {
  const char* refs[] = {"the cat sat on the mat"};
  double value = -1.0;
  ASSERT_EQ(revgen_rouge_n(refs, 1, "the cat", 1, &value), REVGEN_OK);
  EXPECT_DOUBLE_EQ(value, 2.0 / 6.0);
  ASSERT_EQ(revgen_rouge_combined(refs, 1, "the cat", &value), REVGEN_OK);
  EXPECT_DOUBLE_EQ(value, 0.5 * (2.0 / 6.0 + 1.0 / 5.0));
  EXPECT_EQ(revgen_rouge_n(refs, 1, "x", 0, &value), REVGEN_ERR_INVALID_ARGUMENT);
  EXPECT_THAT(revgen_last_error(), HasSubstr("n"));
  EXPECT_EQ(revgen_rouge_n(nullptr, 1, "x", 1, &value), REVGEN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(revgen_rouge_combined(refs, 1, "x", nullptr), REVGEN_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(revgen_rouge_combined(refs, 1, "x", &value), REVGEN_OK);
  EXPECT_STREQ(revgen_last_error(), "");
}

TEST(CApiBasics, ConfigSetGetAndErrors) {
  revgen_config* c = nullptr;
  ASSERT_EQ(revgen_config_new(&c), REVGEN_OK);
  char* out = nullptr;
  ASSERT_EQ(revgen_config_get(c, "block_size", &out), REVGEN_OK);
  EXPECT_EQ(take(out), "10");
  EXPECT_EQ(revgen_config_set(c, "k", "7"), REVGEN_OK);
  ASSERT_EQ(revgen_config_get(c, "k", &out), REVGEN_OK);
  EXPECT_EQ(take(out), "7");
  EXPECT_EQ(revgen_config_set(c, "colour", "red"), REVGEN_ERR_INVALID_CONFIG);
  EXPECT_THAT(revgen_last_error(), HasSubstr("colour"));
  EXPECT_EQ(revgen_config_set(c, "intersection", "10"), REVGEN_OK);
  EXPECT_EQ(revgen_config_validate(c), REVGEN_ERR_INVALID_CONFIG);
  ASSERT_EQ(revgen_config_dump(c, &out), REVGEN_OK);
  EXPECT_THAT(take(out), HasSubstr("k = 7"));
  EXPECT_EQ(revgen_config_load("/nonexistent.conf", &c), REVGEN_ERR_INVALID_CONFIG);
  EXPECT_EQ(revgen_config_set(nullptr, "k", "1"), REVGEN_ERR_INVALID_ARGUMENT);
  revgen_config_free(c);
  revgen_config_free(nullptr);
}

TEST(CApiBasics, CorpusAndSearch) {
  revgen_corpus* corpus = nullptr;
  ASSERT_EQ(revgen_corpus_load(REVGEN_FIXTURE_DIR "/corpus.jsonl", "jsonl", &corpus), REVGEN_OK);
  EXPECT_EQ(revgen_corpus_size(corpus), 50u);
  char* out = nullptr;
  ASSERT_EQ(revgen_search(corpus, "alzheimer disease", "cited", 3, &out), REVGEN_OK);
  const auto ids = take(out);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), '\n'), 3);
  EXPECT_EQ(revgen_search(corpus, "x", "sideways", 3, &out), REVGEN_ERR_INVALID_ARGUMENT);
  revgen_corpus_free(corpus);
  EXPECT_EQ(revgen_corpus_load(REVGEN_FIXTURE_DIR "/corpus.jsonl", "csv", &corpus), REVGEN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(revgen_corpus_load("/nonexistent.jsonl", "jsonl", &corpus), REVGEN_ERR_IO);
}

TEST_F(CApiTest, StagesAndErrorCodes) {
  revgen_workspace* ws = nullptr;
  ASSERT_EQ(revgen_workspace_open(dir_.c_str(), &ws), REVGEN_OK);
  revgen_workspace* second = nullptr;
  EXPECT_EQ(revgen_workspace_open(dir_.c_str(), &second), REVGEN_ERR_WORKSPACE_LOCKED);
  EXPECT_EQ(second, nullptr);

  char* result = nullptr;
  EXPECT_EQ(revgen_run_review(ws, config_, "alzheimer disease", &result), REVGEN_ERR_MISSING_ARTIFACT);
  EXPECT_THAT(revgen_last_error(), HasSubstr("ingest"));

  ASSERT_EQ(revgen_run_ingest(ws, config_, &result), REVGEN_OK) << revgen_last_error();
  EXPECT_THAT(take(result), StartsWith("{\"artifacts\":["));
  ASSERT_EQ(revgen_run_labels(ws, config_, &result), REVGEN_OK) << revgen_last_error();
  take(result);
  ASSERT_EQ(revgen_run_train(ws, config_, &result), REVGEN_OK) << revgen_last_error();
  take(result);
  ASSERT_EQ(revgen_config_set(config_, "k", "10"), REVGEN_OK);
  ASSERT_EQ(revgen_run_review(ws, config_, "alzheimer disease", &result), REVGEN_OK) << revgen_last_error();
  EXPECT_THAT(take(result), HasSubstr("reviews/review.tsv"));
  const size_t n[] = {1, 5, 10};
  ASSERT_EQ(revgen_run_benchmark(ws, config_, n, 3, &result), REVGEN_OK) << revgen_last_error();
  EXPECT_THAT(take(result), HasSubstr("bench/summary.tsv"));
  EXPECT_EQ(revgen_run_benchmark(ws, config_, n, 0, &result), REVGEN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(revgen_run_graph(ws, config_, nullptr, &result), REVGEN_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(revgen_run_report(ws, config_, "/nonexistent.csv", &result), REVGEN_ERR_IO);

  revgen_workspace_close(ws);
  ASSERT_EQ(revgen_workspace_open(dir_.c_str(), &second), REVGEN_OK);
  revgen_workspace_close(second);
  revgen_workspace_close(nullptr);
}

}  // namespace
