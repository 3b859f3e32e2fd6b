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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "revgen/error.hpp"
#include "revgen/pipeline.hpp"

namespace revgen {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

constexpr std::string_view kQuery = "alzheimer disease";

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("revgen_pipeline_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static PipelineConfig fixture_config() { return load_config(REVGEN_FIXTURE_DIR "/pipeline.conf"); }

  fs::path dir_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), root).string()] = slurp(entry.path());
  }
  return files;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInternal;
}

TEST(ConfigTest, DefaultsAndRoundTrip) {
  const PipelineConfig defaults;
  EXPECT_EQ(get_config_value(defaults, "block_size"), "10");
  EXPECT_EQ(get_config_value(defaults, "intersection"), "5");
  EXPECT_EQ(get_config_value(defaults, "aggregation"), "mean");
  EXPECT_EQ(config_keys().size(), 20u);

  PipelineConfig c;
  set_config_value(c, "weights", "1, 0.5, 0.25, 2");
  set_config_value(c, "holdout", "9,8");
  set_config_value(c, "scorer", "external:python3 -m scorer");
  set_config_value(c, "include_abstract", "true");
  std::istringstream in(dump_config(c));
  const auto again = parse_config(in);
  for (const auto key : config_keys()) EXPECT_EQ(get_config_value(again, key), get_config_value(c, key)) << key;
}

TEST(ConfigTest, ErrorsAreInvalidConfigWithLine) {
  PipelineConfig c;
  EXPECT_EQ(code_of([&] { set_config_value(c, "colour", "red"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([&] { set_config_value(c, "k", "-3"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([&] { set_config_value(c, "weights", "1,2"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([&] { set_config_value(c, "aggregation", "median"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([&] { get_config_value(c, "colour"); }), ErrorCode::kInvalidConfig);
  std::istringstream in("# comment\nk = 5\nnonsense line\n");
  try {
    parse_config(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    EXPECT_THAT(e.what(), HasSubstr("line 3"));
  }
  EXPECT_EQ(code_of([] { load_config("/nonexistent/revgen.conf"); }), ErrorCode::kInvalidConfig);
}

TEST(ConfigTest, Validation) {
  PipelineConfig c;
  EXPECT_NO_THROW(validate_config(c));
  c.intersection = 10;
  EXPECT_EQ(code_of([&] { validate_config(c); }), ErrorCode::kInvalidConfig);
  c = {};
  c.weights = {0, 0, 0, 0};
  EXPECT_EQ(code_of([&] { validate_config(c); }), ErrorCode::kInvalidConfig);
  c = {};
  c.learning_rate = 0;
  EXPECT_EQ(code_of([&] { validate_config(c); }), ErrorCode::kInvalidConfig);
}

TEST_F(PipelineTest, RelativeCorpusResolvedAgainstConfigFile) {
  const auto c = fixture_config();
  EXPECT_EQ(fs::path(c.corpus), fs::path(REVGEN_FIXTURE_DIR) / "corpus.jsonl");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.holdout.size(), 2u);
}

TEST_F(PipelineTest, SecondOpenIsLocked) {
  Workspace first(dir_ / "ws");
  EXPECT_EQ(code_of([&] { Workspace second(dir_ / "ws"); }), ErrorCode::kWorkspaceLocked);
}

TEST_F(PipelineTest, LockReleasedOnClose) {
  { Workspace first(dir_ / "ws"); }
  EXPECT_NO_THROW(Workspace second(dir_ / "ws"));
}

TEST_F(PipelineTest, MissingArtifactsNameTheStage) {
  Workspace ws(dir_ / "ws");
  const auto config = fixture_config();
  try {
    run_review(ws, config, kQuery);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingArtifact);
    EXPECT_THAT(e.what(), HasSubstr("ingest"));
  }
  run_ingest(ws, config);
  try {
    run_train(ws, config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingArtifact);
    EXPECT_THAT(e.what(), HasSubstr("labels"));
  }
  try {
    run_review(ws, config, kQuery);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingArtifact);
    EXPECT_THAT(e.what(), HasSubstr("train"));
  }
}

TEST_F(PipelineTest, StagesWriteTheirArtifacts) {
  Workspace ws(dir_ / "ws");
  const auto config = fixture_config();
  const auto ingest = run_ingest(ws, config);
  EXPECT_TRUE(fs::exists(ws.path("index/corpus.jsonl")));
  EXPECT_TRUE(fs::exists(ws.path("index/ingest_report.jsonl")));
  EXPECT_THAT(ingest.output, HasSubstr("50"));

  run_graph(ws, config, kQuery);
  for (const auto* f : {"graph/search.tsv", "graph/edges.tsv", "graph/topics.tsv", "graph/levels.tsv"}) {
    EXPECT_TRUE(fs::exists(ws.path(f))) << f;
  }
  run_labels(ws, config);
  run_train(ws, config);
  EXPECT_TRUE(fs::exists(ws.path("models/model.json")));
  EXPECT_TRUE(fs::exists(ws.path("models/training_log.tsv")));

  auto c = config;
  c.k = 10;
  run_review(ws, c, kQuery);
  const auto tsv = slurp(ws.path("reviews/review.tsv"));
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 11);
  EXPECT_FALSE(fs::exists(ws.path("reviews/review.md")));
  c.review_format = ReviewFormat::kMarkdown;
  run_review(ws, c, kQuery);
  EXPECT_TRUE(fs::exists(ws.path("reviews/review.md")));

  const std::vector<std::size_t> n = {1, 5, 10};
  run_benchmark(ws, config, n);
  EXPECT_EQ(slurp(ws.path("bench/summary.tsv")).substr(0, 12), "n\tmean_rouge");
  EXPECT_EQ(code_of([&] { run_graph(ws, config, "zzzz qqqq"); }), ErrorCode::kInvalidArgument);

  auto no_holdout = config;
  no_holdout.holdout.clear();
  EXPECT_EQ(code_of([&] { run_benchmark(ws, no_holdout, n); }), ErrorCode::kInvalidConfig);
}

TEST_F(PipelineTest, DownstreamStagesLeaveUpstreamBytesUnchanged) {
  Workspace ws(dir_ / "ws");
  const auto config = fixture_config();
  run_ingest(ws, config);
  run_labels(ws, config);
  run_train(ws, config);
  const auto before = snapshot(ws.root());
  run_graph(ws, config, kQuery);
  run_review(ws, config, kQuery);
  const std::vector<std::size_t> n = {1, 5};
  run_benchmark(ws, config, n);
  const auto after = snapshot(ws.root());
  for (const auto& [name, bytes] : before) {
    ASSERT_TRUE(after.contains(name)) << name;
    EXPECT_EQ(after.at(name), bytes) << name;
  }
}

TEST_F(PipelineTest, ReportStage) {
  Workspace ws(dir_ / "ws");
  const auto csv = dir_ / "annotations.csv";
  {
    std::ofstream out(csv);
    out << "query,pmid,sentence,label\nq,1,S.,useful\nq,2,T.,relevant\n";
  }
  const auto result = run_report(ws, {}, csv);
  EXPECT_THAT(result.output, HasSubstr("| q | 0% | 50% | 50% |"));
  EXPECT_EQ(slurp(ws.path("reviews/annotation_report.md")), result.output);
  EXPECT_EQ(code_of([&] { run_report(ws, {}, dir_ / "missing.csv"); }), ErrorCode::kIo);
}

TEST_F(PipelineTest, FullRunsAreByteIdentical) {
  std::vector<std::string> outputs;
  for (const char* name : {"a", "b"}) {
    Workspace ws(dir_ / name);
    const auto config = fixture_config();
    run_ingest(ws, config);
    run_labels(ws, config);
    run_train(ws, config);
    run_graph(ws, config, kQuery);
    run_review(ws, config, kQuery);
    auto json = config;
    json.review_format = ReviewFormat::kJson;
    run_review(ws, json, kQuery);
    outputs.push_back(slurp(ws.path("reviews/review.tsv")) + slurp(ws.path("reviews/review.json")) +
                      slurp(ws.path("models/model.json")) + slurp(ws.path("graph/topics.tsv")));
  }
  EXPECT_EQ(outputs[0], outputs[1]);
}

}  // namespace
}  // namespace revgen
