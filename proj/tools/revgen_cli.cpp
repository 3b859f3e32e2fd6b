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

// revgen command-line driver. Exit status: 0 success, 1 runtime failure,
// 2 invalid configuration or usage, 3 missing upstream artifact,
// 4 workspace locked.

#include <cstddef>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revgen/revgen.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMissing = 3;
constexpr int kExitLocked = 4;

int exit_code(revgen_status status) {
  switch (status) {
    case REVGEN_OK:
      return 0;
    case REVGEN_ERR_INVALID_ARGUMENT:
    case REVGEN_ERR_INVALID_CONFIG:
      return kExitUsage;
    case REVGEN_ERR_MISSING_ARTIFACT:
      return kExitMissing;
    case REVGEN_ERR_WORKSPACE_LOCKED:
      return kExitLocked;
    default:
      return kExitRuntime;
  }
}

int report_failure(revgen_status status) {
  std::cerr << "revgen: " << revgen_status_name(status) << ": " << revgen_last_error() << "\n";
  return exit_code(status);
}

struct ConfigHandle {
  revgen_config* ptr = nullptr;
  ~ConfigHandle() { revgen_config_free(ptr); }
};

struct WorkspaceHandle {
  revgen_workspace* ptr = nullptr;
  ~WorkspaceHandle() { revgen_workspace_close(ptr); }
};

struct Options {
  std::string config_path;
  std::string workspace = "workspace";
  std::vector<std::string> sets;
  std::map<std::string, std::string> overrides;
  std::string query;
  std::string annotations;
  std::vector<std::size_t> n_values = {1, 5, 10};
  bool show_config = false;
};

// Prints the stage result and maps the status to an exit code.
int finish(revgen_status status, char* result) {
  if (status != REVGEN_OK) return report_failure(status);
  const auto j = nlohmann::json::parse(result);
  revgen_string_free(result);
  for (const auto& w : j.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << "\n";
  std::cout << j.at("output").get<std::string>();
  std::cout.flush();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Review generation from a citation corpus"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(revgen_version()));

  Options opt;
  app.add_option("-c,--config", opt.config_path, "Pipeline config file (key = value)");
  app.add_option("-w,--workspace", opt.workspace, "Workspace directory")->capture_default_str();
  app.add_option("--set", opt.sets, "Override a config key: key=value (repeatable)");
  app.add_flag("--show-config", opt.show_config, "Print the effective config (stdout when alone, else stderr)");

  // Named shortcuts for common keys.
  const std::vector<std::pair<std::string, std::string>> shortcuts = {
      {"--corpus", "corpus"},     {"--format", "review_format"}, {"--k", "k"},
      {"--per-paper", "per_paper"}, {"--seed", "seed"},          {"--scorer", "scorer"},
      {"--rank-by", "rank_by"},   {"--holdout", "holdout"},      {"--corpus-format", "format"}};
  for (const auto& [flag, key] : shortcuts) {
    app.add_option_function<std::string>(
        flag, [&opt, key = key](const std::string& v) { opt.overrides[key] = v; }, "Sets config key " + key);
  }

  auto* ingest = app.add_subcommand("ingest", "Parse the corpus into the workspace index");
  auto* graph = app.add_subcommand("graph", "Search, build the similarity graph and detect topics");
  graph->add_option("-q,--query", opt.query, "Search query")->required();
  auto* labels = app.add_subcommand("labels", "Build labeled training blocks from review citations");
  auto* train = app.add_subcommand("train", "Train the baseline sentence scorer");
  auto* review = app.add_subcommand("review", "Generate a review table for a query");
  review->add_option("-q,--query", opt.query, "Search query")->required();
  auto* bench = app.add_subcommand("benchmark", "ROUGE of top-n selections against holdout reviews");
  bench->add_option("--n", opt.n_values, "Comma-separated n values")->delimiter(',')->check(CLI::PositiveNumber);
  auto* report = app.add_subcommand("report", "Summarize expert annotations");
  report->add_option("-a,--annotations", opt.annotations, "Annotation CSV (query,pmid,sentence,label)")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (app.get_subcommands().empty() && !opt.show_config) {
    std::cerr << "A subcommand is required\nRun with --help for more information.\n";
    return kExitUsage;
  }

  ConfigHandle config;
  revgen_status status =
      opt.config_path.empty() ? revgen_config_new(&config.ptr) : revgen_config_load(opt.config_path.c_str(), &config.ptr);
  if (status != REVGEN_OK) return report_failure(status);
  for (const auto& kv : opt.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "revgen: invalid config: --set expects key=value, got \"" << kv << "\"\n";
      return kExitUsage;
    }
    status = revgen_config_set(config.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (status != REVGEN_OK) return report_failure(status);
  }
  for (const auto& [key, value] : opt.overrides) {
    status = revgen_config_set(config.ptr, key.c_str(), value.c_str());
    if (status != REVGEN_OK) return report_failure(status);
  }
  status = revgen_config_validate(config.ptr);
  if (status != REVGEN_OK) return report_failure(status);
  if (opt.show_config) {
    char* dump = nullptr;
    if (revgen_config_dump(config.ptr, &dump) == REVGEN_OK) {
      (app.get_subcommands().empty() ? std::cout : std::cerr) << dump;
      revgen_string_free(dump);
    }
    if (app.get_subcommands().empty()) return 0;
  }

  WorkspaceHandle ws;
  status = revgen_workspace_open(opt.workspace.c_str(), &ws.ptr);
  if (status != REVGEN_OK) return report_failure(status);

  char* result = nullptr;
  if (ingest->parsed()) {
    status = revgen_run_ingest(ws.ptr, config.ptr, &result);
  } else if (graph->parsed()) {
    status = revgen_run_graph(ws.ptr, config.ptr, opt.query.c_str(), &result);
  } else if (labels->parsed()) {
    status = revgen_run_labels(ws.ptr, config.ptr, &result);
  } else if (train->parsed()) {
    status = revgen_run_train(ws.ptr, config.ptr, &result);
  } else if (review->parsed()) {
    status = revgen_run_review(ws.ptr, config.ptr, opt.query.c_str(), &result);
  } else if (bench->parsed()) {
    status = revgen_run_benchmark(ws.ptr, config.ptr, opt.n_values.data(), opt.n_values.size(), &result);
  } else if (report->parsed()) {
    status = revgen_run_report(ws.ptr, config.ptr, opt.annotations.c_str(), &result);
  }
  return finish(status, result);
}
