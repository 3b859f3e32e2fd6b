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

// Test double for the scorer/1 protocol.
//
//   echo_scorer [--labels blocks.jsonl] [--max-block N] [--mode MODE]
//
// With --labels, a sentence's score is its target from the labeled blocks
// file (0 when unknown); otherwise it is the sentence length / 1000.
// MODE selects a misbehaviour: ok (default), bad-protocol, malformed,
// wrong-id, short, nan, exit.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <json.hpp>

using nlohmann::json;

int main(int argc, char** argv) {
  std::string labels;
  std::string mode = "ok";
  long max_block = 64;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--labels") {
      labels = argv[i + 1];
    } else if (flag == "--max-block") {
      max_block = std::stol(argv[i + 1]);
    } else if (flag == "--mode") {
      mode = argv[i + 1];
    } else {
      std::cerr << "echo_scorer: unknown flag " << flag << "\n";
      return 2;
    }
  }

  std::map<std::string, double> targets;
  if (!labels.empty()) {
    std::ifstream in(labels);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = json::parse(line);
      const auto& s = j.at("sentences");
      const auto& t = j.at("targets");
      for (std::size_t k = 0; k < s.size(); ++k) targets[s[k].get<std::string>()] = t[k].get<double>();
    }
  }

  std::cout << json{{"protocol", mode == "bad-protocol" ? "scorer/0" : "scorer/1"}, {"max_block", max_block}}.dump()
            << std::endl;
  if (mode == "exit") return 0;

  std::string line;
  while (std::getline(std::cin, line)) {
    const auto request = json::parse(line);
    const auto id = request.at("id").get<long long>();
    json scores = json::array();
    for (const auto& s : request.at("sentences")) {
      const auto text = s.get<std::string>();
      if (labels.empty()) {
        scores.push_back(static_cast<double>(text.size()) / 1000.0);
      } else {
        const auto it = targets.find(text);
        scores.push_back(it == targets.end() ? 0.0 : it->second);
      }
    }
    if (mode == "malformed") {
      std::cout << "{not json" << std::endl;
    } else if (mode == "wrong-id") {
      std::cout << json{{"id", id + 1}, {"scores", scores}}.dump() << std::endl;
    } else if (mode == "short") {
      if (!scores.empty()) scores.erase(scores.size() - 1);
      std::cout << json{{"id", id}, {"scores", scores}}.dump() << std::endl;
    } else if (mode == "nan") {
      std::cout << R"({"id": )" << id << R"(, "scores": ["nan"]})" << std::endl;
    } else {
      std::cout << json{{"id", id}, {"scores", scores}}.dump() << std::endl;
    }
  }
  return 0;
}
