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

// Scorer protocol "scorer/1", one JSON document per line:
//   server -> client (once): {"protocol": "scorer/1", "max_block": <int>}
//   client -> server:        {"id": <int>, "sentences": [<str>, ...]}
//   server -> client:        {"id": <int>, "scores": [<float>, ...]}
// One request is in flight at a time. Any malformed line ends the session.

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "revgen/error.hpp"
#include "revgen/scorer.hpp"

namespace revgen {
namespace {

using nlohmann::json;

constexpr std::string_view kProtocol = "scorer/1";

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

ExternalScorer::ExternalScorer(const std::string& command) {
  // A dead child must surface as EPIPE, not kill the process.
  struct sigaction current {};
  if (::sigaction(SIGPIPE, nullptr, &current) == 0 && current.sa_handler == SIG_DFL) std::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(ErrorCode::kBackend, "pipe failed: " + std::string(std::strerror(errno)));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw Error(ErrorCode::kBackend, "pipe failed: " + std::string(std::strerror(errno)));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw Error(ErrorCode::kBackend, "fork failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  alive_ = true;

  const std::string line = read_line();
  try {
    const json hello = json::parse(line);
    if (hello.at("protocol").get<std::string>() != kProtocol) fail("unsupported protocol " + hello.at("protocol").dump());
    const auto max_block = hello.at("max_block").get<long long>();
    if (max_block < 1) fail("max_block must be >= 1");
    max_block_ = static_cast<std::size_t>(max_block);
  } catch (const json::exception& e) {
    fail("malformed handshake: " + std::string(e.what()));
  }
}

ExternalScorer::~ExternalScorer() { shutdown(); }

void ExternalScorer::shutdown() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    int status = 0;
    // Closing stdin asks the server to exit; terminate it if it lingers.
    for (int attempt = 0; attempt < 50; ++attempt) {
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_ || r < 0) {
        pid_ = -1;
        break;
      }
      ::usleep(10000);
    }
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }
  alive_ = false;
}

void ExternalScorer::fail(const std::string& message) {
  shutdown();
  throw Error(ErrorCode::kBackend, "scorer session aborted: " + message);
}

std::string ExternalScorer::read_line() {
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const ssize_t got = ::read(from_child_, chunk, sizeof(chunk));
    if (got > 0) {
      buffer_.append(chunk, static_cast<std::size_t>(got));
    } else if (got == 0) {
      fail("scorer process closed its output");
    } else if (errno != EINTR) {
      fail("read failed: " + std::string(std::strerror(errno)));
    }
  }
}

void ExternalScorer::write_line(const std::string& line) {
  const std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + sent, data.size() - sent);
    if (n > 0) {
      sent += static_cast<std::size_t>(n);
    } else if (n < 0 && errno != EINTR) {
      fail("write failed: " + std::string(std::strerror(errno)));
    }
  }
}

std::vector<double> ExternalScorer::score(const SentenceBlock& block) {
  if (!alive_) throw Error(ErrorCode::kBackend, "scorer session is closed");
  if (block.sentences.size() > max_block_) {
    throw Error(ErrorCode::kBackend, "block of " + std::to_string(block.sentences.size()) +
                                         " sentences exceeds server max_block " + std::to_string(max_block_));
  }
  const std::int64_t id = next_id_++;
  write_line(json{{"id", id}, {"sentences", block.sentences}}.dump());
  const std::string line = read_line();
  std::vector<double> scores;
  try {
    const json response = json::parse(line);
    if (response.at("id").get<std::int64_t>() != id) fail("response id " + response.at("id").dump() + " != " + std::to_string(id));
    for (const auto& s : response.at("scores")) {
      if (!s.is_number()) fail("non-numeric score");
      scores.push_back(s.get<double>());
    }
  } catch (const json::exception& e) {
    fail("malformed response: " + std::string(e.what()));
  }
  if (scores.size() != block.sentences.size()) {
    fail("expected " + std::to_string(block.sentences.size()) + " scores, got " + std::to_string(scores.size()));
  }
  return scores;
}

}  // namespace revgen
