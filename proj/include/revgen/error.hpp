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

#ifndef REVGEN_ERROR_HPP_
#define REVGEN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace revgen {

// Mirrors revgen_status in the C API; values must stay in sync.
enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidConfig = 2,
  kMissingArtifact = 3,
  kWorkspaceLocked = 4,
  kIo = 5,
  kParse = 6,
  kDuplicateId = 7,
  kBackend = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid_argument(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace revgen

#endif  // REVGEN_ERROR_HPP_
