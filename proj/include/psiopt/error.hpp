// Copyright 2026 The psiopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace psiopt {

// Mirrors psiopt_status in the C API; values must stay in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kModulusMismatch = 2,
  kLengthMismatch = 3,
  kOutOfRange = 4,
  kRandomnessExhausted = 5,
  kProtocolCorruption = 6,
  kModelViolation = 7,
  kTooLarge = 8,
  kParse = 9,
  kIo = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define PSIOPT_ENFORCE(cond, code, msg)                  \
  do {                                                   \
    if (!(cond)) throw ::psiopt::Error((code), (msg));   \
  } while (0)

}  // namespace psiopt
