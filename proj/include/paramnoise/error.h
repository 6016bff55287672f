// Copyright 2026 The paramnoise Authors
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

#ifndef PARAMNOISE_ERROR_H_
#define PARAMNOISE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace paramnoise {

enum class ErrorCode {
  kNotSymmetric,
  kNotPsd,
  kEmptyReturns,
  kNonFiniteReturn,
  kDimensionMismatch,
  kEmptyBatch,
  kArchitectureMismatch,
  kConfigInvalid,
  kBufferTooSmall,
  kNonFiniteAction,
  kConfigParse,
  kEnvNotFound,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kEmptyReturns: return "EmptyReturns";
    case ErrorCode::kNonFiniteReturn: return "NonFiniteReturn";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyBatch: return "EmptyBatch";
    case ErrorCode::kArchitectureMismatch: return "ArchitectureMismatch";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kBufferTooSmall: return "BufferTooSmall";
    case ErrorCode::kNonFiniteAction: return "NonFiniteAction";
    case ErrorCode::kConfigParse: return "ConfigParse";
    case ErrorCode::kEnvNotFound: return "EnvNotFound";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace paramnoise

#endif  // PARAMNOISE_ERROR_H_
