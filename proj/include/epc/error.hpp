// Copyright 2026 The EPC Authors.
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
#include <string_view>

namespace epc {

enum class ErrorCode {
  kNonPrimeModulus,
  kDuplicateNode,
  kDimensionMismatch,
  kIndivisibleDimensions,
  kNotEnoughResults,
  kDuplicatePoint,
  kPointCollision,
  kInsufficientFieldSize,
  kModeForbidsSystematic,
  kYTooSmall,
  kPoleAtNode,
  kMTooSmall,
  kShapeMismatch,
  kNotSecureMode,
  kStateSpaceTooLarge,
  kIncomplete,
  kMalformedHeader,
  kValueOutOfRange,
  kInvalidConstruction,
  kInvalidConfig,
  kInvalidArgument,
  kIoError,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::kDuplicateNode: return "DuplicateNode";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kIndivisibleDimensions: return "IndivisibleDimensions";
    case ErrorCode::kNotEnoughResults: return "NotEnoughResults";
    case ErrorCode::kDuplicatePoint: return "DuplicatePoint";
    case ErrorCode::kPointCollision: return "PointCollision";
    case ErrorCode::kInsufficientFieldSize: return "InsufficientFieldSize";
    case ErrorCode::kModeForbidsSystematic: return "ModeForbidsSystematic";
    case ErrorCode::kYTooSmall: return "YTooSmall";
    case ErrorCode::kPoleAtNode: return "PoleAtNode";
    case ErrorCode::kMTooSmall: return "MTooSmall";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNotSecureMode: return "NotSecureMode";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kIncomplete: return "Incomplete";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::kInvalidConstruction: return "InvalidConstruction";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) raise(code, what);
}

}  // namespace epc
