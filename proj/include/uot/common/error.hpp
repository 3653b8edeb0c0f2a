// Copyright 2026 The UoT Engine Authors.
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

#ifndef UOT_COMMON_ERROR_HPP_
#define UOT_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace uot {

enum class ErrorCode {
  kDuplicateTableName,
  kUnknownTable,
  kBlockTooSmall,
  kSchemaMismatch,
  kOutOfMemoryBudget,
  kNotHolder,
  kIndexOutOfRange,
  kInvalidPlan,
  kProbeBeforeBuildSealed,
  kHashTableSealed,
  kUnknownOperator,
  kNonPositiveInput,
  kInvalidParams,
  kZeroDenominator,
  kCalibrationUnstable,
  kInvalidStats,
  kInvalidSpec,
  kRefusesOverlappedRuns,
  kConfigError,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every engine failure surfaces as an Error carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uot

#endif  // UOT_COMMON_ERROR_HPP_
