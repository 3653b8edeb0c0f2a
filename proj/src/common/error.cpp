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

#include "uot/common/error.hpp"

namespace uot {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateTableName: return "DuplicateTableName";
    case ErrorCode::kUnknownTable: return "UnknownTable";
    case ErrorCode::kBlockTooSmall: return "BlockTooSmall";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kOutOfMemoryBudget: return "OutOfMemoryBudget";
    case ErrorCode::kNotHolder: return "NotHolder";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInvalidPlan: return "InvalidPlan";
    case ErrorCode::kProbeBeforeBuildSealed: return "ProbeBeforeBuildSealed";
    case ErrorCode::kHashTableSealed: return "HashTableSealed";
    case ErrorCode::kUnknownOperator: return "UnknownOperator";
    case ErrorCode::kNonPositiveInput: return "NonPositiveInput";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kCalibrationUnstable: return "CalibrationUnstable";
    case ErrorCode::kInvalidStats: return "InvalidStats";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kRefusesOverlappedRuns: return "RefusesOverlappedRuns";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace uot
