/*
 * Copyright 2026 The deniable-fit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "deniable/error.h"

namespace deniable {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroErrorVector: return "ZeroErrorVector";
    case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kVariantMismatch: return "VariantMismatch";
    case ErrorCode::kRejectionExhausted: return "RejectionExhausted";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNoEvaluator: return "NoEvaluator";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kNonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::kNonPositiveSupport: return "NonPositiveSupport";
    case ErrorCode::kInvalidArguments: return "InvalidArguments";
    case ErrorCode::kRankConditionViolated: return "RankConditionViolated";
    case ErrorCode::kZeroResidual: return "ZeroResidual";
    case ErrorCode::kCertificateTampered: return "CertificateTampered";
    case ErrorCode::kInvariantViolated: return "InvariantViolated";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

Error Error::ForColumn(ErrorCode code, int column, const std::string& message) {
  Error error(code, message);
  error.column_ = column;
  return error;
}

}  // namespace deniable
