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

#ifndef DENIABLE_ERROR_H_
#define DENIABLE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace deniable {

enum class ErrorCode {
  kZeroErrorVector,
  kDimensionTooSmall,
  kDimensionMismatch,
  kLengthMismatch,
  kVariantMismatch,
  kRejectionExhausted,
  kEmptyInput,
  kNoEvaluator,
  kNonFiniteValue,
  kNonFiniteObjective,
  kNonPositiveSupport,
  kInvalidArguments,
  kRankConditionViolated,
  kZeroResidual,
  kCertificateTampered,
  kInvariantViolated,
  kParseError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code is
// stable and is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

  // Output column for RankConditionViolated / ZeroResidual, -1 otherwise.
  int column() const noexcept { return column_; }

  static Error ForColumn(ErrorCode code, int column, const std::string& message);

 private:
  ErrorCode code_;
  int column_ = -1;
};

}  // namespace deniable

#endif  // DENIABLE_ERROR_H_
