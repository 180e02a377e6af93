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

#include "deniable/linalg.h"

#include <algorithm>
#include <limits>
#include <string>

#include "deniable/error.h"

namespace deniable {

double DefaultZeroTolerance(Eigen::Index n) {
  return static_cast<double>(std::max<Eigen::Index>(n, 1)) *
         std::numeric_limits<double>::epsilon();
}

ProjectionMatrix NullspaceProjector(const Vector& error,
                                    std::optional<double> svd_tolerance) {
  const Eigen::Index n = error.size();
  if (n < 2) {
    throw Error(ErrorCode::kDimensionTooSmall,
                "projector needs n >= 2, got n = " + std::to_string(n));
  }
  const double tol = svd_tolerance.value_or(DefaultZeroTolerance(n));
  if (!(error.norm() > tol)) {
    throw Error(ErrorCode::kZeroErrorVector,
                "error vector norm is within the zero tolerance");
  }

  const Matrix column = error;  // n x 1
  Eigen::JacobiSVD<Matrix> svd(column, Eigen::ComputeFullU);
  const auto& sigma = svd.singularValues();
  Eigen::Index nonzero = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) ++nonzero;
  }

  // Columns of U past the nonzero singular values span N(e^T).
  ProjectionMatrix out;
  out.rows = svd.matrixU().rightCols(n - nonzero).transpose();
  out.source_error = error;
  out.svd_tolerance = tol;
  return out;
}

int NumericalRank(const Matrix& m, std::optional<double> rel_tol) {
  if (m.size() == 0) return 0;
  const double tol =
      rel_tol.value_or(static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon());
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  if (sigma_max == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol * sigma_max) ++rank;
  }
  return rank;
}

bool RankCondition(const Matrix& m, const Vector& e,
                   std::optional<double> rel_tol) {
  if (m.rows() != e.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Jacobian has " + std::to_string(m.rows()) +
                    " rows but the error vector has " +
                    std::to_string(e.size()) + " entries");
  }
  Matrix augmented(m.rows(), m.cols() + 1);
  augmented << m, e;
  return NumericalRank(augmented, rel_tol) != NumericalRank(m, rel_tol);
}

}  // namespace deniable
