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

#ifndef DENIABLE_LINALG_H_
#define DENIABLE_LINALG_H_

#include <optional>

#include <Eigen/Dense>

namespace deniable {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Coordinate map onto the orthogonal complement V of span{e}. `rows` is the
// (n-1) x n matrix B with N(B) = span{e}; its rows are orthonormal.
struct ProjectionMatrix {
  Matrix rows;
  Vector source_error;
  double svd_tolerance = 0.0;

  Eigen::Index dim() const { return rows.cols(); }
};

// Absolute threshold below which an n-vector counts as zero when building a
// projector: n * machine epsilon.
double DefaultZeroTolerance(Eigen::Index n);

// Builds B from the full SVD of e viewed as an n x 1 matrix: the rows of U^T
// belonging to zero singular values. Throws ZeroErrorVector when
// ||e||_2 <= svd_tolerance, DimensionTooSmall when n < 2.
ProjectionMatrix NullspaceProjector(const Vector& error,
                                    std::optional<double> svd_tolerance = {});

// Number of singular values strictly above rel_tol * sigma_max. The default
// relative tolerance is max(rows, cols) * epsilon.
int NumericalRank(const Matrix& m, std::optional<double> rel_tol = {});

// True iff rank([M | e]) != rank(M), i.e. e lies outside the column space of
// the Jacobian M.
bool RankCondition(const Matrix& m, const Vector& e,
                   std::optional<double> rel_tol = {});

}  // namespace deniable

#endif  // DENIABLE_LINALG_H_
