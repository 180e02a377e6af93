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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "deniable/error.h"
#include "oracles.h"

namespace deniable {
namespace {

using testing::RandomMatrix;
using testing::RandomVector;

TEST(NullspaceProjectorTest, UnitVectorGivesSecondCoordinate) {
  Vector e(2);
  e << 1.0, 0.0;
  const ProjectionMatrix b = NullspaceProjector(e);
  ASSERT_EQ(b.rows.rows(), 1);
  ASSERT_EQ(b.rows.cols(), 2);
  EXPECT_NEAR(b.rows(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(b.rows(0, 1)), 1.0, 1e-15);
}

TEST(NullspaceProjectorTest, DiagonalVectorGivesAntidiagonal) {
  Vector e(2);
  e << 1.0, 1.0;
  const ProjectionMatrix b = NullspaceProjector(e);
  const double s = b.rows(0, 0) > 0 ? 1.0 : -1.0;
  EXPECT_NEAR(s * b.rows(0, 0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s * b.rows(0, 1), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(NullspaceProjectorTest, ZeroVectorIsRejected) {
  try {
    NullspaceProjector(Vector::Zero(2));
    FAIL() << "expected ZeroErrorVector";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroErrorVector);
  }
}

TEST(NullspaceProjectorTest, ScalarIsTooSmall) {
  try {
    NullspaceProjector(Vector::Ones(1));
    FAIL() << "expected DimensionTooSmall";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionTooSmall);
  }
}

TEST(NullspaceProjectorTest, RandomVectorsSatisfyProjectorInvariants) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 + trial % 15;
    const Vector e = RandomVector(n, rng, 1.0 + trial);
    const ProjectionMatrix b = NullspaceProjector(e);
    ASSERT_EQ(b.rows.rows(), n - 1);
    EXPECT_LE((b.rows * e).lpNorm<Eigen::Infinity>(), 1e-10 * e.norm());
    const Matrix gram = b.rows * b.rows.transpose();
    EXPECT_LE((gram - Matrix::Identity(n - 1, n - 1)).lpNorm<Eigen::Infinity>(), 1e-10);

    // B^T B projects onto the complement of e.
    Vector x = RandomVector(n, rng);
    x -= (x.dot(e) / e.squaredNorm()) * e;
    const Vector back = b.rows.transpose() * (b.rows * x);
    EXPECT_LE((back - x).lpNorm<Eigen::Infinity>(), 1e-9 * x.norm());
  }
}

TEST(NumericalRankTest, Examples) {
  EXPECT_EQ(NumericalRank(Matrix::Identity(2, 2), 1e-10), 2);
  EXPECT_EQ(NumericalRank(Matrix::Zero(2, 2)), 0);
  Matrix m(2, 2);
  m << 1, 2, 2, 4;
  EXPECT_EQ(NumericalRank(m), 1);
  EXPECT_EQ(testing::RationalRank(testing::ToRational(m)), 1);
}

TEST(NumericalRankTest, AgreesWithRationalOracleOnSmallIntegerMatrices) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> size(1, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    const int r = size(rng);
    const int c = size(rng);
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = entry(rng);
    // Build some deliberately rank-deficient cases.
    if (trial % 3 == 0 && c > 1) m.col(c - 1) = m.col(0) - 2.0 * m.col(c - 2);
    ASSERT_EQ(NumericalRank(m), testing::RationalRank(testing::ToRational(m)))
        << "matrix:\n" << m;
  }
}

TEST(RankConditionTest, Examples) {
  EXPECT_FALSE(RankCondition(Matrix::Identity(2, 2), Vector::Ones(2)));
  Matrix col(2, 1);
  col << 1, 0;
  Vector e(2);
  e << 0, 1;
  EXPECT_TRUE(RankCondition(col, e));
  Vector e3 = Vector::Zero(3);
  e3(0) = 1;
  EXPECT_TRUE(RankCondition(Matrix::Zero(3, 2), e3));
}

TEST(RankConditionTest, DimensionMismatch) {
  try {
    RankCondition(Matrix::Identity(3, 2), Vector::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(RankConditionTest, InvariantUnderColumnScaling) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 3 + trial % 6;
    const Eigen::Index d = 1 + trial % (n - 1);
    const Matrix m = RandomMatrix(n, d, rng);
    // Half the cases put e inside the column space.
    const Vector e = trial % 2 ? Vector(m * RandomVector(d, rng)) : RandomVector(n, rng);
    Matrix scaled = m;
    for (Eigen::Index j = 0; j < d; ++j) {
      scaled.col(j) *= (trial % 4 < 2 ? 1.0 : -1.0) * scale(rng);
    }
    EXPECT_EQ(RankCondition(m, e), RankCondition(scaled, e));
    EXPECT_EQ(RankCondition(m, e), trial % 2 == 0);
  }
}

}  // namespace
}  // namespace deniable
