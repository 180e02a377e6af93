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

#include "deniable/norms.h"

#include <cmath>
#include <string>
#include <utility>

#include "deniable/error.h"
#include "deniable/rng.h"

namespace deniable {
namespace {

void CheckLength(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": expected length " + std::to_string(n) +
                    ", got " + std::to_string(x.size()));
  }
}

double InnerNorm(InnerVariant variant, const Vector& v) {
  return variant == InnerVariant::kOneNorm ? v.lpNorm<1>() : v.norm();
}

bool AcceptW1(const Vector& e, const ProjectionMatrix& projector,
              const Vector& w1) {
  const double along_e = std::abs(e.dot(w1));
  const double off_e = (projector.rows * w1).norm();
  return along_e > kW1AcceptanceTol * e.norm() && off_e > kW1AcceptanceTol;
}

}  // namespace

std::string_view InnerVariantName(InnerVariant variant) {
  return variant == InnerVariant::kOneNorm ? "one_norm" : "euclidean";
}

std::optional<InnerVariant> ParseInnerVariant(std::string_view name) {
  if (name == "euclidean") return InnerVariant::kEuclidean;
  if (name == "one_norm") return InnerVariant::kOneNorm;
  return std::nullopt;
}

CraftedNorm CraftedNorm::FromParts(ProjectionMatrix projector, Vector w1,
                                   double alpha, InnerVariant variant,
                                   std::uint64_t seed) {
  const Eigen::Index n = w1.size();
  auto fail = [](const std::string& what) {
    return Error(ErrorCode::kInvariantViolated, what);
  };
  if (n < 2 || projector.source_error.size() != n ||
      projector.rows.cols() != n || projector.rows.rows() != n - 1) {
    throw fail("projector, source error and w1 have inconsistent shapes");
  }
  if (!w1.allFinite() || !projector.rows.allFinite() || !std::isfinite(alpha)) {
    throw fail("non-finite entries in norm parts");
  }
  if (std::abs(w1.lpNorm<1>() - 1.0) > 1e-12) {
    throw fail("w1 must have unit 1-norm");
  }
  if (!AcceptW1(projector.source_error, projector, w1)) {
    throw fail("w1 is orthogonal to the source error or lies in N(B)");
  }
  const double b_w1 = SeminormB(projector, variant, w1);
  if (!(alpha > 0.0) || alpha > b_w1 * (1.0 + 1e-12)) {
    throw fail("alpha must lie in (0, b(w1)]");
  }
  CraftedNorm norm;
  norm.projector_ = std::move(projector);
  norm.w1_ = std::move(w1);
  norm.alpha_ = alpha;
  norm.variant_ = variant;
  norm.seed_ = seed;
  return norm;
}

double SeminormB(const ProjectionMatrix& projector, InnerVariant variant,
                 const Vector& x) {
  CheckLength(x, projector.dim(), "seminorm argument");
  return InnerNorm(variant, projector.rows * x);
}

double SeminormB(const CraftedNorm& norm, const Vector& x) {
  return SeminormB(norm.projector(), norm.variant(), x);
}

Vector PickW1(const Vector& e, const ProjectionMatrix& projector,
              std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  return PickW1(e, projector, [&](Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
  });
}

Vector PickW1(const Vector& e, const ProjectionMatrix& projector,
              const W1CandidateSource& source) {
  const Eigen::Index n = e.size();
  if (n < 2) {
    throw Error(ErrorCode::kDimensionTooSmall, "w1 needs n >= 2");
  }
  CheckLength(e, projector.dim(), "error vector");
  for (int attempt = 0; attempt <= kMaxW1Retries; ++attempt) {
    Vector w1 = source(n);
    const double l1 = w1.lpNorm<1>();
    if (w1.size() != n || !w1.allFinite() || !(l1 > 0.0)) continue;
    w1 /= l1;
    if (AcceptW1(e, projector, w1)) return w1;
  }
  throw Error(ErrorCode::kRejectionExhausted,
              "no admissible w1 after " + std::to_string(kMaxW1Retries) +
                  " retries");
}

CraftedNorm MakeCraftedNorm(const Vector& e, std::uint64_t seed,
                            InnerVariant variant,
                            std::optional<double> svd_tolerance) {
  ProjectionMatrix projector = NullspaceProjector(e, svd_tolerance);
  Vector w1 = PickW1(e, projector, seed);
  return MakeCraftedNorm(std::move(projector), std::move(w1), variant, seed);
}

CraftedNorm MakeCraftedNorm(ProjectionMatrix projector, Vector w1,
                            InnerVariant variant, std::uint64_t seed) {
  const double l1 = w1.lpNorm<1>();
  if (!(l1 > 0.0)) {
    throw Error(ErrorCode::kInvariantViolated, "w1 must be nonzero");
  }
  w1 /= l1;
  const double alpha = 0.5 * SeminormB(projector, variant, w1);
  return CraftedNorm::FromParts(std::move(projector), std::move(w1), alpha,
                                variant, seed);
}

double CraftedNormValue(const CraftedNorm& norm, const Vector& x) {
  const double b = SeminormB(norm, x);
  return 1.5 * b + 0.5 * norm.alpha() * std::abs(x.dot(norm.w1()));
}

Matrix MaeTransform(const CraftedNorm& norm) {
  if (norm.variant() != InnerVariant::kOneNorm) {
    throw Error(ErrorCode::kVariantMismatch,
                "the MAE transform needs the one_norm variant");
  }
  const Eigen::Index n = norm.dim();
  Matrix c(n, n);
  c.topRows(n - 1) = 1.5 * norm.projector().rows;
  c.bottomRows(1) = 0.5 * norm.alpha() * norm.w1().transpose();
  return c;
}

double CraftedMatrixNorm(std::span<const CraftedNorm> norms, const Matrix& e) {
  if (static_cast<Eigen::Index>(norms.size()) != e.cols()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(norms.size()) + " norms for " +
                    std::to_string(e.cols()) + " columns");
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < e.cols(); ++j) {
    total += CraftedNormValue(norms[j], e.col(j));
  }
  return total;
}

double StandardMetric(MetricKind kind, const Vector& y, const Vector& yhat) {
  if (y.size() == 0) throw Error(ErrorCode::kEmptyInput, "metric of no data");
  CheckLength(yhat, y.size(), "prediction vector");
  const double n = static_cast<double>(y.size());
  const Vector diff = y - yhat;
  switch (kind) {
    case MetricKind::kMse: return diff.squaredNorm() / n;
    case MetricKind::kRmse: return std::sqrt(diff.squaredNorm() / n);
    case MetricKind::kMae: return diff.lpNorm<1>() / n;
  }
  return 0.0;
}

}  // namespace deniable
