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

#ifndef DENIABLE_NORMS_H_
#define DENIABLE_NORMS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "deniable/linalg.h"

namespace deniable {

// Norm applied to B*x inside the seminorm b.
enum class InnerVariant { kEuclidean, kOneNorm };

std::string_view InnerVariantName(InnerVariant variant);
std::optional<InnerVariant> ParseInnerVariant(std::string_view name);

// The denial norm
//
//   ||x|| = 3/2 * b(x) + alpha/2 * |x^T w1|,   b(x) = ||B x||,
//
// built from a residual vector e so that b vanishes exactly on span{e} while
// the w1 term keeps the whole thing a norm. Immutable once built; every
// factory checks the invariants (unit 1-norm w1, w1 neither orthogonal to e
// nor inside N(B), 0 < alpha <= b(w1)).
class CraftedNorm {
 public:
  // Assembles a norm from stored parts, e.g. when reading a certificate.
  // Throws InvariantViolated if the parts are inconsistent.
  static CraftedNorm FromParts(ProjectionMatrix projector, Vector w1,
                               double alpha, InnerVariant variant,
                               std::uint64_t seed);

  const ProjectionMatrix& projector() const { return projector_; }
  const Vector& w1() const { return w1_; }
  double alpha() const { return alpha_; }
  InnerVariant variant() const { return variant_; }
  std::uint64_t seed() const { return seed_; }
  Eigen::Index dim() const { return w1_.size(); }

 private:
  CraftedNorm() = default;

  ProjectionMatrix projector_;
  Vector w1_;
  double alpha_ = 0.0;
  InnerVariant variant_ = InnerVariant::kEuclidean;
  std::uint64_t seed_ = 0;
};

// Seminorm b(x) = ||B x|| with the chosen inner norm; kernel span{e}.
double SeminormB(const ProjectionMatrix& projector, InnerVariant variant,
                 const Vector& x);
double SeminormB(const CraftedNorm& norm, const Vector& x);

// Produces raw (unnormalized) w1 candidates of length n.
using W1CandidateSource = std::function<Vector(Eigen::Index n)>;

inline constexpr int kMaxW1Retries = 1000;
inline constexpr double kW1AcceptanceTol = 1e-8;

// Draws w1 uniformly on the sphere, rescales it to ||w1||_1 = 1 and accepts
// it iff |e^T w1| > 1e-8 ||e||_2 and ||B w1||_2 > 1e-8. Rejected candidates
// are redrawn, at most kMaxW1Retries times (RejectionExhausted).
Vector PickW1(const Vector& e, const ProjectionMatrix& projector,
              std::uint64_t seed);
Vector PickW1(const Vector& e, const ProjectionMatrix& projector,
              const W1CandidateSource& source);

// Full construction: projector from e, seeded w1, alpha = b(w1) / 2.
CraftedNorm MakeCraftedNorm(const Vector& e, std::uint64_t seed,
                            InnerVariant variant = InnerVariant::kEuclidean,
                            std::optional<double> svd_tolerance = {});

// Same as above with a caller-supplied w1 (normalized here to unit 1-norm).
CraftedNorm MakeCraftedNorm(ProjectionMatrix projector, Vector w1,
                            InnerVariant variant, std::uint64_t seed = 0);

// 3/2 b(x) + alpha/2 |x^T w1|.
double CraftedNormValue(const CraftedNorm& norm, const Vector& x);

// C = [ (3/2) B ; (alpha/2) w1^T ], so that ||C x||_1 equals the crafted
// norm. Only defined for the OneNorm variant (VariantMismatch otherwise).
Matrix MaeTransform(const CraftedNorm& norm);

// Sum over columns j of CraftedNormValue(norms[j], E.col(j)).
double CraftedMatrixNorm(std::span<const CraftedNorm> norms, const Matrix& e);

enum class MetricKind { kMse, kRmse, kMae };

double StandardMetric(MetricKind kind, const Vector& y, const Vector& yhat);

}  // namespace deniable

#endif  // DENIABLE_NORMS_H_
