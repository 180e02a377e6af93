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

#ifndef DENIABLE_DENIABILITY_H_
#define DENIABLE_DENIABILITY_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deniable/models.h"
#include "deniable/norms.h"
#include "deniable/rng.h"
#include "deniable/training.h"

namespace deniable {

struct DiscreteUniform {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};
struct Exponential {
  double rate = 1.0;
};
struct ContinuousUniform {
  double lo = 0.0;
  double hi = 1.0;
};
using Attribute = std::variant<DiscreteUniform, Exponential, ContinuousUniform>;

// Independent per-attribute distributions of one record. Continuous
// attributes are counted at the given resolution when computing entropy.
struct DistributionSpec {
  std::vector<Attribute> attributes;
  double resolution = std::ldexp(1.0, -20);

  bool HasContinuous() const;
};

// Parses a comma-separated list of "du:LO:HI", "cu:LO:HI" or "exp:RATE",
// each optionally repeated with "x N" (or the multiplication sign), e.g.
// "du:1:8 x 10, exp:5".
DistributionSpec ParseDistributionSpec(std::string_view text);

// Bits per record: log2(hi - lo + 1) per discrete uniform attribute,
// log2((hi - lo) / q) per continuous uniform attribute and
// (1 - ln(rate) + ln(1/q)) / ln 2 per exponential one.
double EntropyPerRecord(const DistributionSpec& spec);

struct DeniabilityReport {
  double k_bits = 0.0;
  double entropy_bits = 0.0;
  std::int64_t n = 0;
  double threshold = 0.0;  // k / H
  bool deniable = false;   // n > k / H
  // Set when H was computed from quantized continuous attributes.
  std::optional<double> quantization;
};

DeniabilityReport DeniabilityCheck(double k_bits, double entropy_bits,
                                   std::int64_t n);

// n i.i.d. records drawn from spec, one column per attribute.
Matrix SampleRecords(const DistributionSpec& spec, Eigen::Index n, Rng& rng);

// Inputs and responses drawn independently of each other.
Dataset GenerateDecoy(const DistributionSpec& input_spec,
                      const DistributionSpec& response_spec, Eigen::Index n,
                      std::uint64_t seed);

struct ModelDescriptor {
  std::string kind;
  Eigen::Index param_dim = 0;
  Eigen::Index input_dim = 0;
  Eigen::Index output_dim = 0;

  static ModelDescriptor Of(const ParamModel& model);
  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

// Everything a third party needs to replay a denial: the decoy data, one
// crafted norm per output column, the residual the norms were built from,
// and the optimizer configuration.
struct DenialCertificate {
  Dataset decoy;
  std::vector<CraftedNorm> norms;
  Matrix residual;
  OptimizerConfig optimizer_config;
  ModelDescriptor model;
  std::vector<bool> rank_condition_ok;
  std::uint64_t seed = 0;
};

inline constexpr double kStartPerturbation = 1e-2;
inline constexpr double kTamperTolerance = 1e-9;
inline constexpr int kMaxDecoyAttempts = 10;

// Builds the certificate for `decoy`. Per output column j: checks the
// residual is nonzero (ZeroResidual) and lies outside the column space of
// the Jacobian (RankConditionViolated), then crafts the norm from seed
// substream ("w1", j). The verification start point is p_star plus a
// N(0, 1e-2) perturbation from substream "optimizer-start".
DenialCertificate CraftDenial(const ParamModel& model, const Vector& p_star,
                              const Dataset& decoy, std::uint64_t seed,
                              InnerVariant variant = InnerVariant::kEuclidean);

// Samples decoys from the given distributions (substream ("decoy", attempt))
// and retries on RankConditionViolated, up to kMaxDecoyAttempts times.
DenialCertificate CraftDenialWithFreshDecoys(
    const ParamModel& model, const Vector& p_star,
    const DistributionSpec& input_spec, const DistributionSpec& response_spec,
    Eigen::Index n, std::uint64_t seed,
    InnerVariant variant = InnerVariant::kEuclidean);

struct VerificationReport {
  Vector refit;
  double max_abs_diff = 0.0;
  bool passed = false;
  double final_loss = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Retrains on the decoy under the crafted loss and compares with p_star.
// Throws CertificateTampered if the stored residual or norms do not match
// the recomputed residual.
VerificationReport VerifyDenial(const DenialCertificate& certificate,
                                const ParamModel& model, const Vector& p_star,
                                double tolerance);

// Loss the certificate prescribes: the crafted norm for k = 1, the column
// sum of crafted norms otherwise.
LossSpec CertificateLoss(const DenialCertificate& certificate);

struct AdversaryResult {
  Dataset first;
  Dataset second;
  Vector refit_first;
  Vector refit_second;
};

// Two different datasets, both labelled with the model's own predictions at
// p_star, so both retrain (two-norm loss) to p_star. Requires n > d.
AdversaryResult AdversaryRecover(const ParamModel& model, const Vector& p_star,
                                 Eigen::Index n, std::uint64_t seed);

// One run of the regression denial experiment: random true parameters in
// [-6, 6]^d, n training records with inputs uniform on {1..8} and
// Exponential(5) noise, p_star fitted by least squares, then a random decoy
// (inputs and responses uniform on {1..8}) is crafted and verified.
struct RegressionTrial {
  Vector p_true;
  Vector p_star;
  DenialCertificate certificate;
  VerificationReport report;
};

RegressionTrial RunRegressionTrial(Eigen::Index param_dim, Eigen::Index n,
                                   std::uint64_t seed, std::uint64_t trial,
                                   double tolerance);

}  // namespace deniable

#endif  // DENIABLE_DENIABILITY_H_
