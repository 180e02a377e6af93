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

#include "deniable/deniability.h"

#include <charconv>
#include <limits>
#include <regex>
#include <string>
#include <utility>

#include "deniable/error.h"

namespace deniable {
namespace {

template <class T>
T ParseField(std::string_view field, std::string_view item) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError,
                "bad number '" + std::string(field) + "' in '" +
                    std::string(item) + "'");
  }
  return value;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Attribute ParseAttribute(std::string_view item) {
  const auto parts = Split(item, ':');
  if (parts[0] == "du" && parts.size() == 3) {
    return DiscreteUniform{ParseField<std::int64_t>(parts[1], item),
                           ParseField<std::int64_t>(parts[2], item)};
  }
  if (parts[0] == "cu" && parts.size() == 3) {
    return ContinuousUniform{ParseField<double>(parts[1], item),
                             ParseField<double>(parts[2], item)};
  }
  if (parts[0] == "exp" && parts.size() == 2) {
    return Exponential{ParseField<double>(parts[1], item)};
  }
  throw Error(ErrorCode::kParseError,
              "unknown attribute '" + std::string(item) +
                  "' (expected du:LO:HI, cu:LO:HI or exp:RATE)");
}

double AttributeEntropy(const Attribute& attribute, double q) {
  if (const auto* du = std::get_if<DiscreteUniform>(&attribute)) {
    if (du->hi < du->lo) {
      throw Error(ErrorCode::kNonPositiveSupport, "discrete uniform with hi < lo");
    }
    return std::log2(static_cast<double>(du->hi - du->lo) + 1.0);
  }
  if (const auto* cu = std::get_if<ContinuousUniform>(&attribute)) {
    if (!(cu->hi > cu->lo)) {
      throw Error(ErrorCode::kNonPositiveSupport, "continuous uniform with hi <= lo");
    }
    return std::log2((cu->hi - cu->lo) / q);
  }
  const auto& ex = std::get<Exponential>(attribute);
  if (!(ex.rate > 0.0)) {
    throw Error(ErrorCode::kNonPositiveSupport, "exponential rate must be > 0");
  }
  return (1.0 - std::log(ex.rate) + std::log(1.0 / q)) / std::log(2.0);
}

double SampleAttribute(const Attribute& attribute, Rng& rng) {
  if (const auto* du = std::get_if<DiscreteUniform>(&attribute)) {
    return static_cast<double>(
        std::uniform_int_distribution<std::int64_t>(du->lo, du->hi)(rng));
  }
  if (const auto* cu = std::get_if<ContinuousUniform>(&attribute)) {
    return std::uniform_real_distribution<double>(cu->lo, cu->hi)(rng);
  }
  return std::exponential_distribution<double>(std::get<Exponential>(attribute).rate)(rng);
}

void CheckSpec(const DistributionSpec& spec) {
  for (const auto& a : spec.attributes) {
    if (const auto* du = std::get_if<DiscreteUniform>(&a); du && du->hi < du->lo) {
      throw Error(ErrorCode::kNonPositiveSupport, "discrete uniform with hi < lo");
    }
    if (const auto* cu = std::get_if<ContinuousUniform>(&a); cu && cu->hi < cu->lo) {
      throw Error(ErrorCode::kNonPositiveSupport, "continuous uniform with hi < lo");
    }
    if (const auto* ex = std::get_if<Exponential>(&a); ex && !(ex->rate > 0.0)) {
      throw Error(ErrorCode::kNonPositiveSupport, "exponential rate must be > 0");
    }
  }
}

DistributionSpec Repeated(Attribute attribute, std::size_t count) {
  DistributionSpec spec;
  spec.attributes.assign(count, attribute);
  return spec;
}

void CheckCertificateShape(const DenialCertificate& cert,
                           const ParamModel& model, const Vector& p_star) {
  const auto n = cert.decoy.size();
  const auto k = cert.decoy.output_dim();
  if (cert.model != ModelDescriptor::Of(model) || p_star.size() != model.param_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "certificate was issued for a different model");
  }
  if (cert.residual.rows() != n || cert.residual.cols() != k ||
      static_cast<Eigen::Index>(cert.norms.size()) != k) {
    throw Error(ErrorCode::kCertificateTampered,
                "residual or norm count does not match the decoy");
  }
}

}  // namespace

bool DistributionSpec::HasContinuous() const {
  for (const auto& a : attributes) {
    if (!std::holds_alternative<DiscreteUniform>(a)) return true;
  }
  return false;
}

DistributionSpec ParseDistributionSpec(std::string_view text) {
  std::string normalized(text);
  for (std::size_t pos; (pos = normalized.find("\xC3\x97")) != std::string::npos;) {
    normalized.replace(pos, 2, "x");
  }
  static const std::regex kItem(R"(^\s*([a-z]+:[^\s]*?)\s*(?:[x*]\s*(\d+))?\s*$)");
  DistributionSpec spec;
  for (auto item : Split(normalized, ',')) {
    std::match_results<std::string_view::const_iterator> match;
    if (!std::regex_match(item.begin(), item.end(), match, kItem)) {
      throw Error(ErrorCode::kParseError,
                  "cannot parse distribution item '" + std::string(item) + "'");
    }
    const std::string body = match[1].str();
    const std::size_t count =
        match[2].matched ? ParseField<std::size_t>(match[2].str(), item) : 1;
    const Attribute attribute = ParseAttribute(body);
    spec.attributes.insert(spec.attributes.end(), count, attribute);
  }
  if (spec.attributes.empty()) {
    throw Error(ErrorCode::kParseError, "empty distribution spec");
  }
  return spec;
}

double EntropyPerRecord(const DistributionSpec& spec) {
  if (spec.attributes.empty()) {
    throw Error(ErrorCode::kEmptyInput, "distribution has no attributes");
  }
  if (!(spec.resolution > 0.0)) {
    throw Error(ErrorCode::kNonPositiveSupport, "resolution must be > 0");
  }
  double bits = 0.0;
  for (const auto& a : spec.attributes) bits += AttributeEntropy(a, spec.resolution);
  return bits;
}

DeniabilityReport DeniabilityCheck(double k_bits, double entropy_bits,
                                   std::int64_t n) {
  if (!(k_bits > 0.0) || !(entropy_bits > 0.0) || n < 1 ||
      !std::isfinite(k_bits) || !std::isfinite(entropy_bits)) {
    throw Error(ErrorCode::kInvalidArguments,
                "need k_bits > 0, entropy_bits > 0 and n >= 1");
  }
  DeniabilityReport report;
  report.k_bits = k_bits;
  report.entropy_bits = entropy_bits;
  report.n = n;
  report.threshold = k_bits / entropy_bits;
  report.deniable = static_cast<double>(n) > report.threshold;
  return report;
}

Matrix SampleRecords(const DistributionSpec& spec, Eigen::Index n, Rng& rng) {
  CheckSpec(spec);
  const auto width = static_cast<Eigen::Index>(spec.attributes.size());
  Matrix out(n, width);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < width; ++j) {
      out(i, j) = SampleAttribute(spec.attributes[static_cast<std::size_t>(j)], rng);
    }
  }
  return out;
}

Dataset GenerateDecoy(const DistributionSpec& input_spec,
                      const DistributionSpec& response_spec, Eigen::Index n,
                      std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::kInvalidArguments, "decoy needs n >= 1");
  Rng input_rng = MakeRng(seed, "decoy-inputs");
  Rng response_rng = MakeRng(seed, "decoy-responses");
  Matrix inputs = SampleRecords(input_spec, n, input_rng);
  Matrix responses = SampleRecords(response_spec, n, response_rng);
  return Dataset(std::move(inputs), std::move(responses));
}

ModelDescriptor ModelDescriptor::Of(const ParamModel& model) {
  return {model.kind(), model.param_dim(), model.input_dim(), model.output_dim()};
}

DenialCertificate CraftDenial(const ParamModel& model, const Vector& p_star,
                              const Dataset& decoy, std::uint64_t seed,
                              InnerVariant variant) {
  const Matrix predictions = Predictions(model, decoy, p_star);
  const Matrix residual = decoy.responses() - predictions;
  const Eigen::Index n = decoy.size();
  if (n < 2) {
    throw Error(ErrorCode::kDimensionTooSmall, "a denial needs n >= 2 records");
  }

  std::vector<CraftedNorm> norms;
  std::vector<bool> rank_ok;
  for (Eigen::Index j = 0; j < residual.cols(); ++j) {
    const Vector e = residual.col(j);
    const double scale = std::max({1.0, predictions.col(j).lpNorm<Eigen::Infinity>(),
                                   decoy.responses().col(j).lpNorm<Eigen::Infinity>()});
    const double zero_tol = 64.0 * static_cast<double>(n) *
                            std::numeric_limits<double>::epsilon() * scale;
    if (!(e.norm() > zero_tol)) {
      throw Error::ForColumn(ErrorCode::kZeroResidual, static_cast<int>(j),
                             "decoy column " + std::to_string(j) +
                                 " is fitted exactly by the model");
    }
    const Matrix jac = Jacobian(model, decoy, p_star, j);
    if (!RankCondition(jac, e)) {
      throw Error::ForColumn(ErrorCode::kRankConditionViolated, static_cast<int>(j),
                             "residual of column " + std::to_string(j) +
                                 " lies in the column space of the Jacobian");
    }
    rank_ok.push_back(true);
    norms.push_back(MakeCraftedNorm(e, SubstreamSeed(seed, "w1", static_cast<std::uint64_t>(j)),
                                    variant, zero_tol));
  }

  OptimizerConfig config;
  Rng start_rng = MakeRng(seed, "optimizer-start");
  std::normal_distribution<double> gauss(0.0, kStartPerturbation);
  config.start = p_star;
  for (Eigen::Index l = 0; l < config.start.size(); ++l) config.start(l) += gauss(start_rng);
  config.seed = seed;

  return DenialCertificate{decoy,
                           std::move(norms),
                           residual,
                           std::move(config),
                           ModelDescriptor::Of(model),
                           std::move(rank_ok),
                           seed};
}

DenialCertificate CraftDenialWithFreshDecoys(
    const ParamModel& model, const Vector& p_star,
    const DistributionSpec& input_spec, const DistributionSpec& response_spec,
    Eigen::Index n, std::uint64_t seed, InnerVariant variant) {
  for (int attempt = 0;; ++attempt) {
    const Dataset decoy = GenerateDecoy(
        input_spec, response_spec, n,
        SubstreamSeed(seed, "decoy", static_cast<std::uint64_t>(attempt)));
    try {
      return CraftDenial(model, p_star, decoy, seed, variant);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRankConditionViolated ||
          attempt + 1 >= kMaxDecoyAttempts) {
        throw;
      }
    }
  }
}

LossSpec CertificateLoss(const DenialCertificate& certificate) {
  if (certificate.norms.size() == 1) return CraftedLoss{certificate.norms.front()};
  return CraftedMatrixLoss{certificate.norms};
}

VerificationReport VerifyDenial(const DenialCertificate& certificate,
                                const ParamModel& model, const Vector& p_star,
                                double tolerance) {
  if (std::isnan(tolerance) || tolerance < 0.0) {
    throw Error(ErrorCode::kInvalidArguments, "tolerance must be >= 0");
  }
  CheckCertificateShape(certificate, model, p_star);
  const Matrix recomputed = Residuals(model, certificate.decoy, p_star);
  for (Eigen::Index j = 0; j < recomputed.cols(); ++j) {
    for (Eigen::Index i = 0; i < recomputed.rows(); ++i) {
      const double r = recomputed(i, j);
      const double tol = kTamperTolerance * std::max(1.0, std::abs(r));
      if (!(std::abs(certificate.residual(i, j) - r) <= tol) ||
          !(std::abs(certificate.norms[static_cast<std::size_t>(j)]
                         .projector()
                         .source_error(i) -
                     r) <= tol)) {
        throw Error(ErrorCode::kCertificateTampered,
                    "stored residual differs from the recomputed one at (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }

  const FittedModel fit =
      Fit(model, certificate.decoy, CertificateLoss(certificate),
          certificate.optimizer_config);
  VerificationReport report;
  report.refit = fit.params;
  report.max_abs_diff = (fit.params - p_star).lpNorm<Eigen::Infinity>();
  report.passed = report.max_abs_diff <= tolerance;
  report.final_loss = fit.final_loss;
  report.iterations = fit.iterations;
  report.converged = fit.converged;
  return report;
}

AdversaryResult AdversaryRecover(const ParamModel& model, const Vector& p_star,
                                 Eigen::Index n, std::uint64_t seed) {
  if (n <= model.param_dim()) {
    throw Error(ErrorCode::kInvalidArguments,
                "need n > d for a non-unique preimage (n = " + std::to_string(n) +
                    ", d = " + std::to_string(model.param_dim()) + ")");
  }
  if (p_star.size() != model.param_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "parameter vector length");
  }
  const DistributionSpec inputs =
      Repeated(DiscreteUniform{1, 8}, static_cast<std::size_t>(model.input_dim()));
  auto draw = [&](std::string_view stream, std::uint64_t attempt) {
    Rng rng = MakeRng(seed, stream, attempt);
    Matrix x = SampleRecords(inputs, n, rng);
    Matrix y = Predictions(model, Dataset(x, Matrix::Zero(n, model.output_dim())), p_star);
    return Dataset(std::move(x), std::move(y));
  };

  Dataset first = draw("adversary-first", 0);
  Dataset second = draw("adversary-second", 0);
  for (std::uint64_t attempt = 1; first == second; ++attempt) {
    second = draw("adversary-second", attempt);
  }

  OptimizerConfig config;
  config.start = Vector::Zero(model.param_dim());
  config.seed = seed;
  const FittedModel fit_first = Fit(model, first, TwoNormLoss{}, config);
  const FittedModel fit_second = Fit(model, second, TwoNormLoss{}, config);
  return {std::move(first), std::move(second), fit_first.params, fit_second.params};
}

RegressionTrial RunRegressionTrial(Eigen::Index param_dim, Eigen::Index n,
                                   std::uint64_t seed, std::uint64_t trial,
                                   double tolerance) {
  if (param_dim < 1 || n < 2) {
    throw Error(ErrorCode::kInvalidArguments, "need d >= 1 and n >= 2");
  }
  const std::uint64_t trial_seed = SubstreamSeed(seed, "trial", trial);
  const Eigen::Index m = param_dim - 1;
  const LinearRegressionModel model(m);

  Rng param_rng = MakeRng(trial_seed, "true-params");
  Vector p_true(param_dim);
  std::uniform_real_distribution<double> uniform(-6.0, 6.0);
  for (Eigen::Index l = 0; l < param_dim; ++l) p_true(l) = uniform(param_rng);

  const DistributionSpec inputs = Repeated(DiscreteUniform{1, 8}, static_cast<std::size_t>(m));
  Rng train_rng = MakeRng(trial_seed, "training");
  Matrix x = SampleRecords(inputs, n, train_rng);
  Matrix noise = SampleRecords(Repeated(Exponential{5.0}, 1), n, train_rng);
  const Dataset unlabeled(x, Matrix::Zero(n, 1));
  Matrix y = Predictions(model, unlabeled, p_true) + noise;
  const Dataset training(std::move(x), std::move(y));

  // The given model: ordinary least squares on the true training data.
  const Matrix design = *model.AnalyticJacobian(training, p_true, 0);
  const Vector p_star =
      design.colPivHouseholderQr().solve(Vector(training.responses().col(0)));

  DenialCertificate certificate = CraftDenialWithFreshDecoys(
      model, p_star, inputs, Repeated(DiscreteUniform{1, 8}, 1), n, trial_seed);
  VerificationReport report = VerifyDenial(certificate, model, p_star, tolerance);
  return {std::move(p_true), p_star, std::move(certificate), std::move(report)};
}

}  // namespace deniable
