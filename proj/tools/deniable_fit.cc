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

// deniable-fit: craft and check denial certificates for fitted models.
//
//   deniable-fit craft      --model M.json --decoy D.csv --out C.json [--mae]
//   deniable-fit verify     --certificate C.json --model M.json [--tolerance T]
//   deniable-fit bound      --k-bits K (--entropy-bits H | --dist SPEC) --n N
//   deniable-fit experiment [--d 6] [--n 10] [--trials 20]
//   deniable-fit adversary  [--d 3] [--n 10]
//   deniable-fit decoy      --dist SPEC --response-dist SPEC --n N --out D.csv
//
// Every command takes --seed; DENIABLE_FIT_SEED is the fallback.
// Exit codes: 0 success, 1 error, 2 no certificate possible for this decoy,
// 3 verification failed.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "deniable/certificate.h"
#include "deniable/dataset_io.h"
#include "deniable/deniability.h"
#include "deniable/error.h"
#include "deniable/models.h"

namespace {

using deniable::Error;
using deniable::ErrorCode;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoCertificate = 2;
constexpr int kExitFailed = 3;

std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DENIABLE_FIT_SEED")) {
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::kParseError, "DENIABLE_FIT_SEED is not an unsigned integer");
    }
    return seed;
  }
  return 0;
}

double ParseTolerance(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      !(value >= 0.0)) {
    throw Error(ErrorCode::kParseError, "bad tolerance '" + text + "'");
  }
  return value;
}

struct CraftArgs {
  std::string model;
  std::string decoy;
  std::string out;
  bool mae = false;
};

int RunCraft(const CraftArgs& args, std::uint64_t seed) {
  const auto model = deniable::ModelFromJson(deniable::ReadJsonFile(args.model));
  const deniable::Dataset decoy = deniable::ReadDatasetCsv(args.decoy);
  const auto variant =
      args.mae ? deniable::InnerVariant::kOneNorm : deniable::InnerVariant::kEuclidean;
  try {
    const deniable::DenialCertificate cert =
        deniable::CraftDenial(*model.model, model.params, decoy, seed, variant);
    deniable::WriteJsonFile(args.out, deniable::CertificateToJson(cert));
    std::cout << "wrote " << args.out << " (" << cert.norms.size()
              << " norm(s), n = " << decoy.size() << ", seed = " << seed << ")\n";
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kRankConditionViolated ||
        e.code() == ErrorCode::kZeroResidual) {
      std::cerr << "deniable-fit craft: " << e.what()
                << "; choose or sample a different decoy\n";
      return kExitNoCertificate;
    }
    throw;
  }
  return kExitOk;
}

struct VerifyArgs {
  std::string certificate;
  std::string model;
  std::string tolerance = "5e-3";
};

int RunVerify(const VerifyArgs& args) {
  const double tolerance = ParseTolerance(args.tolerance);
  const auto model = deniable::ModelFromJson(deniable::ReadJsonFile(args.model));
  const deniable::DenialCertificate cert =
      deniable::CertificateFromJson(deniable::ReadJsonFile(args.certificate));
  const deniable::VerificationReport report =
      deniable::VerifyDenial(cert, *model.model, model.params, tolerance);
  std::cout << deniable::ReportToJson(report, tolerance).dump(2) << '\n';
  return report.passed ? kExitOk : kExitFailed;
}

struct BoundArgs {
  double k_bits = 0.0;
  std::optional<double> entropy_bits;
  std::optional<std::string> dist;
  std::optional<double> resolution;
  std::int64_t n = 0;
};

int RunBound(const BoundArgs& args) {
  double entropy = 0.0;
  std::optional<double> quantization;
  if (args.dist) {
    deniable::DistributionSpec spec = deniable::ParseDistributionSpec(*args.dist);
    if (args.resolution) spec.resolution = *args.resolution;
    entropy = deniable::EntropyPerRecord(spec);
    if (spec.HasContinuous()) quantization = spec.resolution;
  } else {
    entropy = *args.entropy_bits;
  }
  deniable::DeniabilityReport report = deniable::DeniabilityCheck(args.k_bits, entropy, args.n);
  report.quantization = quantization;
  std::cout << deniable::ReportToJson(report).dump(2) << '\n';
  return kExitOk;
}

struct ExperimentArgs {
  int d = 6;
  int n = 10;
  int trials = 20;
  std::string tolerance = "5e-3";
  unsigned threads = 0;
};

struct TrialOutcome {
  std::optional<deniable::RegressionTrial> trial;
  std::string error;
};

int RunExperiment(const ExperimentArgs& args, std::uint64_t seed) {
  if (args.d < 2 || args.n < 2 || args.trials < 1) {
    throw Error(ErrorCode::kInvalidArguments, "need --d >= 2, --n >= 2, --trials >= 1");
  }
  const double tolerance = ParseTolerance(args.tolerance);
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(args.trials));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t; (t = next.fetch_add(1)) < args.trials;) {
      auto& slot = outcomes[static_cast<std::size_t>(t)];
      try {
        slot.trial = deniable::RunRegressionTrial(args.d, args.n, seed,
                                                  static_cast<std::uint64_t>(t), tolerance);
      } catch (const Error& e) {
        slot.error = e.what();
      }
    }
  };
  const unsigned threads = std::clamp<unsigned>(
      args.threads ? args.threads : std::max(1u, std::thread::hardware_concurrency()), 1u,
      static_cast<unsigned>(args.trials));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::ostringstream out;
  out << std::setprecision(5) << std::fixed;
  out << "regression denial experiment: d = " << args.d << ", n = " << args.n
      << ", trials = " << args.trials << ", seed = " << seed
      << ", tolerance = " << deniable::FormatDouble(tolerance) << "\n\n";
  if (const auto& first = outcomes.front().trial) {
    out << "trial 0\n" << std::setw(14) << "original p" << std::setw(14) << "refit p" << '\n';
    for (Eigen::Index l = 0; l < first->p_star.size(); ++l) {
      out << std::setw(14) << first->p_star(l) << std::setw(14) << first->report.refit(l) << '\n';
    }
    out << '\n';
  }
  out << std::setw(6) << "trial" << std::setw(16) << "max_abs_diff" << std::setw(8) << "passed"
      << '\n';
  int passed = 0;
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const auto& o = outcomes[t];
    out << std::setw(6) << t;
    if (o.trial) {
      std::ostringstream diff;
      diff << std::scientific << std::setprecision(3) << o.trial->report.max_abs_diff;
      out << std::setw(16) << diff.str() << std::setw(8) << (o.trial->report.passed ? "yes" : "no");
      passed += o.trial->report.passed ? 1 : 0;
    } else {
      out << "  error: " << o.error;
    }
    out << '\n';
  }
  const double rate = static_cast<double>(passed) / args.trials;
  out << "\npass rate: " << passed << "/" << args.trials << " = " << std::setprecision(2)
      << rate << '\n';
  std::cout << out.str();
  return rate >= 0.9 ? kExitOk : kExitFailed;
}

struct AdversaryArgs {
  int d = 3;
  int n = 10;
};

int RunAdversary(const AdversaryArgs& args, std::uint64_t seed) {
  if (args.d < 1) throw Error(ErrorCode::kInvalidArguments, "need --d >= 1");
  const deniable::LinearRegressionModel model(args.d - 1);
  deniable::Rng rng = deniable::MakeRng(seed, "adversary-model");
  std::uniform_real_distribution<double> uniform(-6.0, 6.0);
  deniable::Vector p_star(args.d);
  for (int l = 0; l < args.d; ++l) p_star(l) = uniform(rng);

  const deniable::AdversaryResult result =
      deniable::AdversaryRecover(model, p_star, args.n, seed);
  auto dataset_json = [](const deniable::Dataset& data) {
    std::ostringstream csv;
    deniable::WriteDatasetCsv(csv, data);
    return csv.str();
  };
  auto vec_json = [](const deniable::Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  const nlohmann::json out{
      {"seed", seed},
      {"model", deniable::ModelToJson(model, p_star)},
      {"first", {{"csv", dataset_json(result.first)}, {"refit", vec_json(result.refit_first)}}},
      {"second", {{"csv", dataset_json(result.second)}, {"refit", vec_json(result.refit_second)}}},
      {"max_abs_diff_first", (result.refit_first - p_star).lpNorm<Eigen::Infinity>()},
      {"max_abs_diff_second", (result.refit_second - p_star).lpNorm<Eigen::Infinity>()},
      {"differing_input_entries",
       (result.first.inputs().array() != result.second.inputs().array()).count()},
  };
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

struct DecoyArgs {
  std::string dist;
  std::string response_dist;
  int n = 0;
  std::string out;
};

int RunDecoy(const DecoyArgs& args, std::uint64_t seed) {
  const deniable::Dataset decoy = deniable::GenerateDecoy(
      deniable::ParseDistributionSpec(args.dist),
      deniable::ParseDistributionSpec(args.response_dist), args.n, seed);
  deniable::WriteDatasetCsv(args.out, decoy);
  std::cout << "wrote " << args.out << " (n = " << args.n << ", seed = " << seed << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Craft, verify and bound plausible denials of model training data"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "Master seed (fallback: DENIABLE_FIT_SEED, then 0)");

  CraftArgs craft;
  auto* craft_cmd = app.add_subcommand("craft", "Build a denial certificate for a decoy dataset");
  craft_cmd->add_option("--model", craft.model, "Model JSON file")->required();
  craft_cmd->add_option("--decoy", craft.decoy, "Decoy dataset CSV")->required();
  craft_cmd->add_option("--out", craft.out, "Certificate output path")->required();
  craft_cmd->add_flag("--mae", craft.mae, "Use the one-norm variant (MAE form)");
  craft_cmd->add_option("--seed", seed_flag, "Master seed");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Retrain on a certificate and compare with the model");
  verify_cmd->add_option("--certificate", verify.certificate, "Certificate JSON")->required();
  verify_cmd->add_option("--model", verify.model, "Model JSON file")->required();
  verify_cmd->add_option("--tolerance", verify.tolerance, "Max per-parameter deviation (or 'inf')");

  BoundArgs bound;
  auto* bound_cmd = app.add_subcommand("bound", "Check n > k / H(Z)");
  bound_cmd->add_option("--k-bits", bound.k_bits, "Bits needed to encode the model")->required();
  auto* entropy_opt = bound_cmd->add_option("--entropy-bits", bound.entropy_bits, "H(Z) per record");
  auto* dist_opt = bound_cmd->add_option("--dist", bound.dist,
                                         "Record distribution, e.g. \"du:1:8 x 10, exp:5\"");
  entropy_opt->excludes(dist_opt);
  bound_cmd->add_option("--resolution", bound.resolution, "Quantization step for continuous attributes")
      ->needs(dist_opt);
  bound_cmd->add_option("--n", bound.n, "Number of training records")->required();

  ExperimentArgs experiment;
  auto* experiment_cmd = app.add_subcommand("experiment", "Repeated regression denial experiment");
  experiment_cmd->add_option("--d", experiment.d, "Parameters (d = m + 1)");
  experiment_cmd->add_option("--n", experiment.n, "Records per dataset");
  experiment_cmd->add_option("--trials", experiment.trials, "Number of trials");
  experiment_cmd->add_option("--tolerance", experiment.tolerance, "Pass tolerance");
  experiment_cmd->add_option("--threads", experiment.threads, "Worker threads (0 = all cores)");
  experiment_cmd->add_option("--seed", seed_flag, "Master seed");

  AdversaryArgs adversary;
  auto* adversary_cmd = app.add_subcommand("adversary", "Two datasets that fit the same model");
  adversary_cmd->add_option("--d", adversary.d, "Parameters (d = m + 1)");
  adversary_cmd->add_option("--n", adversary.n, "Records per dataset");
  adversary_cmd->add_option("--seed", seed_flag, "Master seed");

  DecoyArgs decoy;
  auto* decoy_cmd = app.add_subcommand("decoy", "Sample a decoy dataset");
  decoy_cmd->add_option("--dist", decoy.dist, "Input distribution")->required();
  decoy_cmd->add_option("--response-dist", decoy.response_dist, "Response distribution")->required();
  decoy_cmd->add_option("--n", decoy.n, "Number of records")->required();
  decoy_cmd->add_option("--out", decoy.out, "Output CSV")->required();
  decoy_cmd->add_option("--seed", seed_flag, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (bound_cmd->parsed() && !bound.entropy_bits && !bound.dist) {
      throw Error(ErrorCode::kInvalidArguments, "bound needs --entropy-bits or --dist");
    }
    const std::uint64_t seed = ResolveSeed(seed_flag);
    if (craft_cmd->parsed()) return RunCraft(craft, seed);
    if (verify_cmd->parsed()) return RunVerify(verify);
    if (bound_cmd->parsed()) return RunBound(bound);
    if (experiment_cmd->parsed()) return RunExperiment(experiment, seed);
    if (adversary_cmd->parsed()) return RunAdversary(adversary, seed);
    if (decoy_cmd->parsed()) return RunDecoy(decoy, seed);
  } catch (const Error& e) {
    std::cerr << "deniable-fit: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "deniable-fit: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
