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

#include "deniable/certificate.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <utility>

#include "deniable/error.h"

namespace deniable {
namespace {

using nlohmann::json;

json VectorToJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json MatrixToJson(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(VectorToJson(m.row(i).transpose()));
  return out;
}

Vector VectorFromJson(const json& j, std::string_view what) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kParseError, std::string(what) + " must be an array");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kParseError, std::string(what) + " must hold numbers");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix MatrixFromJson(const json& j, std::string_view what,
                      Eigen::Index expected_cols = -1) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kParseError, std::string(what) + " must be an array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = expected_cols;
  if (cols < 0) cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector row = VectorFromJson(j[static_cast<std::size_t>(i)], what);
    if (row.size() != cols) {
      throw Error(ErrorCode::kParseError, std::string(what) + " is ragged");
    }
    m.row(i) = row.transpose();
  }
  return m;
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

template <class T>
T Get(const json& j, const char* key) {
  try {
    return Field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json NormToJson(const CraftedNorm& norm) {
  return json{
      {"B", MatrixToJson(norm.projector().rows)},
      {"source_error", VectorToJson(norm.projector().source_error)},
      {"w1", VectorToJson(norm.w1())},
      {"alpha", norm.alpha()},
      {"variant", InnerVariantName(norm.variant())},
      {"svd_tolerance", norm.projector().svd_tolerance},
      {"seed", norm.seed()},
  };
}

CraftedNorm NormFromJson(const json& j) {
  const Vector w1 = VectorFromJson(Field(j, "w1"), "w1");
  ProjectionMatrix projector;
  projector.source_error = VectorFromJson(Field(j, "source_error"), "source_error");
  projector.rows = MatrixFromJson(Field(j, "B"), "B", w1.size());
  projector.svd_tolerance = Get<double>(j, "svd_tolerance");
  const auto variant = ParseInnerVariant(Get<std::string>(j, "variant"));
  if (!variant) throw Error(ErrorCode::kParseError, "unknown norm variant");
  return CraftedNorm::FromParts(std::move(projector), w1, Get<double>(j, "alpha"),
                                *variant, Get<std::uint64_t>(j, "seed"));
}

json CertificateToJson(const DenialCertificate& c) {
  json norms = json::array();
  for (const auto& norm : c.norms) norms.push_back(NormToJson(norm));
  const auto& opt = c.optimizer_config;
  return json{
      {"schema", kCertificateSchema},
      {"seed", c.seed},
      {"model",
       {{"kind", c.model.kind},
        {"param_dim", c.model.param_dim},
        {"input_dim", c.model.input_dim},
        {"output_dim", c.model.output_dim}}},
      {"decoy",
       {{"inputs", MatrixToJson(c.decoy.inputs())},
        {"responses", MatrixToJson(c.decoy.responses())}}},
      {"residual", MatrixToJson(c.residual)},
      {"rank_condition_ok", c.rank_condition_ok},
      {"norms", norms},
      {"optimizer",
       {{"method", "nelder-mead"},
        {"start", VectorToJson(opt.start)},
        {"max_iters", opt.max_iters},
        {"simplex_scale", opt.simplex_scale},
        {"convergence_tol", opt.convergence_tol},
        {"max_restarts", opt.max_restarts},
        {"seed", opt.seed}}},
  };
}

DenialCertificate CertificateFromJson(const json& j) {
  if (!j.is_object() || Get<std::string>(j, "schema") != kCertificateSchema) {
    throw Error(ErrorCode::kParseError,
                "not a " + std::string(kCertificateSchema) + " certificate");
  }
  const json& model = Field(j, "model");
  ModelDescriptor descriptor{Get<std::string>(model, "kind"),
                             Get<Eigen::Index>(model, "param_dim"),
                             Get<Eigen::Index>(model, "input_dim"),
                             Get<Eigen::Index>(model, "output_dim")};

  const json& decoy_json = Field(j, "decoy");
  Matrix inputs = MatrixFromJson(Field(decoy_json, "inputs"), "decoy.inputs",
                                 descriptor.input_dim);
  Matrix responses = MatrixFromJson(Field(decoy_json, "responses"),
                                    "decoy.responses", descriptor.output_dim);
  Dataset decoy(std::move(inputs), std::move(responses));
  Matrix residual = MatrixFromJson(Field(j, "residual"), "residual",
                                   descriptor.output_dim);

  std::vector<CraftedNorm> norms;
  for (const auto& n : Field(j, "norms")) norms.push_back(NormFromJson(n));

  const json& opt_json = Field(j, "optimizer");
  OptimizerConfig opt;
  opt.start = VectorFromJson(Field(opt_json, "start"), "optimizer.start");
  opt.max_iters = Get<int>(opt_json, "max_iters");
  opt.simplex_scale = Get<double>(opt_json, "simplex_scale");
  opt.convergence_tol = Get<double>(opt_json, "convergence_tol");
  opt.max_restarts = Get<int>(opt_json, "max_restarts");
  opt.seed = Get<std::uint64_t>(opt_json, "seed");

  auto rank_ok = Get<std::vector<bool>>(j, "rank_condition_ok");
  if (rank_ok.size() != norms.size() ||
      std::find(rank_ok.begin(), rank_ok.end(), false) != rank_ok.end()) {
    throw Error(ErrorCode::kParseError,
                "certificate must carry a passing rank condition per norm");
  }
  return DenialCertificate{std::move(decoy), std::move(norms), std::move(residual),
                           std::move(opt), std::move(descriptor), std::move(rank_ok),
                           Get<std::uint64_t>(j, "seed")};
}

json ReportToJson(const VerificationReport& report, double tolerance) {
  json out{
      {"refit", VectorToJson(report.refit)},
      {"max_abs_diff", report.max_abs_diff},
      {"passed", report.passed},
      {"final_loss", report.final_loss},
      {"iterations", report.iterations},
      {"converged", report.converged},
  };
  // JSON has no infinity.
  out["tolerance"] = std::isfinite(tolerance) ? json(tolerance) : json("inf");
  return out;
}

json ReportToJson(const DeniabilityReport& report) {
  json out{
      {"k_bits", report.k_bits},
      {"entropy_bits", report.entropy_bits},
      {"n", report.n},
      {"threshold", report.threshold},
      {"deniable", report.deniable},
  };
  if (report.quantization) out["quantization"] = *report.quantization;
  return out;
}

ModelFile ModelFromJson(const json& j) {
  const std::string kind = Get<std::string>(j, "kind");
  if (kind != "linear") {
    throw Error(ErrorCode::kParseError, "unsupported model kind '" + kind + "'");
  }
  ModelFile out;
  out.params = VectorFromJson(Field(j, "params"), "params");
  const auto m = j.contains("input_dim") ? Get<Eigen::Index>(j, "input_dim")
                                         : out.params.size() - 1;
  if (m < 0 || out.params.size() != m + 1) {
    throw Error(ErrorCode::kParseError, "linear model needs input_dim + 1 params");
  }
  out.model = std::make_unique<LinearRegressionModel>(m);
  return out;
}

json ModelToJson(const ParamModel& model, const Vector& params) {
  return json{{"kind", model.kind()},
              {"input_dim", model.input_dim()},
              {"params", VectorToJson(params)}};
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace deniable
