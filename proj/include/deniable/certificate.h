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

#ifndef DENIABLE_CERTIFICATE_H_
#define DENIABLE_CERTIFICATE_H_

#include <filesystem>
#include <memory>
#include <string_view>

#include "json.hpp"

#include "deniable/deniability.h"

namespace deniable {

inline constexpr std::string_view kCertificateSchema = "denial-cert/1";

// JSON form of a certificate. Matrices are row-major arrays of rows; all
// numbers are emitted as shortest round-trip decimals.
nlohmann::json CertificateToJson(const DenialCertificate& certificate);
// Throws ParseError on schema or shape problems and InvariantViolated if a
// stored norm breaks the norm invariants.
DenialCertificate CertificateFromJson(const nlohmann::json& json);

nlohmann::json NormToJson(const CraftedNorm& norm);
CraftedNorm NormFromJson(const nlohmann::json& json);

nlohmann::json ReportToJson(const VerificationReport& report, double tolerance);
nlohmann::json ReportToJson(const DeniabilityReport& report);

// Model file: {"kind": "linear", "input_dim": m, "params": [...]}.
struct ModelFile {
  std::unique_ptr<ParamModel> model;
  Vector params;
};
ModelFile ModelFromJson(const nlohmann::json& json);
nlohmann::json ModelToJson(const ParamModel& model, const Vector& params);

nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const nlohmann::json& json);

}  // namespace deniable

#endif  // DENIABLE_CERTIFICATE_H_
