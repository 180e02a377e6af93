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

#ifndef DENIABLE_DATASET_IO_H_
#define DENIABLE_DATASET_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "deniable/models.h"

namespace deniable {

// CSV with header "x1,...,xm,y1,...,yk" and one record per line. Numbers are
// written as shortest round-trip decimals, so write -> read is exact.
Dataset ReadDatasetCsv(std::istream& in);
Dataset ReadDatasetCsv(const std::filesystem::path& path);
void WriteDatasetCsv(std::ostream& out, const Dataset& data);
void WriteDatasetCsv(const std::filesystem::path& path, const Dataset& data);

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

}  // namespace deniable

#endif  // DENIABLE_DATASET_IO_H_
