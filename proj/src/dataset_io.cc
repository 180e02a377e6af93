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

#include "deniable/dataset_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "deniable/error.h"

namespace deniable {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitComma(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double ParseNumber(std::string_view field, int line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                            ": not a number: '" +
                                            std::string(field) + "'");
  }
  return value;
}

// Counts the leading run of names prefix1, prefix2, ... starting at `from`.
std::size_t CountNamed(const std::vector<std::string_view>& names,
                       std::size_t from, char prefix) {
  std::size_t count = 0;
  while (from + count < names.size() &&
         names[from + count] == std::string(1, prefix) + std::to_string(count + 1)) {
    ++count;
  }
  return count;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Dataset ReadDatasetCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParseError, "empty CSV (missing header)");
  }
  const auto header = SplitComma(line);
  const std::size_t m = CountNamed(header, 0, 'x');
  const std::size_t k = CountNamed(header, m, 'y');
  if (k == 0 || m + k != header.size()) {
    throw Error(ErrorCode::kParseError,
                "header must read x1,...,xm,y1,...,yk; got '" + line + "'");
  }

  std::vector<double> values;
  int line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitComma(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    for (auto f : fields) values.push_back(ParseNumber(f, line_no));
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::kParseError, "CSV has no records");

  const auto n = static_cast<Eigen::Index>(rows);
  const auto width = static_cast<Eigen::Index>(header.size());
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      table(values.data(), n, width);
  return Dataset(table.leftCols(static_cast<Eigen::Index>(m)),
                 table.rightCols(static_cast<Eigen::Index>(k)));
}

Dataset ReadDatasetCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ReadDatasetCsv(in);
}

void WriteDatasetCsv(std::ostream& out, const Dataset& data) {
  std::ostringstream buf;
  const Eigen::Index m = data.input_dim();
  const Eigen::Index k = data.output_dim();
  for (Eigen::Index j = 0; j < m; ++j) buf << (j ? "," : "") << 'x' << j + 1;
  for (Eigen::Index j = 0; j < k; ++j) buf << (m + j ? "," : "") << 'y' << j + 1;
  buf << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      buf << (j ? "," : "") << FormatDouble(data.inputs()(i, j));
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      buf << (m + j ? "," : "") << FormatDouble(data.responses()(i, j));
    }
    buf << '\n';
  }
  out << buf.str();
}

void WriteDatasetCsv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  WriteDatasetCsv(out, data);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace deniable
