// Copyright 2026 The softsort Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "io.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

namespace softsort::cli {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line_number) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_number, "invalid number '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line_number, "non-finite value");
  return value;
}

}  // namespace

std::vector<double> parse_row(std::string_view line, RowFormat format, std::size_t line_number) {
  line = trim(line);
  std::vector<double> row;
  if (line.empty()) return row;

  if (format == RowFormat::kCsv) {
    std::size_t begin = 0;
    while (true) {
      const std::size_t comma = line.find(',', begin);
      row.push_back(parse_number(line.substr(begin, comma - begin), line_number));
      if (comma == std::string_view::npos) break;
      begin = comma + 1;
    }
    return row;
  }

  const auto parsed = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_array()) {
    throw ParseError(line_number, "expected a JSON array of numbers");
  }
  for (const auto& item : parsed) {
    if (!item.is_number()) throw ParseError(line_number, "array entry is not a number");
    const double v = item.get<double>();
    if (!std::isfinite(v)) throw ParseError(line_number, "non-finite value");
    row.push_back(v);
  }
  return row;
}

std::vector<std::vector<double>> read_rows(std::istream& in, RowFormat format) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    rows.push_back(parse_row(line, format, line_number));
  }
  return rows;
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // print -0 as 0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_row(std::ostream& out, std::span<const double> row, RowFormat format) {
  if (format == RowFormat::kJsonLines) out << '[';
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(row[i]);
  }
  if (format == RowFormat::kJsonLines) out << ']';
  out << '\n';
}

}  // namespace softsort::cli
