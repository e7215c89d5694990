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

#pragma once

// Row-oriented text formats: comma-separated decimals (one vector per line)
// and JSON lines (one array per line).

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace softsort::cli {

enum class RowFormat { kCsv, kJsonLines };

/// Raised for malformed input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses one line. Blank lines yield an empty row.
std::vector<double> parse_row(std::string_view line, RowFormat format, std::size_t line_number);

/// Reads every line of `in`.
std::vector<std::vector<double>> read_rows(std::istream& in, RowFormat format);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

void write_row(std::ostream& out, std::span<const double> row, RowFormat format);

}  // namespace softsort::cli
