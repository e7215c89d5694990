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

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace softsort {

/// Regularization applied to the linear program over the permutahedron.
/// kQuadratic yields the Euclidean projection, kEntropic the log-KL projection.
enum class Regularizer { kQuadratic, kEntropic };

enum class Direction { kDescending, kAscending };

/// Selects which input a Jacobian product is taken with respect to. kInput is
/// the first argument (s for isotonic problems, z for projections), kWeights
/// the second one (w).
enum class Argument { kInput, kWeights };

/// Raised when an operation receives arguments violating its preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string_view to_string(Regularizer reg);
std::string_view to_string(Direction dir);

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw InvalidArgument(message);
}

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": length mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
  }
}

inline void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + ": non-finite input");
  }
}

}  // namespace detail
}  // namespace softsort
