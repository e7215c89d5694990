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

// Hard and soft sorting / ranking operators.
//
// Conventions: sorting is descending by default and ranks are 1-based with
// rank 1 for the largest entry. Ties are broken by original index (stable).
//
//   soft_sort(theta) = P(rho / eps, sort(theta))
//   soft_rank(theta) = P(-theta / eps, rho)
//
// with rho = (n, n-1, ..., 1). Ascending variants are -soft_sort(-theta) and
// soft_rank(-theta).

#include <cstddef>
#include <span>
#include <vector>

#include "softsort/projection.hpp"
#include "softsort/types.hpp"

namespace softsort {

enum class SoftOp { kSort, kRank, kRankKlDirect };

Permutation argsort(std::span<const double> theta);
std::vector<double> hard_sort(std::span<const double> theta, Direction dir = Direction::kDescending);
std::vector<std::size_t> hard_rank(std::span<const double> theta,
                                   Direction dir = Direction::kDescending);

/// (n, n-1, ..., 1)
std::vector<double> reversing_vector(std::size_t n);

/// Output of a soft operator plus everything its Jacobian products need.
struct SoftOpResult {
  std::vector<double> values;
  ProjectionContext context;
  /// Descending argsort of the (possibly negated) input. Identity for ranks.
  Permutation input_permutation;
  double epsilon;
  Regularizer regularizer;
  Direction direction;
  SoftOp op;
};

SoftOpResult soft_sort(std::span<const double> theta, double epsilon,
                       Regularizer reg = Regularizer::kQuadratic,
                       Direction dir = Direction::kDescending);

SoftOpResult soft_rank(std::span<const double> theta, double epsilon,
                       Regularizer reg = Regularizer::kQuadratic,
                       Direction dir = Direction::kDescending);

/// Ranks as exp(P_E(-theta / eps, log rho)): a KL projection directly onto
/// P(rho) rather than a log-KL one onto P(exp(rho)).
SoftOpResult soft_rank_kl_direct(std::span<const double> theta, double epsilon,
                                 Direction dir = Direction::kDescending);

SoftOpResult apply_soft(SoftOp op, std::span<const double> theta, double epsilon,
                        Regularizer reg, Direction dir);

/// Gradient of <u, values> with respect to theta. O(n).
std::vector<double> vjp_soft(const SoftOpResult& result, std::span<const double> u);

/// Directional derivative of values along the theta-tangent u. O(n).
std::vector<double> jvp_soft(const SoftOpResult& result, std::span<const double> u);

/// Row-major dense batch; every row is one independent instance.
using Batch = std::vector<std::vector<double>>;

/// Applies op to every row. Rows are independent and may run on up to
/// `threads` workers (0 picks the hardware concurrency); output row i always
/// corresponds to input row i and is bitwise identical to a sequential call.
/// Throws on ragged input.
Batch batched(SoftOp op, const Batch& rows, double epsilon, Regularizer reg, Direction dir,
              std::size_t threads = 0);

/// Row-wise vjp_soft against a batch of cotangents.
Batch batched_vjp(SoftOp op, const Batch& rows, const Batch& cotangents, double epsilon,
                  Regularizer reg, Direction dir, std::size_t threads = 0);

}  // namespace softsort
