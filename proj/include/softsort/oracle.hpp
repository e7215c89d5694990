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

// Brute-force reference implementations used by the test and acceptance
// suites (and by the gradient-check command). Nothing here calls into the
// pool-adjacent-violators solver or the projection code; this library only
// depends on the shared enum definitions.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "softsort/types.hpp"

namespace softsort::oracle {

struct OracleFailure {
  std::string input_digest;
  double error = 0.0;
};

/// Accumulates error statistics over a set of checked instances.
struct OracleReport {
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  std::size_t instances = 0;
  std::vector<OracleFailure> failures;

  /// Records one instance; it fails when `checked_error` exceeds `tolerance`.
  void record(const std::string& digest, double abs_error, double rel_error,
              double checked_error, double tolerance);
  [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// Short hexadecimal fingerprint of a vector, for failure reports.
std::string digest(std::span<const double> x);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// max |a - b| / max(1, max |b|): relative error with a unit floor so that
/// exactly-zero references do not blow up.
double relative_error(std::span<const double> a, std::span<const double> b);

inline constexpr std::size_t kMaxIsotonicBruteforceSize = 12;
inline constexpr std::size_t kMaxPermutationBruteforceSize = 6;

/// Exhaustive search over all 2^(n-1) ordered partitions of [0, n): each
/// candidate is blockwise constant at the block's closed-form pooled value,
/// infeasible (increasing) candidates are dropped and the best objective wins.
std::vector<double> isotonic_bruteforce(std::span<const double> s, std::span<const double> w,
                                        Regularizer reg);

/// v_i = min_{j<=i} max_{k>=i} mean((s - w)_{j..k}), the min-max formula for
/// decreasing isotonic regression. O(n^3).
std::vector<double> isotonic_minimax_quadratic(std::span<const double> s,
                                               std::span<const double> w);

/// Euclidean projection of z onto the permutahedron P(w) by away-step
/// Frank-Wolfe with exact line search. The linear maximization oracle is a
/// sort. n <= 6.
std::vector<double> projection_bruteforce_q(std::span<const double> z, std::span<const double> w,
                                            std::size_t iterations = 100000);

enum class LpObjective { kSort, kRank };

/// kSort: argmax over the vertices y of P(theta) of <y, rho>.
/// kRank: argmax over the vertices y of P(rho) of <y, -theta>, i.e. 1-based
/// descending ranks. Enumerates all n! permutations in lexicographic order and
/// keeps the first maximizer. Tied scores have several maximizing rankings and
/// the one returned need not match stable tie-breaking. n <= 6.
std::vector<double> lp_bruteforce(std::span<const double> theta, LpObjective objective);

using VectorFunction = std::function<std::vector<double>(std::span<const double>)>;
/// Returns a structural fingerprint of the evaluation at a point (for example
/// the pooled block boundaries); a change under perturbation marks a kink.
using SignatureFunction = std::function<std::vector<std::size_t>(std::span<const double>)>;

struct FiniteDifferenceResult {
  /// jacobian[i][j] = d f_i / d x_j
  std::vector<std::vector<double>> jacobian;
  bool structure_stable = true;
};

FiniteDifferenceResult finite_difference_jacobian(const VectorFunction& f,
                                                  std::span<const double> x, double h = 1e-6,
                                                  const SignatureFunction& signature = {});

}  // namespace softsort::oracle
