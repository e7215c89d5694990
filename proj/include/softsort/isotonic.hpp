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

// Chain-constrained (isotonic) optimization solved by pool adjacent
// violators, together with the block-structured Jacobian products of its
// solution. Both problems minimize a separable convex objective subject to
// v_1 >= v_2 >= ... >= v_n:
//
//   quadratic:  1/2 ||v - (s - w)||^2
//   entropic:   <exp(s - v), 1> + <exp(w), v>
//
// The solution is constant on contiguous blocks. Each block's value is
// mean(s_B - w_B) (quadratic) or LSE(s_B) - LSE(w_B) (entropic).

#include <cstddef>
#include <span>
#include <vector>

#include "softsort/types.hpp"

namespace softsort {

/// Sufficient statistics of one pooled block. sum_diff is only meaningful for
/// the quadratic problem, lse_s / lse_w only for the entropic one.
struct BlockStats {
  std::size_t count = 1;
  double sum_diff = 0.0;
  // Log-sum-exp of s and w over the block; maintained for kEntropic only.
  double lse_s = 0.0;
  double lse_w = 0.0;

  /// Combines the statistics of two adjacent blocks.
  [[nodiscard]] BlockStats merged_with(const BlockStats& other, Regularizer reg) const;
  [[nodiscard]] double gamma(Regularizer reg) const;
};

/// Ordered contiguous blocks covering [0, n). Block j spans
/// [starts[j], starts[j + 1]) with starts.back() < n; the last block ends at n.
struct BlockPartition {
  std::vector<std::size_t> starts;
  std::vector<double> gammas;
  std::vector<BlockStats> stats;
  std::size_t n = 0;

  [[nodiscard]] std::size_t num_blocks() const { return starts.size(); }
  [[nodiscard]] std::size_t block_begin(std::size_t j) const { return starts[j]; }
  [[nodiscard]] std::size_t block_end(std::size_t j) const {
    return j + 1 < starts.size() ? starts[j + 1] : n;
  }
};

/// Result of an isotonic solve. Immutable once built; keeps the inputs so
/// Jacobian products need no recomputation.
class IsotonicSolution {
 public:
  IsotonicSolution(std::vector<double> v, BlockPartition partition, std::vector<double> s,
                   std::vector<double> w, Regularizer reg);

  [[nodiscard]] const std::vector<double>& v() const { return v_; }
  [[nodiscard]] const BlockPartition& partition() const { return partition_; }
  [[nodiscard]] const std::vector<double>& s() const { return s_; }
  [[nodiscard]] const std::vector<double>& w() const { return w_; }
  [[nodiscard]] Regularizer regularizer() const { return reg_; }
  [[nodiscard]] std::size_t size() const { return v_.size(); }

 private:
  std::vector<double> v_;
  BlockPartition partition_;
  std::vector<double> s_;
  std::vector<double> w_;
  Regularizer reg_;
};

/// argmin_{v_1 >= ... >= v_n} 1/2 ||v - (s - w)||^2 in O(n).
/// Throws InvalidArgument on length mismatch, empty or non-finite input.
IsotonicSolution solve_isotonic_quadratic(std::span<const double> s, std::span<const double> w);

/// argmin_{v_1 >= ... >= v_n} <exp(s - v), 1> + <exp(w), v> in O(n), computed
/// entirely in log-space.
IsotonicSolution solve_isotonic_entropic(std::span<const double> s, std::span<const double> w);

IsotonicSolution solve_isotonic(std::span<const double> s, std::span<const double> w,
                                Regularizer reg);

/// (dv/ds) u or (dv/dw) u, using the Jacobian induced by the computed
/// partition (at kinks this is one element of the generalized Jacobian).
std::vector<double> jvp_isotonic(const IsotonicSolution& sol, std::span<const double> u,
                                 Argument arg);

/// u^T (dv/ds) or u^T (dv/dw).
std::vector<double> vjp_isotonic(const IsotonicSolution& sol, std::span<const double> u,
                                 Argument arg);

/// Numerically stable log(exp(a) + exp(b)).
double log_add_exp(double a, double b);

}  // namespace softsort
