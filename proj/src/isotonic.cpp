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

#include "softsort/isotonic.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace softsort {

double log_add_exp(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

BlockStats BlockStats::merged_with(const BlockStats& other, Regularizer reg) const {
  if (reg == Regularizer::kQuadratic) {
    return BlockStats{count + other.count, sum_diff + other.sum_diff, 0.0, 0.0};
  }
  return BlockStats{count + other.count, sum_diff + other.sum_diff,
                    log_add_exp(lse_s, other.lse_s), log_add_exp(lse_w, other.lse_w)};
}

double BlockStats::gamma(Regularizer reg) const {
  if (reg == Regularizer::kQuadratic) return sum_diff / static_cast<double>(count);
  return lse_s - lse_w;
}

IsotonicSolution::IsotonicSolution(std::vector<double> v, BlockPartition partition,
                                   std::vector<double> s, std::vector<double> w,
                                   Regularizer reg)
    : v_(std::move(v)),
      partition_(std::move(partition)),
      s_(std::move(s)),
      w_(std::move(w)),
      reg_(reg) {}

namespace {

void check_inputs(std::span<const double> s, std::span<const double> w) {
  detail::require_same_size(s.size(), w.size(), "isotonic");
  detail::require(!s.empty(), "isotonic: empty input");
  detail::require_finite(s, "isotonic");
  detail::require_finite(w, "isotonic");
}

// Single left-to-right pass over a block stack. Adjacent blocks are pooled
// only on a strict violation gamma_left < gamma_right, so the surviving gammas
// are non-increasing under exact floating comparison.
IsotonicSolution pool_adjacent_violators(std::span<const double> s, std::span<const double> w,
                                         Regularizer reg) {
  check_inputs(s, w);
  const std::size_t n = s.size();

  BlockPartition part;
  part.n = n;
  part.starts.reserve(n);
  part.gammas.reserve(n);
  part.stats.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    BlockStats block{1, s[i] - w[i], reg == Regularizer::kEntropic ? s[i] : 0.0,
                     reg == Regularizer::kEntropic ? w[i] : 0.0};
    double gamma = block.gamma(reg);
    std::size_t start = i;
    while (!part.gammas.empty() && part.gammas.back() < gamma) {
      block = part.stats.back().merged_with(block, reg);
      gamma = block.gamma(reg);
      start = part.starts.back();
      part.starts.pop_back();
      part.gammas.pop_back();
      part.stats.pop_back();
    }
    part.starts.push_back(start);
    part.gammas.push_back(gamma);
    part.stats.push_back(block);
  }

  std::vector<double> v(n);
  for (std::size_t j = 0; j < part.num_blocks(); ++j) {
    std::fill(v.begin() + static_cast<std::ptrdiff_t>(part.block_begin(j)),
              v.begin() + static_cast<std::ptrdiff_t>(part.block_end(j)), part.gammas[j]);
  }
  return IsotonicSolution(std::move(v), std::move(part), {s.begin(), s.end()},
                          {w.begin(), w.end()}, reg);
}

enum class Transpose { kNo, kYes };

std::vector<double> block_product(const IsotonicSolution& sol, std::span<const double> u,
                                  Argument arg, Transpose transpose) {
  detail::require_same_size(u.size(), sol.size(), "isotonic jacobian product");
  const BlockPartition& part = sol.partition();
  const double sign = arg == Argument::kInput ? 1.0 : -1.0;
  std::vector<double> out(u.size());

  for (std::size_t j = 0; j < part.num_blocks(); ++j) {
    const std::size_t b = part.block_begin(j);
    const std::size_t e = part.block_end(j);

    if (sol.regularizer() == Regularizer::kQuadratic) {
      // 1/|B| everywhere in the block: symmetric, so both products agree.
      double sum = 0.0;
      for (std::size_t i = b; i < e; ++i) sum += u[i];
      const double mean = sign * sum / static_cast<double>(e - b);
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(b),
                out.begin() + static_cast<std::ptrdiff_t>(e), mean);
      continue;
    }

    // Entropic block: every row equals softmax(x_B) with x = s or w.
    const std::span<const double> x = arg == Argument::kInput ? sol.s() : sol.w();
    const double lse = arg == Argument::kInput ? part.stats[j].lse_s : part.stats[j].lse_w;
    if (transpose == Transpose::kNo) {
      double dot = 0.0;
      for (std::size_t i = b; i < e; ++i) dot += std::exp(x[i] - lse) * u[i];
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(b),
                out.begin() + static_cast<std::ptrdiff_t>(e), sign * dot);
    } else {
      double sum = 0.0;
      for (std::size_t i = b; i < e; ++i) sum += u[i];
      for (std::size_t i = b; i < e; ++i) out[i] = sign * std::exp(x[i] - lse) * sum;
    }
  }
  return out;
}

}  // namespace

IsotonicSolution solve_isotonic_quadratic(std::span<const double> s, std::span<const double> w) {
  return pool_adjacent_violators(s, w, Regularizer::kQuadratic);
}

IsotonicSolution solve_isotonic_entropic(std::span<const double> s, std::span<const double> w) {
  return pool_adjacent_violators(s, w, Regularizer::kEntropic);
}

IsotonicSolution solve_isotonic(std::span<const double> s, std::span<const double> w,
                                Regularizer reg) {
  return pool_adjacent_violators(s, w, reg);
}

std::vector<double> jvp_isotonic(const IsotonicSolution& sol, std::span<const double> u,
                                 Argument arg) {
  return block_product(sol, u, arg, Transpose::kNo);
}

std::vector<double> vjp_isotonic(const IsotonicSolution& sol, std::span<const double> u,
                                 Argument arg) {
  return block_product(sol, u, arg, Transpose::kYes);
}

}  // namespace softsort
