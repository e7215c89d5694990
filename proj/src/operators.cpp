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

#include "softsort/operators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

namespace softsort {

namespace {

double direction_sign(Direction dir) { return dir == Direction::kDescending ? 1.0 : -1.0; }

std::vector<double> oriented(std::span<const double> theta, Direction dir) {
  const double sign = direction_sign(dir);
  std::vector<double> x(theta.begin(), theta.end());
  for (double& v : x) v *= sign;
  return x;
}

void check_epsilon(double epsilon) {
  detail::require(epsilon > 0.0 && std::isfinite(epsilon),
                  "epsilon must be strictly positive and finite");
}

void check_input(std::span<const double> theta) {
  detail::require(!theta.empty(), "operator: empty input");
  detail::require_finite(theta, "operator");
}

// Gradient of <u, r(x)> with respect to x for a rank-type result, where
// r(x) = P(-x / eps, w).
std::vector<double> rank_vjp_wrt_x(const SoftOpResult& r, std::span<const double> u) {
  std::vector<double> g = vjp_projection(r.context, u, Argument::kInput);
  for (double& v : g) v *= -1.0 / r.epsilon;
  return g;
}

}  // namespace

Permutation argsort(std::span<const double> theta) {
  detail::require_finite(theta, "argsort");
  return argsort_descending(theta);
}

std::vector<double> hard_sort(std::span<const double> theta, Direction dir) {
  const std::vector<double> x = oriented(theta, dir);
  std::vector<double> out = argsort(x).gather(x);
  for (double& v : out) v *= direction_sign(dir);
  return out;
}

std::vector<std::size_t> hard_rank(std::span<const double> theta, Direction dir) {
  const Permutation perm = argsort(oriented(theta, dir));
  std::vector<std::size_t> ranks(theta.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) ranks[i] = perm.inverse()[i] + 1;
  return ranks;
}

std::vector<double> reversing_vector(std::size_t n) {
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = static_cast<double>(n - i);
  return rho;
}

SoftOpResult soft_sort(std::span<const double> theta, double epsilon, Regularizer reg,
                       Direction dir) {
  check_epsilon(epsilon);
  check_input(theta);
  const std::vector<double> x = oriented(theta, dir);
  Permutation perm = argsort_descending(x);
  const std::vector<double> w = perm.gather(x);
  std::vector<double> z = reversing_vector(x.size());
  for (double& v : z) v /= epsilon;

  Projection proj = project(z, w, reg);
  for (double& v : proj.values) v *= direction_sign(dir);
  return SoftOpResult{std::move(proj.values), std::move(proj.context), std::move(perm),
                      epsilon, reg, dir, SoftOp::kSort};
}

SoftOpResult soft_rank(std::span<const double> theta, double epsilon, Regularizer reg,
                       Direction dir) {
  check_epsilon(epsilon);
  check_input(theta);
  std::vector<double> z = oriented(theta, dir);
  for (double& v : z) v = -v / epsilon;

  Projection proj = project(z, reversing_vector(z.size()), reg);
  return SoftOpResult{std::move(proj.values), std::move(proj.context),
                      Permutation::identity(z.size()), epsilon, reg, dir, SoftOp::kRank};
}

SoftOpResult soft_rank_kl_direct(std::span<const double> theta, double epsilon, Direction dir) {
  check_epsilon(epsilon);
  check_input(theta);
  std::vector<double> z = oriented(theta, dir);
  for (double& v : z) v = -v / epsilon;
  std::vector<double> log_rho = reversing_vector(z.size());
  for (double& v : log_rho) v = std::log(v);

  Projection proj = project(z, log_rho, Regularizer::kEntropic);
  for (double& v : proj.values) v = std::exp(v);
  return SoftOpResult{std::move(proj.values), std::move(proj.context),
                      Permutation::identity(z.size()), epsilon, Regularizer::kEntropic, dir,
                      SoftOp::kRankKlDirect};
}

SoftOpResult apply_soft(SoftOp op, std::span<const double> theta, double epsilon,
                        Regularizer reg, Direction dir) {
  switch (op) {
    case SoftOp::kSort:
      return soft_sort(theta, epsilon, reg, dir);
    case SoftOp::kRank:
      return soft_rank(theta, epsilon, reg, dir);
    case SoftOp::kRankKlDirect:
      return soft_rank_kl_direct(theta, epsilon, dir);
  }
  throw InvalidArgument("unknown operator");
}

std::vector<double> vjp_soft(const SoftOpResult& result, std::span<const double> u) {
  detail::require_same_size(u.size(), result.values.size(), "vjp_soft");
  if (result.op == SoftOp::kSort) {
    // The output negation and the input negation of the ascending variant
    // cancel, so no direction sign appears here.
    const std::vector<double> gw = vjp_projection(result.context, u, Argument::kWeights);
    return result.input_permutation.scatter(gw);
  }

  std::vector<double> g;
  if (result.op == SoftOp::kRankKlDirect) {
    std::vector<double> scaled(u.begin(), u.end());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= result.values[i];
    g = rank_vjp_wrt_x(result, scaled);
  } else {
    g = rank_vjp_wrt_x(result, u);
  }
  const double sign = direction_sign(result.direction);
  for (double& v : g) v *= sign;
  return g;
}

std::vector<double> jvp_soft(const SoftOpResult& result, std::span<const double> u) {
  detail::require_same_size(u.size(), result.values.size(), "jvp_soft");
  if (result.op == SoftOp::kSort) {
    const std::vector<double> tw = result.input_permutation.gather(u);
    return jvp_projection(result.context, tw, Argument::kWeights);
  }

  const double scale = -direction_sign(result.direction) / result.epsilon;
  std::vector<double> tz(u.begin(), u.end());
  for (double& v : tz) v *= scale;
  std::vector<double> out = jvp_projection(result.context, tz, Argument::kInput);
  if (result.op == SoftOp::kRankKlDirect) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= result.values[i];
  }
  return out;
}

namespace {

std::size_t check_rectangular(const Batch& rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw InvalidArgument("batched: ragged input at row " + std::to_string(r));
    }
  }
  return cols;
}

template <typename RowFn>
void for_each_row(std::size_t num_rows, std::size_t threads, RowFn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, num_rows);
  if (threads <= 1) {
    for (std::size_t r = 0; r < num_rows; ++r) fn(r);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t r = t; r < num_rows; r += threads) fn(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Batch batched(SoftOp op, const Batch& rows, double epsilon, Regularizer reg, Direction dir,
              std::size_t threads) {
  check_rectangular(rows);
  Batch out(rows.size());
  for_each_row(rows.size(), threads, [&](std::size_t r) {
    out[r] = apply_soft(op, rows[r], epsilon, reg, dir).values;
  });
  return out;
}

Batch batched_vjp(SoftOp op, const Batch& rows, const Batch& cotangents, double epsilon,
                  Regularizer reg, Direction dir, std::size_t threads) {
  const std::size_t cols = check_rectangular(rows);
  detail::require_same_size(cotangents.size(), rows.size(), "batched_vjp rows");
  if (!rows.empty()) detail::require_same_size(check_rectangular(cotangents), cols, "batched_vjp cols");
  Batch out(rows.size());
  for_each_row(rows.size(), threads, [&](std::size_t r) {
    out[r] = vjp_soft(apply_soft(op, rows[r], epsilon, reg, dir), cotangents[r]);
  });
  return out;
}

}  // namespace softsort
