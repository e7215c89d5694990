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

#include "softsort/projection.hpp"

#include <cmath>
#include <limits>

#include "doctest.h"
#include "softsort/oracle.hpp"
#include "test_util.hpp"

using namespace softsort;
using softsort::testing::Rng;
using softsort::testing::max_abs_diff;
using softsort::testing::sorted_desc;

namespace {

const std::vector<double> kW321{3, 2, 1};

std::vector<std::size_t> structure(const ProjectionContext& ctx) {
  std::vector<std::size_t> sig = ctx.solution().partition().starts;
  sig.insert(sig.end(), ctx.sigma().forward().begin(), ctx.sigma().forward().end());
  return sig;
}

// Majorization test for membership of x in P(w).
bool in_permutahedron(std::vector<double> x, std::vector<double> w, double tol) {
  const auto tx = testing::top_k_sums(std::move(x));
  const auto tw = testing::top_k_sums(std::move(w));
  if (std::abs(tx.back() - tw.back()) > tol * (1.0 + std::abs(tw.back()))) return false;
  for (std::size_t k = 0; k < tx.size(); ++k) {
    if (tx[k] > tw[k] + tol * (1.0 + std::abs(tw[k]))) return false;
  }
  return true;
}

std::vector<double> scaled(std::span<const double> z, double factor) {
  std::vector<double> out(z.begin(), z.end());
  for (double& v : out) v *= factor;
  return out;
}

}  // namespace

TEST_CASE("permutation bookkeeping") {
  const Permutation p = argsort_descending(std::vector<double>{1.0, 0.5, 2.0});
  CHECK(std::vector<std::size_t>(p.forward().begin(), p.forward().end()) == std::vector<std::size_t>{2, 0, 1});
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.inverse()[p.forward()[i]] == i);
  const std::vector<double> x{10, 20, 30};
  CHECK(p.scatter(p.gather(x)) == x);

  const Permutation ties = argsort_descending(std::vector<double>{1, 1, 1, 1});
  CHECK(ties == Permutation::identity(4));
  CHECK_THROWS_AS(Permutation(std::vector<std::size_t>{0, 0, 1}), InvalidArgument);
  CHECK_THROWS_AS(Permutation(std::vector<std::size_t>{0, 3}), InvalidArgument);
}

TEST_CASE("projection examples") {
  SUBCASE("center projects to the centroid") {
    const auto p = project(std::vector<double>{0, 0, 0}, kW321, Regularizer::kQuadratic);
    CHECK(max_abs_diff(p.values, std::vector<double>{2, 2, 2}) < 1e-12);
  }
  SUBCASE("ranks of (2.9, 0.1, 1.2) at unit strength") {
    const auto p = project(std::vector<double>{-2.9, -0.1, -1.2}, kW321, Regularizer::kQuadratic);
    CHECK(max_abs_diff(p.values, std::vector<double>{1, 3, 2}) < 1e-12);
  }
  SUBCASE("frozen Frank-Wolfe value") {
    const std::vector<double> z{0.3, 0.1, 0.2};
    const auto fw = oracle::projection_bruteforce_q(z, kW321);
    const std::vector<double> expected{2.1, 1.9, 2.0};
    CHECK(max_abs_diff(fw, expected) < 1e-4);
    const auto p = project(z, kW321, Regularizer::kQuadratic);
    CHECK(max_abs_diff(p.values, expected) < 1e-12);
  }
  SUBCASE("entropic centroid") {
    // exp(output) is the centroid of P(exp(w)).
    const auto p = project(std::vector<double>{0, 0, 0}, kW321, Regularizer::kEntropic);
    const double c = std::log((std::exp(3.0) + std::exp(2.0) + std::exp(1.0)) / 3.0);
    for (double v : p.values) CHECK(v == doctest::Approx(c));
  }
}

TEST_CASE("projection preconditions") {
  CHECK_THROWS_AS(project(std::vector<double>{0, 0, 0}, std::vector<double>{1, 2, 3}, Regularizer::kQuadratic),
                  InvalidArgument);
  CHECK_THROWS_AS(project(std::vector<double>{0, 0}, kW321, Regularizer::kQuadratic), InvalidArgument);
  CHECK_THROWS_AS(project(std::vector<double>{0, std::nan(""), 0}, kW321, Regularizer::kEntropic),
                  InvalidArgument);
  const auto p = project(std::vector<double>{0, 1, 2}, kW321, Regularizer::kQuadratic);
  CHECK_THROWS_AS(jvp_projection(p.context, std::vector<double>{1, 2}, Argument::kInput), InvalidArgument);
  CHECK_THROWS_AS(vjp_projection(p.context, std::vector<double>{1}, Argument::kWeights), InvalidArgument);
}

TEST_CASE("projection jacobian examples") {
  SUBCASE("vertex regime has zero z-Jacobian") {
    const auto p = project(std::vector<double>{30, 10, 20}, kW321, Regularizer::kQuadratic);
    REQUIRE(p.context.solution().partition().num_blocks() == 3);
    const std::vector<double> u{1, -2, 0.5};
    CHECK(max_abs_diff(jvp_projection(p.context, u, Argument::kInput), std::vector<double>(3, 0.0)) == 0.0);
    CHECK(max_abs_diff(vjp_projection(p.context, u, Argument::kInput), std::vector<double>(3, 0.0)) == 0.0);
  }
  SUBCASE("single block kills constants") {
    const auto p = project(std::vector<double>{0.1, 0.3, 0.2}, kW321, Regularizer::kQuadratic);
    REQUIRE(p.context.solution().partition().num_blocks() == 1);
    const auto out = jvp_projection(p.context, std::vector<double>{1, 1, 1}, Argument::kInput);
    CHECK(max_abs_diff(out, std::vector<double>(3, 0.0)) < 1e-15);
  }
  SUBCASE("quadratic z-Jacobian is symmetric") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = rng.index(1, 15);
      const auto w = sorted_desc(rng.normal_vector(n));
      const auto p = project(rng.normal_vector(n), w, Regularizer::kQuadratic);
      const auto u = rng.normal_vector(n);
      CHECK(max_abs_diff(jvp_projection(p.context, u, Argument::kInput),
                         vjp_projection(p.context, u, Argument::kInput)) < 1e-14);
    }
  }
}

TEST_CASE("projection jacobians match finite differences") {
  Rng rng(22);
  const std::vector<double> w6{6, 5, 4, 3, 2, 1};
  for (Regularizer reg : {Regularizer::kQuadratic, Regularizer::kEntropic}) {
    for (Argument arg : {Argument::kInput, Argument::kWeights}) {
      int checked = 0;
      while (checked < 25) {
        const std::size_t n = reg == Regularizer::kEntropic && checked % 2 ? 5 : 6;
        const auto z = rng.tie_free_vector(n, 3.0);
        const auto w = n == 6 ? w6 : sorted_desc(rng.tie_free_vector(n));
        auto call = [&](std::span<const double> x) {
          return arg == Argument::kInput ? project(x, w, reg) : project(z, x, reg);
        };
        const std::vector<double> x = arg == Argument::kInput ? z : w;
        const auto fd = oracle::finite_difference_jacobian(
            [&](std::span<const double> p) { return call(p).values; }, x, 1e-6,
            [&](std::span<const double> p) { return structure(call(p).context); });
        if (!fd.structure_stable) continue;
        ++checked;
        const auto ctx = call(x).context;
        std::vector<double> e(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
          e[k] = 1.0;
          std::vector<double> column(n);
          for (std::size_t i = 0; i < n; ++i) column[i] = fd.jacobian[i][k];
          CHECK(oracle::relative_error(jvp_projection(ctx, e, arg), column) <= 1e-5);
          CHECK(oracle::relative_error(vjp_projection(ctx, e, arg), fd.jacobian[k]) <= 1e-5);
          e[k] = 0.0;
        }
      }
    }
  }
}

TEST_CASE("epsilon thresholds") {
  CHECK(epsilon_min(std::vector<double>{3, 2, 1}, kW321) == 1.0);
  CHECK(epsilon_min(std::vector<double>{4, 2, 1}, kW321) == 1.0);
  CHECK(epsilon_min(std::vector<double>{2.9, 1.2, 0.1}, kW321) == doctest::Approx(1.1));
  CHECK(epsilon_min(std::vector<double>{5}, std::vector<double>{1}) == std::numeric_limits<double>::infinity());

  CHECK(epsilon_max(std::vector<double>{3, 2, 1}, kW321) == 1.0);
  CHECK(epsilon_max(std::vector<double>{4, 2, 1}, kW321) == 2.0);
  CHECK(epsilon_max(std::vector<double>{5}, std::vector<double>{1}) == 0.0);

  CHECK_THROWS_AS(epsilon_min(std::vector<double>{3, 2, 1}, std::vector<double>{2, 2, 1}), InvalidArgument);
  CHECK_THROWS_AS(epsilon_max(std::vector<double>{3, 2, 1}, std::vector<double>{2, 2, 1}), InvalidArgument);
  CHECK_THROWS_AS(epsilon_min(std::vector<double>{1, 2, 3}, kW321), InvalidArgument);
  CHECK_THROWS_AS(epsilon_min(std::vector<double>{1, 2}, kW321), InvalidArgument);
}

TEST_CASE("limit projections") {
  SUBCASE("small regime returns the permuted vertex") {
    const std::vector<double> z{0.2, 0.9, -0.4};
    const auto out = limit_projection(z, kW321, 0.1, Regularizer::kQuadratic, LimitRegime::kSmall);
    CHECK(out == std::vector<double>{2, 3, 1});
  }
  SUBCASE("large regime, quadratic") {
    const auto out = limit_projection(std::vector<double>{1, 0}, std::vector<double>{2, 1}, 1e6,
                                      Regularizer::kQuadratic, LimitRegime::kLarge);
    CHECK(std::abs(out[0] - (1.5 + 5e-7)) < 1e-12);
    CHECK(std::abs(out[1] - (1.5 - 5e-7)) < 1e-12);
  }
  SUBCASE("large regime, entropic") {
    const auto out = limit_projection(std::vector<double>{0, 0}, std::vector<double>{2, 1}, 3.0,
                                      Regularizer::kEntropic, LimitRegime::kLarge);
    const double expected = std::log(std::exp(2.0) + std::exp(1.0)) - std::log(2.0);
    CHECK(std::abs(out[0] - expected) < 1e-14);
    CHECK(std::abs(out[1] - expected) < 1e-14);
  }
  SUBCASE("regime preconditions") {
    CHECK_THROWS_AS(limit_projection(std::vector<double>{3, 1}, std::vector<double>{2, 1}, 5.0,
                                     Regularizer::kQuadratic, LimitRegime::kSmall),
                    InvalidArgument);
    CHECK_THROWS_AS(limit_projection(std::vector<double>{3, 1}, std::vector<double>{2, 1}, 1.0,
                                     Regularizer::kQuadratic, LimitRegime::kLarge),
                    InvalidArgument);
  }
}

TEST_CASE("limit regimes agree with the solver") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.index(1, 12);
    const auto z = rng.tie_free_vector(n);
    const auto w = sorted_desc(rng.tie_free_vector(n, 2.0));
    const auto s = sorted_desc(z);
    const double lo = epsilon_min(s, w);
    const double hi = epsilon_max(s, w);
    for (Regularizer reg : {Regularizer::kQuadratic, Regularizer::kEntropic}) {
      if (std::isfinite(lo)) {
        const double eps = 0.5 * lo;
        const auto p = project(scaled(z, 1.0 / eps), w, reg);
        CHECK(max_abs_diff(p.values, limit_projection(z, w, eps, reg, LimitRegime::kSmall)) <= 1e-9);
      }
      const double eps = 10.0 * std::max(hi, 1e-3);
      const auto p = project(scaled(z, 1.0 / eps), w, reg);
      CHECK(p.context.solution().partition().num_blocks() == 1);
      CHECK(max_abs_diff(p.values, limit_projection(z, w, eps, reg, LimitRegime::kLarge)) <= 1e-9);
    }
  }
}

TEST_CASE("outputs lie in the permutahedron") {
  Rng rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.index(1, 8);
    const auto z = rng.normal_vector(n, 2.0);
    const auto w = sorted_desc(rng.normal_vector(n, 2.0));
    const auto q = project(z, w, Regularizer::kQuadratic);
    CHECK(in_permutahedron(q.values, w, 1e-10));

    auto e = project(z, w, Regularizer::kEntropic).values;
    std::vector<double> exp_w = w;
    for (double& v : e) v = std::exp(v);
    for (double& v : exp_w) v = std::exp(v);
    CHECK(in_permutahedron(e, exp_w, 1e-10));
  }
}

TEST_CASE("outputs are sorted like the input") {
  Rng rng(25);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = rng.index(1, 30);
    const auto z = rng.tie_free_vector(n);
    const auto w = sorted_desc(rng.normal_vector(n, 2.0));
    const auto order = argsort_descending(z);
    for (Regularizer reg : {Regularizer::kQuadratic, Regularizer::kEntropic}) {
      const auto values = project(z, w, reg).values;
      for (std::size_t i = 1; i < n; ++i) {
        CHECK(values[order.forward()[i - 1]] >= values[order.forward()[i]]);
      }
    }
  }
}

TEST_CASE("vertices stay fixed below epsilon_min") {
  Rng rng(26);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.index(2, 10);
    const auto w = sorted_desc(rng.tie_free_vector(n));
    const Permutation pi = argsort_descending(rng.normal_vector(n));
    std::vector<double> z = pi.scatter(w);
    const double eps = epsilon_min(sorted_desc(z), w);
    for (double& v : z) v /= eps;
    const auto p = project(z, w, Regularizer::kQuadratic);
    CHECK(max_abs_diff(p.values, pi.scatter(w)) < 1e-9);
  }
}

TEST_CASE("quadratic projection matches Frank-Wolfe") {
  Rng rng(27);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.index(1, oracle::kMaxPermutationBruteforceSize);
    const auto z = rng.normal_vector(n, 2.0);
    const auto w = sorted_desc(rng.normal_vector(n, 2.0));
    const auto p = project(z, w, Regularizer::kQuadratic);
    worst = std::max(worst, max_abs_diff(p.values, oracle::projection_bruteforce_q(z, w)));
  }
  CHECK(worst <= 1e-4);
}
