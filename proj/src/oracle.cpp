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

#include "softsort/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace softsort::oracle {

void OracleReport::record(const std::string& input_digest, double abs_error, double rel_error,
                          double checked_error, double tolerance) {
  ++instances;
  max_abs_error = std::max(max_abs_error, abs_error);
  max_rel_error = std::max(max_rel_error, rel_error);
  if (!(checked_error <= tolerance)) failures.push_back({input_digest, checked_error});
}

std::string digest(std::span<const double> x) {
  // FNV-1a over the raw bytes.
  std::uint64_t h = 1469598103934665603ULL;
  for (double v : x) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream out;
  out << "n" << x.size() << ":" << std::hex << h;
  return out.str();
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  detail::require_same_size(a.size(), b.size(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  return max_abs_diff(a, b) / scale;
}

namespace {

double lse(std::span<const double> x) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : x) hi = std::max(hi, v);
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

double pooled_value(std::span<const double> s, std::span<const double> w, Regularizer reg) {
  if (reg == Regularizer::kQuadratic) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) acc += s[i] - w[i];
    return acc / static_cast<double>(s.size());
  }
  return lse(s) - lse(w);
}

double isotonic_objective(std::span<const double> v, std::span<const double> s,
                          std::span<const double> w, Regularizer reg) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (reg == Regularizer::kQuadratic) {
      const double r = v[i] - (s[i] - w[i]);
      acc += 0.5 * r * r;
    } else {
      acc += std::exp(s[i] - v[i]) + std::exp(w[i]) * v[i];
    }
  }
  return acc;
}

void check_pair(std::span<const double> a, std::span<const double> b, std::size_t max_n,
                const char* what) {
  detail::require_same_size(a.size(), b.size(), what);
  detail::require(!a.empty(), "oracle: empty input");
  detail::require(a.size() <= max_n, "oracle: input too large for brute force");
}

}  // namespace

std::vector<double> isotonic_bruteforce(std::span<const double> s, std::span<const double> w,
                                        Regularizer reg) {
  check_pair(s, w, kMaxIsotonicBruteforceSize, "isotonic_bruteforce");
  const std::size_t n = s.size();
  const std::uint32_t num_masks = 1u << (n - 1);

  std::vector<double> best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> candidate(n);
  std::vector<double> gammas;

  // Bit i of the mask set means a block boundary between i and i + 1.
  for (std::uint32_t mask = 0; mask < num_masks; ++mask) {
    gammas.clear();
    std::size_t begin = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool boundary = i + 1 == n || ((mask >> i) & 1u) != 0;
      if (!boundary) continue;
      const std::size_t len = i + 1 - begin;
      const double g = pooled_value(s.subspan(begin, len), w.subspan(begin, len), reg);
      gammas.push_back(g);
      std::fill(candidate.begin() + static_cast<std::ptrdiff_t>(begin),
                candidate.begin() + static_cast<std::ptrdiff_t>(i + 1), g);
      begin = i + 1;
    }

    bool feasible = true;
    for (std::size_t j = 1; j < gammas.size() && feasible; ++j) {
      const double slack = 1e-12 * (1.0 + std::abs(gammas[j]));
      feasible = gammas[j - 1] >= gammas[j] - slack;
    }
    if (!feasible) continue;

    const double obj = isotonic_objective(candidate, s, w, reg);
    if (obj < best_obj) {
      best_obj = obj;
      best = candidate;
    }
  }
  return best;
}

std::vector<double> isotonic_minimax_quadratic(std::span<const double> s,
                                               std::span<const double> w) {
  detail::require_same_size(s.size(), w.size(), "isotonic_minimax_quadratic");
  const std::size_t n = s.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + (s[i] - w[i]);
  auto mean = [&](std::size_t j, std::size_t k) {
    return (prefix[k + 1] - prefix[j]) / static_cast<double>(k + 1 - j);
  };

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= i; ++j) {
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t k = i; k < n; ++k) hi = std::max(hi, mean(j, k));
      lo = std::min(lo, hi);
    }
    v[i] = lo;
  }
  return v;
}

namespace {

// Index order placing the largest entries of g first; ties keep index order.
std::vector<std::size_t> descending_order(std::span<const double> g) {
  std::vector<std::size_t> idx(g.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
  return idx;
}

std::vector<double> vertex(const std::vector<std::size_t>& order,
                           std::span<const double> w_desc) {
  std::vector<double> y(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) y[order[i]] = w_desc[i];
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

std::vector<double> projection_bruteforce_q(std::span<const double> z, std::span<const double> w,
                                            std::size_t iterations) {
  check_pair(z, w, kMaxPermutationBruteforceSize, "projection_bruteforce_q");
  const std::size_t n = z.size();
  std::vector<double> w_desc(w.begin(), w.end());
  std::sort(w_desc.begin(), w_desc.end(), std::greater<>());

  // Active vertices keyed by the order that generated them.
  std::map<std::vector<std::size_t>, double> active;
  const std::vector<std::size_t> start = descending_order(z);
  std::vector<double> mu = vertex(start, w_desc);
  active[start] = 1.0;

  std::vector<double> neg_grad(n);
  std::vector<double> dir(n);
  for (std::size_t t = 0; t < iterations; ++t) {
    for (std::size_t i = 0; i < n; ++i) neg_grad[i] = z[i] - mu[i];

    const std::vector<std::size_t> fw_order = descending_order(neg_grad);
    const std::vector<double> fw_vertex = vertex(fw_order, w_desc);
    std::vector<double> fw_dir(n);
    for (std::size_t i = 0; i < n; ++i) fw_dir[i] = fw_vertex[i] - mu[i];
    const double fw_gap = dot(neg_grad, fw_dir);
    if (fw_gap <= 1e-18) break;

    auto away = active.begin();
    double away_score = std::numeric_limits<double>::infinity();
    for (auto it = active.begin(); it != active.end(); ++it) {
      const double score = dot(neg_grad, vertex(it->first, w_desc));
      if (score < away_score) {
        away_score = score;
        away = it;
      }
    }
    const std::vector<double> away_vertex = vertex(away->first, w_desc);
    std::vector<double> away_dir(n);
    for (std::size_t i = 0; i < n; ++i) away_dir[i] = mu[i] - away_vertex[i];
    const double away_gap = dot(neg_grad, away_dir);

    const bool fw_step = fw_gap >= away_gap;
    double max_step = 1.0;
    if (fw_step) {
      dir = fw_dir;
    } else {
      dir = away_dir;
      max_step = away->second / (1.0 - away->second);
    }
    const double dd = dot(dir, dir);
    if (dd <= 0.0) break;
    const double step = std::clamp(dot(neg_grad, dir) / dd, 0.0, max_step);
    for (std::size_t i = 0; i < n; ++i) mu[i] += step * dir[i];

    if (fw_step) {
      for (auto& [key, weight] : active) weight *= 1.0 - step;
      active[fw_order] += step;
      if (step >= 1.0) {
        active.clear();
        active[fw_order] = 1.0;
      }
    } else {
      for (auto& [key, weight] : active) weight *= 1.0 + step;
      away->second -= step;
      if (step >= max_step || away->second <= 0.0) active.erase(away);
    }
  }
  return mu;
}

std::vector<double> lp_bruteforce(std::span<const double> theta, LpObjective objective) {
  detail::require(!theta.empty(), "oracle: empty input");
  detail::require(theta.size() <= kMaxPermutationBruteforceSize,
                  "oracle: input too large for brute force");
  const std::size_t n = theta.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  std::vector<double> best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<double> y(n);
  do {
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (objective == LpObjective::kSort) {
        // Vertex theta_perm of P(theta) scored against rho.
        y[i] = theta[perm[i]];
        value += y[i] * static_cast<double>(n - i);
      } else {
        // Vertex of P(rho) holding the value perm[i] + 1 at position i.
        y[i] = static_cast<double>(perm[i] + 1);
        value -= y[i] * theta[i];
      }
    }
    if (value > best_value) {
      best_value = value;
      best = y;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

FiniteDifferenceResult finite_difference_jacobian(const VectorFunction& f,
                                                  std::span<const double> x, double h,
                                                  const SignatureFunction& signature) {
  detail::require(h > 0.0, "finite_difference_jacobian: h must be positive");
  const std::size_t n = x.size();
  const std::size_t m = f(x).size();
  FiniteDifferenceResult result;
  result.jacobian.assign(m, std::vector<double>(n, 0.0));
  std::vector<std::size_t> base_signature;
  if (signature) base_signature = signature(x);

  std::vector<double> xp(x.begin(), x.end());
  std::vector<double> xm(x.begin(), x.end());
  for (std::size_t j = 0; j < n; ++j) {
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    const std::vector<double> fp = f(xp);
    const std::vector<double> fm = f(xm);
    for (std::size_t i = 0; i < m; ++i) result.jacobian[i][j] = (fp[i] - fm[i]) / (2.0 * h);
    if (signature && (signature(xp) != base_signature || signature(xm) != base_signature)) {
      result.structure_stable = false;
    }
    xp[j] = x[j];
    xm[j] = x[j];
  }
  return result;
}

}  // namespace softsort::oracle
