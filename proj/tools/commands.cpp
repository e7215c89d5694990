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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "softsort/losses.hpp"
#include "softsort/projection.hpp"

namespace softsort::cli {

RegularizerChoice parse_regularizer(const std::string& name) {
  if (name == "q") return {Regularizer::kQuadratic, false};
  if (name == "e") return {Regularizer::kEntropic, false};
  if (name == "kl-direct") return {Regularizer::kEntropic, true};
  throw InvalidArgument("unknown regularizer '" + name + "' (expected q, e or kl-direct)");
}

Direction parse_direction(const std::string& name) {
  if (name == "desc") return Direction::kDescending;
  if (name == "asc") return Direction::kAscending;
  throw InvalidArgument("unknown direction '" + name + "' (expected asc or desc)");
}

// ---------------------------------------------------------------------------
// apply

int cmd_apply(const ApplyOptions& options, std::istream& in, std::ostream& out,
              std::ostream& err) {
  RegularizerChoice reg;
  Direction dir{};
  try {
    reg = parse_regularizer(options.regularizer);
    dir = parse_direction(options.direction);
    if (reg.kl_direct && options.kind == ApplyKind::kSort) {
      throw InvalidArgument("kl-direct is only defined for rank");
    }
    if (!options.hard && !(options.epsilon > 0.0 && std::isfinite(options.epsilon))) {
      throw InvalidArgument("epsilon must be strictly positive");
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::vector<std::vector<double>> rows;
  try {
    rows = read_rows(in, options.format);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }

  std::vector<std::vector<double>> results(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::vector<double>& row = rows[r];
    if (row.empty()) continue;
    if (options.hard) {
      if (options.kind == ApplyKind::kSort) {
        results[r] = hard_sort(row, dir);
      } else {
        const std::vector<std::size_t> ranks = hard_rank(row, dir);
        results[r].assign(ranks.begin(), ranks.end());
      }
      continue;
    }
    const SoftOp op = options.kind == ApplyKind::kSort
                          ? SoftOp::kSort
                          : (reg.kl_direct ? SoftOp::kRankKlDirect : SoftOp::kRank);
    results[r] = apply_soft(op, row, options.epsilon, reg.regularizer, dir).values;
  }
  for (const auto& row : results) write_row(out, row, options.format);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

namespace {

Batch normal_batch(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Batch batch(rows, std::vector<double>(cols));
  for (auto& row : batch) {
    for (double& v : row) v = normal(rng);
  }
  return batch;
}

}  // namespace

std::vector<BenchRecord> run_bench(const BenchOptions& options) {
  detail::require(options.reps >= kMinBenchReps, "bench: reps must be at least 3");
  detail::require(options.batch >= 1, "bench: batch must be at least 1");
  for (std::size_t n : options.sizes) detail::require(n >= 1, "bench: sizes must be >= 1");

  struct Config {
    SoftOp op;
    const char* op_name;
    Regularizer reg;
  };
  const Config configs[] = {{SoftOp::kSort, "soft_sort", Regularizer::kQuadratic},
                            {SoftOp::kSort, "soft_sort", Regularizer::kEntropic},
                            {SoftOp::kRank, "soft_rank", Regularizer::kQuadratic},
                            {SoftOp::kRank, "soft_rank", Regularizer::kEntropic}};

  std::vector<BenchRecord> records;
  for (std::size_t n : options.sizes) {
    const Batch batch = normal_batch(options.batch, n, options.seed + n);
    for (const Config& c : configs) {
      auto run = [&] {
        return batched(c.op, batch, options.epsilon, c.reg, Direction::kDescending,
                       options.threads);
      };
      run();  // warmup
      std::vector<double> ms(options.reps);
      for (double& t : ms) {
        const auto start = std::chrono::steady_clock::now();
        const Batch out = run();
        const auto stop = std::chrono::steady_clock::now();
        t = std::chrono::duration<double, std::milli>(stop - start).count();
      }
      const double mean = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
      double var = 0.0;
      for (double t : ms) var += (t - mean) * (t - mean);
      var /= static_cast<double>(ms.size() - 1);
      records.push_back(BenchRecord{n, options.batch, c.op_name, std::string(to_string(c.reg)),
                                    mean, std::sqrt(var), options.reps});
    }
  }
  return records;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "n,batch,operator,regularizer,mean_ms,std_ms,reps\n";
  for (const BenchRecord& r : records) {
    out << r.n << ',' << r.batch << ',' << r.op << ',' << r.regularizer << ','
        << format_double(r.mean_ms) << ',' << format_double(r.std_ms) << ',' << r.reps << '\n';
  }
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  try {
    write_bench_csv(out, run_bench(options));
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gradcheck

namespace {

std::vector<std::size_t> structure_of(const ProjectionContext& ctx) {
  const BlockPartition& part = ctx.solution().partition();
  std::vector<std::size_t> sig(part.starts.begin(), part.starts.end());
  sig.push_back(ctx.size());
  sig.insert(sig.end(), ctx.sigma().forward().begin(), ctx.sigma().forward().end());
  return sig;
}

std::vector<std::size_t> structure_of(const SoftOpResult& r) {
  std::vector<std::size_t> sig = structure_of(r.context);
  sig.insert(sig.end(), r.input_permutation.forward().begin(),
             r.input_permutation.forward().end());
  return sig;
}

// One differentiable map x -> f(x) with its own jvp/vjp.
struct GradcheckTarget {
  std::function<std::vector<double>(std::span<const double>)> forward;
  std::function<std::vector<std::size_t>(std::span<const double>)> structure;
  std::function<std::vector<double>(std::span<const double>, std::span<const double>)> jvp;
  std::function<std::vector<double>(std::span<const double>, std::span<const double>)> vjp;
};

bool has_ties(std::span<const double> x, double min_gap) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < min_gap) return true;
  }
  return false;
}

// Returns the max relative error of the jvp columns and vjp rows against
// the finite-difference Jacobian, or nullopt when the point sits too close
// to a change of block structure.
std::optional<std::pair<double, double>> check_point(const GradcheckTarget& t,
                                                     std::span<const double> x, double h,
                                                     bool flip) {
  const oracle::FiniteDifferenceResult fd =
      oracle::finite_difference_jacobian(t.forward, x, h, t.structure);
  if (!fd.structure_stable) return std::nullopt;

  const std::size_t m = fd.jacobian.size();
  const std::size_t n = x.size();
  std::vector<double> fd_flat;
  std::vector<double> jvp_flat(m * n);
  std::vector<double> vjp_flat(m * n);
  for (const auto& row : fd.jacobian) fd_flat.insert(fd_flat.end(), row.begin(), row.end());

  std::vector<double> basis(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    basis[j] = 1.0;
    const std::vector<double> col = t.jvp(x, basis);
    for (std::size_t i = 0; i < m; ++i) jvp_flat[i * n + j] = col[i];
    basis[j] = 0.0;
  }
  std::vector<double> cot(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    cot[i] = 1.0;
    std::vector<double> row = t.vjp(x, cot);
    if (flip) {
      for (double& v : row) v = -v;
    }
    for (std::size_t j = 0; j < n; ++j) vjp_flat[i * n + j] = row[j];
    cot[i] = 0.0;
  }
  const double abs_err = std::max(oracle::max_abs_diff(jvp_flat, fd_flat),
                                  oracle::max_abs_diff(vjp_flat, fd_flat));
  const double rel_err = std::max(oracle::relative_error(jvp_flat, fd_flat),
                                  oracle::relative_error(vjp_flat, fd_flat));
  return std::make_pair(abs_err, rel_err);
}

GradcheckTarget soft_target(SoftOp op, double eps, Regularizer reg) {
  GradcheckTarget t;
  t.forward = [=](std::span<const double> x) { return apply_soft(op, x, eps, reg, Direction::kDescending).values; };
  t.structure = [=](std::span<const double> x) {
    return structure_of(apply_soft(op, x, eps, reg, Direction::kDescending));
  };
  t.jvp = [=](std::span<const double> x, std::span<const double> u) {
    return jvp_soft(apply_soft(op, x, eps, reg, Direction::kDescending), u);
  };
  t.vjp = [=](std::span<const double> x, std::span<const double> u) {
    return vjp_soft(apply_soft(op, x, eps, reg, Direction::kDescending), u);
  };
  return t;
}

// Projection viewed as a function of z (fixed w) or of w (fixed z).
GradcheckTarget projection_target(std::vector<double> fixed, Argument arg, Regularizer reg) {
  auto call = [=](std::span<const double> x) {
    return arg == Argument::kInput ? project(x, fixed, reg) : project(fixed, x, reg);
  };
  GradcheckTarget t;
  t.forward = [=](std::span<const double> x) { return call(x).values; };
  t.structure = [=](std::span<const double> x) { return structure_of(call(x).context); };
  t.jvp = [=](std::span<const double> x, std::span<const double> u) {
    return jvp_projection(call(x).context, u, arg);
  };
  t.vjp = [=](std::span<const double> x, std::span<const double> u) {
    return vjp_projection(call(x).context, u, arg);
  };
  return t;
}

}  // namespace

bool GradcheckReport::ok() const {
  return std::all_of(cases.begin(), cases.end(), [](const auto& kv) { return kv.second.ok(); });
}

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  detail::require(options.n >= 1, "gradcheck: n must be >= 1");
  GradcheckReport report;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_eps(std::log(0.1), std::log(10.0));
  const double min_gap = 1e-3;

  auto random_vector = [&](double scale) {
    std::vector<double> x(options.n);
    do {
      for (double& v : x) v = scale * normal(rng);
    } while (has_ties(x, min_gap));
    return x;
  };
  auto descending = [](std::vector<double> x) {
    std::sort(x.begin(), x.end(), std::greater<>());
    return x;
  };

  struct Case {
    std::string name;
    std::function<std::pair<GradcheckTarget, std::vector<double>>()> sample;
  };
  std::vector<Case> cases;
  for (Regularizer reg : {Regularizer::kQuadratic, Regularizer::kEntropic}) {
    const std::string suffix = "/" + std::string(to_string(reg));
    cases.push_back({"sort" + suffix, [&, reg] {
                       return std::make_pair(soft_target(SoftOp::kSort, std::exp(log_eps(rng)), reg),
                                             random_vector(1.0));
                     }});
    cases.push_back({"rank" + suffix, [&, reg] {
                       return std::make_pair(soft_target(SoftOp::kRank, std::exp(log_eps(rng)), reg),
                                             random_vector(1.0));
                     }});
    cases.push_back({"project-z" + suffix, [&, reg] {
                       return std::make_pair(
                           projection_target(descending(random_vector(1.0)), Argument::kInput, reg),
                           random_vector(2.0));
                     }});
    cases.push_back({"project-w" + suffix, [&, reg] {
                       return std::make_pair(
                           projection_target(random_vector(2.0), Argument::kWeights, reg),
                           descending(random_vector(1.0)));
                     }});
  }
  cases.push_back({"rank/kl-direct", [&] {
                     return std::make_pair(
                         soft_target(SoftOp::kRankKlDirect, std::exp(log_eps(rng)), Regularizer::kEntropic),
                         random_vector(1.0));
                   }});

  const std::size_t max_attempts = 100 * options.trials + 100;
  for (const Case& c : cases) {
    oracle::OracleReport& rep = report.cases[c.name];
    std::size_t attempts = 0;
    while (rep.instances < options.trials && attempts < max_attempts) {
      ++attempts;
      auto [target, x] = c.sample();
      const auto err = check_point(target, x, options.h, options.inject_sign_flip);
      if (!err) {
        ++report.skipped_unstable;
        continue;
      }
      rep.record(oracle::digest(x), err->first, err->second, err->second, options.tolerance);
    }
    if (rep.instances < options.trials) {
      rep.failures.push_back({"insufficient partition-stable instances", 0.0});
    }
  }
  return report;
}

int cmd_gradcheck(const GradcheckOptions& options, std::ostream& out, std::ostream& err) {
  GradcheckReport report;
  try {
    report = run_gradcheck(options);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << "case,instances,max_abs_error,max_rel_error,failures\n";
  for (const auto& [name, rep] : report.cases) {
    out << name << ',' << rep.instances << ',' << format_double(rep.max_abs_error) << ','
        << format_double(rep.max_rel_error) << ',' << rep.failures.size() << '\n';
  }
  err << "skipped " << report.skipped_unstable << " kink-adjacent points\n";
  if (!report.ok()) {
    for (const auto& [name, rep] : report.cases) {
      for (const auto& f : rep.failures) {
        err << "FAIL " << name << " " << f.input_digest << " rel_error=" << f.error << '\n';
      }
    }
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// lts-demo

std::vector<double> default_epsilon_grid() {
  std::vector<double> grid(10);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::pow(10.0, -3.0 + 7.0 * static_cast<double>(i) / 9.0);
  }
  return grid;
}

LtsDemoData make_lts_demo_data(const LtsDemoOptions& options) {
  detail::require(options.outlier_fraction >= 0.0 && options.outlier_fraction < 1.0,
                  "lts-demo: outlier fraction must lie in [0, 1)");
  detail::require(options.k_fraction >= 0.0 && options.k_fraction < 1.0,
                  "lts-demo: k fraction must lie in [0, 1)");
  detail::require(options.n_train >= 2 && options.n_test >= 2, "lts-demo: too few samples");

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> truth(options.dim + 1);
  for (double& v : truth) v = normal(rng);

  auto sample = [&](std::size_t n) {
    Dataset data;
    data.features.resize(n);
    data.targets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& x = data.features[i];
      x.resize(options.dim + 1);
      for (std::size_t j = 0; j < options.dim; ++j) x[j] = normal(rng);
      x[options.dim] = 1.0;
      data.targets[i] = std::inner_product(x.begin(), x.end(), truth.begin(), 0.0) + 0.5 * normal(rng);
    }
    return data;
  };
  LtsDemoData out{sample(options.n_train), sample(options.n_test)};

  const auto& y = out.train.targets;
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  const double std_y = std::sqrt(var / static_cast<double>(y.size()));

  const auto num_outliers =
      static_cast<std::size_t>(std::round(options.outlier_fraction * static_cast<double>(y.size())));
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  std::normal_distribution<double> noise(0.0, 5.0 * std_y);
  for (std::size_t i = 0; i < num_outliers; ++i) out.train.targets[idx[i]] += noise(rng);
  return out;
}

std::vector<LtsDemoRow> run_lts_demo(const LtsDemoOptions& options) {
  if (options.epsilon) {
    detail::require(*options.epsilon > 0.0, "lts-demo: epsilon must be positive");
  }
  const LtsDemoData data = make_lts_demo_data(options);
  const std::size_t n = data.train.targets.size();
  const auto k = static_cast<std::size_t>(std::ceil(options.k_fraction * static_cast<double>(n)));
  detail::require(k < n, "lts-demo: k must be smaller than the training size");

  std::vector<LtsDemoRow> rows;
  const std::vector<double> ls = least_squares_fit(data.train);
  const TrimSpec untrimmed{0, 1.0, Regularizer::kQuadratic};
  rows.push_back({0, untrimmed.epsilon,
                  soft_lts_loss(squared_losses(data.train, ls), untrimmed).value,
                  r2_score(data.test, ls)});

  const std::vector<double> grid =
      options.epsilon ? std::vector<double>{*options.epsilon} : default_epsilon_grid();
  for (double eps : grid) {
    const TrimSpec spec{k, eps, Regularizer::kQuadratic};
    const std::vector<double> w = lts_demo_fit(data.train, spec, options.steps, options.step_size);
    rows.push_back({k, eps, soft_lts_loss(squared_losses(data.train, w), spec).value,
                    r2_score(data.test, w)});
  }
  return rows;
}

int cmd_lts_demo(const LtsDemoOptions& options, std::ostream& out, std::ostream& err) {
  std::vector<LtsDemoRow> rows;
  try {
    rows = run_lts_demo(options);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  out << "k,epsilon,train_objective,test_r2\n";
  for (const LtsDemoRow& r : rows) {
    out << r.k << ',' << format_double(r.epsilon) << ',' << format_double(r.train_objective)
        << ',' << format_double(r.test_r2) << '\n';
  }
  return kExitOk;
}

}  // namespace softsort::cli
