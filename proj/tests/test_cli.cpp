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

#include <algorithm>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "io.hpp"

using namespace softsort;
using namespace softsort::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run apply(const ApplyOptions& options, const std::string& input) {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code = cmd_apply(options, in, out, err);
  return {code, out.str(), err.str()};
}

ApplyOptions rank_options(double epsilon = 1.0) {
  ApplyOptions o;
  o.kind = ApplyKind::kRank;
  o.epsilon = epsilon;
  return o;
}

}  // namespace

TEST_CASE("row io") {
  CHECK(parse_row(" 1.5, -2 ,+3e2", RowFormat::kCsv, 1) == std::vector<double>{1.5, -2, 300});
  CHECK(parse_row("[1, 2.5e-1]", RowFormat::kJsonLines, 1) == std::vector<double>{1, 0.25});
  CHECK(parse_row("   ", RowFormat::kCsv, 1).empty());
  CHECK_THROWS_AS(parse_row("1,,2", RowFormat::kCsv, 4), ParseError);
  CHECK_THROWS_AS(parse_row("1,abc", RowFormat::kCsv, 4), ParseError);
  CHECK_THROWS_AS(parse_row("1,nan", RowFormat::kCsv, 4), ParseError);
  CHECK_THROWS_AS(parse_row("[1,\"a\"]", RowFormat::kJsonLines, 4), ParseError);
  CHECK_THROWS_AS(parse_row("{\"a\":1}", RowFormat::kJsonLines, 4), ParseError);
  try {
    parse_row("x", RowFormat::kCsv, 7);
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(3.0) == "3");
  for (double x : {0.1 + 0.2, 1.0 / 3.0, -1e-300, 6.02214076e23}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("sort and rank commands") {
  SUBCASE("csv and json rank") {
    CHECK(apply(rank_options(), "2.9,0.1,1.2\n").out == "1,3,2\n");
    ApplyOptions json = rank_options();
    json.format = RowFormat::kJsonLines;
    CHECK(apply(json, "[2.9,0.1,1.2]\n").out == "[1,3,2]\n");
  }
  SUBCASE("single value and empty input") {
    CHECK(apply(rank_options(), "1.0\n").out == "1\n");
    const Run r = apply(rank_options(), "");
    CHECK(r.code == kExitOk);
    CHECK(r.out.empty());
  }
  SUBCASE("blank lines are preserved") {
    CHECK(apply(rank_options(), "2.9,0.1,1.2\n\n5\n").out == "1,3,2\n\n1\n");
  }
  SUBCASE("hard rank is a permutation") {
    ApplyOptions o = rank_options();
    o.hard = true;
    CHECK(apply(o, "0.3,0.3,-1,4,2\n").out == "3,4,5,1,2\n");
    o.kind = ApplyKind::kSort;
    o.direction = "asc";
    CHECK(apply(o, "0.3,0.3,-1,4,2\n").out == "-1,0.3,0.3,2,4\n");
  }
  SUBCASE("soft sort and kl-direct") {
    ApplyOptions o = rank_options(1e-3);
    o.kind = ApplyKind::kSort;
    o.regularizer = "e";
    CHECK(apply(o, "1,3,2\n").out == "3,2,1\n");
    o.kind = ApplyKind::kRank;
    o.regularizer = "kl-direct";
    const Run r = apply(o, "1,3,2\n");
    CHECK(r.code == kExitOk);
    std::istringstream in(r.out);
    const auto rows = read_rows(in, RowFormat::kCsv);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == doctest::Approx(3.0));
    CHECK(rows[0][1] == doctest::Approx(1.0));
  }
  SUBCASE("parse errors report the line") {
    const Run r = apply(rank_options(), "1,2\n3,x\n");
    CHECK(r.code == kExitData);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK(r.out.empty());
  }
  SUBCASE("usage errors") {
    ApplyOptions o = rank_options();
    o.regularizer = "z";
    CHECK(apply(o, "1\n").code == kExitUsage);
    o = rank_options(0.0);
    CHECK(apply(o, "1\n").code == kExitUsage);
    o = rank_options();
    o.direction = "up";
    CHECK(apply(o, "1\n").code == kExitUsage);
    o = rank_options();
    o.kind = ApplyKind::kSort;
    o.regularizer = "kl-direct";
    CHECK(apply(o, "1\n").code == kExitUsage);
  }
}

TEST_CASE("bench command") {
  BenchOptions o;
  o.sizes = {10, 20};
  o.batch = 4;
  o.reps = 3;
  const auto records = run_bench(o);
  CHECK(records.size() == 8);
  for (const auto& r : records) {
    CHECK(r.reps == 3);
    CHECK(r.mean_ms >= 0.0);
    CHECK(r.std_ms >= 0.0);
  }
  std::ostringstream out;
  std::ostringstream err;
  CHECK(cmd_bench(o, out, err) == kExitOk);
  const std::string csv = out.str();
  CHECK(csv.rfind("n,batch,operator,regularizer,mean_ms,std_ms,reps\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);

  o.reps = 2;
  CHECK_THROWS_AS(run_bench(o), InvalidArgument);
  CHECK(cmd_bench(o, out, err) == kExitUsage);
  o.reps = 3;
  o.sizes = {0};
  CHECK(cmd_bench(o, out, err) == kExitUsage);
}

TEST_CASE("gradcheck command") {
  GradcheckOptions o;
  o.trials = 10;
  const GradcheckReport report = run_gradcheck(o);
  CHECK(report.ok());
  CHECK(report.cases.size() == 9);
  for (const auto& [name, c] : report.cases) {
    CHECK(c.instances == 10);
    CHECK(c.max_rel_error <= 1e-5);
  }

  std::ostringstream out;
  std::ostringstream err;
  o.trials = 0;
  CHECK(cmd_gradcheck(o, out, err) == kExitOk);

  o.trials = 5;
  o.inject_sign_flip = true;
  CHECK_FALSE(run_gradcheck(o).ok());
  CHECK(cmd_gradcheck(o, out, err) == kExitCheckFailed);
}

TEST_CASE("lts demo command") {
  LtsDemoOptions o;
  o.outlier_fraction = 0.3;
  o.epsilon = 1e-3;
  o.steps = 600;
  const auto rows = run_lts_demo(o);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].k == 0);
  CHECK(rows[1].k == 60);
  CHECK(rows[1].test_r2 > rows[0].test_r2);

  const auto again = run_lts_demo(o);
  CHECK(again[1].test_r2 == rows[1].test_r2);
  CHECK(again[1].train_objective == rows[1].train_objective);

  SUBCASE("clean data: trimming costs little") {
    LtsDemoOptions clean = o;
    clean.outlier_fraction = 0.0;
    clean.epsilon = 1e4;
    const auto r = run_lts_demo(clean);
    CHECK(r[1].test_r2 == doctest::Approx(r[0].test_r2).epsilon(1e-2));
  }
  SUBCASE("default grid") {
    const auto grid = default_epsilon_grid();
    REQUIRE(grid.size() == 10);
    CHECK(grid.front() == doctest::Approx(1e-3));
    CHECK(grid.back() == doctest::Approx(1e4));
    LtsDemoOptions sweep = o;
    sweep.epsilon.reset();
    sweep.steps = 50;
    std::ostringstream out;
    std::ostringstream err;
    CHECK(cmd_lts_demo(sweep, out, err) == kExitOk);
    const std::string csv = out.str();
    CHECK(csv.rfind("k,epsilon,train_objective,test_r2\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
  }
  SUBCASE("bad options") {
    std::ostringstream out;
    std::ostringstream err;
    LtsDemoOptions bad = o;
    bad.outlier_fraction = 1.5;
    CHECK(cmd_lts_demo(bad, out, err) == kExitUsage);
    bad = o;
    bad.k_fraction = 1.0;
    CHECK(cmd_lts_demo(bad, out, err) == kExitUsage);
  }
}
