// Copyright 2026 The redeploy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "../lp_oracle.hpp"
#include "redeploy/ldr.hpp"
#include "redeploy/linear_program.hpp"

using namespace redeploy;
using namespace redeploy::lp;
using namespace testing_support;

TEST_CASE("solver basics") {
  SUBCASE("min x with x >= 3") {
    LinearProgram lp;
    const int x = lp.add_variable("x", -kInf, kInf, 1.0);
    lp.add_constraint("lb", {{x, 1.0}}, Sense::GreaterEqual, 3.0);
    auto r = solve(lp);
    REQUIRE(r.report.status == SolveStatus::Optimal);
    CHECK(r.x[x] == doctest::Approx(3.0));
    CHECK(r.report.objective == doctest::Approx(3.0));
  }
  SUBCASE("empty objective") {
    LinearProgram lp;
    const int x = lp.add_variable("x", 0.0, 5.0);
    lp.add_constraint("c", {{x, 1.0}}, Sense::LessEqual, 2.0);
    auto r = solve(lp);
    CHECK(r.report.status == SolveStatus::Optimal);
    CHECK(r.report.objective == 0.0);
  }
  SUBCASE("infeasible and unbounded are reported") {
    LinearProgram inf;
    const int x = inf.add_variable("x", 0.0, kInf, 1.0);
    inf.add_constraint("c", {{x, 1.0}}, Sense::LessEqual, -1.0);
    CHECK(solve(inf).report.status == SolveStatus::Infeasible);
    LinearProgram unb;
    unb.add_variable("y", -kInf, kInf, 1.0);
    const auto st = solve(unb).report.status;
    CHECK((st == SolveStatus::Unbounded || st == SolveStatus::Infeasible));
    CHECK(st != SolveStatus::Optimal);
  }
  SUBCASE("validation and export") {
    LinearProgram lp;
    const int x = lp.add_variable("x_1", 0.0, 1.0, 2.0);
    lp.add_constraint("row", {{x, 1.0}}, Sense::LessEqual, 1.0);
    CHECK_NOTHROW(lp.validate());
    CHECK(lp.find_variable("x_1").value() == x);
    CHECK_FALSE(lp.find_variable("nope").has_value());
    const auto text = lp.to_lp_format();
    CHECK(text.find("x_1") != std::string::npos);
    CHECK(text.find("row") != std::string::npos);
    LinearProgram bad;
    bad.add_variable("z", 2.0, 1.0);
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
  }
}

TEST_CASE("one-day deterministic problem matches an integer grid search") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    LdrProblem pb = random_problem(2, 1, 1, 0.0, rng);
    for (double& v : pb.boxes[0].lower.data()) v = std::round(v);
    pb.boxes[0].upper = pb.boxes[0].lower;
    auto res = solve_ldr(pb);
    const auto& n = pb.network;
    const auto& xi = pb.boxes[0].lower;
    // One day: mu = 1, so only how many nurses move matters.
    double best = 1e300;
    for (int f = 0; f <= static_cast<int>(n.capacity[0]); ++f) {
      for (int g = 0; g <= static_cast<int>(n.capacity[1]); ++g) {
        const double cost = (1.0 + n.transfer_bonus(0, 1)) * f + (1.0 + n.transfer_bonus(1, 0)) * g +
                            15.0 * std::max(xi.at(0, 0) - (n.capacity[0] - f + g), 0.0) +
                            15.0 * std::max(xi.at(0, 1) - (n.capacity[1] - g + f), 0.0);
        best = std::min(best, cost);
      }
    }
    CHECK(res.solution.objective_value == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("no shortage means no transfers") {
  std::mt19937_64 rng(8);
  LdrProblem pb = random_problem(3, 3, 2, 0.0, rng);
  for (double& k : pb.network.capacity) k = 10;
  auto res = solve_ldr(pb);
  CHECK(res.solution.objective_value == doctest::Approx(0.0).epsilon(1e-9));
  for (double v : res.solution.a.data()) CHECK(v == doctest::Approx(0.0));
  for (const auto& box : pb.boxes)
    for (int t = 0; t < 3; ++t) {
      auto b = evaluate_ldr(res.solution, box.lower, t);
      for (double v : b.data()) CHECK(v == doctest::Approx(0.0).epsilon(1e-7));
    }
}

TEST_CASE("evaluate_ldr is the affine rule") {
  LdrSolution s;
  s.days = 1;
  s.num_locations = 2;
  s.arcs = {{0, 1}, {1, 0}};
  AffineRule r0;
  r0.intercept = 1.0;
  r0.coef = {0.5, 0.0};
  AffineRule r1;
  r1.intercept = 2.0;
  r1.coef = {0.0, 0.0};
  s.b = {r0, r1};
  core::DemandPath z(1, 2);
  z.at(0, 0) = 4.0;
  z.at(0, 1) = 9.0;
  auto b = evaluate_ldr(s, z, 0);
  CHECK(b.at(0, 1) == doctest::Approx(3.0));
  CHECK(b.at(1, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(evaluate_ldr(s, z, 1), ArgumentError);
}

TEST_CASE("solutions are non-anticipative, duals are nonnegative, objective re-evaluates") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    LdrProblem pb = random_problem(3, 3, 2, 1.5, rng);
    LdrModel model = build_sro_ldr_lp(pb);
    auto r = solve(model.lp);
    REQUIRE(r.report.status == SolveStatus::Optimal);
    auto sol = model.extract(r.x, true);
    CHECK(sol.objective_value == doctest::Approx(r.report.objective).epsilon(1e-6));
    CHECK(model.lp.max_violation(r.x) <= 1e-7);
    const int L = 3;
    auto future_zero = [&](const AffineRule& rule, int t) {
      for (std::size_t d = static_cast<std::size_t>(t + 1) * L; d < rule.coef.size(); ++d)
        if (rule.coef[d] != 0.0) return false;
      return true;
    };
    for (int t = 0; t < 3; ++t) {
      for (int a = 0; a < static_cast<int>(sol.arcs.size()); ++a) {
        CHECK(future_zero(sol.b_rule(t, a), t));
        CHECK(future_zero(sol.x_rule(t, a), t));
      }
      for (int i = 0; i < L; ++i) CHECK(future_zero(sol.y_rule(t, i), t));
    }
    REQUIRE_FALSE(sol.duals.empty());
    for (const auto& blk : sol.duals) {
      for (double v : blk.nu) CHECK(v >= -1e-9);
      for (double v : blk.psi) CHECK(v >= -1e-9);
    }
  }
}

TEST_CASE("dualization agrees with the corner oracle") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 12; ++rep) {
    const int T = 1 + rep % 2;
    const int N = 1 + rep % 3;
    const double eps = (rep % 4) * 0.75;
    LdrProblem pb = random_problem(2, T, N, eps, rng, rep % 5 != 0);
    auto res = solve_ldr(pb);
    auto o = robust_oracle(res.solution, pb);
    CHECK(o.objective == doctest::Approx(res.solution.objective_value).epsilon(1e-6));
    CHECK(o.max_violation <= 1e-6);
    CHECK(worst_case_objective_oracle(res.solution, pb) == doctest::Approx(o.objective).epsilon(1e-9));
  }
}

TEST_CASE("mid-week re-solve with a fixed plan and a running secondment") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 6; ++rep) {
    LdrProblem pb = random_problem(3, 2, 2, 1.0, rng);
    pb.horizon = 5;
    pb.first_day = 2;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) pb.network.secondment(i, j) = 2;
    for (double& k : pb.network.capacity) k = std::max(k, 2.0);
    pb.state = core::empty_state(pb.network);
    pb.state.at(0, 1, 1) = 1;  // one nurse from site 0 still away on the first modelled day
    core::TransferPlan plan(2, 3);
    plan.at(0, 1, 2) = 1;
    pb.fixed_plan = plan;
    auto res = solve_ldr(pb);
    CHECK(res.solution.a == plan);
    auto o = robust_oracle(res.solution, pb);
    CHECK(o.objective == doctest::Approx(res.solution.objective_value).epsilon(1e-6));
    CHECK(o.max_violation <= 1e-6);
  }
}

TEST_CASE("robust objective grows with the radius and SAA is the zero-radius case") {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 4; ++rep) {
    LdrProblem pb = random_problem(3, 2, 3, 0.0, rng);
    uncertainty::SamplePathSet s{2, 3, {}};
    for (const auto& b : pb.boxes) s.paths.push_back(b.lower);
    double prev = -1e300;
    for (double eps : {0.0, 1.0, 2.0, 5.0}) {
      pb.boxes = uncertainty::build_uncertainty_sets(s, eps);
      const double v = solve_ldr(pb).solution.objective_value;
      CHECK(v >= prev - 1e-7);
      prev = v;
      if (eps == 0.0) {
        auto saa = solve(build_saa_scenario_lp(pb));
        REQUIRE(saa.report.status == SolveStatus::Optimal);
        CHECK(saa.report.objective == doctest::Approx(v).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("rules are feasible on the training samples at zero radius") {
  std::mt19937_64 rng(61);
  LdrProblem pb = random_problem(3, 3, 2, 0.0, rng);
  auto res = solve_ldr(pb);
  for (const auto& box : pb.boxes) {
    core::TransferPlan hist(3, 3);
    for (int t = 0; t < 3; ++t) core::set_day_slice(hist, t, evaluate_ldr(res.solution, box.lower, t));
    CHECK(core::validate_capacity(pb.network, hist, pb.network.capacity, nullptr, 1e-6).empty());
  }
}

TEST_CASE("solves are deterministic") {
  std::mt19937_64 rng(71);
  LdrProblem pb = random_problem(3, 3, 2, 2.0, rng);
  auto m = build_sro_ldr_lp(pb);
  auto r1 = solve(m.lp);
  auto r2 = solve(m.lp);
  CHECK(r1.x == r2.x);
  SolverOptions ipm;
  ipm.method = SolverMethod::Ipm;
  auto r3 = solve(m.lp, ipm);
  REQUIRE(r3.report.status == SolveStatus::Optimal);
  CHECK(r3.report.objective == doctest::Approx(r1.report.objective).epsilon(1e-6));
}

TEST_CASE("bad shapes are build errors") {
  std::mt19937_64 rng(3);
  LdrProblem pb = random_problem(2, 2, 1, 0.0, rng);
  LdrProblem no_boxes = pb;
  no_boxes.boxes.clear();
  CHECK_THROWS_AS(build_sro_ldr_lp(no_boxes), BuildError);
  LdrProblem past_end = pb;
  past_end.first_day = 1;
  CHECK_THROWS_AS(build_sro_ldr_lp(past_end), BuildError);
  LdrProblem bad_plan = pb;
  bad_plan.fixed_plan = core::TransferPlan(3, 2);
  CHECK_THROWS_AS(build_sro_ldr_lp(bad_plan), BuildError);
}
