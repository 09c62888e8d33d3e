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

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "json.hpp"
#include "redeploy/planner.hpp"

using namespace redeploy;
using namespace redeploy::planner;
using namespace testing_support;
using core::DemandPath;

namespace {

NetworkConfig two_sites(double k0, double k1, int omega = 1) {
  NetworkConfig n;
  n.num_locations = 2;
  n.names = {"a", "b"};
  n.distance = core::SquareMatrix<double>(2, 0.0);
  n.distance(0, 1) = n.distance(1, 0) = 60;
  n.transfer_bonus = core::SquareMatrix<double>(2, 0.0);
  n.transfer_bonus(0, 1) = n.transfer_bonus(1, 0) = 1.2;
  n.secondment = core::SquareMatrix<int>(2, 1);
  n.secondment(0, 1) = n.secondment(1, 0) = omega;
  n.arc_allowed = core::SquareMatrix<int>(2, 0);
  n.arc_allowed(0, 1) = n.arc_allowed(1, 0) = 1;
  n.capacity = {k0, k1};
  return n;
}

// Week inputs where every training path is the realized demand.
WeekInputs perfect_information(const NetworkConfig& net, const DemandPath& realized, std::uint64_t seed) {
  WeekInputs in;
  in.network = net;
  in.costs = default_costs(net.num_locations);
  in.realized = realized;
  const int T = realized.days(), L = net.num_locations;
  in.plan_training = {T, L, {realized, realized}};
  for (int t = 0; t < T; ++t) {
    DemandPath w = realized.window(t, T - t);
    in.daily.push_back({T - t, L, {w, w}});
  }
  in.rounding_seed = seed;
  return in;
}

// Noisy training paths around the realized demand.
WeekInputs noisy_inputs(const NetworkConfig& net, const DemandPath& realized, std::mt19937_64& rng) {
  WeekInputs in = perfect_information(net, realized, rng());
  std::normal_distribution<double> noise(0.0, 1.5);
  auto jitter = [&](DemandPath p) {
    for (double& v : p.data()) v = std::max(0.0, v + noise(rng));
    return p;
  };
  for (auto& p : in.plan_training.paths) p = jitter(p);
  for (auto& s : in.daily)
    for (auto& p : s.paths) p = jitter(p);
  return in;
}

}  // namespace

TEST_CASE("randomized rounding examples") {
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) CHECK(randomized_round({2.0}, rng)[0] == 2.0);

  double sum = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) sum += randomized_round({1.3}, rng)[0];
  CHECK(sum / n >= 1.29);
  CHECK(sum / n <= 1.31);

  std::map<std::pair<int, int>, int> seen;
  for (int k = 0; k < n; ++k) {
    auto r = randomized_round({0.5, 0.5}, rng);
    ++seen[{static_cast<int>(r[0]), static_cast<int>(r[1])}];
  }
  REQUIRE(seen.size() == 4);
  for (const auto& [outcome, count] : seen) CHECK(std::abs(count / double(n) - 0.25) < 0.01);

  CHECK_THROWS_AS(randomized_round({-0.1}, rng), ArgumentError);
  CHECK_THROWS_AS(randomized_round({std::nan("")}, rng), ArgumentError);
}

TEST_CASE("rounding mode names") {
  CHECK(rounding_mode_from_string("floor") == RoundingMode::Floor);
  CHECK(std::string(to_string(RoundingMode::Randomized)) == "randomized");
  CHECK_THROWS_AS(rounding_mode_from_string("ceil"), ArgumentError);
}

TEST_CASE("property: rounded plans are integral, adjacent to the LP values and within capacity") {
  std::mt19937_64 gen(12);
  for (int rep = 0; rep < 300; ++rep) {
    auto net = random_network(3, 3, 4, gen);
    const int T = 5;
    // Feasible fractional plan: scale a random plan into every window.
    TransferPlan frac(T, 3);
    for (double& v : frac.data()) v = std::uniform_real_distribution<double>(0.0, 2.0)(gen);
    for (int t = 0; t < T; ++t)
      for (int i = 0; i < 3; ++i) frac.at(t, i, i) = 0.0;
    double worst = 1.0;
    for (const auto& v : core::validate_capacity(net, frac, std::vector<double>(3, 0.0), nullptr, -1.0)) {
      if (v.load > 0) worst = std::max(worst, v.load / std::max(net.capacity[v.location], 1e-9));
    }
    for (double& v : frac.data()) v /= worst;
    for (int i = 0; i < 3; ++i)
      if (net.capacity[i] == 0)
        for (int t = 0; t < T; ++t)
          for (int j = 0; j < 3; ++j) frac.at(t, i, j) = 0.0;
    REQUIRE(core::validate_capacity(net, frac, net.capacity, nullptr, 1e-9).empty());

    Rng rng(rep);
    auto r = round_plan(net, frac, T, RoundingMode::Randomized, rng);
    CHECK(core::validate_capacity(net, r, net.capacity, nullptr, 0.0).empty());
    for (std::size_t k = 0; k < r.data().size(); ++k) {
      CHECK(r.data()[k] == std::floor(r.data()[k]));
      CHECK(r.data()[k] >= std::floor(frac.data()[k]) - 1.0);
      CHECK(r.data()[k] <= std::ceil(frac.data()[k]));
    }
    auto fl = round_plan(net, frac, T, RoundingMode::Floor, rng);
    for (std::size_t k = 0; k < fl.data().size(); ++k) CHECK(fl.data()[k] == std::floor(frac.data()[k] + 1e-7));
  }
}

TEST_CASE("repair lowers the rounded-up entry with the smallest fractional part") {
  auto net = two_sites(1, 0, 2);
  auto three = net;
  three.num_locations = 2;
  TransferPlan frac(2, 2);
  frac.at(0, 0, 1) = 0.4;
  frac.at(1, 0, 1) = 0.6;
  // Find a seed where both round up; repair then has to drop day 0 (0.4 < 0.6).
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng probe(s);
    auto raw = randomized_round(frac.data(), probe);
    if (raw[1] == 1.0 && raw[2 * 2 + 1] == 1.0) {
      Rng rng(s);
      auto r = round_plan(net, frac, 2, RoundingMode::Randomized, rng);
      CHECK(r.at(0, 0, 1) == 0.0);
      CHECK(r.at(1, 0, 1) == 1.0);
      return;
    }
  }
  FAIL("no seed rounded both entries up");
}

TEST_CASE("round_action respects nurses already away") {
  auto net = two_sites(3, 3, 2);
  auto z = core::empty_state(net);
  z.at(0, 1, 1) = 2;  // two of three nurses at site 0 are away today
  core::DeploymentAction frac(2);
  frac.at(0, 1) = 1.7;
  for (int s = 0; s < 50; ++s) {
    Rng rng(s);
    auto b = round_action(net, frac, z, RoundingMode::Randomized, rng);
    CHECK(b.at(0, 1) <= 1.0);
  }
}

TEST_CASE("radius candidates") {
  CHECK(candidate_grid(0, 2) == std::vector<double>{0, 5, 10});
  CHECK(candidate_grid(10, 2) == std::vector<double>{0, 5, 10, 15, 20});
  CHECK(candidate_grid(5, 0) == std::vector<double>{5});
  CHECK_THROWS_AS(candidate_grid(0, 2, 0), ArgumentError);

  RobustParamSchedule sch;
  auto flat = select_robust_param(10, sch, [](double) { return 3.0; });
  CHECK(flat.epsilon == 0.0);  // ties go to the smaller radius
  auto vee = select_robust_param(10, sch, [](double e) { return std::abs(e - 15); });
  CHECK(vee.epsilon == 15.0);
  CHECK(vee.costs.size() == 5);
}

TEST_CASE("sub-horizon length") {
  auto net = four_sites();
  CHECK(subhorizon_length(net, 0, 7) == 2);
  CHECK(subhorizon_length(net, 6, 7) == 1);
  CHECK_THROWS_AS(subhorizon_length(net, 7, 7), ArgumentError);
}

TEST_CASE("weekly plan is empty when nothing is short") {
  auto net = four_sites();
  DemandPath d(7, 4);
  for (int t = 0; t < 7; ++t) d.at(t, 0) = 30, d.at(t, 1) = 100, d.at(t, 2) = 90, d.at(t, 3) = 120;
  uncertainty::SamplePathSet s{7, 4, {d, d}};
  PlannerSettings st;
  Rng rng(1);
  auto wp = plan_week(net, default_costs(4), s, 0.0, st, rng);
  for (double v : wp.plan.data()) CHECK(v == 0.0);
  CHECK(wp.lp_objective == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("a surge at a short site is filled by emergency transfers up to availability") {
  // One day left, so the re-solve is deterministic; compare with a grid search.
  for (int surge : {4, 8, 10, 14}) {
    auto net = two_sites(10, 4);
    auto costs = default_costs(2);
    const std::vector<double> observed{2.0, 4.0 + surge};
    TransferPlan nothing(7, 2);
    uncertainty::SamplePathSet fresh{1, 2, {DemandPath(1, 2)}};
    PlannerSettings st;
    Rng rng(3);
    auto dd = deploy_day(net, costs, nothing, core::empty_state(net), 6, observed, fresh, 0.0, st, rng);
    CHECK(dd.subhorizon == 1);
    int best_b = -1;
    double best = 1e300;
    for (int b = 0; b <= 10; ++b) {
      const double c = (1.6 + 1.2) * b + 15.0 * std::max(observed[0] - (10 - b), 0.0) +
                       15.0 * std::max(observed[1] - (4 + b), 0.0);
      if (c < best - 1e-12) best = c, best_b = b;
    }
    CHECK(dd.action.at(0, 1) == best_b);
    CHECK(dd.action.at(0, 1) == std::min(surge, 8));
  }
}

TEST_CASE("quiet week costs nothing") {
  auto net = four_sites();
  auto in = perfect_information(net, DemandPath(7, 4), 9);
  auto out = run_week(in, 0.0, PlannerSettings{});
  CHECK(out.total_cost() == 0.0);
  for (const auto& d : out.days) CHECK(d.deployed.total() == 0.0);
}

TEST_CASE("stationary shortage gives steady transfers equal to the gap") {
  auto net = two_sites(20, 10);
  DemandPath d(7, 2);
  for (int t = 0; t < 7; ++t) d.at(t, 0) = 14, d.at(t, 1) = 13;
  auto out = run_week(perfect_information(net, d, 4), 0.0, PlannerSettings{});
  for (const auto& day : out.days) {
    CHECK(day.deployed.at(0, 1) == 3.0);
    CHECK(day.deployed.at(1, 0) == 0.0);
    CHECK(day.planned.at(0, 1) == 3.0);
    CHECK(day.cost.total() == doctest::Approx(0.0).epsilon(1e-9));
  }
  CHECK(out.total_cost() == doctest::Approx(7 * 3 * 2.2).epsilon(1e-9));
}

TEST_CASE("property: implemented actions are integral and respect capacity every day") {
  std::mt19937_64 gen(77);
  for (int rep = 0; rep < 12; ++rep) {
    auto net = four_sites(rep % 2 == 0);
    net.capacity = {8, 20, 18, 22};
    DemandPath realized = random_demand(7, 4, 4.0, 26.0, gen);
    auto in = noisy_inputs(net, realized, gen);
    const double eps = (rep % 3) * 2.0;
    auto out = run_week(in, eps, PlannerSettings{});
    TransferPlan hist(7, 4);
    for (int t = 0; t < 7; ++t) core::set_day_slice(hist, t, out.days[t].deployed);
    CHECK(core::validate_capacity(net, hist, net.capacity, nullptr, 0.0).empty());
    CHECK(core::validate_capacity(net, out.plan, net.capacity, nullptr, 0.0).empty());
    for (double v : hist.data()) CHECK(v == std::floor(v));
    for (double v : out.plan.data()) CHECK(v == std::floor(v));
    CHECK(std::isfinite(out.total_cost()));
  }
}

TEST_CASE("horizon runs are deterministic, cacheable, and SRO at zero radius is SAA") {
  std::mt19937_64 gen(5);
  auto net = four_sites();
  net.capacity = {8, 20, 18, 22};
  std::vector<WeekInputs> weeks;
  for (int w = 0; w < 3; ++w) weeks.push_back(noisy_inputs(net, random_demand(7, 4, 4.0, 26.0, gen), gen));
  auto provider = [&](int w) { return weeks[w]; };
  PlannerSettings st;

  RobustParamSchedule saa;
  saa.adaptive = false;
  saa.fixed_epsilon = 0.0;
  RobustParamSchedule sro0;
  sro0.upsilon = 0.0;  // grid collapses to {0}
  RobustParamSchedule sro;

  auto a = run_horizon(provider, 3, saa, st);
  auto b = run_horizon(provider, 3, sro0, st);
  REQUIRE(a.weeks.size() == 3);
  for (int w = 0; w < 3; ++w) {
    CHECK(a.weeks[w].plan == b.weeks[w].plan);
    for (int t = 0; t < 7; ++t) CHECK(a.weeks[w].days[t].deployed == b.weeks[w].days[t].deployed);
    CHECK(a.weeks[w].total_cost() == b.weeks[w].total_cost());
  }

  WeekCache cache;
  auto c1 = run_horizon(provider, 3, sro, st, &cache);
  CHECK(c1.weeks[0].epsilon == 0.0);
  CHECK(c1.radius[1].candidates == std::vector<double>{0, 5, 10});
  const auto hits_before = cache.hits();
  auto c2 = run_horizon(provider, 3, sro, st, &cache);
  CHECK(cache.hits() > hits_before);
  for (int w = 0; w < 3; ++w) {
    CHECK(c1.weeks[w].epsilon == c2.weeks[w].epsilon);
    CHECK(c1.weeks[w].total_cost() == c2.weeks[w].total_cost());
  }
  auto c3 = run_horizon(provider, 3, sro, st);
  for (int w = 0; w < 3; ++w) {
    CHECK(c3.weeks[w].plan == c1.weeks[w].plan);
    CHECK(c3.weeks[w].total_cost() == c1.weeks[w].total_cost());
  }
  // The chosen radius is the cheapest retrospective candidate.
  for (int w = 1; w < 3; ++w) {
    const auto& rc = c1.radius[w];
    const auto it = std::min_element(rc.costs.begin(), rc.costs.end());
    CHECK(rc.epsilon == rc.candidates[it - rc.costs.begin()]);
  }

  std::ostringstream audit;
  write_audit_trail(audit, c1, net, "t");
  std::istringstream lines(audit.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("week"));
    CHECK(j["run"] == "t");
    ++n;
  }
  CHECK(n >= 3 * 7 * 5);
}

TEST_CASE("coordination fee applies only off the hub") {
  auto fc = four_sites(true), hs = four_sites(false);
  CHECK(needs_coordination(fc));
  CHECK_FALSE(needs_coordination(hs));
  auto in = perfect_information(fc, DemandPath(7, 4), 1);
  in.costs.coordination_cost = 12.5;
  CHECK(run_week(in, 0.0, PlannerSettings{}).coordination_cost == 12.5);
  in.network = hs;
  CHECK(run_week(in, 0.0, PlannerSettings{}).coordination_cost == 0.0);
}
