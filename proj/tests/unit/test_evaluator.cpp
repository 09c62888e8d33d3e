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
#include <sstream>

#include "../support.hpp"
#include "redeploy/evaluator.hpp"

using namespace redeploy;
using namespace redeploy::eval;
using namespace testing_support;

namespace {

planner::WeekOutcome one_transfer_week(const core::NetworkConfig& net) {
  planner::WeekOutcome w;
  planner::DayRecord d;
  d.planned = core::DeploymentAction(4);
  d.planned.at(kWest, kCentral) = 1;
  d.deployed = d.planned;
  d.planned_cost = 1.0 * 1 + 1.20;  // p * mu + tau, by hand
  w.days.push_back(d);
  (void)net;
  return w;
}

CellSummary cell(std::string method, std::string network, std::string secondment, double cost) {
  CellSummary c{std::move(method), std::move(network), std::move(secondment), {}};
  WeeklyMetrics m;
  m.shortage = cost;
  c.weekly.push_back(m);
  return c;
}

std::optional<double> find(const Comparison& c, const std::string& metric, const std::string& net,
                           const std::string& sec, const std::string& method) {
  for (const auto& r : c.rows)
    if (r.metric == metric && r.network == net && r.secondment == sec && r.method == method) return r.value;
  FAIL("row not found");
  return std::nullopt;
}

}  // namespace

TEST_CASE("weekly cost examples") {
  auto net = four_sites();
  planner::Trajectory zero;
  zero.weeks.resize(1);
  zero.weeks[0].days.resize(7);
  for (auto& d : zero.weeks[0].days) d.deployed = core::DeploymentAction(4);
  CHECK(weekly_cost({{&zero}}, 0, net).cost() == 0.0);

  planner::Trajectory one;
  one.weeks.push_back(one_transfer_week(net));
  auto m = weekly_cost({{&one}}, 0, net);
  CHECK(m.cost() == doctest::Approx(2.20));
  CHECK(m.transfers == 1.0);
  CHECK(m.miles == 62.0);

  // Mean over (m, h).
  auto both = weekly_cost({{&zero, &one}}, 0, net);
  CHECK(both.cost() == doctest::Approx(1.10));

  try {
    weekly_cost({{&one, nullptr}, {nullptr, &one}}, 0, net);
    FAIL("expected an error");
  } catch (const ArgumentError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("m=0, h=1") != std::string::npos);
    CHECK(msg.find("m=1, h=0") != std::string::npos);
  }
}

TEST_CASE("transfers and miles") {
  auto net = four_sites();
  planner::WeekOutcome w;
  w.days.resize(2);
  for (auto& d : w.days) d.deployed = core::DeploymentAction(4);
  CHECK(count_transfers_and_miles(w, net).transfers == 0.0);
  w.days[1].deployed.at(kWest, kCentral) = 2;
  auto s = count_transfers_and_miles(w, net);
  CHECK(s.transfers == 2.0);
  CHECK(s.miles == 124.0);

  // Hub routing: West to South goes through Central, two legs.
  w.days[0].deployed.at(kWest, kCentral) = 1;
  w.days[0].deployed.at(kCentral, kSouth) = 1;
  auto two = count_transfers_and_miles(w, net);
  CHECK(two.miles == doctest::Approx(124.0 + 62.0 + net.distance(kCentral, kSouth)));
}

TEST_CASE("property: components add up to the cost") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, 20.0);
  for (int k = 0; k < 200; ++k) {
    WeeklyMetrics m;
    m.planned = u(rng), m.emergency = u(rng), m.cancellation = -std::abs(u(rng));
    m.shortage = u(rng), m.coordination = u(rng);
    double sum = 0.0;
    for (const auto& n : {"planned", "emergency", "cancellation", "shortage", "coordination"}) sum += metric_value(m, n);
    CHECK(m.cost() == doctest::Approx(sum));
    CHECK(metric_value(m, "cost") == doctest::Approx(sum));
  }
}

TEST_CASE("scenario comparison") {
  CHECK(percent_delta(600.0, 900.0).value() == doctest::Approx(-33.333).epsilon(1e-4));
  CHECK(percent_delta(5.0, 5.0).value() == 0.0);
  CHECK_FALSE(percent_delta(std::nullopt, 5.0).has_value());
  CHECK_FALSE(percent_delta(1.0, 0.0).has_value());

  std::vector<CellSummary> cells{cell("saa", "fully_connected", "baseline", 600),
                                 cell("saa", "hub_and_spoke", "baseline", 900),
                                 cell("sro", "fully_connected", "baseline", 570)};
  auto cmp = compare_scenarios(cells);
  CHECK(find(cmp, "cost", "fully_connected", "baseline", "saa").value() == 600.0);
  CHECK_FALSE(find(cmp, "cost", "hub_and_spoke", "baseline", "sro").has_value());
  bool saw = false;
  for (const auto& d : cmp.deltas)
    if (d.metric == "cost" && d.dimension == "network" && d.context == "baseline/saa") {
      saw = true;
      CHECK(d.percent.value() == doctest::Approx(-33.333).epsilon(1e-4));
    }
  CHECK(saw);

  std::ostringstream os;
  write_summary_csv(os, cmp);
  CHECK(os.str().find("cost,hub_and_spoke,baseline,sro,\n") != std::string::npos);
}

TEST_CASE("metrics CSV round trip") {
  std::vector<CellSummary> cells{cell("saa", "fully_connected", "baseline", 0.1 + 0.2),
                                 cell("sro", "fully_connected", "baseline", 1.0 / 3)};
  cells[0].weekly.push_back(cells[1].weekly[0]);
  cells[1].weekly.push_back(cells[0].weekly[0]);
  std::ostringstream os;
  write_metrics_csv(os, cells);
  std::istringstream is(os.str());
  auto back = read_metrics_csv(is);
  REQUIRE(back.size() == 2);
  for (int c = 0; c < 2; ++c) {
    CHECK(back[c].method == cells[c].method);
    REQUIRE(back[c].weekly.size() == 2);
    for (int w = 0; w < 2; ++w) CHECK(back[c].weekly[w].shortage == cells[c].weekly[w].shortage);
  }
  std::ostringstream again;
  write_metrics_csv(again, back);
  CHECK(again.str() == os.str());
}
