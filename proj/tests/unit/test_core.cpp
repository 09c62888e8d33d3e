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

#include <numeric>
#include <random>

#include "../support.hpp"
#include "redeploy/core.hpp"

using namespace redeploy;
using namespace redeploy::core;
using namespace testing_support;

namespace {

DeploymentAction one(int L, int i, int j, double v) {
  DeploymentAction a(L);
  a.at(i, j) = v;
  return a;
}

}  // namespace

TEST_CASE("secondment length truncates at the horizon") {
  const auto net = four_sites();
  CHECK(secondment_length(net, kWest, kEast, 0, 7) == 2);
  CHECK(secondment_length(net, kWest, kCentral, 6, 7) == 1);
  auto n3 = net;
  n3.secondment(kWest, kEast) = 3;
  CHECK(secondment_length(n3, kWest, kEast, 5, 7) == 2);
  CHECK(secondment_length(n3, kWest, kEast, 6, 7) == 1);
}

TEST_CASE("secondment length rejects bad arcs and days") {
  const auto hs = four_sites(false);
  CHECK_THROWS_AS(secondment_length(hs, kWest, kEast, 0, 7), ArgumentError);
  CHECK_THROWS_AS(secondment_length(hs, kWest, kWest, 0, 7), ArgumentError);
  CHECK_THROWS_AS(secondment_length(hs, kWest, kCentral, 7, 7), ArgumentError);
  CHECK_THROWS_AS(secondment_length(hs, kWest, kCentral, -1, 7), ArgumentError);
}

TEST_CASE("planned cost examples") {
  const auto net = four_sites();
  const auto c = default_costs(4);
  CHECK(planned_cost(net, c, one(4, kWest, kCentral, 1), 0, 7) == doctest::Approx(2.20).epsilon(1e-12));
  CHECK(planned_cost(net, c, DeploymentAction(4), 3, 7) == 0.0);
  // mu truncates to one on the last day.
  CHECK(planned_cost(net, c, one(4, kWest, kEast, 1), 6, 7) == doctest::Approx(2.46).epsilon(1e-12));
  CHECK(planned_cost(net, c, one(4, kWest, kEast, 1), 0, 7) == doctest::Approx(3.46).epsilon(1e-12));
}

TEST_CASE("planned cost refuses transfers on a disallowed arc") {
  const auto hs = four_sites(false);
  CHECK_THROWS_AS(planned_cost(hs, default_costs(4), one(4, kWest, kEast, 1), 0, 7), ArgumentError);
}

TEST_CASE("deployment cost examples") {
  const auto net = four_sites();
  const auto c = default_costs(4);
  const std::vector<double> no_short(4, -1.0);

  SUBCASE("following the plan costs nothing") {
    auto a = one(4, kWest, kCentral, 3);
    auto d = deployment_cost(net, c, a, a, no_short, 0, 7);
    CHECK(d.total() == 0.0);
  }
  SUBCASE("one emergency nurse") {
    auto d = deployment_cost(net, c, DeploymentAction(4), one(4, kWest, kCentral, 1), no_short, 0, 7);
    CHECK(d.emergency == doctest::Approx(2.80).epsilon(1e-12));
    CHECK(d.cancellation == 0.0);
    CHECK(d.shortage == 0.0);
  }
  SUBCASE("cancelling one planned nurse") {
    auto a = one(4, kWest, kCentral, 1);
    auto d = deployment_cost(net, c, a, DeploymentAction(4), no_short, 0, 7);
    CHECK(d.cancellation == doctest::Approx(-2.09).epsilon(1e-12));
    const double net_cost = planned_cost(net, c, a, 0, 7) + d.cancellation;
    CHECK(net_cost == doctest::Approx(0.05 * 2.20).epsilon(1e-12));
    CHECK(d.net_cancellation_fee() == doctest::Approx(0.11).epsilon(1e-12));
  }
  SUBCASE("shortage is charged on positive imbalance only") {
    auto d = deployment_cost(net, c, DeploymentAction(4), DeploymentAction(4), {2.0, -3.0, 0.5, 0.0}, 0, 7);
    CHECK(d.shortage == doctest::Approx(15.0 * 2.5));
  }
}

TEST_CASE("imbalance examples") {
  NetworkConfig n;
  n.num_locations = 2;
  n.names = {"a", "b"};
  n.distance = SquareMatrix<double>(2, 0.0);
  n.distance(0, 1) = n.distance(1, 0) = 10;
  n.transfer_bonus = SquareMatrix<double>(2, 0.0);
  n.secondment = SquareMatrix<int>(2, 1);
  n.arc_allowed = SquareMatrix<int>(2, 0);
  n.arc_allowed(0, 1) = n.arc_allowed(1, 0) = 1;
  n.capacity = {5, 5};
  auto z = empty_state(n);
  auto d0 = imbalance(n, z, DeploymentAction(2), {7, 2});
  CHECK(d0 == std::vector<double>{2, -3});
  auto d1 = imbalance(n, z, one(2, 1, 0, 2), {7, 2});
  CHECK(d1 == std::vector<double>{0, -1});
}

TEST_CASE("advance state examples") {
  auto net = four_sites();
  SUBCASE("one-day arcs leave no carry-over") {
    NetworkConfig n = net;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) n.secondment(i, j) = 1;
    auto z = empty_state(n);
    auto z1 = advance_state(n, z, one(4, kWest, kEast, 4), 0, 7);
    CHECK(z1.empty());
  }
  SUBCASE("two-day arc") {
    auto z = empty_state(net);
    auto z1 = advance_state(net, z, one(4, kWest, kEast, 3), 0, 7);
    CHECK(z1.at(kWest, kEast, 1) == 3.0);
    CHECK(z1.committed_out(kWest, 0) == 3.0);
    CHECK(z1.committed_in(kEast, 0) == 3.0);
    auto z2 = advance_state(net, z1, DeploymentAction(4), 1, 7);
    CHECK(z2.empty());
  }
  SUBCASE("a secondment started on the last day does not carry over") {
    auto z = advance_state(net, empty_state(net), one(4, kWest, kEast, 2), 6, 7);
    CHECK(z.empty());
  }
}

TEST_CASE("validate capacity examples") {
  auto net = four_sites();
  net.capacity = {1, 1, 1, 1};
  TransferPlan empty(7, 4);
  CHECK(validate_capacity(net, empty, net.capacity).empty());

  TransferPlan p(7, 4);
  p.at(0, kWest, kEast) = 1;  // two-day arc
  p.at(1, kWest, kEast) = 1;
  auto v = validate_capacity(net, p, net.capacity);
  REQUIRE(v.size() == 1);
  CHECK(v[0].location == kWest);
  CHECK(v[0].day == 1);
  CHECK(v[0].load == 2.0);

  TransferPlan q(7, 4);
  for (int t = 0; t < 7; ++t) q.at(t, kWest, kCentral) = 1;  // one-day arc, exactly at capacity
  CHECK(validate_capacity(net, q, net.capacity).empty());
}

TEST_CASE("network and cost validation") {
  auto net = four_sites();
  CHECK_NOTHROW(net.validate());
  auto bad = net;
  bad.distance(0, 1) = 5;  // no longer symmetric
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = net;
  bad.arc_allowed(2, 2) = 1;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = net;
  bad.secondment(0, 1) = 0;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);
  bad = net;
  bad.capacity[3] = -1;
  CHECK_THROWS_AS(bad.validate(), ArgumentError);

  auto c = default_costs(4);
  CHECK_NOTHROW(c.validate(4));
  c.cancellation_pct = 1.5;
  CHECK_THROWS_AS(c.validate(4), ArgumentError);
  c = default_costs(4);
  c.emergency_multiplier = {0.9};
  CHECK_THROWS_AS(c.validate(4), ArgumentError);
  c = default_costs(4);
  c.premium = 0;
  CHECK_THROWS_AS(c.validate(4), ArgumentError);
}

// ---- properties on random feasible trajectories ----------------------------

namespace {

// Random action that respects the nurses still available at each origin.
DeploymentAction random_feasible(const NetworkConfig& n, const SecondmentState& z, std::mt19937_64& rng) {
  const int L = n.num_locations;
  DeploymentAction b(L);
  for (int i = 0; i < L; ++i) {
    int avail = static_cast<int>(n.capacity[i] - z.committed_out(i, 0));
    for (int j = 0; j < L; ++j) {
      if (i == j || !n.allowed(i, j) || avail <= 0) continue;
      const int k = std::uniform_int_distribution<int>(0, avail)(rng);
      b.at(i, j) = k;
      avail -= k;
    }
  }
  return b;
}

}  // namespace

TEST_CASE("property: both imbalance forms, conservation and terminal emptiness") {
  std::mt19937_64 rng(20260101);
  for (int rep = 0; rep < 1000; ++rep) {
    const int L = std::uniform_int_distribution<int>(2, 4)(rng);
    const int T = std::uniform_int_distribution<int>(1, 7)(rng);
    auto n = random_network(L, std::min(T, 3), 6, rng);
    const double total_staff = std::accumulate(n.capacity.begin(), n.capacity.end(), 0.0);
    auto z = empty_state(n);
    TransferPlan hist(T, L);
    for (int t = 0; t < T; ++t) {
      auto b = random_feasible(n, z, rng);
      set_day_slice(hist, t, b);
      auto demand = random_demand(1, L, 0.0, 10.0, rng).day(0);

      // Oracle: window sums written out from the raw history.
      std::vector<double> oracle(L);
      for (int i = 0; i < L; ++i) {
        double staff = n.capacity[i];
        for (int j = 0; j < L; ++j) {
          if (i == j) continue;
          for (int k = 0; k <= t; ++k) {
            if (t < k + mu_of(n, i, j, k, T)) staff -= hist.at(k, i, j);
            if (t < k + mu_of(n, j, i, k, T)) staff += hist.at(k, j, i);
          }
        }
        oracle[i] = demand[i] - staff;
      }
      const auto by_state = imbalance(n, z, b, demand);
      const auto by_history = imbalance_from_history(n, hist, t, T, demand);
      for (int i = 0; i < L; ++i) {
        REQUIRE(by_state[i] == oracle[i]);
        REQUIRE(by_history[i] == oracle[i]);
      }
      const auto staff = on_site_staff(n, z, b);
      REQUIRE(std::accumulate(staff.begin(), staff.end(), 0.0) == total_staff);
      z = advance_state(n, z, b, t, T);
    }
    REQUIRE(z.empty());
    REQUIRE(validate_capacity(n, hist, n.capacity).empty());
  }
}

TEST_CASE("property: cancelling a plan nets out to the fee") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    auto n = random_network(4, 3, 5, rng);
    auto c = default_costs(4);
    c.cancellation_pct = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    DeploymentAction a(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) a.at(i, j) = std::uniform_int_distribution<int>(0, 3)(rng);
    const int t = std::uniform_int_distribution<int>(0, 6)(rng);
    const double planned = planned_cost(n, c, a, t, 7);
    const auto d = deployment_cost(n, c, a, DeploymentAction(4), std::vector<double>(4, 0.0), t, 7);
    CHECK(planned + d.cancellation == doctest::Approx(c.cancellation_pct * planned).epsilon(1e-12));
    CHECK(d.emergency >= 0.0);
    CHECK(d.shortage >= 0.0);
    CHECK(std::isfinite(d.total()));
  }
}
