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
#include <numeric>

#include "redeploy/config.hpp"
#include "redeploy/simulator.hpp"

using namespace redeploy;
using namespace redeploy::sim;

namespace {

ArrivalModelParams quiet_params(int L) {
  ArrivalModelParams p;
  p.num_locations = L;
  p.phi.assign(L, std::vector<double>(7, 0.0));
  p.kappa.assign(L, std::vector<double>(7, 0.0));
  for (int i = 0; i < L; ++i)
    for (int y = 0; y < 7; ++y) p.kappa[i][y] = 10.0 + i + y;
  p.scale.assign(L, 1.0);
  for (int i = 0; i < L; ++i) p.scale[i] = 0.5 + 0.25 * i;
  p.noise_scale = 0.0;
  p.spatial_strength = 0.0;
  p.theta = core::SquareMatrix<double>(L, 0.0);
  return p;
}

std::array<std::array<double, kOutcomes>, kUnits> identity_table() {
  std::array<std::array<double, kOutcomes>, kUnits> t{};
  for (int u = 0; u < kUnits; ++u) t[u][u] = 1.0;
  return t;
}

}  // namespace

TEST_CASE("surge shape") {
  CHECK(surge_factor(1, 1, 49, 119, 1.5) == doctest::Approx(1.0));
  CHECK(surge_factor(49, 1, 49, 119, 1.5) == doctest::Approx(1.5));
  CHECK(surge_factor(200, 1, 49, 119, 1.5) == 1.0);
  CHECK(surge_factor(0, 1, 49, 119, 1.5) == 1.0);
  // Square-root ramp: a quarter of the way up gives half the rise.
  CHECK(surge_factor(13, 1, 49, 119, 1.5) == doctest::Approx(1.25));
  CHECK(surge_factor(84, 1, 49, 119, 1.5) == doctest::Approx(1.0 + 0.5 * std::sqrt(0.5)));
}

TEST_CASE("spread weights") {
  core::SquareMatrix<double> d(3, 0.0);
  d(0, 1) = d(1, 0) = 10;
  d(0, 2) = d(2, 0) = 40;
  d(1, 2) = d(2, 1) = 20;
  auto th = spatial_weights(d, 6.5);
  CHECK(th(0, 2) == doctest::Approx(std::exp(-6.5)));
  CHECK(th(0, 2) == doctest::Approx(1.50e-3).epsilon(0.01));
  CHECK(th(0, 1) == doctest::Approx(std::exp(-6.5 * 0.25)));
}

TEST_CASE("without noise, lags or spread the rate is the surged level") {
  auto p = quiet_params(3);
  for (auto mode : {SurgeMode::Multiplicative, SurgeMode::Literal}) {
    p.surge_mode = mode;
    Rng rng(4);
    auto s = generate_arrivals(p, -5, 80, rng);
    for (int day = -5; day < 75; ++day)
      for (int i = 0; i < 3; ++i) {
        const double expect = p.scale[i] * p.surge.at(day) * p.kappa[i][day_of_week(day)];
        CHECK(s.rate(day, i) == doctest::Approx(expect).epsilon(1e-12));
      }
  }
}

TEST_CASE("surge mode names") {
  CHECK(surge_mode_from_string("literal") == SurgeMode::Literal);
  CHECK(std::string(to_string(SurgeMode::Multiplicative)) == "multiplicative");
  CHECK_THROWS_AS(surge_mode_from_string("additive"), ArgumentError);
}

TEST_CASE("baseline arrivals stay bounded through the surge in multiplicative mode") {
  auto cfg = config::default_config();
  auto p = config::build_arrival_params(cfg);
  Rng rng(9);
  auto s = generate_arrivals(p, -20, 160, rng);
  for (int day = -20; day < 140; ++day)
    for (int i = 0; i < p.num_locations; ++i) {
      CHECK(s.rate(day, i) >= 0.0);
      CHECK(s.rate(day, i) < 10.0 * p.surge.c_peak * p.scale[i] * p.kappa[i][day_of_week(day)] + 1.0);
    }
}

TEST_CASE("Poisson counts have matching mean and variance") {
  auto p = quiet_params(1);
  const int n = 10000;
  const int day = 3;
  double sum = 0, sq = 0;
  for (int r = 0; r < n; ++r) {
    Rng rng(1000 + r);
    auto s = generate_arrivals(p, day, 1, rng);
    const double c = static_cast<double>(s.count(day, 0));
    sum += c;
    sq += c * c;
  }
  Rng probe(1);
  const double lam = generate_arrivals(p, day, 1, probe).rate(day, 0);  // includes the surge ramp
  const double mean = sum / n, var = sq / n - mean * mean;
  CHECK(std::abs(mean - lam) < 3 * std::sqrt(lam / n));
  // Sample variance of a Poisson has variance about lam + 2 lam^2 / n.
  CHECK(std::abs(var - lam) < 3 * std::sqrt((lam + 2 * lam * lam) / n));
}

TEST_CASE("census examples") {
  const int L = 2;
  std::array<double, kUnits> split{1.0, 0.0, 0.0};
  CensusState c{5, 3, 2, 7, 0, 1};
  std::vector<std::int64_t> none(L, 0);

  auto ident = TransitionModel::uniform(L, 7, identity_table(), split);
  Rng rng(1);
  CHECK(census_step(c, none, ident, 1, rng) == c);

  std::array<std::array<double, kOutcomes>, kUnits> out{};
  for (auto& row : out) row[kDischarge] = 1.0;
  auto leave = TransitionModel::uniform(L, 7, out, split);
  CHECK(census_step(c, none, leave, 1, rng) == CensusState(6, 0));
}

TEST_CASE("property: census steps conserve patients exactly") {
  auto cfg = config::default_config();
  auto tm = config::build_transitions(cfg);
  const int L = tm.num_locations();
  Rng rng(21);
  std::uniform_int_distribution<std::int64_t> pick(0, 60);
  for (int step = 0; step < 1000; ++step) {
    CensusState c(L * kUnits);
    for (auto& v : c) v = pick(rng);
    std::vector<std::int64_t> arr(L);
    for (auto& v : arr) v = pick(rng);
    DayFlows f;
    auto next = census_step(c, arr, tm, step, rng, &f);
    for (int i = 0; i < L; ++i) {
      std::int64_t adm = 0;
      for (int u = 0; u < kUnits; ++u) {
        adm += f.admitted[i * kUnits + u];
        std::int64_t out = 0, in = f.admitted[i * kUnits + u];
        for (int v = 0; v < kOutcomes; ++v) out += f.moved[(i * kUnits + u) * kOutcomes + v];
        for (int w = 0; w < kUnits; ++w) in += f.moved[(i * kUnits + w) * kOutcomes + u];
        CHECK(out == c[i * kUnits + u]);
        CHECK(next[i * kUnits + u] == in);
        CHECK(next[i * kUnits + u] >= 0);
      }
      CHECK(adm == arr[i]);
    }
  }
}

TEST_CASE("nurse demand") {
  CHECK(nurse_demand({0, 0, 0}, 1) == std::vector<double>{0.0});
  CHECK(nurse_demand({30, 9, 4}, 1)[0] == doctest::Approx(11.0));
  CHECK(nurse_demand({5, 3, 2}, 1)[0] == doctest::Approx(3.0));
  CHECK(nurse_demand({1, 0, 0}, 1)[0] == doctest::Approx(0.2));  // stays fractional
}

TEST_CASE("capacity schedule") {
  CapacityParams cp;
  cp.initial = {40, 120, 110, 130};
  cp.b_adj = {0.11, 0.17, 0.17, 0.115};
  core::DemandPath flat(35, 4);
  for (double& v : flat.data()) v = 50;
  for (const auto& row : generate_capacity(flat, cp, 5)) CHECK(row == cp.initial);

  core::DemandPath up = flat;
  for (int t = 7; t < 35; ++t) up.at(t, 1) += 10;  // week 2 mean is 10 above week 1
  cp.round = false;
  auto c = generate_capacity(up, cp, 4);
  CHECK(c[1][1] == 120);
  CHECK(c[2][1] == doctest::Approx(120 + 2 * 0.17 * 10));
  CHECK(c[3][1] == doctest::Approx(c[2][1]));  // no further change
  CHECK(c[2][0] == 40);

  core::DemandPath down = flat;
  for (int t = 7; t < 35; ++t) down.at(t, 3) -= 10;
  c = generate_capacity(down, cp, 3);
  CHECK(c[2][3] == doctest::Approx(130 - 0.8 * 0.115 * 10));
  cp.round = true;
  c = generate_capacity(down, cp, 3);
  CHECK(c[2][3] == 129.0);
}

TEST_CASE("testing paths, estimates and training paths") {
  auto cfg = config::default_config();
  auto ap = config::build_arrival_params(cfg);
  auto tm = config::build_transitions(cfg);
  TestingPathSpec spec;
  spec.planned_days = 14;
  Rng r1(5), r2(5);
  auto a = generate_testing_path(ap, tm, spec, r1);
  auto b = generate_testing_path(ap, tm, spec, r2);
  CHECK(a.census == b.census);
  CHECK(a.first_day == -20);
  CHECK(a.last_day() == 14);
  for (auto v : a.census) CHECK(v >= 0);

  auto est = estimate_rolling_params(a, 1, 21);
  CHECK_NOTHROW(est.transitions.validate(1e-9));
  // Day-of-week means over the three matching history days.
  for (int i = 0; i < 4; ++i)
    for (int y = 0; y < 7; ++y) {
      double s = 0;
      int n = 0;
      for (int d = -20; d <= 0; ++d)
        if (day_of_week(d) == y) {
          for (int u = 0; u < kUnits; ++u) s += a.admitted_at(d, i, u);
          ++n;
        }
      CHECK(est.arrival_rate[i * 7 + y] == doctest::Approx(s / n));
    }
  CHECK_THROWS_AS(estimate_rolling_params(a, -10, 21), ArgumentError);

  Rng g(3);
  CHECK(generate_training_paths(est, a.census_at(1), 1, 1, 7, 0, g).paths.empty());
  Rng g1(8), g2(8);
  auto t1 = generate_training_paths(est, a.census_at(1), 1, 1, 7, 5, g1);
  auto t2 = generate_training_paths(est, a.census_at(1), 1, 1, 7, 5, g2);
  REQUIRE(t1.paths.size() == 5);
  for (int n = 0; n < 5; ++n) CHECK(t1.paths[n] == t2.paths[n]);
}

TEST_CASE("estimates fall back when a cell saw no patients") {
  PatientFlowRecord r;
  r.first_day = -6;
  r.days = 7;
  r.num_locations = 1;
  r.census.assign(7 * kUnits, 0);
  r.admitted.assign(7 * kUnits, 0);
  r.moved.assign(7 * kUnits * kOutcomes, 0);
  auto est = estimate_rolling_params(r, 1, 7);
  for (int u = 0; u < kUnits; ++u) {
    CHECK(est.transitions.q(0, u) == doctest::Approx(1.0 / 3));
    for (int v = 0; v < kOutcomes; ++v) CHECK(est.transitions.p(0, u, v, 2) == doctest::Approx(0.25));
  }
  for (double v : est.arrival_rate) CHECK(v == 0.0);
}

TEST_CASE("training demand is deterministic when nothing is random") {
  FlowEstimates est;
  est.num_locations = 1;
  est.arrival_rate.assign(7, 0.0);
  est.transitions = TransitionModel::uniform(1, 7, identity_table(), {1.0, 0.0, 0.0});
  Rng rng(2);
  auto s = generate_training_paths(est, {10, 6, 4}, 1, 1, 5, 4, rng);
  for (const auto& p : s.paths)
    for (int t = 0; t < 5; ++t) CHECK(p.at(t, 0) == doctest::Approx(6.0));
}

TEST_CASE("training paths track the implied mean demand") {
  // Stays only, arrivals into MS at rate 5: demand on day k is
  // (start + 5 k) / ratio in expectation.
  FlowEstimates est;
  est.num_locations = 1;
  est.arrival_rate.assign(7, 5.0);
  est.transitions = TransitionModel::uniform(1, 7, identity_table(), {1.0, 0.0, 0.0});
  Rng rng(12);
  const int n = 10000;
  auto s = generate_training_paths(est, {10, 0, 0}, 1, 1, 3, n, rng);
  for (int t = 0; t < 3; ++t) {
    double sum = 0;
    for (const auto& p : s.paths) sum += p.at(t, 0);
    const double expect = (10 + 5.0 * t) / 5.0;
    const double sd = std::sqrt(5.0 * t) / 5.0;
    CHECK(std::abs(sum / n - expect) <= 3 * sd / std::sqrt(n) + 1e-12);
  }
}

TEST_CASE("with a flat surge and no spread, weekly demand is stationary") {
  auto cfg = config::default_config();
  cfg.simulator.arrivals.c_peak = 1.0;
  cfg.simulator.arrivals.spatial_strength = 0.0;
  auto ap = config::build_arrival_params(cfg);
  auto tm = config::build_transitions(cfg);
  TestingPathSpec spec;
  spec.planned_days = 28;
  std::vector<double> weekly(4, 0.0);
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(child_seed(77, {static_cast<std::uint64_t>(s)}));
    auto rec = generate_testing_path(ap, tm, spec, rng);
    auto d = rec.demand(1, 28);
    for (int t = 0; t < 28; ++t)
      for (int i = 0; i < 4; ++i) weekly[t / 7] += d.at(t, i);
  }
  for (int w = 1; w < 4; ++w) CHECK(std::abs(weekly[w] / weekly[0] - 1.0) < 0.05);
}
