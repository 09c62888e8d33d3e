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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "redeploy/config.hpp"
#include "redeploy/path_io.hpp"

using namespace redeploy;
using namespace redeploy::config;

namespace {

std::vector<std::string> failures_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.failures();
  }
  return {};
}

bool mentions(const std::vector<std::string>& f, const std::string& what) {
  for (const auto& s : f)
    if (s.find(what) != std::string::npos) return true;
  return false;
}

std::string temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("redeploy_test_" + name);
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("empty file gives the default profile") {
  auto c = load_config(temp_file("empty.json", "  \n"));
  CHECK(c.costs.premium == 1.0);
  CHECK(c.costs.cancellation_pct == 0.05);
  CHECK(c.costs.emergency_multiplier == 1.6);
  CHECK(c.costs.shortage_cost == 15.0);
  CHECK(c.counts.H == 30);
  CHECK(c.counts.H_hat == 25);
  CHECK(c.counts.M == 5);
  CHECK(c.counts.W == 27);
  CHECK(c.counts.T == 7);
  CHECK(c.simulator.arrivals.surge_mode == "multiplicative");

  auto net = build_network(c);
  CHECK(net.num_locations == 4);
  CHECK(net.distance(0, 3) == 62.0);
  CHECK(net.transfer_bonus(0, 3) == doctest::Approx(1.20));
  CHECK(net.transfer_bonus(0, 1) == doctest::Approx(1.46));
  CHECK(net.secondment(0, 1) == 2);
  CHECK(net.secondment(0, 3) == 1);
  CHECK(net.capacity == std::vector<double>{40, 120, 110, 130});

  CHECK_THROWS_AS(load_config("/nonexistent/redeploy.json"), ValidationError);
}

TEST_CASE("validation lists every failure with its field path") {
  CHECK(mentions(failures_of(R"({"costs": {"cancellation_pct": 1.5}})"), "costs.cancellation_pct"));
  CHECK(mentions(failures_of(R"({"counts": {"H_hat": 25, "M": 4}})"), "H_hat"));
  CHECK(mentions(failures_of(R"({"costs": {"bogus": 1}})"), "costs.bogus"));
  CHECK(mentions(failures_of(R"({"simulator": {"arrivals": {"surge_mode": "x"}}})"), "surge_mode"));
  auto many = failures_of(R"({"costs": {"cancellation_pct": -1}, "counts": {"H": 0}, "extra": true})");
  CHECK(many.size() >= 3);
  CHECK_THROWS_AS(parse_config("{not json"), ValidationError);
}

TEST_CASE("presets") {
  for (const auto& name : preset_names()) CHECK_NOTHROW(validate(default_config(name)));
  CHECK(default_config("higher_peak").simulator.arrivals.c_peak == 1.7);
  CHECK(default_config("six_week_window").simulator.estimation_window_days == 42);
  auto low = build_network(default_config("low_transfer_cost"));
  double lowest = 1e9;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) lowest = std::min(lowest, low.transfer_bonus(i, j));
  CHECK(lowest == doctest::Approx(0.1));
  CHECK_THROWS_AS(default_config("nope"), ValidationError);

  auto c = parse_config(R"({"scenario": "higher_peak", "simulator": {"arrivals": {"c_peak": 1.6}}})");
  CHECK(c.simulator.arrivals.c_peak == 1.6);  // file beats preset
}

TEST_CASE("resolved config round trips through JSON") {
  auto c = default_config("estimated_transitions");
  c.seed = 99;
  auto back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
}

TEST_CASE("hub and spoke arcs all touch the hub") {
  auto c = default_config();
  c.network.design = NetworkDesign::HubAndSpoke;
  auto net = build_network(c);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (net.arc_allowed(i, j)) CHECK((i == 3 || j == 3));
}

TEST_CASE("dataset CSVs round trip") {
  std::mt19937_64 rng(6);
  std::vector<core::DemandPath> paths{testing_support::random_demand(5, 3, 0, 40, rng),
                                      testing_support::random_demand(5, 3, 0, 40, rng)};
  std::ostringstream os;
  io::write_demand_csv(os, paths, -2);
  std::istringstream is(os.str());
  auto t = io::read_demand_csv(is);
  CHECK(t.first_day == -2);
  REQUIRE(t.paths.size() == 2);
  CHECK(t.paths[0] == paths[0]);
  CHECK(t.paths[1] == paths[1]);

  io::CapacityTable cap{{{40, 120.5}, {41, 121}}};
  std::ostringstream oc;
  io::write_capacity_csv(oc, cap);
  std::istringstream ic(oc.str());
  CHECK(io::read_capacity_csv(ic) == cap);

  auto cfg = default_config();
  auto ap = build_arrival_params(cfg);
  auto tm = build_transitions(cfg);
  sim::TestingPathSpec spec;
  spec.planned_days = 7;
  Rng r(4);
  auto rec = sim::generate_testing_path(ap, tm, spec, r);
  const auto file = temp_file("flows.csv", "");
  io::save_flows(file, {rec});
  auto back = io::load_flows(file);
  REQUIRE(back.size() == 1);
  CHECK(back[0].census == rec.census);
  CHECK(back[0].admitted == rec.admitted);
  CHECK(back[0].moved == rec.moved);
  CHECK(back[0].first_day == rec.first_day);
  std::remove(file.c_str());

  CHECK(io::format_number(0.1 + 0.2) == "0.30000000000000004");
  CHECK(io::format_number(2.0) == "2");
  std::istringstream bad("path_id,location,day,value\n0,0,x,1\n");
  CHECK_THROWS(io::read_demand_csv(bad));
}
