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

#include <algorithm>
#include <random>
#include <set>

#include "../support.hpp"
#include "redeploy/uncertainty.hpp"

using namespace redeploy;
using namespace redeploy::uncertainty;
using core::DemandPath;

namespace {

SamplePathSet single(const DemandPath& p) { return SamplePathSet{p.days(), p.num_locations(), {p}}; }

DemandPath path(int T, int L, std::vector<double> v) {
  DemandPath p(T, L);
  p.data() = std::move(v);
  return p;
}

}  // namespace

TEST_CASE("box construction examples") {
  auto p = path(1, 3, {5.0, 3.0, 10.0});
  auto b0 = build_uncertainty_sets(single(p), 0.0).front();
  CHECK(b0.lower == p);
  CHECK(b0.upper == p);

  auto b5 = build_uncertainty_sets(single(p), 5.0).front();
  CHECK(b5.lower.at(0, 1) == 0.0);  // 3 - 5 clipped
  CHECK(b5.upper.at(0, 1) == 8.0);

  auto b2 = build_uncertainty_sets(single(p), 2.0).front();
  CHECK(b2.lower.at(0, 2) == 8.0);
  CHECK(b2.upper.at(0, 2) == 12.0);

  auto raw = build_uncertainty_sets(single(p), 5.0, false).front();
  CHECK(raw.lower.at(0, 1) == -2.0);

  CHECK_THROWS_AS(build_uncertainty_sets(single(p), -1.0), ArgumentError);
}

TEST_CASE("sample sets reject bad shapes and negative demand") {
  SamplePathSet s{2, 2, {DemandPath(2, 2), DemandPath(3, 2)}};
  CHECK_THROWS_AS(s.validate(), ArgumentError);
  SamplePathSet neg{1, 1, {path(1, 1, {-0.5})}};
  CHECK_THROWS_AS(neg.validate(), ArgumentError);
}

TEST_CASE("vertex enumeration examples") {
  UncertaintyBox b1{path(1, 1, {2}), path(1, 1, {4}), 1.0};
  auto v1 = enumerate_vertices(b1);
  REQUIRE(v1.size() == 2);
  std::set<double> got{v1[0].at(0, 0), v1[1].at(0, 0)};
  CHECK(got == std::set<double>{2.0, 4.0});

  UncertaintyBox b2{path(1, 2, {0, 3}), path(1, 2, {1, 3}), 0.5};
  auto v2 = enumerate_vertices(b2);
  REQUIRE(v2.size() == 2);
  for (const auto& v : v2) CHECK(v.at(0, 1) == 3.0);

  UncertaintyBox b4{path(2, 2, {0, 0, 0, 0}), path(2, 2, {1, 1, 1, 1}), 0.5};
  CHECK(enumerate_vertices(b4).size() == 16);

  UncertaintyBox big{DemandPath(7, 4), DemandPath(7, 4), 1.0};
  for (double& v : big.upper.data()) v = 1.0;
  CHECK_THROWS_AS(enumerate_vertices(big), ArgumentError);
}

TEST_CASE("property: vertices lie in the box and attain the closed-form maximum") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int rep = 0; rep < 300; ++rep) {
    const int T = std::uniform_int_distribution<int>(1, 3)(rng);
    const int L = std::uniform_int_distribution<int>(1, 3)(rng);
    const double eps = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
    auto center = testing_support::random_demand(T, L, 0.0, 6.0, rng);
    auto box = build_uncertainty_sets(single(center), eps).front();
    DemandPath c(T, L);
    for (double& v : c.data()) v = coef(rng);

    double best = -1e300;
    for (const auto& v : enumerate_vertices(box)) {
      CHECK(box.contains(v));
      CHECK(*std::min_element(v.data().begin(), v.data().end()) >= 0.0);
      double s = 0.0;
      for (std::size_t k = 0; k < v.data().size(); ++k) s += c.data()[k] * v.data()[k];
      best = std::max(best, s);
    }
    // sum of upper * c+ - lower * c-, written out here rather than reused.
    double closed = 0.0;
    for (std::size_t k = 0; k < c.data().size(); ++k) {
      closed += std::max(c.data()[k], 0.0) * box.upper.data()[k] - std::max(-c.data()[k], 0.0) * box.lower.data()[k];
    }
    CHECK(best == doctest::Approx(closed).epsilon(1e-9));
    CHECK(box_max_linear(box, c) == doctest::Approx(closed).epsilon(1e-9));
    // Width never exceeds 2 eps.
    for (std::size_t k = 0; k < c.data().size(); ++k) CHECK(box.upper.data()[k] - box.lower.data()[k] <= 2 * eps + 1e-12);
  }
}
