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

// Fixtures shared by the unit and acceptance tests. Nothing here calls into
// the library's cost code; the oracles recompute costs from raw parameters.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "redeploy/core.hpp"
#include "redeploy/uncertainty.hpp"

namespace testing_support {

using redeploy::core::CostParams;
using redeploy::core::DemandPath;
using redeploy::core::NetworkConfig;
using redeploy::core::SquareMatrix;

enum Site { kWest = 0, kEast = 1, kSouth = 2, kCentral = 3 };

// Four sites with the published distances, bonuses and baseline secondments.
inline NetworkConfig four_sites(bool fully_connected = true) {
  NetworkConfig n;
  n.num_locations = 4;
  n.names = {"West", "East", "South", "Central"};
  n.distance = SquareMatrix<double>(4, 0.0);
  n.transfer_bonus = SquareMatrix<double>(4, 0.0);
  n.secondment = SquareMatrix<int>(4, 1);
  n.arc_allowed = SquareMatrix<int>(4, 0);
  auto set = [&](int i, int j, double d, double tau, int w) {
    n.distance(i, j) = n.distance(j, i) = d;
    n.transfer_bonus(i, j) = n.transfer_bonus(j, i) = tau;
    n.secondment(i, j) = n.secondment(j, i) = w;
  };
  set(kWest, kEast, 88, 1.46, 2);
  set(kWest, kSouth, 110, 1.68, 2);
  set(kWest, kCentral, 62, 1.20, 1);
  set(kEast, kSouth, 112, 1.70, 2);
  set(kEast, kCentral, 56, 1.14, 1);
  set(kSouth, kCentral, 52, 1.10, 1);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && (fully_connected || i == kCentral || j == kCentral)) n.arc_allowed(i, j) = 1;
  n.capacity = {40, 120, 110, 130};
  n.hub = kCentral;
  return n;
}

inline CostParams default_costs(int L) {
  CostParams c;
  c.premium = 1.0;
  c.emergency_multiplier = {1.6};
  c.cancellation_pct = 0.05;
  c.shortage_cost.assign(L, 15.0);
  return c;
}

// Fully connected network of L sites with random distances, bonuses,
// secondments in [1, max_omega] and integer capacities in [0, max_cap].
inline NetworkConfig random_network(int L, int max_omega, int max_cap, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> om(1, max_omega), cap(0, max_cap);
  std::uniform_real_distribution<double> dist(10.0, 120.0), tau(0.1, 2.0);
  NetworkConfig n;
  n.num_locations = L;
  n.distance = SquareMatrix<double>(L, 0.0);
  n.transfer_bonus = SquareMatrix<double>(L, 0.0);
  n.secondment = SquareMatrix<int>(L, 1);
  n.arc_allowed = SquareMatrix<int>(L, 0);
  for (int i = 0; i < L; ++i) {
    n.names.push_back("S" + std::to_string(i));
    n.capacity.push_back(cap(rng));
    for (int j = i + 1; j < L; ++j) {
      n.distance(i, j) = n.distance(j, i) = std::round(dist(rng));
      n.transfer_bonus(i, j) = n.transfer_bonus(j, i) = std::round(tau(rng) * 100) / 100;
      n.secondment(i, j) = n.secondment(j, i) = om(rng);
      n.arc_allowed(i, j) = n.arc_allowed(j, i) = 1;
    }
  }
  return n;
}

inline DemandPath random_demand(int T, int L, double lo, double hi, std::mt19937_64& rng, bool integral = false) {
  std::uniform_real_distribution<double> u(lo, hi);
  DemandPath p(T, L);
  for (double& v : p.data()) v = integral ? std::round(u(rng)) : u(rng);
  return p;
}

// min(omega, T - t) from the raw matrix, for oracles that must not reuse the
// library's own helper.
inline int mu_of(const NetworkConfig& n, int i, int j, int t, int T) { return std::min(n.secondment(i, j), T - t); }

}  // namespace testing_support
