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

// Brute-force checks for the robust LP. The oracle walks every corner of
// every box, evaluates the affine rules there and recomputes the cost and
// the constraints from the raw problem data. It shares no code with the
// model builder apart from the solution container.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "redeploy/ldr.hpp"
#include "support.hpp"

namespace testing_support {

struct OracleResult {
  double objective = 0.0;      // planned cost + mean over boxes of the worst case
  double max_violation = 0.0;  // largest robust constraint violation over all corners
};

inline double dot_rule(const redeploy::lp::AffineRule& r, const std::vector<double>& z) {
  double v = r.intercept;
  for (std::size_t k = 0; k < r.coef.size(); ++k) v += r.coef[k] * z[k];
  return v;
}

inline OracleResult robust_oracle(const redeploy::lp::LdrSolution& sol, const redeploy::lp::LdrProblem& pb) {
  const auto& net = pb.network;
  const auto& c = pb.costs;
  const int L = net.num_locations, S = pb.days(), T = pb.horizon, t0 = pb.first_day;

  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      if (i != j && net.arc_allowed(i, j)) arcs.emplace_back(i, j);
  if (arcs.size() != sol.arcs.size()) throw std::logic_error("oracle: arc count differs");
  for (std::size_t a = 0; a < arcs.size(); ++a)
    if (sol.arcs[a].from != arcs[a].first || sol.arcs[a].to != arcs[a].second)
      throw std::logic_error("oracle: arc order differs");
  const int A = static_cast<int>(arcs.size());

  auto mu = [&](int t, int a) { return std::min(net.secondment(arcs[a].first, arcs[a].second), T - (t0 + t)); };
  auto tau = [&](int a) { return net.transfer_bonus(arcs[a].first, arcs[a].second); };
  auto theta = [&](int t) {
    const auto& th = c.emergency_multiplier;
    return th.size() == 1 ? th[0] : th[t0 + t];
  };
  // Nurses already away (from state) on modelled day t.
  auto away_out = [&](int t, int i) {
    double s = 0.0;
    for (int j = 0; j < L; ++j)
      for (int k = t + 1; k <= pb.state.max_remaining(); ++k) s += pb.state.at(i, j, k);
    return s;
  };
  auto away_in = [&](int t, int i) {
    double s = 0.0;
    for (int j = 0; j < L; ++j)
      for (int k = t + 1; k <= pb.state.max_remaining(); ++k) s += pb.state.at(j, i, k);
    return s;
  };
  auto a_val = [&](int t, int a) { return sol.a.at(t, arcs[a].first, arcs[a].second); };

  OracleResult out;
  double planned = 0.0;
  for (int t = 0; t < S; ++t)
    for (int a = 0; a < A; ++a) planned += (c.premium * mu(t, a) + tau(a)) * a_val(t, a);

  double worst_sum = 0.0;
  for (const auto& box : pb.boxes) {
    std::vector<int> free;
    const auto& lo = box.lower.data();
    const auto& hi = box.upper.data();
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (lo[k] != hi[k]) free.push_back(static_cast<int>(k));
    if (free.size() > 20) throw std::logic_error("oracle: box too large to enumerate");
    double worst = -1e300;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
      std::vector<double> z(lo);
      for (std::size_t q = 0; q < free.size(); ++q)
        if (mask >> q & 1U) z[free[q]] = hi[free[q]];

      std::vector<double> b(static_cast<std::size_t>(S) * A), x(b.size()), y(static_cast<std::size_t>(S) * L);
      for (int t = 0; t < S; ++t) {
        for (int a = 0; a < A; ++a) {
          b[t * A + a] = dot_rule(sol.b_rule(t, a), z);
          x[t * A + a] = dot_rule(sol.x_rule(t, a), z);
        }
        for (int i = 0; i < L; ++i) y[t * L + i] = dot_rule(sol.y_rule(t, i), z);
      }
      double f = 0.0;
      for (int t = 0; t < S; ++t) {
        for (int a = 0; a < A; ++a) {
          const double pu = c.premium * mu(t, a) + tau(a);
          const double eu = theta(t) * c.premium * mu(t, a) + tau(a);
          const double bv = b[t * A + a], xv = x[t * A + a], av = a_val(t, a);
          // With x = (b - a)+, (a - b)+ = x - b + a.
          f += eu * xv + (c.cancellation_pct - 1.0) * pu * (xv - bv + av);
          out.max_violation = std::max({out.max_violation, bv - av - xv, -bv, -xv});
        }
        for (int i = 0; i < L; ++i) {
          const double K = net.capacity[i];
          double sent = 0.0, received = 0.0;
          for (int a = 0; a < A; ++a)
            for (int k = 0; k <= t; ++k) {
              if (t >= k + mu(k, a)) continue;
              if (arcs[a].first == i) sent += b[k * A + a];
              if (arcs[a].second == i) received += b[k * A + a];
            }
          const double staff = K - away_out(t, i) + away_in(t, i) - sent + received;
          const double yv = y[t * L + i];
          f += c.shortage_cost[c.shortage_locations == 0 ? i : (t0 + t) * L + i] * yv;
          out.max_violation = std::max({out.max_violation, sent + away_out(t, i) - K, z[t * L + i] - staff - yv, -yv});
        }
      }
      worst = std::max(worst, f);
    }
    worst_sum += worst;
  }
  out.objective = planned + worst_sum / static_cast<double>(pb.boxes.size());
  return out;
}

// Small random instance: L sites, T days, N sample paths, all arcs allowed.
inline redeploy::lp::LdrProblem random_problem(int L, int T, int N, double eps, std::mt19937_64& rng,
                                               bool clip = true) {
  redeploy::lp::LdrProblem pb;
  pb.network = random_network(L, std::min(T, 2), 4, rng);
  pb.costs = default_costs(L);
  pb.horizon = T;
  redeploy::uncertainty::SamplePathSet s{T, L, {}};
  for (int n = 0; n < N; ++n) s.paths.push_back(random_demand(T, L, 0.0, 7.0, rng));
  pb.boxes = redeploy::uncertainty::build_uncertainty_sets(s, eps, clip);
  pb.state = redeploy::core::empty_state(pb.network);
  return pb;
}

}  // namespace testing_support
