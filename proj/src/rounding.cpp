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

#include <algorithm>
#include <cmath>

#include "redeploy/errors.hpp"
#include "redeploy/planner.hpp"

namespace redeploy::planner {

namespace {

// Solver output within this distance of an integer is taken as that integer,
// so 2.9999999 does not turn into a coin flip.
constexpr double kSnap = 1e-7;
constexpr double kCapTol = 1e-6;

double snap(double v) {
  if (v < 0.0) return 0.0;
  const double r = std::round(v);
  return std::abs(v - r) <= kSnap ? r : v;
}

std::vector<double> round_values(const std::vector<double>& frac, RoundingMode mode, Rng& rng) {
  switch (mode) {
    case RoundingMode::None: return frac;
    case RoundingMode::Floor: {
      std::vector<double> out(frac.size());
      for (std::size_t k = 0; k < frac.size(); ++k) out[k] = std::floor(frac[k]);
      return out;
    }
    case RoundingMode::Randomized: return randomized_round(frac, rng);
  }
  return frac;
}

// Entry of a day's or a plan's flat array that may give up a nurse.
struct Candidate {
  std::size_t index;
  double frac_part;
  bool rounded_up;
};

// Lowers one entry among `members` by one nurse. Rounded-up entries go first,
// smallest fractional part first; failing that the largest entry (this only
// happens with mode None or inconsistent input).
bool take_one(std::vector<double>& rounded, const std::vector<double>& frac, const std::vector<std::size_t>& members) {
  std::vector<Candidate> cands;
  for (std::size_t idx : members) {
    if (rounded[idx] < 1.0 - kSnap) continue;
    const double fl = std::floor(frac[idx]);
    cands.push_back({idx, frac[idx] - fl, rounded[idx] > fl + kSnap});
  }
  if (cands.empty()) return false;
  auto best = std::min_element(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.rounded_up != b.rounded_up) return a.rounded_up;
    if (a.rounded_up) {
      if (a.frac_part != b.frac_part) return a.frac_part < b.frac_part;
    } else if (rounded[a.index] != rounded[b.index]) {
      return rounded[a.index] > rounded[b.index];
    }
    return a.index < b.index;
  });
  rounded[best->index] = std::max(0.0, rounded[best->index] - 1.0);
  return true;
}

}  // namespace

const char* to_string(RoundingMode m) {
  switch (m) {
    case RoundingMode::Randomized: return "randomized";
    case RoundingMode::Floor: return "floor";
    case RoundingMode::None: return "none";
  }
  return "randomized";
}

RoundingMode rounding_mode_from_string(const std::string& s) {
  if (s == "randomized") return RoundingMode::Randomized;
  if (s == "floor") return RoundingMode::Floor;
  if (s == "none") return RoundingMode::None;
  throw ArgumentError("unknown rounding mode '" + s + "'");
}

std::vector<double> randomized_round(const std::vector<double>& fractional, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(fractional.size());
  for (std::size_t k = 0; k < fractional.size(); ++k) {
    const double v = fractional[k];
    if (!std::isfinite(v) || v < 0.0) throw ArgumentError("randomized_round: entries must be finite and >= 0");
    const double fl = std::floor(v);
    const double f = v - fl;
    // No draw for integral entries; keeps streams aligned across models that
    // differ only in which entries are fractional.
    out[k] = (f > 0.0 && unif(rng) < f) ? fl + 1.0 : fl;
  }
  return out;
}

TransferPlan round_plan(const NetworkConfig& net, const TransferPlan& fractional, int horizon, RoundingMode mode,
                        Rng& rng) {
  const int T = fractional.days(), L = fractional.num_locations();
  if (L != net.num_locations) throw ArgumentError("round_plan: plan does not match the network");
  if (T > horizon) throw ArgumentError("round_plan: plan is longer than the horizon");
  std::vector<double> frac(fractional.data().size());
  for (std::size_t k = 0; k < frac.size(); ++k) frac[k] = snap(fractional.data()[k]);

  TransferPlan out(T, L);
  out.data() = round_values(frac, mode, rng);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j)
        if (i == j || !net.allowed(i, j)) out.at(t, i, j) = 0.0;

  const auto flat = [&](int t, int i, int j) { return (static_cast<std::size_t>(t) * L + i) * L + j; };
  const auto arcs = net.arcs();
  std::vector<std::size_t> members;
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < L; ++i) {
      members.clear();
      for (const auto& a : arcs) {
        if (a.from != i) continue;
        for (int k = 0; k <= t; ++k)
          if (t < k + core::secondment_length(net, a.from, a.to, k, horizon)) members.push_back(flat(k, a.from, a.to));
      }
      auto load = [&] {
        double s = 0.0;
        for (std::size_t idx : members) s += out.data()[idx];
        return s;
      };
      while (load() > net.capacity[i] + kCapTol) {
        if (!take_one(out.data(), frac, members)) {
          throw RuntimeFailure("round_plan: cannot restore capacity at location " + std::to_string(i) + ", day " +
                               std::to_string(t));
        }
      }
    }
  }
  return out;
}

DeploymentAction round_action(const NetworkConfig& net, const DeploymentAction& fractional,
                              const core::SecondmentState& state, RoundingMode mode, Rng& rng) {
  const int L = fractional.num_locations();
  if (L != net.num_locations || state.num_locations() != L) {
    throw ArgumentError("round_action: action or state does not match the network");
  }
  std::vector<double> frac(fractional.data().size());
  for (std::size_t k = 0; k < frac.size(); ++k) frac[k] = snap(fractional.data()[k]);
  DeploymentAction out(L);
  out.data() = round_values(frac, mode, rng);
  std::vector<std::size_t> members;
  for (int i = 0; i < L; ++i) {
    members.clear();
    for (int j = 0; j < L; ++j) {
      if (i == j || !net.allowed(i, j)) {
        out.at(i, j) = 0.0;
        continue;
      }
      members.push_back(static_cast<std::size_t>(i) * L + j);
    }
    const double room = net.capacity[i] - state.committed_out(i, 0);
    auto load = [&] {
      double s = 0.0;
      for (std::size_t idx : members) s += out.data()[idx];
      return s;
    };
    while (load() > room + kCapTol) {
      if (!take_one(out.data(), frac, members)) {
        throw RuntimeFailure("round_action: location " + std::to_string(i) + " is over capacity before deploying");
      }
    }
  }
  return out;
}

}  // namespace redeploy::planner
