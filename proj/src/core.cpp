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

#include "redeploy/core.hpp"

#include <cmath>
#include <sstream>

namespace redeploy::core {

namespace {

std::string at_arc(int i, int j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

void check_shape(const NetworkConfig& net, int L, const char* what) {
  if (L != net.num_locations) {
    throw ArgumentError(std::string(what) + ": expected " + std::to_string(net.num_locations) +
                        " locations, got " + std::to_string(L));
  }
}

}  // namespace

void NetworkConfig::validate() const {
  std::vector<std::string> errs;
  const int L = num_locations;
  if (L < 1) errs.push_back("num_locations must be >= 1");
  auto sized = [&](int n, const char* name) {
    if (n != L) errs.push_back(std::string(name) + " must be " + std::to_string(L) + " x " + std::to_string(L));
  };
  sized(distance.size(), "distance");
  sized(transfer_bonus.size(), "transfer_bonus");
  sized(secondment.size(), "secondment");
  sized(arc_allowed.size(), "arc_allowed");
  if (static_cast<int>(capacity.size()) != L) errs.push_back("capacity must have one entry per location");
  if (!names.empty() && static_cast<int>(names.size()) != L) errs.push_back("names must have one entry per location");
  if (hub < -1 || hub >= L) errs.push_back("hub must be -1 or a location index");
  if (!errs.empty()) throw ArgumentError("network: " + errs.front());

  for (int i = 0; i < L; ++i) {
    if (distance(i, i) != 0.0) errs.push_back("distance" + at_arc(i, i) + " must be 0");
    if (allowed(i, i)) errs.push_back("arc_allowed" + at_arc(i, i) + " must be false");
    if (!(capacity[i] >= 0.0)) errs.push_back("capacity[" + std::to_string(i) + "] must be >= 0");
    for (int j = 0; j < L; ++j) {
      if (!(distance(i, j) >= 0.0)) errs.push_back("distance" + at_arc(i, j) + " must be >= 0");
      if (distance(i, j) != distance(j, i)) errs.push_back("distance" + at_arc(i, j) + " must be symmetric");
      if (!(transfer_bonus(i, j) >= 0.0)) errs.push_back("transfer_bonus" + at_arc(i, j) + " must be >= 0");
      if (i != j && allowed(i, j) && secondment(i, j) < 1) {
        errs.push_back("secondment" + at_arc(i, j) + " must be >= 1 on an allowed arc");
      }
    }
  }
  if (!errs.empty()) {
    std::string msg = "network:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw ArgumentError(msg);
  }
}

std::vector<Arc> NetworkConfig::arcs() const {
  std::vector<Arc> out;
  for (int i = 0; i < num_locations; ++i)
    for (int j = 0; j < num_locations; ++j)
      if (i != j && allowed(i, j)) out.push_back({i, j});
  return out;
}

int NetworkConfig::max_secondment() const {
  int w = 1;
  for (const Arc& a : arcs()) w = std::max(w, secondment(a.from, a.to));
  return w;
}

double CostParams::theta(int t) const {
  if (emergency_multiplier.empty()) throw ArgumentError("emergency_multiplier is empty");
  if (emergency_multiplier.size() == 1) return emergency_multiplier[0];
  if (t < 0 || t >= static_cast<int>(emergency_multiplier.size())) {
    throw ArgumentError("emergency_multiplier has no entry for day " + std::to_string(t));
  }
  return emergency_multiplier[t];
}

double CostParams::shortage(int t, int i) const {
  if (shortage_cost.empty()) throw ArgumentError("shortage_cost is empty");
  if (static_cast<std::size_t>(i) < shortage_cost.size() && shortage_locations == 0) return shortage_cost[i];
  const std::size_t idx = static_cast<std::size_t>(t) * shortage_locations + i;
  if (idx >= shortage_cost.size()) throw ArgumentError("shortage_cost has no entry for day " + std::to_string(t));
  return shortage_cost[idx];
}

void CostParams::validate(int num_locations) const {
  std::vector<std::string> errs;
  if (!(premium > 0.0)) errs.push_back("premium must be > 0");
  if (emergency_multiplier.empty()) errs.push_back("emergency_multiplier must be non-empty");
  for (double th : emergency_multiplier)
    if (!(th >= 1.0)) errs.push_back("emergency_multiplier entries must be >= 1");
  if (!(cancellation_pct >= 0.0 && cancellation_pct <= 1.0)) errs.push_back("cancellation_pct must lie in [0, 1]");
  if (shortage_locations == 0 && static_cast<int>(shortage_cost.size()) != num_locations)
    errs.push_back("shortage_cost must have one entry per location");
  if (shortage_locations != 0 &&
      (shortage_locations != num_locations || shortage_cost.size() % static_cast<std::size_t>(num_locations) != 0))
    errs.push_back("day-major shortage_cost must hold whole days of location entries");
  for (double s : shortage_cost)
    if (!(s >= 0.0)) errs.push_back("shortage_cost entries must be >= 0");
  if (!(coordination_cost >= 0.0)) errs.push_back("coordination_cost must be >= 0");
  if (!errs.empty()) {
    std::string msg = "costs:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw ArgumentError(msg);
  }
}

double DeploymentAction::total() const {
  double s = 0.0;
  for (double x : v_) s += x;
  return s;
}

DeploymentAction day_slice(const TransferPlan& plan, int t) {
  const int L = plan.num_locations();
  DeploymentAction out(L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) out.at(i, j) = plan.at(t, i, j);
  return out;
}

void set_day_slice(TransferPlan& plan, int t, const DeploymentAction& b) {
  const int L = plan.num_locations();
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) plan.at(t, i, j) = b.at(i, j);
}

double SecondmentState::committed_out(int i, int r) const {
  double s = 0.0;
  for (int j = 0; j < L_; ++j)
    for (int k = r + 1; k <= K_; ++k) s += at(i, j, k);
  return s;
}

double SecondmentState::committed_in(int j, int r) const {
  double s = 0.0;
  for (int i = 0; i < L_; ++i)
    for (int k = r + 1; k <= K_; ++k) s += at(i, j, k);
  return s;
}

bool SecondmentState::empty() const {
  for (double x : v_)
    if (x != 0.0) return false;
  return true;
}

std::vector<double> DemandPath::day(int t) const {
  return {v_.begin() + static_cast<std::ptrdiff_t>(t) * L_, v_.begin() + static_cast<std::ptrdiff_t>(t + 1) * L_};
}

DemandPath DemandPath::window(int first_day, int days) const {
  if (first_day < 0 || days < 0 || first_day + days > days_) {
    throw ArgumentError("demand window [" + std::to_string(first_day) + ", " +
                        std::to_string(first_day + days) + ") outside path of " +
                        std::to_string(days_) + " days");
  }
  DemandPath out(days, L_);
  for (int t = 0; t < days; ++t)
    for (int i = 0; i < L_; ++i) out.at(t, i) = at(first_day + t, i);
  return out;
}

int secondment_length(const NetworkConfig& net, int i, int j, int t, int horizon) {
  if (i < 0 || j < 0 || i >= net.num_locations || j >= net.num_locations || i == j || !net.allowed(i, j)) {
    throw ArgumentError("secondment_length: arc " + at_arc(i, j) + " is not allowed");
  }
  if (t < 0 || t >= horizon) {
    throw ArgumentError("secondment_length: day " + std::to_string(t) + " outside horizon of " +
                        std::to_string(horizon) + " days");
  }
  return std::min(net.secondment(i, j), horizon - t);
}

namespace {

template <typename F>
void for_each_active(const NetworkConfig& net, const DeploymentAction& x, const char* what, F&& f) {
  check_shape(net, x.num_locations(), what);
  const int L = net.num_locations;
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      const double v = x.at(i, j);
      if (i == j || !net.allowed(i, j)) {
        if (v != 0.0) throw ArgumentError(std::string(what) + ": nonzero value on disallowed arc " + at_arc(i, j));
        continue;
      }
      f(i, j);
    }
  }
}

}  // namespace

double planned_cost(const NetworkConfig& net, const CostParams& costs, const DeploymentAction& a_t, int t,
                    int horizon) {
  double total = 0.0;
  for_each_active(net, a_t, "planned_cost", [&](int i, int j) {
    const double mu = secondment_length(net, i, j, t, horizon);
    total += (costs.premium * mu + net.transfer_bonus(i, j)) * a_t.at(i, j);
  });
  return total;
}

DeploymentCost deployment_cost(const NetworkConfig& net, const CostParams& costs, const DeploymentAction& a_t,
                               const DeploymentAction& b_t, const ImbalanceVector& delta, int t, int horizon) {
  check_shape(net, b_t.num_locations(), "deployment_cost");
  check_shape(net, static_cast<int>(delta.size()), "deployment_cost imbalance");
  DeploymentCost c;
  for_each_active(net, a_t, "deployment_cost", [&](int i, int j) {
    const double mu = secondment_length(net, i, j, t, horizon);
    const double tau = net.transfer_bonus(i, j);
    const double plan_unit = costs.premium * mu + tau;
    const double excess = std::max(b_t.at(i, j) - a_t.at(i, j), 0.0);
    const double shortfall = std::max(a_t.at(i, j) - b_t.at(i, j), 0.0);
    c.emergency += (costs.theta(t) * costs.premium * mu + tau) * excess;
    c.cancellation += (costs.cancellation_pct - 1.0) * plan_unit * shortfall;
    c.cancelled_plan_value += plan_unit * shortfall;
  });
  for_each_active(net, b_t, "deployment_cost", [](int, int) {});
  for (int i = 0; i < net.num_locations; ++i) c.shortage += costs.shortage(t, i) * std::max(delta[i], 0.0);
  return c;
}

std::vector<double> on_site_staff(const NetworkConfig& net, const SecondmentState& state,
                                  const DeploymentAction& b_t) {
  check_shape(net, b_t.num_locations(), "on_site_staff");
  check_shape(net, state.num_locations(), "on_site_staff state");
  const int L = net.num_locations;
  std::vector<double> staff(net.capacity);
  for (int i = 0; i < L; ++i) {
    staff[i] += state.committed_in(i, 0) - state.committed_out(i, 0);
    for (int j = 0; j < L; ++j) staff[i] += b_t.at(j, i) - b_t.at(i, j);
  }
  return staff;
}

ImbalanceVector imbalance(const NetworkConfig& net, const SecondmentState& state, const DeploymentAction& b_t,
                          const std::vector<double>& demand) {
  check_shape(net, static_cast<int>(demand.size()), "imbalance demand");
  std::vector<double> staff = on_site_staff(net, state, b_t);
  ImbalanceVector delta(demand.size());
  for (std::size_t i = 0; i < demand.size(); ++i) delta[i] = demand[i] - staff[i];
  return delta;
}

ImbalanceVector imbalance_from_history(const NetworkConfig& net, const TransferPlan& history, int t, int horizon,
                                       const std::vector<double>& demand) {
  check_shape(net, history.num_locations(), "imbalance_from_history");
  check_shape(net, static_cast<int>(demand.size()), "imbalance_from_history demand");
  if (t < 0 || t >= horizon || t >= history.days()) throw ArgumentError("imbalance_from_history: day out of range");
  const int L = net.num_locations;
  ImbalanceVector delta(L);
  for (int i = 0; i < L; ++i) {
    double staff = net.capacity[i];
    for (int j = 0; j < L; ++j) {
      if (i == j) continue;
      if (net.allowed(i, j)) {
        for (int k = std::max(t - net.secondment(i, j) + 1, 0); k <= t; ++k) staff -= history.at(k, i, j);
      }
      if (net.allowed(j, i)) {
        for (int k = std::max(t - net.secondment(j, i) + 1, 0); k <= t; ++k) staff += history.at(k, j, i);
      }
    }
    delta[i] = demand[i] - staff;
  }
  return delta;
}

SecondmentState empty_state(const NetworkConfig& net) {
  return SecondmentState(net.num_locations, net.max_secondment() - 1);
}

SecondmentState advance_state(const NetworkConfig& net, const SecondmentState& state, const DeploymentAction& b_t,
                              int t, int horizon) {
  check_shape(net, state.num_locations(), "advance_state");
  const int L = net.num_locations;
  const int K = state.max_remaining();
  SecondmentState next(L, K);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      for (int k = 1; k < K; ++k) next.at(i, j, k) = state.at(i, j, k + 1);
    }
  }
  for_each_active(net, b_t, "advance_state", [&](int i, int j) {
    const int mu = secondment_length(net, i, j, t, horizon);
    if (mu - 1 > K) throw ArgumentError("advance_state: state too short for secondment on " + at_arc(i, j));
    if (mu >= 2) next.at(i, j, mu - 1) += b_t.at(i, j);
  });
  return next;
}

std::vector<CapacityViolation> validate_capacity(const NetworkConfig& net, const TransferPlan& decisions,
                                                 const std::vector<double>& capacity,
                                                 const SecondmentState* initial, double tolerance) {
  std::vector<CapacityViolation> out;
  const int L = net.num_locations;
  if (decisions.num_locations() != L || static_cast<int>(capacity.size()) != L) return out;
  for (int t = 0; t < decisions.days(); ++t) {
    for (int i = 0; i < L; ++i) {
      double load = initial ? initial->committed_out(i, t) : 0.0;
      for (int j = 0; j < L; ++j) {
        if (i == j) continue;
        const int w = net.allowed(i, j) ? net.secondment(i, j) : 1;
        for (int k = std::max(t - w + 1, 0); k <= t; ++k) load += decisions.at(k, i, j);
      }
      if (load > capacity[i] + tolerance) out.push_back({i, t, load, capacity[i]});
    }
  }
  return out;
}

}  // namespace redeploy::core
