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

// Domain types and cost bookkeeping for the multi-site nurse transfer model.
//
// Indexing conventions used throughout the library:
//   * locations are 0-based, i in [0, L)
//   * days are 0-based within a planning horizon, t in [0, T)
//   * a secondment started on day t by a nurse on arc (i, j) lasts
//     min(omega_ij, T - t) days, so nobody is away past the horizon end.

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "redeploy/errors.hpp"

namespace redeploy::core {

struct Arc {
  int from = 0;
  int to = 0;
  bool operator==(const Arc&) const = default;
};

// Row-major L x L helper used by several fields below.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  SquareMatrix(int n, T fill) : n_(n), v_(static_cast<std::size_t>(n) * n, fill) {}
  int size() const { return n_; }
  T& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<T>& data() const { return v_; }
  bool operator==(const SquareMatrix&) const = default;

 private:
  int n_ = 0;
  std::vector<T> v_;
};

struct NetworkConfig {
  int num_locations = 0;
  std::vector<std::string> names;
  SquareMatrix<double> distance;        // miles
  SquareMatrix<double> transfer_bonus;  // money per transfer
  SquareMatrix<int> secondment;         // days
  SquareMatrix<int> arc_allowed;        // 0/1 mask
  std::vector<double> capacity;         // nurses per location
  // Central site for hub-and-spoke layouts, -1 when not applicable.
  int hub = -1;

  // Throws ArgumentError listing every violated invariant.
  void validate() const;

  bool allowed(int i, int j) const { return arc_allowed(i, j) != 0; }
  std::vector<Arc> arcs() const;  // allowed arcs in (from, to) lexicographic order
  int max_secondment() const;     // over allowed arcs, at least 1
};

struct CostParams {
  double premium = 1.0;
  // Per-day emergency multiplier; a single entry is broadcast to every day.
  std::vector<double> emergency_multiplier{1.6};
  double cancellation_pct = 0.05;
  // Shortage penalty per nurse-day. With shortage_locations == 0 this holds
  // one entry per location for every day; otherwise it is day-major with
  // shortage_locations entries per day.
  std::vector<double> shortage_cost;
  int shortage_locations = 0;
  // Flat weekly charge applied when away sites are coordinated outside a hub.
  double coordination_cost = 0.0;

  double theta(int t) const;
  double shortage(int t, int i) const;
  void validate(int num_locations) const;
};

// a[t][i][j] for a horizon of `days` days.
class TransferPlan {
 public:
  TransferPlan() = default;
  TransferPlan(int days, int num_locations)
      : days_(days), L_(num_locations),
        v_(static_cast<std::size_t>(days) * num_locations * num_locations, 0.0) {}
  int days() const { return days_; }
  int num_locations() const { return L_; }
  double& at(int t, int i, int j) { return v_[index(t, i, j)]; }
  double at(int t, int i, int j) const { return v_[index(t, i, j)]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }
  bool operator==(const TransferPlan&) const = default;

 private:
  std::size_t index(int t, int i, int j) const {
    return (static_cast<std::size_t>(t) * L_ + i) * L_ + j;
  }
  int days_ = 0;
  int L_ = 0;
  std::vector<double> v_;
};

using PlannedPlan = TransferPlan;

// b[i][j] for a single day.
class DeploymentAction {
 public:
  DeploymentAction() = default;
  explicit DeploymentAction(int num_locations)
      : L_(num_locations), v_(static_cast<std::size_t>(num_locations) * num_locations, 0.0) {}
  int num_locations() const { return L_; }
  double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * L_ + j]; }
  double at(int i, int j) const { return v_[static_cast<std::size_t>(i) * L_ + j]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }
  double total() const;
  bool operator==(const DeploymentAction&) const = default;

 private:
  int L_ = 0;
  std::vector<double> v_;
};

DeploymentAction day_slice(const TransferPlan& plan, int t);
void set_day_slice(TransferPlan& plan, int t, const DeploymentAction& b);

// z[i][j][k]: nurses from i working at j with k remaining away-days
// (k = 1..max_remaining), counted at the start of a day. A nurse with k
// remaining days is away on the current day and the k-1 days after it.
class SecondmentState {
 public:
  SecondmentState() = default;
  SecondmentState(int num_locations, int max_remaining)
      : L_(num_locations), K_(max_remaining),
        v_(static_cast<std::size_t>(num_locations) * num_locations * std::max(max_remaining, 0), 0.0) {}
  int num_locations() const { return L_; }
  int max_remaining() const { return K_; }
  double& at(int i, int j, int k) { return v_[index(i, j, k)]; }
  double at(int i, int j, int k) const { return v_[index(i, j, k)]; }
  // Nurses from i still away on day offset r >= 0 from the state's day.
  double committed_out(int i, int r) const;
  // Nurses from elsewhere still present at j on day offset r >= 0.
  double committed_in(int j, int r) const;
  bool empty() const;
  const std::vector<double>& data() const { return v_; }
  bool operator==(const SecondmentState&) const = default;

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * L_ + j) * K_ + (k - 1);
  }
  int L_ = 0;
  int K_ = 0;
  std::vector<double> v_;
};

// L x T matrix of nurse demand, stored day-major.
class DemandPath {
 public:
  DemandPath() = default;
  DemandPath(int days, int num_locations)
      : days_(days), L_(num_locations), v_(static_cast<std::size_t>(days) * num_locations, 0.0) {}
  int days() const { return days_; }
  int num_locations() const { return L_; }
  double& at(int t, int i) { return v_[static_cast<std::size_t>(t) * L_ + i]; }
  double at(int t, int i) const { return v_[static_cast<std::size_t>(t) * L_ + i]; }
  std::vector<double> day(int t) const;
  DemandPath window(int first_day, int days) const;
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }
  bool operator==(const DemandPath&) const = default;

 private:
  int days_ = 0;
  int L_ = 0;
  std::vector<double> v_;
};

using ImbalanceVector = std::vector<double>;

struct DeploymentCost {
  double emergency = 0.0;
  // Reported with the (eta - 1) factor, so this is zero or negative.
  double cancellation = 0.0;
  double shortage = 0.0;
  // Planned-cost value of the cancelled transfers; adding it to
  // `cancellation` gives the fee actually paid for cancelling.
  double cancelled_plan_value = 0.0;

  double total() const { return emergency + cancellation + shortage; }
  double net_cancellation_fee() const { return cancellation + cancelled_plan_value; }
};

struct CapacityViolation {
  int location = 0;
  int day = 0;
  double load = 0.0;
  double capacity = 0.0;
};

// min(omega_ij, T - t); throws ArgumentError on a disallowed arc or bad day.
int secondment_length(const NetworkConfig& net, int i, int j, int t, int horizon);

double planned_cost(const NetworkConfig& net, const CostParams& costs,
                    const DeploymentAction& a_t, int t, int horizon);

DeploymentCost deployment_cost(const NetworkConfig& net, const CostParams& costs,
                               const DeploymentAction& a_t, const DeploymentAction& b_t,
                               const ImbalanceVector& delta, int t, int horizon);

// Staff physically present at each site on the state's day once b_t starts.
std::vector<double> on_site_staff(const NetworkConfig& net, const SecondmentState& state,
                                  const DeploymentAction& b_t);

// State form: demand minus on-site staff.
ImbalanceVector imbalance(const NetworkConfig& net, const SecondmentState& state,
                          const DeploymentAction& b_t, const std::vector<double>& demand);

// Window-sum form computed from the full deployment history of days 0..t.
ImbalanceVector imbalance_from_history(const NetworkConfig& net, const TransferPlan& history,
                                       int t, int horizon, const std::vector<double>& demand);

SecondmentState empty_state(const NetworkConfig& net);

SecondmentState advance_state(const NetworkConfig& net, const SecondmentState& state,
                              const DeploymentAction& b_t, int t, int horizon);

// Rolling window check over a plan or action history. `initial` optionally
// carries nurses already away at day 0. Never throws on violations.
std::vector<CapacityViolation> validate_capacity(const NetworkConfig& net,
                                                 const TransferPlan& decisions,
                                                 const std::vector<double>& capacity,
                                                 const SecondmentState* initial = nullptr,
                                                 double tolerance = 1e-9);

}  // namespace redeploy::core
