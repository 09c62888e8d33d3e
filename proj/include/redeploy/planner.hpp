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

// Weekly planning and daily redeployment on a rolling horizon.
//
// A week starts with one robust LP over all T days whose planned transfers
// are rounded and committed. Each day then re-solves a short window starting
// at that day, with the plan fixed, the running secondments threaded in and
// the day's demand pinned to what was observed; only that day's deployment
// is kept.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "redeploy/core.hpp"
#include "redeploy/ldr.hpp"
#include "redeploy/random.hpp"
#include "redeploy/uncertainty.hpp"

namespace redeploy::planner {

using core::DeploymentAction;
using core::NetworkConfig;
using core::TransferPlan;

// ---- rounding --------------------------------------------------------------

enum class RoundingMode { Randomized, Floor, None };

const char* to_string(RoundingMode m);
RoundingMode rounding_mode_from_string(const std::string& s);

// floor(v) + Bernoulli(frac(v)) per entry, independently. Throws
// ArgumentError on negative or non-finite input.
std::vector<double> randomized_round(const std::vector<double>& fractional, Rng& rng);

// Rounds a weekly plan and repairs the rolling capacity windows: while a
// window is over capacity, the rounded-up entry in it with the smallest
// fractional part loses one nurse. Tiny negatives from the solver are
// treated as zero.
TransferPlan round_plan(const NetworkConfig& net, const TransferPlan& fractional, int horizon, RoundingMode mode,
                        Rng& rng);

// Same for one day's deployment given the nurses already away.
DeploymentAction round_action(const NetworkConfig& net, const DeploymentAction& fractional,
                              const core::SecondmentState& state, RoundingMode mode, Rng& rng);

// ---- planning --------------------------------------------------------------

struct PlannerSettings {
  int horizon = 7;
  bool clip_support = true;
  RoundingMode rounding = RoundingMode::Randomized;
  lp::SolverOptions solver;
};

struct WeekPlan {
  TransferPlan fractional;
  TransferPlan plan;  // rounded and capacity feasible
  double lp_objective = 0.0;
  lp::SolverReport report;
};

// Robust weekly plan for one training set at radius eps. `net.capacity`
// holds the week's capacities; the week starts with nobody away.
WeekPlan plan_week(const NetworkConfig& net, const core::CostParams& costs,
                   const uncertainty::SamplePathSet& training, double eps, const PlannerSettings& settings,
                   Rng& rng);

// One plan per training set, each with its own child stream of `seed`.
std::vector<WeekPlan> plan_week_sets(const NetworkConfig& net, const core::CostParams& costs,
                                     const std::vector<uncertainty::SamplePathSet>& sets, double eps,
                                     const PlannerSettings& settings, std::uint64_t seed);

// min(omega_max, T - t): days covered by the re-solve on day t.
int subhorizon_length(const NetworkConfig& net, int t, int horizon);

struct DayDecision {
  DeploymentAction fractional;
  DeploymentAction action;
  int subhorizon = 0;
  lp::SolverReport report;
};

// Re-solves days [t, t + S) with the week plan fixed. `fresh` holds paths of
// at least S days starting at day t; their first day is replaced by the
// observation. Returns the rounded, capacity-feasible action for day t.
DayDecision deploy_day(const NetworkConfig& net, const core::CostParams& costs, const TransferPlan& week_plan,
                       const core::SecondmentState& state, int t, const std::vector<double>& observed,
                       const uncertainty::SamplePathSet& fresh, double eps, const PlannerSettings& settings,
                       Rng& rng);

// ---- one week, one trajectory ----------------------------------------------

// Everything a week needs that does not depend on the decisions taken.
struct WeekInputs {
  NetworkConfig network;  // capacity set to the week's values
  core::CostParams costs;
  core::DemandPath realized;                         // T days of true demand
  uncertainty::SamplePathSet plan_training;          // T-day paths for the plan
  std::vector<uncertainty::SamplePathSet> daily;     // per day t, paths starting at t
  std::uint64_t rounding_seed = 0;                   // shared by every candidate radius
};

struct DayRecord {
  int day = 0;
  std::vector<double> demand;
  DeploymentAction planned;
  DeploymentAction deployed;
  std::vector<double> imbalance;
  double planned_cost = 0.0;
  core::DeploymentCost cost;
  int subhorizon = 0;
};

struct WeekOutcome {
  int week = 0;
  double epsilon = 0.0;
  std::vector<double> capacity;
  TransferPlan fractional_plan;
  TransferPlan plan;
  std::vector<DayRecord> days;
  double coordination_cost = 0.0;

  double planned_cost() const;
  double emergency_cost() const;
  double cancellation_cost() const;
  double shortage_cost() const;
  double total_cost() const;
};

// Plans and deploys one week against the realized demand.
WeekOutcome run_week(const WeekInputs& in, double eps, const PlannerSettings& settings);

// True when some allowed arc joins two sites other than the hub, so nurses
// must know more than one away site. Such weeks carry the coordination fee.
bool needs_coordination(const NetworkConfig& net);

// ---- robust radius ---------------------------------------------------------

struct RobustParamSchedule {
  bool adaptive = true;
  double fixed_epsilon = 0.0;  // used when not adaptive
  double initial = 0.0;        // radius of the first week
  double upsilon = 2.0;        // widens the candidate range
  double step = 5.0;           // spacing of candidates
};

// (prev - step*upsilon)^+ , ... , prev + step*upsilon in increments of step.
std::vector<double> candidate_grid(double prev_eps, double upsilon, double step = 5.0);

struct RadiusChoice {
  double epsilon = 0.0;
  std::vector<double> candidates;
  std::vector<double> costs;  // retrospective week cost per candidate
};

// Re-runs the previous week under every candidate radius and keeps the
// cheapest, ties going to the smaller radius. `known` may carry the
// already-measured cost for prev_eps so that run is skipped.
RadiusChoice select_robust_param(double prev_eps, const RobustParamSchedule& schedule, const WeekInputs& prev_week,
                                 const PlannerSettings& settings, const double* known_prev_cost = nullptr);

// Same search with the retrospective cost supplied by the caller.
RadiusChoice select_robust_param(double prev_eps, const RobustParamSchedule& schedule,
                                 const std::function<double(double)>& week_cost);

// Outcomes of already simulated (week, radius) pairs for one trajectory's
// inputs. A week starts with nobody away, so its outcome depends only on its
// inputs and the radius; runs that share inputs may share a cache.
class WeekCache {
 public:
  const WeekOutcome* find(int week, double eps) const;
  const WeekOutcome& put(int week, double eps, WeekOutcome outcome);
  std::size_t size() const { return map_.size(); }
  std::size_t hits() const { return hits_; }

 private:
  static std::pair<int, long long> key(int week, double eps);
  std::map<std::pair<int, long long>, WeekOutcome> map_;
  mutable std::size_t hits_ = 0;
};

// ---- full horizon ----------------------------------------------------------

struct Trajectory {
  std::vector<WeekOutcome> weeks;
  std::vector<RadiusChoice> radius;  // one per week, empty candidates in week 1
};

using WeekInputProvider = std::function<WeekInputs(int week)>;

// Weeks are 0-based. Inputs for week w are requested once and kept for the
// retrospective radius search in week w + 1.
Trajectory run_horizon(const WeekInputProvider& inputs, int weeks, const RobustParamSchedule& schedule,
                       const PlannerSettings& settings, WeekCache* cache = nullptr);

// Line-delimited JSON: one record per (week, day, arc) with any planned or
// deployed nurse, one per (week, day, location) and one cost summary per day.
void write_audit_trail(std::ostream& os, const Trajectory& traj, const NetworkConfig& net,
                       const std::string& tag = "");

}  // namespace redeploy::planner
