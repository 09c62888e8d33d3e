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

#include "redeploy/planner.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include "json.hpp"
#include "redeploy/errors.hpp"

namespace redeploy::planner {

using core::DemandPath;
using uncertainty::SamplePathSet;

namespace {

SamplePathSet truncated(const SamplePathSet& in, int days) {
  SamplePathSet out{days, in.num_locations, {}};
  out.paths.reserve(in.paths.size());
  for (const auto& p : in.paths) out.paths.push_back(p.window(0, days));
  return out;
}

}  // namespace

WeekPlan plan_week(const NetworkConfig& net, const core::CostParams& costs, const SamplePathSet& training, double eps,
                   const PlannerSettings& settings, Rng& rng) {
  const int T = settings.horizon;
  training.validate();
  if (training.paths.empty()) throw ArgumentError("plan_week: no training paths");
  if (training.days < T) throw ArgumentError("plan_week: training paths are shorter than the horizon");
  if (training.num_locations != net.num_locations) throw ArgumentError("plan_week: training paths do not match the network");

  lp::LdrProblem pb;
  pb.network = net;
  pb.costs = costs;
  pb.horizon = T;
  pb.first_day = 0;
  pb.boxes = uncertainty::build_uncertainty_sets(truncated(training, T), eps, settings.clip_support);
  pb.state = core::empty_state(net);
  auto res = lp::solve_ldr(pb, settings.solver);

  WeekPlan out;
  out.fractional = res.solution.a;
  out.lp_objective = res.solution.objective_value;
  out.report = res.report;
  out.plan = round_plan(net, out.fractional, T, settings.rounding, rng);
  return out;
}

std::vector<WeekPlan> plan_week_sets(const NetworkConfig& net, const core::CostParams& costs,
                                     const std::vector<SamplePathSet>& sets, double eps,
                                     const PlannerSettings& settings, std::uint64_t seed) {
  std::vector<WeekPlan> out;
  for (std::size_t m = 0; m < sets.size(); ++m) {
    Rng rng = make_rng(seed, {m});
    try {
      out.push_back(plan_week(net, costs, sets[m], eps, settings, rng));
    } catch (const RuntimeFailure& e) {
      throw RuntimeFailure("training set " + std::to_string(m) + ": " + e.what());
    }
  }
  return out;
}

int subhorizon_length(const NetworkConfig& net, int t, int horizon) {
  if (t < 0 || t >= horizon) throw ArgumentError("subhorizon_length: day outside the horizon");
  return std::min(net.max_secondment(), horizon - t);
}

DayDecision deploy_day(const NetworkConfig& net, const core::CostParams& costs, const TransferPlan& week_plan,
                       const core::SecondmentState& state, int t, const std::vector<double>& observed,
                       const SamplePathSet& fresh, double eps, const PlannerSettings& settings, Rng& rng) {
  const int T = settings.horizon, L = net.num_locations;
  const int S = subhorizon_length(net, t, T);
  if (static_cast<int>(observed.size()) != L) throw ArgumentError("deploy_day: observation does not match the network");
  if (week_plan.days() != T || week_plan.num_locations() != L) throw ArgumentError("deploy_day: plan does not cover the week");
  if (fresh.paths.empty()) throw ArgumentError("deploy_day: no training paths for the re-solve");
  if (fresh.days < S || fresh.num_locations != L) throw ArgumentError("deploy_day: training paths do not cover the window");

  SamplePathSet window = truncated(fresh, S);
  for (auto& p : window.paths)
    for (int i = 0; i < L; ++i) p.at(0, i) = observed[i];

  lp::LdrProblem pb;
  pb.network = net;
  pb.costs = costs;
  pb.horizon = T;
  pb.first_day = t;
  pb.boxes = uncertainty::build_uncertainty_sets(window, eps, settings.clip_support);
  for (auto& box : pb.boxes) {
    for (int i = 0; i < L; ++i) {
      box.lower.at(0, i) = observed[i];
      box.upper.at(0, i) = observed[i];
    }
  }
  pb.state = state;
  TransferPlan fixed(S, L);
  for (int s = 0; s < S; ++s) core::set_day_slice(fixed, s, core::day_slice(week_plan, t + s));
  pb.fixed_plan = fixed;

  auto res = lp::solve_ldr(pb, settings.solver);
  DemandPath realized(S, L);
  for (int i = 0; i < L; ++i) realized.at(0, i) = observed[i];

  DayDecision out;
  out.subhorizon = S;
  out.report = res.report;
  out.fractional = lp::evaluate_ldr(res.solution, realized, 0);
  for (double& v : out.fractional.data()) v = std::max(v, 0.0);
  out.action = round_action(net, out.fractional, state, settings.rounding, rng);
  return out;
}

double WeekOutcome::planned_cost() const {
  double s = 0.0;
  for (const auto& d : days) s += d.planned_cost;
  return s;
}
double WeekOutcome::emergency_cost() const {
  double s = 0.0;
  for (const auto& d : days) s += d.cost.emergency;
  return s;
}
double WeekOutcome::cancellation_cost() const {
  double s = 0.0;
  for (const auto& d : days) s += d.cost.cancellation;
  return s;
}
double WeekOutcome::shortage_cost() const {
  double s = 0.0;
  for (const auto& d : days) s += d.cost.shortage;
  return s;
}
double WeekOutcome::total_cost() const {
  return planned_cost() + emergency_cost() + cancellation_cost() + shortage_cost() + coordination_cost;
}

bool needs_coordination(const NetworkConfig& net) {
  for (const auto& a : net.arcs())
    if (a.from != net.hub && a.to != net.hub) return true;
  return false;
}

WeekOutcome run_week(const WeekInputs& in, double eps, const PlannerSettings& settings) {
  const NetworkConfig& net = in.network;
  const int T = settings.horizon;
  if (in.realized.days() < T) throw ArgumentError("run_week: realized demand is shorter than the week");
  if (static_cast<int>(in.daily.size()) < T) throw ArgumentError("run_week: missing daily training paths");

  Rng rng(in.rounding_seed);
  WeekOutcome out;
  out.epsilon = eps;
  out.capacity = net.capacity;
  WeekPlan plan;
  try {
    plan = plan_week(net, in.costs, in.plan_training, eps, settings, rng);
  } catch (const RuntimeFailure& e) {
    throw RuntimeFailure(std::string("weekly plan: ") + e.what());
  }
  out.fractional_plan = plan.fractional;
  out.plan = plan.plan;

  core::SecondmentState state = core::empty_state(net);
  for (int t = 0; t < T; ++t) {
    DayRecord rec;
    rec.day = t;
    rec.demand = in.realized.day(t);
    rec.planned = core::day_slice(out.plan, t);
    DayDecision dd;
    try {
      dd = deploy_day(net, in.costs, out.plan, state, t, rec.demand, in.daily[t], eps, settings, rng);
    } catch (const RuntimeFailure& e) {
      throw RuntimeFailure("day " + std::to_string(t) + ": " + e.what());
    }
    rec.deployed = dd.action;
    rec.subhorizon = dd.subhorizon;
    rec.imbalance = core::imbalance(net, state, rec.deployed, rec.demand);
    rec.planned_cost = core::planned_cost(net, in.costs, rec.planned, t, T);
    rec.cost = core::deployment_cost(net, in.costs, rec.planned, rec.deployed, rec.imbalance, t, T);
    state = core::advance_state(net, state, rec.deployed, t, T);
    out.days.push_back(std::move(rec));
  }
  if (!state.empty()) throw RuntimeFailure("run_week: secondments outlive the week");
  out.coordination_cost = needs_coordination(net) ? in.costs.coordination_cost : 0.0;
  return out;
}

std::vector<double> candidate_grid(double prev_eps, double upsilon, double step) {
  if (!(step > 0.0) || !(upsilon >= 0.0) || !(prev_eps >= 0.0)) {
    throw ArgumentError("candidate_grid: need step > 0, upsilon >= 0 and a nonnegative radius");
  }
  const double lo = std::max(prev_eps - step * upsilon, 0.0);
  const double hi = prev_eps + step * upsilon;
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double v = lo + step * k;
    if (v > hi + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

RadiusChoice select_robust_param(double prev_eps, const RobustParamSchedule& schedule,
                                 const std::function<double(double)>& week_cost) {
  RadiusChoice rc;
  rc.candidates = candidate_grid(prev_eps, schedule.upsilon, schedule.step);
  double best = 0.0;
  for (std::size_t k = 0; k < rc.candidates.size(); ++k) {
    const double c = rc.candidates[k];
    double cost;
    try {
      cost = week_cost(c);
    } catch (const RuntimeFailure& e) {
      throw RuntimeFailure("radius candidate " + std::to_string(c) + ": " + e.what());
    }
    rc.costs.push_back(cost);
    if (k == 0 || cost < best) {
      best = cost;
      rc.epsilon = c;
    }
  }
  return rc;
}

RadiusChoice select_robust_param(double prev_eps, const RobustParamSchedule& schedule, const WeekInputs& prev_week,
                                 const PlannerSettings& settings, const double* known_prev_cost) {
  return select_robust_param(prev_eps, schedule, [&](double c) {
    if (known_prev_cost && std::abs(c - prev_eps) < 1e-12) return *known_prev_cost;
    return run_week(prev_week, c, settings).total_cost();
  });
}

std::pair<int, long long> WeekCache::key(int week, double eps) {
  return {week, std::llround(eps * 1e6)};
}

const WeekOutcome* WeekCache::find(int week, double eps) const {
  auto it = map_.find(key(week, eps));
  if (it == map_.end()) return nullptr;
  ++hits_;
  return &it->second;
}

const WeekOutcome& WeekCache::put(int week, double eps, WeekOutcome outcome) {
  return map_.insert_or_assign(key(week, eps), std::move(outcome)).first->second;
}

Trajectory run_horizon(const WeekInputProvider& inputs, int weeks, const RobustParamSchedule& schedule,
                       const PlannerSettings& settings, WeekCache* cache) {
  WeekCache local;
  WeekCache& memo = cache ? *cache : local;
  auto outcome = [&](int w, const WeekInputs& in, double e) -> const WeekOutcome& {
    if (const WeekOutcome* hit = memo.find(w, e)) return *hit;
    WeekOutcome out = run_week(in, e, settings);
    out.week = w;
    return memo.put(w, e, std::move(out));
  };

  Trajectory tr;
  double eps = schedule.adaptive ? schedule.initial : schedule.fixed_epsilon;
  std::optional<WeekInputs> prev;
  for (int w = 0; w < weeks; ++w) {
    try {
      RadiusChoice rc;
      if (schedule.adaptive && prev) {
        rc = select_robust_param(eps, schedule, [&](double c) { return outcome(w - 1, *prev, c).total_cost(); });
        eps = rc.epsilon;
      } else {
        rc.epsilon = eps;
      }
      WeekInputs in = inputs(w);
      tr.weeks.push_back(outcome(w, in, eps));
      prev = std::move(in);
      tr.radius.push_back(std::move(rc));
    } catch (const RuntimeFailure& e) {
      throw RuntimeFailure("week " + std::to_string(w) + ": " + e.what());
    }
  }
  return tr;
}

void write_audit_trail(std::ostream& os, const Trajectory& traj, const NetworkConfig& net, const std::string& tag) {
  using nlohmann::json;
  for (const auto& wk : traj.weeks) {
    const int T = static_cast<int>(wk.days.size());
    for (const auto& d : wk.days) {
      for (const auto& a : net.arcs()) {
        const double pl = d.planned.at(a.from, a.to), dep = d.deployed.at(a.from, a.to);
        if (pl == 0.0 && dep == 0.0) continue;
        const int mu = core::secondment_length(net, a.from, a.to, d.day, T);
        const double tau = net.transfer_bonus(a.from, a.to);
        json rec;
        if (!tag.empty()) rec["run"] = tag;
        rec["week"] = wk.week;
        rec["day"] = d.day;
        rec["from"] = a.from;
        rec["to"] = a.to;
        rec["planned"] = pl;
        rec["deployed"] = dep;
        rec["emergency"] = std::max(dep - pl, 0.0);
        rec["cancelled"] = std::max(pl - dep, 0.0);
        rec["secondment_days"] = mu;
        rec["transfer_bonus"] = tau;
        os << rec.dump() << '\n';
      }
      for (int i = 0; i < net.num_locations; ++i) {
        json rec;
        if (!tag.empty()) rec["run"] = tag;
        rec["week"] = wk.week;
        rec["day"] = d.day;
        rec["location"] = i;
        rec["demand"] = d.demand[i];
        rec["imbalance"] = d.imbalance[i];
        rec["shortage"] = std::max(d.imbalance[i], 0.0);
        os << rec.dump() << '\n';
      }
      json day;
      if (!tag.empty()) day["run"] = tag;
      day["week"] = wk.week;
      day["day"] = d.day;
      day["epsilon"] = wk.epsilon;
      day["planned_cost"] = d.planned_cost;
      day["emergency_cost"] = d.cost.emergency;
      day["cancellation_cost"] = d.cost.cancellation;
      day["shortage_cost"] = d.cost.shortage;
      os << day.dump() << '\n';
    }
  }
}

}  // namespace redeploy::planner
