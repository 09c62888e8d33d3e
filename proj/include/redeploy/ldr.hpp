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

// Sample-robust transfer model with affine decision rules.
//
// Deployment b, emergency excess x and shortage y are affine in the demand
// observed so far. Each robust constraint "alpha + beta . zeta <= 0 on every
// box" is dualized with one (nu, psi) pair per demand coordinate, shared by
// all boxes, where nu - psi = beta and the box term is nu . upper - psi . lower.
// The objective's worst case is handled the same way, so no epigraph
// variables are needed.
//
// Demand coordinates that are identical across every box (for example an
// observed day pinned to its realized value) carry no rule coefficients; the
// intercepts absorb them.

#pragma once

#include <optional>
#include <vector>

#include "redeploy/core.hpp"
#include "redeploy/linear_program.hpp"
#include "redeploy/uncertainty.hpp"

namespace redeploy::lp {

struct LdrProblem {
  core::NetworkConfig network;
  core::CostParams costs;
  int horizon = 7;    // week length, fixes the truncation of secondments
  int first_day = 0;  // week day of the first modelled day
  std::vector<uncertainty::UncertaintyBox> boxes;  // all cover the modelled days
  core::SecondmentState state;                     // secondments running at first_day
  std::optional<core::TransferPlan> fixed_plan;    // planned transfers for the modelled days

  int days() const { return boxes.empty() ? 0 : boxes.front().days(); }
};

struct AffineRule {
  double intercept = 0.0;
  std::vector<double> coef;  // one entry per (day, location) coordinate, day-major

  double eval(const core::DemandPath& zeta) const;
};

enum class DualFamily { Epigraph, Capacity, Shortage, Emergency, NonnegB, NonnegX, NonnegY };
const char* to_string(DualFamily f);

struct DualBlock {
  DualFamily family = DualFamily::Epigraph;
  int t = -1, i = -1, j = -1;  // owning constraint; -1 where not applicable
  std::vector<int> dims;       // coordinate index day * L + location
  std::vector<double> nu, psi;
};

struct LdrSolution {
  int days = 0;
  int num_locations = 0;
  int first_day = 0;
  int horizon = 0;
  std::vector<core::Arc> arcs;
  core::TransferPlan a;
  std::vector<AffineRule> b, x;  // index t * arcs.size() + arc
  std::vector<AffineRule> y;     // index t * L + location
  std::vector<int> active_dims;  // coordinates that carry coefficients
  std::vector<DualBlock> duals;  // filled when requested
  double objective_value = 0.0;

  const AffineRule& b_rule(int t, int arc) const { return b[static_cast<std::size_t>(t) * arcs.size() + arc]; }
  const AffineRule& x_rule(int t, int arc) const { return x[static_cast<std::size_t>(t) * arcs.size() + arc]; }
  const AffineRule& y_rule(int t, int i) const { return y[static_cast<std::size_t>(t) * num_locations + i]; }
};

// Built LP plus the bookkeeping needed to read a solution back.
class LdrModel {
 public:
  LinearProgram lp;

  LdrSolution extract(const std::vector<double>& x, bool with_duals = false) const;

 private:
  friend LdrModel build_sro_ldr_lp(const LdrProblem& problem);
  struct DualRecord {
    DualFamily family;
    int t, i, j;
    std::vector<int> dims, nu_vars, psi_vars;
  };
  int days_ = 0, L_ = 0, first_day_ = 0, horizon_ = 0;
  std::vector<core::Arc> arcs_;
  std::vector<int> active_;       // active coordinates
  std::vector<int> active_upto_;  // #active coordinates with day <= t
  std::vector<int> a_var_;        // -1 when the plan is fixed
  std::vector<double> a_fixed_;
  std::vector<int> b0_, x0_, y0_;     // intercept variables
  std::vector<int> b1_, x1_, y1_;     // first coefficient variable, contiguous per rule
  std::vector<DualRecord> dual_records_;
};

LdrModel build_sro_ldr_lp(const LdrProblem& problem);

struct LdrSolveResult {
  LdrSolution solution;
  SolverReport report;
};

// Builds and solves; throws RuntimeFailure unless the LP solves to optimality.
LdrSolveResult solve_ldr(const LdrProblem& problem, const SolverOptions& options = {}, bool with_duals = false);

// Deployment rule values for modelled day t given the realized demand of the
// modelled days. Entries can be negative or infeasible; callers repair them.
core::DeploymentAction evaluate_ldr(const LdrSolution& sol, const core::DemandPath& realized, int t);

// Average over boxes of the worst case, found by enumerating every corner,
// of the cost under the solution's rules, plus the planned cost.
double worst_case_objective_oracle(const LdrSolution& sol, const LdrProblem& problem);

// Scenario form with rules evaluated at each sample point. Requires
// zero-width boxes; its optimum equals the robust model's at zero radius.
LinearProgram build_saa_scenario_lp(const LdrProblem& problem);

}  // namespace redeploy::lp
