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

#include "redeploy/linear_program.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "Highs.h"
#include "redeploy/errors.hpp"

namespace redeploy::lp {

int LinearProgram::add_variable(std::string name, double lower, double upper, double objective) {
  const int id = num_variables();
  var_names_.push_back(std::move(name));
  lower_.push_back(lower);
  upper_.push_back(upper);
  obj_.push_back(objective);
  if (!name_index_.empty()) name_index_.emplace(var_names_.back(), id);
  return id;
}

int LinearProgram::add_constraint(std::string name, const std::vector<Term>& terms, Sense sense, double rhs) {
  const int id = num_constraints();
  row_names_.push_back(std::move(name));
  sense_.push_back(sense);
  rhs_.push_back(rhs);
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    row_index_.push_back(t.var);
    row_value_.push_back(t.coef);
  }
  row_start_.push_back(row_index_.size());
  return id;
}

std::optional<int> LinearProgram::find_variable(const std::string& name) const {
  if (name_index_.empty()) {
    for (int v = 0; v < num_variables(); ++v) name_index_.emplace(var_names_[v], v);
  }
  auto it = name_index_.find(name);
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

void LinearProgram::validate() const {
  for (int v = 0; v < num_variables(); ++v) {
    if (std::isnan(lower_[v]) || std::isnan(upper_[v]) || lower_[v] > upper_[v]) {
      throw ArgumentError("variable " + var_names_[v] + " has crossed or undefined bounds");
    }
    if (!std::isfinite(obj_[v])) throw ArgumentError("variable " + var_names_[v] + " has a non-finite cost");
  }
  for (std::size_t k = 0; k < row_index_.size(); ++k) {
    if (row_index_[k] < 0 || row_index_[k] >= num_variables()) {
      throw ArgumentError("constraint references an unregistered variable index " + std::to_string(row_index_[k]));
    }
    if (!std::isfinite(row_value_[k])) throw ArgumentError("constraint holds a non-finite coefficient");
  }
  for (int r = 0; r < num_constraints(); ++r) {
    if (!std::isfinite(rhs_[r])) throw ArgumentError("constraint " + row_names_[r] + " has a non-finite right-hand side");
  }
}

double LinearProgram::evaluate_objective(const std::vector<double>& x) const {
  double s = offset_;
  for (int v = 0; v < num_variables(); ++v) s += obj_[v] * x[v];
  return s;
}

double LinearProgram::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int v = 0; v < num_variables(); ++v) {
    worst = std::max(worst, lower_[v] - x[v]);
    worst = std::max(worst, x[v] - upper_[v]);
  }
  for (int r = 0; r < num_constraints(); ++r) {
    double lhs = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) lhs += row_value_[k] * x[row_index_[k]];
    const double gap = lhs - rhs_[r];
    switch (sense_[r]) {
      case Sense::LessEqual: worst = std::max(worst, gap); break;
      case Sense::GreaterEqual: worst = std::max(worst, -gap); break;
      case Sense::Equal: worst = std::max(worst, std::abs(gap)); break;
    }
  }
  return worst;
}

namespace {

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void emit_linear(std::ostringstream& os, const std::vector<std::pair<int, double>>& terms,
                 const std::vector<std::string>& names) {
  int on_line = 0;
  bool first = true;
  for (const auto& [v, c] : terms) {
    if (c == 0.0) continue;
    os << (c < 0 ? " - " : (first ? " " : " + ")) << fmt_num(std::abs(c)) << " " << names[v];
    first = false;
    if (++on_line == 6) {
      os << "\n   ";
      on_line = 0;
    }
  }
  if (first) os << " 0 " << (names.empty() ? std::string("x") : names[0]);
}

}  // namespace

std::string LinearProgram::to_lp_format() const {
  std::ostringstream os;
  os << "\\ redeploy model: " << num_variables() << " variables, " << num_constraints() << " constraints\n";
  if (offset_ != 0.0) os << "\\ objective offset " << fmt_num(offset_) << "\n";
  os << "Minimize\n obj:";
  std::vector<std::pair<int, double>> terms;
  for (int v = 0; v < num_variables(); ++v)
    if (obj_[v] != 0.0) terms.emplace_back(v, obj_[v]);
  emit_linear(os, terms, var_names_);
  os << "\nSubject To\n";
  for (int r = 0; r < num_constraints(); ++r) {
    terms.clear();
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) terms.emplace_back(row_index_[k], row_value_[k]);
    os << " " << row_names_[r] << ":";
    emit_linear(os, terms, var_names_);
    os << (sense_[r] == Sense::LessEqual ? " <= " : sense_[r] == Sense::Equal ? " = " : " >= ") << fmt_num(rhs_[r])
       << "\n";
  }
  os << "Bounds\n";
  for (int v = 0; v < num_variables(); ++v) {
    const bool lo_inf = std::isinf(lower_[v]), up_inf = std::isinf(upper_[v]);
    if (lo_inf && up_inf) {
      os << " " << var_names_[v] << " free\n";
    } else if (lower_[v] == upper_[v]) {
      os << " " << var_names_[v] << " = " << fmt_num(lower_[v]) << "\n";
    } else {
      os << " " << (lo_inf ? std::string("-inf") : fmt_num(lower_[v])) << " <= " << var_names_[v] << " <= "
         << (up_inf ? std::string("+inf") : fmt_num(upper_[v])) << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration-limit";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

LpResult solve(const LinearProgram& lp, const SolverOptions& options) {
  lp.validate();
  const auto start = std::chrono::steady_clock::now();
  LpResult result;
  const int n = lp.num_variables();
  const int m = lp.num_constraints();

  if (n == 0) {
    bool feasible = true;
    for (int r = 0; r < m; ++r) {
      const double rhs = lp.rhs(r);
      if ((lp.sense(r) == Sense::LessEqual && rhs < 0) || (lp.sense(r) == Sense::GreaterEqual && rhs > 0) ||
          (lp.sense(r) == Sense::Equal && rhs != 0)) {
        feasible = false;
      }
    }
    result.report.status = feasible ? SolveStatus::Optimal : SolveStatus::Infeasible;
    result.report.objective = lp.objective_offset();
    return result;
  }

  HighsLp model;
  model.num_col_ = n;
  model.num_row_ = m;
  model.offset_ = lp.objective_offset();
  model.sense_ = ObjSense::kMinimize;
  model.col_cost_.resize(n);
  model.col_lower_.resize(n);
  model.col_upper_.resize(n);
  for (int v = 0; v < n; ++v) {
    model.col_cost_[v] = lp.objective(v);
    model.col_lower_[v] = std::isinf(lp.lower(v)) ? -kHighsInf : lp.lower(v);
    model.col_upper_[v] = std::isinf(lp.upper(v)) ? kHighsInf : lp.upper(v);
  }
  model.row_lower_.resize(m);
  model.row_upper_.resize(m);
  auto& A = model.a_matrix_;
  A.format_ = MatrixFormat::kRowwise;
  A.num_col_ = n;
  A.num_row_ = m;
  A.start_.resize(m + 1);
  A.index_.resize(lp.num_nonzeros());
  A.value_.resize(lp.num_nonzeros());
  for (int r = 0; r < m; ++r) {
    const double rhs = lp.rhs(r);
    model.row_lower_[r] = lp.sense(r) == Sense::LessEqual ? -kHighsInf : rhs;
    model.row_upper_[r] = lp.sense(r) == Sense::GreaterEqual ? kHighsInf : rhs;
    A.start_[r] = static_cast<HighsInt>(lp.row_start(r));
  }
  A.start_[m] = static_cast<HighsInt>(lp.num_nonzeros());
  for (std::size_t k = 0; k < lp.num_nonzeros(); ++k) {
    A.index_[k] = lp.term_var(k);
    A.value_[k] = lp.term_coef(k);
  }

  Highs highs;
  highs.setOptionValue("output_flag", options.verbose);
  highs.setOptionValue("threads", 1);
  highs.setOptionValue("random_seed", static_cast<HighsInt>(options.random_seed));
  highs.setOptionValue("primal_feasibility_tolerance", options.feasibility_tolerance);
  highs.setOptionValue("dual_feasibility_tolerance", options.optimality_tolerance);
  highs.setOptionValue("simplex_iteration_limit", static_cast<HighsInt>(options.iteration_limit));
  highs.setOptionValue("time_limit", options.time_limit_seconds);
  highs.setOptionValue("presolve", options.presolve ? std::string("on") : std::string("off"));
  // Dual simplex stalls on the larger robust models where the interior point
  // code takes a few dozen iterations. Crossover keeps the answer a vertex.
  SolverMethod method = options.method;
  if (method == SolverMethod::Auto) method = n > options.ipm_threshold ? SolverMethod::Ipm : SolverMethod::Simplex;
  highs.setOptionValue("solver", std::string(method == SolverMethod::Ipm ? "ipm" : "simplex"));
  if (method == SolverMethod::Ipm) highs.setOptionValue("run_crossover", std::string("on"));
  if (highs.passModel(std::move(model)) == HighsStatus::kError) {
    throw RuntimeFailure("LP solver rejected the model");
  }
  highs.run();

  const HighsModelStatus ms = highs.getModelStatus();
  const HighsInfo& info = highs.getInfo();
  SolverReport& rep = result.report;
  rep.iterations = info.simplex_iteration_count + info.ipm_iteration_count;
  switch (ms) {
    case HighsModelStatus::kOptimal: rep.status = SolveStatus::Optimal; break;
    case HighsModelStatus::kModelEmpty: rep.status = SolveStatus::Optimal; break;
    case HighsModelStatus::kInfeasible: rep.status = SolveStatus::Infeasible; break;
    case HighsModelStatus::kUnbounded:
    case HighsModelStatus::kUnboundedOrInfeasible: rep.status = SolveStatus::Unbounded; break;
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kTimeLimit: rep.status = SolveStatus::IterationLimit; break;
    default: rep.status = SolveStatus::Error; break;
  }
  if (rep.status == SolveStatus::Optimal) {
    result.x = highs.getSolution().col_value;
    result.x.resize(n, 0.0);
    rep.objective = lp.evaluate_objective(result.x);
    rep.primal_residual = lp.max_violation(result.x);
  }
  rep.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace redeploy::lp
