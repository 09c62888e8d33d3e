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

// A small sparse LP container plus a solver entry point. The container keeps
// names so models can be exported and inspected; the solve itself is
// delegated to HiGHS with deterministic single-threaded settings.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace redeploy::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
  int var = 0;
  double coef = 0.0;
};

class LinearProgram {
 public:
  int add_variable(std::string name, double lower, double upper, double objective = 0.0);
  int add_constraint(std::string name, const std::vector<Term>& terms, Sense sense, double rhs);

  void add_objective(int var, double coef) { obj_[var] += coef; }
  void add_objective_offset(double c) { offset_ += c; }

  int num_variables() const { return static_cast<int>(lower_.size()); }
  int num_constraints() const { return static_cast<int>(rhs_.size()); }
  std::size_t num_nonzeros() const { return row_index_.size(); }

  const std::string& variable_name(int v) const { return var_names_[v]; }
  const std::string& constraint_name(int r) const { return row_names_[r]; }
  std::optional<int> find_variable(const std::string& name) const;

  double lower(int v) const { return lower_[v]; }
  double upper(int v) const { return upper_[v]; }
  double objective(int v) const { return obj_[v]; }
  double objective_offset() const { return offset_; }
  Sense sense(int r) const { return sense_[r]; }
  double rhs(int r) const { return rhs_[r]; }
  // Row r occupies [row_start(r), row_start(r+1)) in the term arrays.
  std::size_t row_start(int r) const { return row_start_[r]; }
  int term_var(std::size_t k) const { return row_index_[k]; }
  double term_coef(std::size_t k) const { return row_value_[k]; }

  // Throws ArgumentError on dangling indices or crossed bounds.
  void validate() const;

  double evaluate_objective(const std::vector<double>& x) const;
  // Largest bound or row violation at x (0 when feasible).
  double max_violation(const std::vector<double>& x) const;

  // CPLEX LP text format.
  std::string to_lp_format() const;

 private:
  std::vector<std::string> var_names_;
  std::vector<double> lower_, upper_, obj_;
  double offset_ = 0.0;
  std::vector<std::string> row_names_;
  std::vector<Sense> sense_;
  std::vector<double> rhs_;
  std::vector<std::size_t> row_start_{0};
  std::vector<int> row_index_;
  std::vector<double> row_value_;
  mutable std::unordered_map<std::string, int> name_index_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, Error };

const char* to_string(SolveStatus s);

enum class SolverMethod { Auto, Simplex, Ipm };

struct SolverOptions {
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  long iteration_limit = 10'000'000;
  double time_limit_seconds = 600.0;
  bool presolve = true;
  std::uint32_t random_seed = 0;
  SolverMethod method = SolverMethod::Auto;
  int ipm_threshold = 2000;  // Auto switches to interior point above this many columns
  bool verbose = false;
};

struct SolverReport {
  SolveStatus status = SolveStatus::Error;
  long iterations = 0;
  double solve_time = 0.0;
  double objective = 0.0;
  double primal_residual = 0.0;
};

struct LpResult {
  std::vector<double> x;
  SolverReport report;
};

LpResult solve(const LinearProgram& lp, const SolverOptions& options = {});

}  // namespace redeploy::lp
