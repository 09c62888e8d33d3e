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

// Out-of-sample metrics and comparison tables. Nothing here draws random
// numbers; results depend only on the trajectories handed in.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "redeploy/core.hpp"
#include "redeploy/planner.hpp"

namespace redeploy::eval {

struct WeeklyMetrics {
  double planned = 0.0;
  double emergency = 0.0;
  double cancellation = 0.0;      // (eta - 1) convention, <= 0
  double cancellation_fee = 0.0;  // what cancelling actually cost, >= 0
  double shortage = 0.0;
  double coordination = 0.0;
  double transfers = 0.0;
  double miles = 0.0;

  double cost() const { return planned + emergency + cancellation + shortage + coordination; }
};

// Names used in CSV files, in output order.
const std::vector<std::string>& metric_names();
// Value of a named metric; "cost" is the component sum.
double metric_value(const WeeklyMetrics& m, const std::string& name);
void set_metric(WeeklyMetrics& m, const std::string& name, double value);

struct TransferStats {
  double transfers = 0.0;
  double miles = 0.0;
};

// Every deployed nurse counts once, on the day the secondment starts.
TransferStats count_transfers_and_miles(const planner::WeekOutcome& week, const core::NetworkConfig& net);
TransferStats count_transfers_and_miles(const planner::Trajectory& traj, const core::NetworkConfig& net);

WeeklyMetrics week_metrics(const planner::WeekOutcome& week, const core::NetworkConfig& net);

// Mean over training sets m and testing paths h of week `week`.
// runs[m][h] may be null; every missing (m, h) is listed in the error.
WeeklyMetrics weekly_cost(const std::vector<std::vector<const planner::Trajectory*>>& runs, int week,
                          const core::NetworkConfig& net);

// One (method, network, secondment) cell of an experiment.
struct CellSummary {
  std::string method;
  std::string network;
  std::string secondment;
  std::vector<WeeklyMetrics> weekly;

  // Mean over weeks, optionally restricted to [first, last] (0-based).
  WeeklyMetrics aggregate() const;
  WeeklyMetrics aggregate(int first_week, int last_week) const;
};

struct ComparisonRow {
  std::string metric, network, secondment, method;
  std::optional<double> value;  // absent cell stays absent
};

struct DeltaRow {
  std::string metric;
  std::string dimension;  // "network", "method" or "secondment"
  std::string context;    // fixed coordinates, e.g. "baseline/saa"
  std::string base, alternative;
  std::optional<double> percent;  // 100 * (alternative - base) / base
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  std::vector<DeltaRow> deltas;
};

// Absent when either side is absent or the base is zero.
std::optional<double> percent_delta(std::optional<double> alternative, std::optional<double> base);

// Full grid over every network, secondment and method that appears in
// `cells`, plus deltas: fully connected vs hub and spoke, SRO vs SAA, and
// each secondment scenario vs baseline.
Comparison compare_scenarios(const std::vector<CellSummary>& cells);

// method,network,secondment,week,metric,value (weeks from 1)
void write_metrics_csv(std::ostream& os, const std::vector<CellSummary>& cells);
std::vector<CellSummary> read_metrics_csv(std::istream& is);
// metric,network,secondment,method,value
void write_summary_csv(std::ostream& os, const Comparison& cmp);
// metric,dimension,context,base,alternative,percent
void write_deltas_csv(std::ostream& os, const Comparison& cmp);
// method,network,secondment,week,cost
void write_weekly_curves_csv(std::ostream& os, const std::vector<CellSummary>& cells);

}  // namespace redeploy::eval
