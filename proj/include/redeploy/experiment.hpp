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

// Simulator -> planner -> evaluator loop over H testing paths and M
// training sets.
//
// Random streams, all children of the experiment seed:
//   testing path h:          child(seed, 1, h)
//   training paths (h, m):   child(child(seed, 2, h, m), day, kind)   kind 0 = weekly, 1 = daily
//   rounding (h, m):         child(child(seed, 3, h, m), week)
// None of them depend on the method, so SAA and SRO see identical data and
// SRO with every radius at zero reproduces SAA exactly.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redeploy/config.hpp"
#include "redeploy/evaluator.hpp"
#include "redeploy/path_io.hpp"
#include "redeploy/planner.hpp"
#include "redeploy/simulator.hpp"

namespace redeploy::experiment {

struct TestingData {
  std::vector<sim::PatientFlowRecord> records;  // one per testing path
  io::CapacityTable capacity;                   // [h][week][location]
};

// Simulates the H testing paths and their capacity schedules.
TestingData generate_testing_data(const config::ExperimentConfig& cfg);
// Rebuilds testing data from frozen flows; the file must hold at least H
// paths covering the history and all planned days.
TestingData testing_data_from_records(const config::ExperimentConfig& cfg, std::vector<sim::PatientFlowRecord> records);

// Rolling estimates for days 1 .. W*T of one testing path; entry d is the
// estimate used on day d + 1.
std::vector<sim::FlowEstimates> rolling_estimates(const config::ExperimentConfig& cfg,
                                                  const sim::PatientFlowRecord& record);

// Inputs of week w (0-based) for testing path h and training set m.
planner::WeekInputs week_inputs(const config::ExperimentConfig& cfg, const core::NetworkConfig& net,
                                const TestingData& data, const std::vector<sim::FlowEstimates>& estimates, int h,
                                int m, int w);

struct RunOptions {
  // Load testing flows from this file when it exists, otherwise save the
  // generated ones there.
  std::optional<std::string> freeze_paths;
  bool write_files = true;
  bool write_audit = true;
  bool keep_trajectories = false;
  std::function<void(const std::string&)> log;  // progress lines, may be empty
};

struct ExperimentResult {
  std::string network;
  std::string secondment;
  std::vector<eval::CellSummary> cells;  // one per method, in config order
  // epsilon[method][h][m][week]
  std::map<std::string, std::vector<std::vector<std::vector<double>>>> epsilon;
  // trajectories[method][h][m], only with keep_trajectories
  std::map<std::string, std::vector<std::vector<planner::Trajectory>>> trajectories;
  double wall_seconds = 0.0;
  std::size_t cache_hits = 0;

  const eval::CellSummary& cell(const std::string& method) const;
};

// Runs every (method, h, m) trajectory and, unless disabled, writes the
// output files into cfg.output_dir. A failing worker aborts the run with
// its (method, h, m, week, day) context after marking the manifest
// incomplete.
ExperimentResult run_experiment(const config::ExperimentConfig& cfg, const RunOptions& options = {});

// Writes demand.csv, capacity.csv and flows.csv for the testing paths.
TestingData simulate_datasets(const config::ExperimentConfig& cfg, const RunOptions& options = {});

// Reads metrics.csv from every input directory and writes summary.csv,
// deltas.csv and weekly_cost.csv for the combined grid into out_dir. The
// same (method, network, secondment) cell in two inputs is an error.
eval::Comparison rebuild_report(const std::vector<std::string>& input_dirs, const std::string& out_dir);

// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

const char* version();

}  // namespace redeploy::experiment
