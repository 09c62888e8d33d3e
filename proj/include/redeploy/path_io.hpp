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

// CSV files for simulated datasets.
//
//   demand:   path_id,location,day,value
//   capacity: path_id,location,week,value   (weeks from 1)
//   flows:    path_id,day,location,unit,census,admitted,to_MS,to_PCU,to_ICU,discharged
//
// The flows file carries everything needed to rebuild a testing path, so a
// run can be pinned to a frozen dataset.

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "redeploy/core.hpp"
#include "redeploy/simulator.hpp"

namespace redeploy::io {

// Shortest text that reads back to the same double.
std::string format_number(double v);

// Demand rows for days [first_day, first_day + path.days()).
void write_demand_csv(std::ostream& os, const std::vector<core::DemandPath>& paths, int first_day,
                      bool header = true);

struct DemandTable {
  int first_day = 0;
  std::vector<core::DemandPath> paths;  // by path_id
};
DemandTable read_demand_csv(std::istream& is);

// capacity[path][week][location]
using CapacityTable = std::vector<std::vector<std::vector<double>>>;
void write_capacity_csv(std::ostream& os, const CapacityTable& capacity, bool header = true);
CapacityTable read_capacity_csv(std::istream& is);

void write_flows_csv(std::ostream& os, const std::vector<sim::PatientFlowRecord>& records, bool header = true);
std::vector<sim::PatientFlowRecord> read_flows_csv(std::istream& is);

// File wrappers; throw RuntimeFailure when the file cannot be opened.
void save_flows(const std::string& path, const std::vector<sim::PatientFlowRecord>& records);
std::vector<sim::PatientFlowRecord> load_flows(const std::string& path);

}  // namespace redeploy::io
