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

// Experiment configuration. Files are JSON; every key is optional and the
// layout is documented in docs/config_schema.md. Loading starts from the
// built-in defaults, applies the named scenario preset, then the file.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "redeploy/core.hpp"
#include "redeploy/planner.hpp"
#include "redeploy/simulator.hpp"

namespace redeploy::config {

enum class NetworkDesign { HubAndSpoke, FullyConnected };
const char* to_string(NetworkDesign d);
NetworkDesign network_design_from_string(const std::string& s);

enum class Method { Saa, Sro };
const char* to_string(Method m);

struct NetworkSection {
  NetworkDesign design = NetworkDesign::FullyConnected;
  std::vector<std::string> locations;
  std::string hub;
  std::vector<std::vector<double>> distances;
  // Bonus rule tau_ij = tau_min + tau_per_mile * (d_ij - min distance),
  // unless an explicit matrix is given.
  double tau_min = 1.1;
  double tau_per_mile = 0.01;
  std::optional<std::vector<std::vector<double>>> transfer_bonus;
  // baseline | one_day | three_day | seven_day | custom
  std::string secondment = "baseline";
  std::optional<std::vector<std::vector<int>>> secondment_matrix;
  // Optional undirected site pairs per design that replace the default arcs.
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> arcs_by_design;
};

struct CostSection {
  double premium = 1.0;
  double emergency_multiplier = 1.6;
  double cancellation_pct = 0.05;
  double shortage_cost = 15.0;
  double coordination_cost = 0.0;
};

struct CountSection {
  int H = 30;      // testing paths
  int H_hat = 25;  // training paths, split into M sets
  int M = 5;
  int W = 27;      // weeks
  int T = 7;       // days per week
};

struct RobustSection {
  std::string schedule = "adaptive";  // adaptive | fixed
  double epsilon = 0.0;               // fixed radius
  double initial = 0.0;
  double upsilon = 2.0;
  double step = 5.0;
};

struct PlannerSection {
  std::string rounding = "randomized";
  bool clip_support = true;
  int ipm_threshold = 2000;
  double time_limit = 600.0;  // seconds per LP
};

struct ArrivalSection {
  std::vector<double> phi;
  std::vector<double> kappa_level;  // per location
  std::vector<double> dow_profile;  // per day of week, multiplies kappa_level
  std::vector<double> scale;        // c_i
  double t_start = 1.0, t_peak = 49.0, t_end = 119.0, c_peak = 1.5;
  double noise_scale = 1.0;
  double spatial_strength = 1.0;
  std::string surge_mode = "multiplicative";  // or "literal"
  double z_sp = 6.5;
  int t_lag = 7;
  int spread_window = 7;
  double lambda2_seed_fraction = 0.1;
};

struct SimulatorSection {
  ArrivalSection arrivals;
  std::array<std::array<double, sim::kOutcomes>, sim::kUnits> transitions{};
  std::array<double, sim::kUnits> arrival_split{};
  std::array<double, sim::kUnits> nurse_ratios{5.0, 3.0, 2.0};
  std::vector<double> initial_capacity;
  std::vector<double> capacity_adjustment;
  double capacity_up = 2.0;
  double capacity_down = 0.8;
  bool round_capacity = true;
  int history_days = 21;
  int warmup_days = 21;
  int estimation_window_days = 21;
};

struct ExperimentConfig {
  std::string scenario = "baseline";
  std::string method = "both";  // saa | sro | both
  NetworkSection network;
  CostSection costs;
  CountSection counts;
  RobustSection robust;
  PlannerSection planner;
  SimulatorSection simulator;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int jobs = 1;

  int num_locations() const { return static_cast<int>(network.locations.size()); }
  std::vector<Method> methods() const;
};

// Preset names in the order they are documented.
const std::vector<std::string>& preset_names();

// Parses JSON text. Throws ValidationError listing every problem, each
// prefixed with its field path.
ExperimentConfig parse_config(const std::string& json_text);
// Empty or whitespace-only files give the default profile. A run manifest
// is accepted too; its embedded configuration is used.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig default_config(const std::string& preset = "baseline");

// Checks cross-field rules; throws ValidationError listing every failure.
void validate(const ExperimentConfig& cfg);

// Resolved configuration as JSON text (for manifests).
std::string to_json(const ExperimentConfig& cfg, int indent = 2);

// ---- builders --------------------------------------------------------------

int location_index(const ExperimentConfig& cfg, const std::string& name);
core::NetworkConfig build_network(const ExperimentConfig& cfg);
core::CostParams build_costs(const ExperimentConfig& cfg);
sim::ArrivalModelParams build_arrival_params(const ExperimentConfig& cfg);
sim::TransitionModel build_transitions(const ExperimentConfig& cfg);
sim::CapacityParams build_capacity_params(const ExperimentConfig& cfg);
sim::NurseRatios build_ratios(const ExperimentConfig& cfg);
planner::PlannerSettings build_planner_settings(const ExperimentConfig& cfg);
planner::RobustParamSchedule build_schedule(const ExperimentConfig& cfg, Method m);

}  // namespace redeploy::config
