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

// Patient-flow demand simulator.
//
// Arrivals follow an autoregressive Poisson model with a day-of-week level,
// a surge shape and a lagged spread term between sites. Patients move
// between MS, PCU and ICU units by day-of-week multinomial transitions, and
// nurse demand is the census weighted by the nurse-to-patient ratios.
//
// Days are global integers: day 1 is the first planned day, days <= 0 are
// history. The day-of-week of day g is (g - 1) mod Y.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "redeploy/core.hpp"
#include "redeploy/random.hpp"
#include "redeploy/uncertainty.hpp"

namespace redeploy::sim {

inline constexpr int kUnits = 3;  // MS, PCU, ICU
inline constexpr int kOutcomes = 4;  // the three units, then discharge
enum Unit { kMS = 0, kPCU = 1, kICU = 2, kDischarge = 3 };

int day_of_week(int day, int period = 7);

// Ramp with a square-root profile from 1 at t_start to c_peak at t_peak,
// back to 1 at t_end, and 1 outside [t_start, t_end].
double surge_factor(double t, double t_start, double t_peak, double t_end, double c_peak);

struct SurgeShape {
  double t_start = 1.0;
  double t_peak = 49.0;
  double t_end = 119.0;
  double c_peak = 1.5;
  double at(int day) const { return surge_factor(day, t_start, t_peak, t_end, c_peak); }
};

// theta_ij = exp(-z * d_ij / max_{i != j} d_ij).
core::SquareMatrix<double> spatial_weights(const core::SquareMatrix<double>& distance, double z_sp);

// How the surge factor enters the autoregressive part of the rate.
//  Literal: f scales the lag sum as well as the level, which is explosive
//    for the default lags once f passes about 1.22.
//  Multiplicative: the lags run on the no-surge level and the rate is f
//    times that level.
enum class SurgeMode { Multiplicative, Literal };

const char* to_string(SurgeMode m);
SurgeMode surge_mode_from_string(const std::string& s);

struct ArrivalModelParams {
  int num_locations = 0;
  int period = 7;                              // Y
  std::vector<std::vector<double>> phi;        // [i][l], lag l + 1
  std::vector<std::vector<double>> kappa;      // [i][y] day-of-week level
  std::vector<double> scale;                   // c_i
  SurgeShape surge;
  // beta = f, zeta = c f, gamma = noise_scale c f, alpha = spatial_strength f.
  double noise_scale = 1.0;
  double spatial_strength = 1.0;
  SurgeMode surge_mode = SurgeMode::Multiplicative;
  core::SquareMatrix<double> theta;            // spread weights between sites
  int t_lag = 7;
  int spread_window = 7;                       // r
  double lambda2_seed_fraction = 0.1;          // lambda2 history relative to lambda history

  int ar_order() const { return phi.empty() ? 0 : static_cast<int>(phi.front().size()); }
  void validate() const;
};

struct ArrivalSeries {
  int first_day = 1;
  int days = 0;
  int num_locations = 0;
  std::vector<double> lambda1, lambda2, lambda;  // [d * L + i]
  std::vector<std::int64_t> arrivals;            // [d * L + i]

  double rate(int day, int i) const { return lambda[static_cast<std::size_t>(day - first_day) * num_locations + i]; }
  std::int64_t count(int day, int i) const {
    return arrivals[static_cast<std::size_t>(day - first_day) * num_locations + i];
  }
};

// Rates and Poisson arrivals for days [first_day, first_day + days). Rate
// history before first_day is the no-surge stationary level of the
// autoregression. Negative rates from the noise are clamped at zero.
ArrivalSeries generate_arrivals(const ArrivalModelParams& params, int first_day, int days, Rng& rng);

// Day-of-week transition probabilities per site. Row (i, u, y) lists the
// chances of ending the day in MS, PCU, ICU or discharged.
class TransitionModel {
 public:
  TransitionModel() = default;
  TransitionModel(int num_locations, int period);
  // Same table for every site and day, same arrival split for every site.
  static TransitionModel uniform(int num_locations, int period,
                                 const std::array<std::array<double, kOutcomes>, kUnits>& table,
                                 const std::array<double, kUnits>& split);

  int num_locations() const { return L_; }
  int period() const { return Y_; }
  double& p(int i, int u, int v, int y) { return p_[index(i, u, y) * kOutcomes + v]; }
  double p(int i, int u, int v, int y) const { return p_[index(i, u, y) * kOutcomes + v]; }
  double& q(int i, int u) { return q_[static_cast<std::size_t>(i) * kUnits + u]; }
  double q(int i, int u) const { return q_[static_cast<std::size_t>(i) * kUnits + u]; }

  // Rows and splits must be distributions; throws ArgumentError otherwise.
  void validate(double tol = 1e-9) const;

 private:
  std::size_t index(int i, int u, int y) const { return (static_cast<std::size_t>(i) * kUnits + u) * Y_ + y; }
  int L_ = 0;
  int Y_ = 7;
  std::vector<double> p_;
  std::vector<double> q_;
};

// Census per site and unit, row-major [i * kUnits + u].
using CensusState = std::vector<std::int64_t>;

struct NurseRatios {
  std::array<double, kUnits> patients_per_nurse{5.0, 3.0, 2.0};
};

std::vector<double> nurse_demand(const CensusState& census, int num_locations, const NurseRatios& ratios = {});

// Patients handled during one day.
struct DayFlows {
  std::vector<std::int64_t> admitted;  // [i * kUnits + u]
  std::vector<std::int64_t> moved;     // [(i * kUnits + u) * kOutcomes + v], v == u is a stay
};

// One day of the census recursion: every patient in unit u stays, moves or
// leaves by a multinomial draw, and new arrivals are split over units. The
// next census is stays + transfers in + admissions.
CensusState census_step(const CensusState& census, const std::vector<std::int64_t>& arrivals,
                        const TransitionModel& tm, int day, Rng& rng, DayFlows* flows = nullptr);

// Full record of one simulated path. Census is at the start of each day;
// flows happen during it.
struct PatientFlowRecord {
  int first_day = 1;
  int days = 0;
  int num_locations = 0;
  std::vector<std::int64_t> census;    // [(d * L + i) * kUnits + u]
  std::vector<std::int64_t> admitted;  // same layout
  std::vector<std::int64_t> moved;     // [((d * L + i) * kUnits + u) * kOutcomes + v]
  std::vector<double> rate;            // true arrival rate, [d * L + i]; empty when unknown

  int last_day() const { return first_day + days - 1; }
  bool covers(int day) const { return day >= first_day && day <= last_day(); }
  CensusState census_at(int day) const;
  std::int64_t census_of(int day, int i, int u) const { return census[offset(day, i) * kUnits + u]; }
  std::int64_t admitted_at(int day, int i, int u) const { return admitted[offset(day, i) * kUnits + u]; }
  std::int64_t moved_at(int day, int i, int u, int v) const {
    return moved[(offset(day, i) * kUnits + u) * kOutcomes + v];
  }
  // Nurse demand on days [from, from + days) as a DemandPath.
  core::DemandPath demand(int from, int days, const NurseRatios& ratios = {}) const;

 private:
  std::size_t offset(int day, int i) const {
    return static_cast<std::size_t>(day - first_day) * num_locations + i;
  }
};

// Runs the census recursion over given arrivals, starting from `initial` on
// the series' first day.
PatientFlowRecord simulate_census(const CensusState& initial, const ArrivalSeries& arrivals,
                                  const TransitionModel& tm, Rng& rng);

struct TestingPathSpec {
  int history_days = 21;  // recorded days before day 1
  int warmup_days = 21;   // simulated from an empty hospital, then dropped
  int planned_days = 0;   // W * T
};

// Ground truth for one testing path: days [1 - history_days, planned_days].
PatientFlowRecord generate_testing_path(const ArrivalModelParams& arrivals, const TransitionModel& tm,
                                        const TestingPathSpec& spec, Rng& rng);

struct CapacityParams {
  std::vector<double> initial;  // weeks 1 and 2
  std::vector<double> b_adj;
  double m_up = 2.0;
  double n_down = 0.8;
  bool round = true;
};

// C[w][i] for weeks w = 0 .. W-1 (0-based). `demand` holds the planned days
// from day 1; week w covers rows [7w, 7w + 7).
std::vector<std::vector<double>> generate_capacity(const core::DemandPath& demand, const CapacityParams& params,
                                                   int weeks, int period = 7);

// Rolling estimates used to simulate training paths.
struct FlowEstimates {
  int num_locations = 0;
  int period = 7;
  std::vector<double> arrival_rate;  // [i * Y + y], total admissions per day
  TransitionModel transitions;       // p and q estimated from flows
};

// Estimates from the `window_days` days before `day` (exclusive). Cells
// with nothing observed keep the previous estimate, or fall back to an even
// split on first use.
FlowEstimates estimate_rolling_params(const PatientFlowRecord& history, int day, int window_days,
                                      const FlowEstimates* previous = nullptr);

// Simulates `count` paths from the census at `start_day` and returns nurse
// demand for days [first_output_day, first_output_day + days). Arrivals are
// Poisson at the estimated day-of-week rates; there is no spread term.
uncertainty::SamplePathSet generate_training_paths(const FlowEstimates& est, const CensusState& start_census,
                                                   int start_day, int first_output_day, int days, int count,
                                                   Rng& rng, const NurseRatios& ratios = {});

}  // namespace redeploy::sim
