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

#include "redeploy/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "redeploy/errors.hpp"

namespace redeploy::sim {

const char* to_string(SurgeMode m) { return m == SurgeMode::Literal ? "literal" : "multiplicative"; }

SurgeMode surge_mode_from_string(const std::string& s) {
  if (s == "multiplicative") return SurgeMode::Multiplicative;
  if (s == "literal") return SurgeMode::Literal;
  throw ArgumentError("unknown surge mode '" + s + "'");
}

int day_of_week(int day, int period) {
  const int r = (day - 1) % period;
  return r < 0 ? r + period : r;
}

double surge_factor(double t, double t_start, double t_peak, double t_end, double c_peak) {
  if (t < t_start || t > t_end) return 1.0;
  if (t < t_peak) return (c_peak - 1.0) * std::sqrt((t - t_start) / (t_peak - t_start)) + 1.0;
  if (t_end == t_peak) return c_peak;
  return (c_peak - 1.0) * std::sqrt((t_end - t) / (t_end - t_peak)) + 1.0;
}

core::SquareMatrix<double> spatial_weights(const core::SquareMatrix<double>& distance, double z_sp) {
  const int L = distance.size();
  double dmax = 0.0;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      if (i != j) dmax = std::max(dmax, distance(i, j));
  core::SquareMatrix<double> th(L, 0.0);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j)
      if (i != j) th(i, j) = dmax > 0.0 ? std::exp(-z_sp * distance(i, j) / dmax) : 1.0;
  return th;
}

void ArrivalModelParams::validate() const {
  std::vector<std::string> errs;
  const int L = num_locations;
  if (L < 1) errs.push_back("num_locations must be >= 1");
  if (period < 1) errs.push_back("period must be >= 1");
  if (static_cast<int>(phi.size()) != L) errs.push_back("phi needs one row per location");
  for (const auto& row : phi)
    if (row.size() != phi.front().size()) errs.push_back("phi rows must share the autoregressive order");
  if (static_cast<int>(kappa.size()) != L) errs.push_back("kappa needs one row per location");
  for (const auto& row : kappa) {
    if (static_cast<int>(row.size()) != period) errs.push_back("kappa rows need one entry per day of the week");
    for (double k : row)
      if (!(k >= 0.0)) errs.push_back("kappa entries must be >= 0");
  }
  if (static_cast<int>(scale.size()) != L) errs.push_back("scale needs one entry per location");
  for (double c : scale)
    if (!(c >= 0.0)) errs.push_back("scale entries must be >= 0");
  if (!(surge.c_peak >= 1.0)) errs.push_back("c_peak must be >= 1");
  if (!(surge.t_start <= surge.t_peak && surge.t_peak <= surge.t_end)) errs.push_back("need t_start <= t_peak <= t_end");
  if (surge.t_start == surge.t_peak && surge.c_peak != 1.0) errs.push_back("t_peak must exceed t_start");
  if (!(noise_scale >= 0.0)) errs.push_back("noise_scale must be >= 0");
  if (!(spatial_strength >= 0.0)) errs.push_back("spatial_strength must be >= 0");
  if (theta.size() != L) errs.push_back("theta must be L x L");
  if (t_lag < 0 || spread_window < 0) errs.push_back("t_lag and spread_window must be >= 0");
  if (!(lambda2_seed_fraction >= 0.0)) errs.push_back("lambda2_seed_fraction must be >= 0");
  if (!errs.empty()) throw ValidationError(errs);
}

ArrivalSeries generate_arrivals(const ArrivalModelParams& P, int first_day, int days, Rng& rng) {
  P.validate();
  const int L = P.num_locations, p = P.ar_order(), Y = P.period;
  const int lag_hist = std::max(p, P.t_lag + P.spread_window);
  // Buffers start lag_hist days before first_day.
  const int total = lag_hist + days;
  std::vector<double> l1(static_cast<std::size_t>(total) * L, 0.0), l2(l1.size(), 0.0), rate1(l1.size(), 0.0);
  auto at = [&](std::vector<double>& v, int k, int i) -> double& { return v[static_cast<std::size_t>(k) * L + i]; };

  for (int i = 0; i < L; ++i) {
    const double phisum = std::accumulate(P.phi[i].begin(), P.phi[i].end(), 0.0);
    const double gain = phisum < 1.0 ? 1.0 / (1.0 - phisum) : 1.0;
    double mean = 0.0;
    for (int k = 0; k < lag_hist; ++k) {
      const int day = first_day - lag_hist + k;
      at(l1, k, i) = P.scale[i] * P.kappa[i][day_of_week(day, Y)] * gain;
      mean += at(l1, k, i);
    }
    mean = lag_hist > 0 ? mean / lag_hist : 0.0;
    for (int k = 0; k < lag_hist; ++k) at(l2, k, i) = P.lambda2_seed_fraction * mean;
  }

  ArrivalSeries out;
  out.first_day = first_day;
  out.days = days;
  out.num_locations = L;
  out.lambda1.resize(static_cast<std::size_t>(days) * L);
  out.lambda2.resize(out.lambda1.size());
  out.lambda.resize(out.lambda1.size());
  out.arrivals.resize(out.lambda1.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int d = 0; d < days; ++d) {
    const int day = first_day + d;
    const int k = lag_hist + d;
    const double f = P.surge.at(day);
    const int y = day_of_week(day, Y);
    for (int i = 0; i < L; ++i) {
      double ar = 0.0;
      for (int l = 1; l <= p; ++l) ar += P.phi[i][l - 1] * at(l1, k - l, i);
      const double kap = P.kappa[i][y];
      if (P.surge_mode == SurgeMode::Literal) {
        const double var = P.noise_scale * P.scale[i] * f * kap;
        const double noise = var > 0.0 ? std::sqrt(var) * normal(rng) : 0.0;
        at(l1, k, i) = std::max(0.0, f * ar + P.scale[i] * f * kap + noise);
        at(rate1, k, i) = at(l1, k, i);
      } else {
        // The lags hold the de-surged level, so f never multiplies the
        // autoregression and the recursion keeps its no-surge stability.
        // Noise is divided by f so that f * noise has variance c f kappa.
        const double var = P.noise_scale * P.scale[i] * kap / f;
        const double noise = var > 0.0 ? std::sqrt(var) * normal(rng) : 0.0;
        at(l1, k, i) = std::max(0.0, ar + P.scale[i] * kap + noise);
        at(rate1, k, i) = f * at(l1, k, i);
      }
    }
    for (int i = 0; i < L; ++i) {
      double s = 0.0;
      for (int j = 0; j < L; ++j) {
        if (j == i) continue;
        double window = 0.0;
        for (int l = P.t_lag + 1; l <= P.t_lag + P.spread_window; ++l) window += at(l2, k - l, j);
        s += P.spatial_strength * f * P.theta(j, i) * window;
      }
      at(l2, k, i) = s;
    }
    for (int i = 0; i < L; ++i) {
      const std::size_t o = static_cast<std::size_t>(d) * L + i;
      out.lambda1[o] = at(rate1, k, i);
      out.lambda2[o] = at(l2, k, i);
      out.lambda[o] = out.lambda1[o] + out.lambda2[o];
      if (out.lambda[o] > 0.0) {
        std::poisson_distribution<std::int64_t> pois(out.lambda[o]);
        out.arrivals[o] = pois(rng);
      } else {
        out.arrivals[o] = 0;
      }
    }
  }
  return out;
}

TransitionModel::TransitionModel(int num_locations, int period)
    : L_(num_locations), Y_(period),
      p_(static_cast<std::size_t>(num_locations) * kUnits * period * kOutcomes, 0.0),
      q_(static_cast<std::size_t>(num_locations) * kUnits, 0.0) {}

TransitionModel TransitionModel::uniform(int num_locations, int period,
                                         const std::array<std::array<double, kOutcomes>, kUnits>& table,
                                         const std::array<double, kUnits>& split) {
  TransitionModel tm(num_locations, period);
  for (int i = 0; i < num_locations; ++i) {
    for (int u = 0; u < kUnits; ++u) {
      tm.q(i, u) = split[u];
      for (int y = 0; y < period; ++y)
        for (int v = 0; v < kOutcomes; ++v) tm.p(i, u, v, y) = table[u][v];
    }
  }
  return tm;
}

void TransitionModel::validate(double tol) const {
  std::vector<std::string> errs;
  for (int i = 0; i < L_; ++i) {
    double qs = 0.0;
    for (int u = 0; u < kUnits; ++u) {
      if (!(q(i, u) >= 0.0 && q(i, u) <= 1.0)) errs.push_back("arrival split out of [0, 1] at site " + std::to_string(i));
      qs += q(i, u);
      for (int y = 0; y < Y_; ++y) {
        double s = 0.0;
        for (int v = 0; v < kOutcomes; ++v) {
          const double x = p(i, u, v, y);
          if (!(x >= 0.0 && x <= 1.0)) {
            errs.push_back("transition probability out of [0, 1] at site " + std::to_string(i));
          }
          s += x;
        }
        if (std::abs(s - 1.0) > tol) {
          errs.push_back("transition row (site " + std::to_string(i) + ", unit " + std::to_string(u) + ", day " +
                         std::to_string(y) + ") sums to " + std::to_string(s));
        }
      }
    }
    if (std::abs(qs - 1.0) > tol) errs.push_back("arrival split of site " + std::to_string(i) + " does not sum to 1");
  }
  if (!errs.empty()) throw ArgumentError("transitions: " + errs.front() + (errs.size() > 1 ? " (and more)" : ""));
}

std::vector<double> nurse_demand(const CensusState& census, int num_locations, const NurseRatios& ratios) {
  if (static_cast<int>(census.size()) != num_locations * kUnits) throw ArgumentError("nurse_demand: census shape mismatch");
  std::vector<double> out(num_locations, 0.0);
  for (int i = 0; i < num_locations; ++i)
    for (int u = 0; u < kUnits; ++u)
      out[i] += static_cast<double>(census[static_cast<std::size_t>(i) * kUnits + u]) / ratios.patients_per_nurse[u];
  return out;
}

namespace {

// Sequential binomial split of n over the given probabilities.
template <std::size_t K>
std::array<std::int64_t, K> multinomial(std::int64_t n, const std::array<double, K>& prob, Rng& rng) {
  std::array<std::int64_t, K> out{};
  double mass = 0.0;
  for (double x : prob) mass += x;
  std::int64_t left = n;
  for (std::size_t k = 0; k + 1 < K && left > 0; ++k) {
    if (mass <= 0.0) break;
    const double pk = std::clamp(prob[k] / mass, 0.0, 1.0);
    std::int64_t draw = 0;
    if (pk >= 1.0) {
      draw = left;
    } else if (pk > 0.0) {
      std::binomial_distribution<std::int64_t> bin(left, pk);
      draw = bin(rng);
    }
    out[k] = draw;
    left -= draw;
    mass -= prob[k];
  }
  out[K - 1] += left;
  return out;
}

}  // namespace

CensusState census_step(const CensusState& census, const std::vector<std::int64_t>& arrivals,
                        const TransitionModel& tm, int day, Rng& rng, DayFlows* flows) {
  const int L = tm.num_locations();
  if (static_cast<int>(census.size()) != L * kUnits || static_cast<int>(arrivals.size()) != L) {
    throw ArgumentError("census_step: shape mismatch");
  }
  const int y = day_of_week(day, tm.period());
  CensusState next(census.size(), 0);
  if (flows) {
    flows->admitted.assign(census.size(), 0);
    flows->moved.assign(census.size() * kOutcomes, 0);
  }
  for (int i = 0; i < L; ++i) {
    for (int u = 0; u < kUnits; ++u) {
      const std::int64_t n = census[static_cast<std::size_t>(i) * kUnits + u];
      if (n < 0) throw ArgumentError("census_step: negative census");
      std::array<double, kOutcomes> pr{};
      for (int v = 0; v < kOutcomes; ++v) pr[v] = tm.p(i, u, v, y);
      const auto moves = multinomial(n, pr, rng);
      for (int v = 0; v < kUnits; ++v) next[static_cast<std::size_t>(i) * kUnits + v] += moves[v];
      if (flows)
        for (int v = 0; v < kOutcomes; ++v) flows->moved[(static_cast<std::size_t>(i) * kUnits + u) * kOutcomes + v] = moves[v];
    }
    std::array<double, kUnits> split{};
    for (int u = 0; u < kUnits; ++u) split[u] = tm.q(i, u);
    const auto adm = multinomial(arrivals[i], split, rng);
    for (int u = 0; u < kUnits; ++u) {
      next[static_cast<std::size_t>(i) * kUnits + u] += adm[u];
      if (flows) flows->admitted[static_cast<std::size_t>(i) * kUnits + u] = adm[u];
    }
  }
  return next;
}

CensusState PatientFlowRecord::census_at(int day) const {
  if (!covers(day)) throw ArgumentError("census_at: day " + std::to_string(day) + " outside the record");
  const std::size_t o = offset(day, 0) * kUnits;
  return CensusState(census.begin() + o, census.begin() + o + static_cast<std::size_t>(num_locations) * kUnits);
}

core::DemandPath PatientFlowRecord::demand(int from, int n, const NurseRatios& ratios) const {
  if (!covers(from) || (n > 0 && !covers(from + n - 1))) throw ArgumentError("demand: days outside the record");
  core::DemandPath out(n, num_locations);
  for (int d = 0; d < n; ++d) {
    const auto xi = nurse_demand(census_at(from + d), num_locations, ratios);
    for (int i = 0; i < num_locations; ++i) out.at(d, i) = xi[i];
  }
  return out;
}

PatientFlowRecord simulate_census(const CensusState& initial, const ArrivalSeries& arrivals, const TransitionModel& tm,
                                  Rng& rng) {
  const int L = arrivals.num_locations;
  if (tm.num_locations() != L || static_cast<int>(initial.size()) != L * kUnits) {
    throw ArgumentError("simulate_census: shape mismatch");
  }
  PatientFlowRecord rec;
  rec.first_day = arrivals.first_day;
  rec.days = arrivals.days;
  rec.num_locations = L;
  rec.census.reserve(static_cast<std::size_t>(arrivals.days) * L * kUnits);
  rec.rate = arrivals.lambda;
  CensusState cur = initial;
  DayFlows fl;
  std::vector<std::int64_t> a(L);
  for (int d = 0; d < arrivals.days; ++d) {
    const int day = arrivals.first_day + d;
    rec.census.insert(rec.census.end(), cur.begin(), cur.end());
    for (int i = 0; i < L; ++i) a[i] = arrivals.count(day, i);
    cur = census_step(cur, a, tm, day, rng, &fl);
    rec.admitted.insert(rec.admitted.end(), fl.admitted.begin(), fl.admitted.end());
    rec.moved.insert(rec.moved.end(), fl.moved.begin(), fl.moved.end());
  }
  return rec;
}

PatientFlowRecord generate_testing_path(const ArrivalModelParams& arrivals, const TransitionModel& tm,
                                        const TestingPathSpec& spec, Rng& rng) {
  if (spec.history_days < 0 || spec.warmup_days < 0 || spec.planned_days < 0) {
    throw ArgumentError("generate_testing_path: day counts must be >= 0");
  }
  tm.validate(1e-6);
  const int L = arrivals.num_locations;
  const int first = 1 - spec.history_days - spec.warmup_days;
  const int total = spec.warmup_days + spec.history_days + spec.planned_days;
  const ArrivalSeries series = generate_arrivals(arrivals, first, total, rng);
  const PatientFlowRecord full = simulate_census(CensusState(static_cast<std::size_t>(L) * kUnits, 0), series, tm, rng);

  // Drop the warm-up days.
  PatientFlowRecord out;
  out.first_day = 1 - spec.history_days;
  out.days = spec.history_days + spec.planned_days;
  out.num_locations = L;
  const std::size_t skip = static_cast<std::size_t>(spec.warmup_days) * L;
  out.census.assign(full.census.begin() + skip * kUnits, full.census.end());
  out.admitted.assign(full.admitted.begin() + skip * kUnits, full.admitted.end());
  out.moved.assign(full.moved.begin() + skip * kUnits * kOutcomes, full.moved.end());
  out.rate.assign(full.rate.begin() + skip, full.rate.end());
  return out;
}

std::vector<std::vector<double>> generate_capacity(const core::DemandPath& demand, const CapacityParams& params,
                                                   int weeks, int period) {
  const int L = demand.num_locations();
  if (static_cast<int>(params.initial.size()) != L || static_cast<int>(params.b_adj.size()) != L) {
    throw ArgumentError("generate_capacity: initial capacity and b_adj need one entry per location");
  }
  if (weeks < 0 || (weeks > 2 && demand.days() < (weeks - 1) * period)) {
    throw ArgumentError("generate_capacity: demand does not cover the weeks");
  }
  auto week_mean = [&](int w, int i) {
    double s = 0.0;
    for (int t = w * period; t < (w + 1) * period; ++t) s += demand.at(t, i);
    return s / period;
  };
  std::vector<std::vector<double>> raw(weeks, params.initial);
  for (int w = 2; w < weeks; ++w) {
    for (int i = 0; i < L; ++i) {
      const double D = week_mean(w - 1, i) - week_mean(w - 2, i);
      const double step = D >= 0.0 ? params.m_up : params.n_down;
      raw[w][i] = std::max(0.0, raw[w - 1][i] + step * params.b_adj[i] * D);
    }
  }
  if (params.round)
    for (auto& row : raw)
      for (double& c : row) c = std::round(c);
  return raw;
}

FlowEstimates estimate_rolling_params(const PatientFlowRecord& h, int day, int window_days, const FlowEstimates* previous) {
  const int L = h.num_locations;
  if (window_days < 1) throw ArgumentError("estimate_rolling_params: window must be >= 1 day");
  if (!h.covers(day - window_days) || !h.covers(day - 1)) {
    throw ArgumentError("estimate_rolling_params: need " + std::to_string(window_days) + " days of history before day " +
                        std::to_string(day));
  }
  const int Y = previous ? previous->period : 7;
  FlowEstimates est;
  est.num_locations = L;
  est.period = Y;
  est.arrival_rate.assign(static_cast<std::size_t>(L) * Y, 0.0);
  est.transitions = TransitionModel(L, Y);

  for (int i = 0; i < L; ++i) {
    std::vector<double> adm(Y, 0.0), cnt(Y, 0.0);
    std::array<double, kUnits> split{};
    std::vector<double> flow(static_cast<std::size_t>(kUnits) * Y * kOutcomes, 0.0);
    std::vector<double> base(static_cast<std::size_t>(kUnits) * Y, 0.0);
    for (int g = day - window_days; g < day; ++g) {
      const int y = day_of_week(g, Y);
      cnt[y] += 1.0;
      for (int u = 0; u < kUnits; ++u) {
        const double a = static_cast<double>(h.admitted_at(g, i, u));
        adm[y] += a;
        split[u] += a;
        base[u * Y + y] += static_cast<double>(h.census_of(g, i, u));
        for (int v = 0; v < kOutcomes; ++v)
          flow[(u * Y + y) * kOutcomes + v] += static_cast<double>(h.moved_at(g, i, u, v));
      }
    }
    double all_adm = 0.0, all_days = 0.0;
    for (int y = 0; y < Y; ++y) {
      all_adm += adm[y];
      all_days += cnt[y];
    }
    for (int y = 0; y < Y; ++y) {
      double& r = est.arrival_rate[static_cast<std::size_t>(i) * Y + y];
      if (cnt[y] > 0.0) r = adm[y] / cnt[y];
      else if (previous) r = previous->arrival_rate[static_cast<std::size_t>(i) * Y + y];
      else r = all_adm / all_days;
    }
    const double total = split[0] + split[1] + split[2];
    for (int u = 0; u < kUnits; ++u) {
      if (total > 0.0) est.transitions.q(i, u) = split[u] / total;
      else est.transitions.q(i, u) = previous ? previous->transitions.q(i, u) : 1.0 / kUnits;
    }
    for (int u = 0; u < kUnits; ++u) {
      for (int y = 0; y < Y; ++y) {
        const double n = base[u * Y + y];
        for (int v = 0; v < kOutcomes; ++v) {
          double& x = est.transitions.p(i, u, v, y);
          if (n > 0.0) x = flow[(u * Y + y) * kOutcomes + v] / n;
          else x = previous ? previous->transitions.p(i, u, v, y) : 1.0 / kOutcomes;
        }
      }
    }
  }
  return est;
}

uncertainty::SamplePathSet generate_training_paths(const FlowEstimates& est, const CensusState& start_census,
                                                   int start_day, int first_output_day, int days, int count, Rng& rng,
                                                   const NurseRatios& ratios) {
  const int L = est.num_locations;
  if (first_output_day < start_day) throw ArgumentError("generate_training_paths: output starts before the census");
  if (static_cast<int>(start_census.size()) != L * kUnits) throw ArgumentError("generate_training_paths: census shape");
  if (days < 0 || count < 0) throw ArgumentError("generate_training_paths: negative size");
  uncertainty::SamplePathSet out{days, L, {}};
  out.paths.reserve(count);
  std::vector<std::int64_t> a(L);
  for (int n = 0; n < count; ++n) {
    core::DemandPath path(days, L);
    CensusState cur = start_census;
    for (int g = start_day;; ++g) {
      if (g >= first_output_day) {
        const auto xi = nurse_demand(cur, L, ratios);
        for (int i = 0; i < L; ++i) path.at(g - first_output_day, i) = xi[i];
        if (g - first_output_day == days - 1) break;
      }
      if (days == 0) break;
      const int y = day_of_week(g, est.period);
      for (int i = 0; i < L; ++i) {
        const double lam = est.arrival_rate[static_cast<std::size_t>(i) * est.period + y];
        if (lam > 0.0) {
          std::poisson_distribution<std::int64_t> pois(lam);
          a[i] = pois(rng);
        } else {
          a[i] = 0;
        }
      }
      cur = census_step(cur, a, est.transitions, g, rng);
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

}  // namespace redeploy::sim
