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

#include "redeploy/evaluator.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "redeploy/errors.hpp"
#include "redeploy/path_io.hpp"

namespace redeploy::eval {

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"cost",     "planned",      "emergency", "cancellation",
                                              "cancellation_fee", "shortage", "coordination", "transfers",
                                              "miles"};
  return names;
}

double metric_value(const WeeklyMetrics& m, const std::string& name) {
  if (name == "cost") return m.cost();
  if (name == "planned") return m.planned;
  if (name == "emergency") return m.emergency;
  if (name == "cancellation") return m.cancellation;
  if (name == "cancellation_fee") return m.cancellation_fee;
  if (name == "shortage") return m.shortage;
  if (name == "coordination") return m.coordination;
  if (name == "transfers") return m.transfers;
  if (name == "miles") return m.miles;
  throw ArgumentError("unknown metric '" + name + "'");
}

void set_metric(WeeklyMetrics& m, const std::string& name, double value) {
  if (name == "cost") return;  // derived
  if (name == "planned") m.planned = value;
  else if (name == "emergency") m.emergency = value;
  else if (name == "cancellation") m.cancellation = value;
  else if (name == "cancellation_fee") m.cancellation_fee = value;
  else if (name == "shortage") m.shortage = value;
  else if (name == "coordination") m.coordination = value;
  else if (name == "transfers") m.transfers = value;
  else if (name == "miles") m.miles = value;
  else throw ArgumentError("unknown metric '" + name + "'");
}

TransferStats count_transfers_and_miles(const planner::WeekOutcome& week, const core::NetworkConfig& net) {
  TransferStats s;
  for (const auto& d : week.days) {
    const int L = d.deployed.num_locations();
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j) {
        const double b = d.deployed.at(i, j);
        s.transfers += b;
        s.miles += b * net.distance(i, j);
      }
  }
  return s;
}

TransferStats count_transfers_and_miles(const planner::Trajectory& traj, const core::NetworkConfig& net) {
  TransferStats s;
  for (const auto& w : traj.weeks) {
    const auto x = count_transfers_and_miles(w, net);
    s.transfers += x.transfers;
    s.miles += x.miles;
  }
  return s;
}

WeeklyMetrics week_metrics(const planner::WeekOutcome& week, const core::NetworkConfig& net) {
  WeeklyMetrics m;
  for (const auto& d : week.days) {
    m.planned += d.planned_cost;
    m.emergency += d.cost.emergency;
    m.cancellation += d.cost.cancellation;
    m.cancellation_fee += d.cost.net_cancellation_fee();
    m.shortage += d.cost.shortage;
  }
  m.coordination = week.coordination_cost;
  const auto tm = count_transfers_and_miles(week, net);
  m.transfers = tm.transfers;
  m.miles = tm.miles;
  return m;
}

namespace {

void accumulate(WeeklyMetrics& acc, const WeeklyMetrics& x, double w) {
  acc.planned += w * x.planned;
  acc.emergency += w * x.emergency;
  acc.cancellation += w * x.cancellation;
  acc.cancellation_fee += w * x.cancellation_fee;
  acc.shortage += w * x.shortage;
  acc.coordination += w * x.coordination;
  acc.transfers += w * x.transfers;
  acc.miles += w * x.miles;
}

}  // namespace

WeeklyMetrics weekly_cost(const std::vector<std::vector<const planner::Trajectory*>>& runs, int week,
                          const core::NetworkConfig& net) {
  std::vector<std::string> missing;
  std::size_t count = 0;
  for (std::size_t m = 0; m < runs.size(); ++m)
    for (std::size_t h = 0; h < runs[m].size(); ++h) {
      const auto* tr = runs[m][h];
      if (!tr || week < 0 || week >= static_cast<int>(tr->weeks.size())) {
        missing.push_back("(m=" + std::to_string(m) + ", h=" + std::to_string(h) + ")");
      } else {
        ++count;
      }
    }
  if (!missing.empty() || count == 0) {
    std::string msg = "weekly_cost: week " + std::to_string(week) + " missing for";
    for (const auto& s : missing) msg += " " + s;
    if (count == 0 && missing.empty()) msg += " every run (none given)";
    throw ArgumentError(msg);
  }
  WeeklyMetrics out;
  for (const auto& row : runs)
    for (const auto* tr : row) accumulate(out, week_metrics(tr->weeks[week], net), 1.0 / static_cast<double>(count));
  return out;
}

WeeklyMetrics CellSummary::aggregate() const {
  return weekly.empty() ? WeeklyMetrics{} : aggregate(0, static_cast<int>(weekly.size()) - 1);
}

WeeklyMetrics CellSummary::aggregate(int first_week, int last_week) const {
  if (first_week < 0 || last_week >= static_cast<int>(weekly.size()) || first_week > last_week) {
    throw ArgumentError("aggregate: week range outside the results");
  }
  WeeklyMetrics out;
  const double w = 1.0 / (last_week - first_week + 1);
  for (int k = first_week; k <= last_week; ++k) accumulate(out, weekly[k], w);
  return out;
}

std::optional<double> percent_delta(std::optional<double> alternative, std::optional<double> base) {
  if (!alternative || !base || *base == 0.0) return std::nullopt;
  return 100.0 * (*alternative - *base) / *base;
}

namespace {

// Fixed display order for known labels, others alphabetically after them.
std::vector<std::string> ordered(const std::set<std::string>& s, const std::vector<std::string>& preferred) {
  std::vector<std::string> out;
  for (const auto& p : preferred)
    if (s.count(p)) out.push_back(p);
  for (const auto& x : s)
    if (std::find(preferred.begin(), preferred.end(), x) == preferred.end()) out.push_back(x);
  return out;
}

}  // namespace

Comparison compare_scenarios(const std::vector<CellSummary>& cells) {
  std::set<std::string> nets, secs, meths;
  std::map<std::tuple<std::string, std::string, std::string>, WeeklyMetrics> agg;
  for (const auto& c : cells) {
    nets.insert(c.network);
    secs.insert(c.secondment);
    meths.insert(c.method);
    if (!c.weekly.empty()) agg[{c.network, c.secondment, c.method}] = c.aggregate();
  }
  const auto N = ordered(nets, {"fully_connected", "hub_and_spoke"});
  const auto S = ordered(secs, {"baseline", "one_day", "three_day", "seven_day"});
  const auto M = ordered(meths, {"saa", "sro"});

  auto value = [&](const std::string& metric, const std::string& n, const std::string& s,
                   const std::string& m) -> std::optional<double> {
    auto it = agg.find({n, s, m});
    if (it == agg.end()) return std::nullopt;
    return metric_value(it->second, metric);
  };

  Comparison cmp;
  for (const auto& metric : metric_names()) {
    for (const auto& n : N)
      for (const auto& s : S)
        for (const auto& m : M) cmp.rows.push_back({metric, n, s, m, value(metric, n, s, m)});
    if (nets.count("fully_connected") && nets.count("hub_and_spoke"))
      for (const auto& s : S)
        for (const auto& m : M)
          cmp.deltas.push_back({metric, "network", s + "/" + m, "hub_and_spoke", "fully_connected",
                                percent_delta(value(metric, "fully_connected", s, m),
                                              value(metric, "hub_and_spoke", s, m))});
    if (meths.count("saa") && meths.count("sro"))
      for (const auto& n : N)
        for (const auto& s : S)
          cmp.deltas.push_back({metric, "method", n + "/" + s, "saa", "sro",
                                percent_delta(value(metric, n, s, "sro"), value(metric, n, s, "saa"))});
    if (secs.count("baseline"))
      for (const auto& n : N)
        for (const auto& m : M)
          for (const auto& s : S) {
            if (s == "baseline") continue;
            cmp.deltas.push_back({metric, "secondment", n + "/" + m, "baseline", s,
                                  percent_delta(value(metric, n, s, m), value(metric, n, "baseline", m))});
          }
  }
  return cmp;
}

void write_metrics_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
  os << "method,network,secondment,week,metric,value\n";
  for (const auto& c : cells)
    for (std::size_t w = 0; w < c.weekly.size(); ++w)
      for (const auto& name : metric_names())
        os << c.method << ',' << c.network << ',' << c.secondment << ',' << w + 1 << ',' << name << ','
           << io::format_number(metric_value(c.weekly[w], name)) << '\n';
}

std::vector<CellSummary> read_metrics_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "method,network,secondment,week,metric,value") {
    throw RuntimeFailure("metrics csv: unexpected header");
  }
  std::vector<CellSummary> cells;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> index;
  int n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw RuntimeFailure("metrics csv line " + std::to_string(n) + ": expected 6 columns");
    int week = 0;
    double v = 0.0;
    auto r1 = std::from_chars(f[3].data(), f[3].data() + f[3].size(), week);
    auto r2 = std::from_chars(f[5].data(), f[5].data() + f[5].size(), v);
    if (r1.ec != std::errc() || r2.ec != std::errc() || week < 1) {
      throw RuntimeFailure("metrics csv line " + std::to_string(n) + ": bad number");
    }
    const auto key = std::make_tuple(f[0], f[1], f[2]);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      cells.push_back({f[0], f[1], f[2], {}});
    }
    auto& c = cells[it->second];
    if (static_cast<int>(c.weekly.size()) < week) c.weekly.resize(week);
    set_metric(c.weekly[week - 1], f[4], v);
  }
  return cells;
}

void write_summary_csv(std::ostream& os, const Comparison& cmp) {
  os << "metric,network,secondment,method,value\n";
  for (const auto& r : cmp.rows) {
    os << r.metric << ',' << r.network << ',' << r.secondment << ',' << r.method << ',';
    if (r.value) os << io::format_number(*r.value);
    os << '\n';
  }
}

void write_deltas_csv(std::ostream& os, const Comparison& cmp) {
  os << "metric,dimension,context,base,alternative,percent\n";
  for (const auto& d : cmp.deltas) {
    os << d.metric << ',' << d.dimension << ',' << d.context << ',' << d.base << ',' << d.alternative << ',';
    if (d.percent) os << io::format_number(*d.percent);
    os << '\n';
  }
}

void write_weekly_curves_csv(std::ostream& os, const std::vector<CellSummary>& cells) {
  os << "method,network,secondment,week,cost\n";
  for (const auto& c : cells)
    for (std::size_t w = 0; w < c.weekly.size(); ++w)
      os << c.method << ',' << c.network << ',' << c.secondment << ',' << w + 1 << ','
         << io::format_number(c.weekly[w].cost()) << '\n';
}

}  // namespace redeploy::eval
