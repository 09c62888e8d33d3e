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

#include "redeploy/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "redeploy/errors.hpp"

namespace redeploy::config {

using nlohmann::json;

const char* to_string(NetworkDesign d) {
  return d == NetworkDesign::HubAndSpoke ? "hub_and_spoke" : "fully_connected";
}

NetworkDesign network_design_from_string(const std::string& s) {
  if (s == "hub_and_spoke" || s == "hs") return NetworkDesign::HubAndSpoke;
  if (s == "fully_connected" || s == "fc") return NetworkDesign::FullyConnected;
  throw ArgumentError("unknown network design '" + s + "' (expected hub_and_spoke or fully_connected)");
}

const char* to_string(Method m) { return m == Method::Saa ? "saa" : "sro"; }

std::vector<Method> ExperimentConfig::methods() const {
  if (method == "saa") return {Method::Saa};
  if (method == "sro") return {Method::Sro};
  return {Method::Saa, Method::Sro};
}

namespace {

// Base demand in nurses at surge factor 1 divided by the nurses one daily
// arrival keeps busy (0.5014 under the default transitions) and by the
// autoregressive gain 1 / (1 - sum phi) = 1.346, per unit of c_i.
constexpr double kBaselineKappa[4] = {217.0, 185.0, 124.0, 199.0};

ExperimentConfig baseline_profile() {
  ExperimentConfig c;
  auto& n = c.network;
  n.locations = {"West", "East", "South", "Central"};
  n.hub = "Central";
  n.distances = {{0, 88, 110, 62}, {88, 0, 112, 56}, {110, 112, 0, 52}, {62, 56, 52, 0}};
  auto& a = c.simulator.arrivals;
  a.phi = {0.061, -0.165, -0.042, -0.072, -0.148, 0.035, 0.588};
  a.kappa_level.assign(std::begin(kBaselineKappa), std::end(kBaselineKappa));
  a.dow_profile = {1.08, 1.06, 1.02, 1.0, 0.98, 0.92, 0.94};
  a.scale = {0.3, 0.4, 0.5, 1.0};
  auto& s = c.simulator;
  s.transitions = {{{0.05, 0.2, 0.1, 0.65}, {0.25, 0.05, 0.1, 0.6}, {0.5, 0.4, 0.05, 0.05}}};
  s.arrival_split = {0.7659, 0.153, 0.0811};
  s.initial_capacity = {40, 120, 110, 130};
  s.capacity_adjustment = {0.11, 0.17, 0.17, 0.115};
  return c;
}

void apply_preset(ExperimentConfig& c, const std::string& name) {
  c.scenario = name;
  if (name == "baseline") return;
  if (name == "special_one_shortage") {
    // Only West runs short; the other sites keep spare staff at the peak.
    c.simulator.arrivals.kappa_level = {217.0, 185.0, 124.0, 130.0};
    c.network.arcs_by_design["hub_and_spoke"] = {{"West", "Central"}};
    c.network.arcs_by_design["fully_connected"] = {{"West", "South"}};
    return;
  }
  if (name == "low_transfer_cost") {
    c.network.tau_min = 0.1;
    return;
  }
  if (name == "higher_peak") {
    c.simulator.arrivals.c_peak = 1.7;
    c.robust.upsilon = 5.0;
    return;
  }
  if (name == "six_week_window") {
    c.simulator.estimation_window_days = 42;
    c.simulator.history_days = 42;
    return;
  }
  if (name == "estimated_transitions") {
    c.simulator.transitions = {{{0.7675, 0.0125, 0.0124, 0.2076},
                                {0.0852, 0.7463, 0.0258, 0.1427},
                                {0.1044, 0.0596, 0.7849, 0.0511}}};
    // Patients stay far longer under these rates; scale arrivals so the
    // steady nurse demand matches the default profile (0.5014 / 1.4787).
    for (double& k : c.simulator.arrivals.kappa_level) k *= 0.5014 / 1.4787;
    return;
  }
  throw ValidationError({"scenario: unknown preset '" + name + "'"});
}

json to_json_value(const ExperimentConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["method"] = c.method;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["jobs"] = c.jobs;
  const auto& n = c.network;
  json arcs = json::object();
  for (const auto& [design, pairs] : n.arcs_by_design) {
    json list = json::array();
    for (const auto& [x, y] : pairs) list.push_back({x, y});
    arcs[design] = list;
  }
  j["network"] = {{"design", to_string(n.design)},
                  {"locations", n.locations},
                  {"hub", n.hub},
                  {"distances", n.distances},
                  {"tau_min", n.tau_min},
                  {"tau_per_mile", n.tau_per_mile},
                  {"transfer_bonus", n.transfer_bonus ? json(*n.transfer_bonus) : json(nullptr)},
                  {"secondment", n.secondment},
                  {"secondment_matrix", n.secondment_matrix ? json(*n.secondment_matrix) : json(nullptr)},
                  {"arcs_by_design", arcs}};
  j["costs"] = {{"premium", c.costs.premium},
                {"emergency_multiplier", c.costs.emergency_multiplier},
                {"cancellation_pct", c.costs.cancellation_pct},
                {"shortage_cost", c.costs.shortage_cost},
                {"coordination_cost", c.costs.coordination_cost}};
  j["counts"] = {{"H", c.counts.H}, {"H_hat", c.counts.H_hat}, {"M", c.counts.M}, {"W", c.counts.W}, {"T", c.counts.T}};
  j["robust"] = {{"schedule", c.robust.schedule},
                 {"epsilon", c.robust.epsilon},
                 {"initial", c.robust.initial},
                 {"upsilon", c.robust.upsilon},
                 {"step", c.robust.step}};
  j["planner"] = {{"rounding", c.planner.rounding},
                  {"clip_support", c.planner.clip_support},
                  {"ipm_threshold", c.planner.ipm_threshold},
                  {"time_limit", c.planner.time_limit}};
  const auto& a = c.simulator.arrivals;
  const auto& s = c.simulator;
  j["simulator"] = {{"arrivals",
                     {{"phi", a.phi},
                      {"kappa_level", a.kappa_level},
                      {"dow_profile", a.dow_profile},
                      {"scale", a.scale},
                      {"t_start", a.t_start},
                      {"t_peak", a.t_peak},
                      {"t_end", a.t_end},
                      {"c_peak", a.c_peak},
                      {"noise_scale", a.noise_scale},
                      {"spatial_strength", a.spatial_strength},
                      {"surge_mode", a.surge_mode},
                      {"z_sp", a.z_sp},
                      {"t_lag", a.t_lag},
                      {"spread_window", a.spread_window},
                      {"lambda2_seed_fraction", a.lambda2_seed_fraction}}},
                    {"transitions", s.transitions},
                    {"arrival_split", s.arrival_split},
                    {"nurse_ratios", s.nurse_ratios},
                    {"initial_capacity", s.initial_capacity},
                    {"capacity_adjustment", s.capacity_adjustment},
                    {"capacity_up", s.capacity_up},
                    {"capacity_down", s.capacity_down},
                    {"round_capacity", s.round_capacity},
                    {"history_days", s.history_days},
                    {"warmup_days", s.warmup_days},
                    {"estimation_window_days", s.estimation_window_days}};
  return j;
}

// Keys whose values are free-form (maps or optional matrices).
bool free_form(const std::string& path) {
  return path == "network.arcs_by_design" || path == "network.transfer_bonus" ||
         path == "network.secondment_matrix";
}

void check_keys(const json& user, const json& schema, const std::string& path, std::vector<std::string>& errs) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string p = path.empty() ? it.key() : path + "." + it.key();
    if (!schema.contains(it.key())) {
      errs.push_back(p + ": unknown key");
      continue;
    }
    if (free_form(p)) continue;
    const json& sub = schema[it.key()];
    if (sub.is_object()) {
      if (!it.value().is_object()) errs.push_back(p + ": expected an object");
      else check_keys(it.value(), sub, p, errs);
    }
  }
}

class Reader {
 public:
  std::vector<std::string> errs;

  template <typename T>
  void get(const json& obj, const std::string& path, T& out) {
    const json* v = find(obj, path);
    if (!v) return;
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!v->is_number_integer()) throw std::runtime_error("");
      } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!v->is_number_unsigned()) throw std::runtime_error("");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v->is_number()) throw std::runtime_error("");
      }
      out = v->get<T>();
    } catch (...) {
      errs.push_back(path + ": expected " + expected<T>());
    }
  }

 private:
  static const json* find(const json& root, const std::string& path) {
    const json* cur = &root;
    std::istringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
      if (!cur->is_object() || !cur->contains(part)) return nullptr;
      cur = &(*cur)[part];
    }
    return cur;
  }
  template <typename T>
  static std::string expected() {
    if constexpr (std::is_same_v<T, int>) return "an integer";
    else if constexpr (std::is_same_v<T, std::uint64_t>) return "a nonnegative integer";
    else if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_same_v<T, bool>) return "true or false";
    else if constexpr (std::is_same_v<T, std::string>) return "a string";
    else return "a value of the documented shape";
  }
};

ExperimentConfig from_json_value(const json& j) {
  ExperimentConfig c;
  Reader r;
  r.get(j, "scenario", c.scenario);
  r.get(j, "method", c.method);
  r.get(j, "seed", c.seed);
  r.get(j, "output_dir", c.output_dir);
  r.get(j, "jobs", c.jobs);
  std::string design = "fully_connected";
  r.get(j, "network.design", design);
  try {
    c.network.design = network_design_from_string(design);
  } catch (const ArgumentError& e) {
    r.errs.push_back(std::string("network.design: ") + e.what());
  }
  r.get(j, "network.locations", c.network.locations);
  r.get(j, "network.hub", c.network.hub);
  r.get(j, "network.distances", c.network.distances);
  r.get(j, "network.tau_min", c.network.tau_min);
  r.get(j, "network.tau_per_mile", c.network.tau_per_mile);
  if (j["network"].contains("transfer_bonus") && !j["network"]["transfer_bonus"].is_null()) {
    std::vector<std::vector<double>> m;
    r.get(j, "network.transfer_bonus", m);
    c.network.transfer_bonus = m;
  }
  r.get(j, "network.secondment", c.network.secondment);
  if (j["network"].contains("secondment_matrix") && !j["network"]["secondment_matrix"].is_null()) {
    std::vector<std::vector<int>> m;
    r.get(j, "network.secondment_matrix", m);
    c.network.secondment_matrix = m;
  }
  if (j["network"].contains("arcs_by_design")) {
    const json& arcs = j["network"]["arcs_by_design"];
    if (!arcs.is_object()) {
      r.errs.push_back("network.arcs_by_design: expected an object");
    } else {
      for (auto it = arcs.begin(); it != arcs.end(); ++it) {
        try {
          c.network.arcs_by_design[it.key()] = it.value().get<std::vector<std::pair<std::string, std::string>>>();
        } catch (...) {
          r.errs.push_back("network.arcs_by_design." + it.key() + ": expected a list of [site, site] pairs");
        }
      }
    }
  }
  r.get(j, "costs.premium", c.costs.premium);
  r.get(j, "costs.emergency_multiplier", c.costs.emergency_multiplier);
  r.get(j, "costs.cancellation_pct", c.costs.cancellation_pct);
  r.get(j, "costs.shortage_cost", c.costs.shortage_cost);
  r.get(j, "costs.coordination_cost", c.costs.coordination_cost);
  r.get(j, "counts.H", c.counts.H);
  r.get(j, "counts.H_hat", c.counts.H_hat);
  r.get(j, "counts.M", c.counts.M);
  r.get(j, "counts.W", c.counts.W);
  r.get(j, "counts.T", c.counts.T);
  r.get(j, "robust.schedule", c.robust.schedule);
  r.get(j, "robust.epsilon", c.robust.epsilon);
  r.get(j, "robust.initial", c.robust.initial);
  r.get(j, "robust.upsilon", c.robust.upsilon);
  r.get(j, "robust.step", c.robust.step);
  r.get(j, "planner.rounding", c.planner.rounding);
  r.get(j, "planner.clip_support", c.planner.clip_support);
  r.get(j, "planner.ipm_threshold", c.planner.ipm_threshold);
  r.get(j, "planner.time_limit", c.planner.time_limit);
  auto& a = c.simulator.arrivals;
  r.get(j, "simulator.arrivals.phi", a.phi);
  r.get(j, "simulator.arrivals.kappa_level", a.kappa_level);
  r.get(j, "simulator.arrivals.dow_profile", a.dow_profile);
  r.get(j, "simulator.arrivals.scale", a.scale);
  r.get(j, "simulator.arrivals.t_start", a.t_start);
  r.get(j, "simulator.arrivals.t_peak", a.t_peak);
  r.get(j, "simulator.arrivals.t_end", a.t_end);
  r.get(j, "simulator.arrivals.c_peak", a.c_peak);
  r.get(j, "simulator.arrivals.noise_scale", a.noise_scale);
  r.get(j, "simulator.arrivals.spatial_strength", a.spatial_strength);
  r.get(j, "simulator.arrivals.surge_mode", a.surge_mode);
  r.get(j, "simulator.arrivals.z_sp", a.z_sp);
  r.get(j, "simulator.arrivals.t_lag", a.t_lag);
  r.get(j, "simulator.arrivals.spread_window", a.spread_window);
  r.get(j, "simulator.arrivals.lambda2_seed_fraction", a.lambda2_seed_fraction);
  auto& s = c.simulator;
  r.get(j, "simulator.transitions", s.transitions);
  r.get(j, "simulator.arrival_split", s.arrival_split);
  r.get(j, "simulator.nurse_ratios", s.nurse_ratios);
  r.get(j, "simulator.initial_capacity", s.initial_capacity);
  r.get(j, "simulator.capacity_adjustment", s.capacity_adjustment);
  r.get(j, "simulator.capacity_up", s.capacity_up);
  r.get(j, "simulator.capacity_down", s.capacity_down);
  r.get(j, "simulator.round_capacity", s.round_capacity);
  r.get(j, "simulator.history_days", s.history_days);
  r.get(j, "simulator.warmup_days", s.warmup_days);
  r.get(j, "simulator.estimation_window_days", s.estimation_window_days);
  if (!r.errs.empty()) throw ValidationError(r.errs);
  return c;
}

bool is_square(const auto& m, std::size_t n) {
  if (m.size() != n) return false;
  for (const auto& row : m)
    if (row.size() != n) return false;
  return true;
}

int rural_secondment(const std::string& scenario) {
  if (scenario == "baseline") return 2;
  if (scenario == "one_day") return 1;
  if (scenario == "three_day") return 3;
  if (scenario == "seven_day") return 7;
  return -1;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"baseline",    "special_one_shortage", "low_transfer_cost",
                                              "higher_peak", "six_week_window",      "estimated_transitions"};
  return names;
}

ExperimentConfig default_config(const std::string& preset) {
  ExperimentConfig c = baseline_profile();
  apply_preset(c, preset);
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  json user;
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); });
  if (blank) {
    user = json::object();
  } else {
    try {
      user = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError({std::string("config: not valid JSON (") + e.what() + ")"});
    }
  }
  if (!user.is_object()) throw ValidationError({"config: top level must be an object"});

  std::vector<std::string> errs;
  check_keys(user, to_json_value(baseline_profile()), "", errs);
  std::string scenario = "baseline";
  if (user.contains("scenario")) {
    if (!user["scenario"].is_string()) {
      errs.push_back("scenario: expected a string");
    } else {
      scenario = user["scenario"].get<std::string>();
      const auto& names = preset_names();
      if (std::find(names.begin(), names.end(), scenario) == names.end()) {
        errs.push_back("scenario: unknown preset '" + scenario + "'");
        scenario = "baseline";
      }
    }
  }
  json merged = to_json_value(default_config(scenario));
  merged.merge_patch(user);
  // merge_patch drops keys set to null; restore the optional ones.
  for (const char* k : {"transfer_bonus", "secondment_matrix"})
    if (!merged["network"].contains(k)) merged["network"][k] = nullptr;

  ExperimentConfig c;
  try {
    c = from_json_value(merged);
    // Cross-field rules too, so one rejection lists everything.
    validate(c);
  } catch (const ValidationError& e) {
    errs.insert(errs.end(), e.failures().begin(), e.failures().end());
  }
  if (!errs.empty()) throw ValidationError(errs);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError({"config: cannot open '" + path + "'"});
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string text = ss.str();
  // A run manifest carries the resolved configuration; accept it directly.
  if (text.find("\"manifest_version\"") != std::string::npos) {
    try {
      const json j = json::parse(text);
      if (j.is_object() && j.contains("manifest_version") && j.contains("config")) return parse_config(j["config"].dump());
    } catch (const json::exception&) {
      // fall through to the normal error path
    }
  }
  return parse_config(text);
}

void validate(const ExperimentConfig& c) {
  std::vector<std::string> e;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) e.push_back(msg);
  };
  need(c.method == "saa" || c.method == "sro" || c.method == "both", "method: expected saa, sro or both");
  need(c.jobs >= 1, "jobs: must be >= 1");
  need(!c.output_dir.empty(), "output_dir: must not be empty");

  const auto& n = c.network;
  const std::size_t L = n.locations.size();
  need(L >= 1, "network.locations: need at least one site");
  std::set<std::string> names(n.locations.begin(), n.locations.end());
  need(names.size() == L, "network.locations: names must be unique");
  need(names.count(n.hub) > 0, "network.hub: '" + n.hub + "' is not a listed site");
  if (!is_square(n.distances, L)) {
    e.push_back("network.distances: expected a " + std::to_string(L) + " x " + std::to_string(L) + " matrix");
  } else {
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t j = 0; j < L; ++j) {
        const double d = n.distances[i][j];
        if (i == j && d != 0.0) e.push_back("network.distances[" + std::to_string(i) + "][" + std::to_string(i) + "]: diagonal must be 0");
        if (!(d >= 0.0)) e.push_back("network.distances[" + std::to_string(i) + "][" + std::to_string(j) + "]: must be >= 0");
        if (d != n.distances[j][i] && i < j)
          e.push_back("network.distances: not symmetric at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
  }
  need(n.tau_min >= 0.0, "network.tau_min: must be >= 0");
  need(n.tau_per_mile >= 0.0, "network.tau_per_mile: must be >= 0");
  if (n.transfer_bonus) {
    if (!is_square(*n.transfer_bonus, L)) e.push_back("network.transfer_bonus: expected an L x L matrix");
    else
      for (const auto& row : *n.transfer_bonus)
        for (double t : row)
          if (!(t >= 0.0)) {
            e.push_back("network.transfer_bonus: entries must be >= 0");
            break;
          }
  }
  if (n.secondment == "custom") {
    if (!n.secondment_matrix || !is_square(*n.secondment_matrix, L)) {
      e.push_back("network.secondment_matrix: custom secondment needs an L x L matrix");
    } else {
      for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
          if (i != j && ((*n.secondment_matrix)[i][j] < 1 || (*n.secondment_matrix)[i][j] > c.counts.T))
            e.push_back("network.secondment_matrix[" + std::to_string(i) + "][" + std::to_string(j) +
                        "]: must lie in [1, T]");
    }
  } else if (rural_secondment(n.secondment) < 0) {
    e.push_back("network.secondment: expected baseline, one_day, three_day, seven_day or custom");
  } else if (rural_secondment(n.secondment) > c.counts.T) {
    e.push_back("network.secondment: secondments longer than T = " + std::to_string(c.counts.T));
  }
  for (const auto& [design, pairs] : n.arcs_by_design) {
    if (design != "hub_and_spoke" && design != "fully_connected")
      e.push_back("network.arcs_by_design." + design + ": unknown design");
    for (const auto& [x, y] : pairs)
      if (!names.count(x) || !names.count(y) || x == y)
        e.push_back("network.arcs_by_design." + design + ": bad pair [" + x + ", " + y + "]");
  }

  need(c.costs.premium > 0.0, "costs.premium: must be > 0");
  need(c.costs.emergency_multiplier >= 1.0, "costs.emergency_multiplier: must be >= 1");
  need(c.costs.cancellation_pct >= 0.0 && c.costs.cancellation_pct <= 1.0, "costs.cancellation_pct: must lie in [0, 1]");
  need(c.costs.shortage_cost >= 0.0, "costs.shortage_cost: must be >= 0");
  need(c.costs.coordination_cost >= 0.0, "costs.coordination_cost: must be >= 0");

  need(c.counts.H >= 1, "counts.H: must be >= 1");
  need(c.counts.H_hat >= 1, "counts.H_hat: must be >= 1");
  need(c.counts.M >= 1, "counts.M: must be >= 1");
  need(c.counts.W >= 1, "counts.W: must be >= 1");
  need(c.counts.T >= 1, "counts.T: must be >= 1");
  if (c.counts.M >= 1 && c.counts.H_hat % c.counts.M != 0)
    e.push_back("counts.H_hat: " + std::to_string(c.counts.H_hat) + " is not divisible by counts.M = " +
                std::to_string(c.counts.M));

  need(c.robust.schedule == "adaptive" || c.robust.schedule == "fixed", "robust.schedule: expected adaptive or fixed");
  need(c.robust.epsilon >= 0.0, "robust.epsilon: must be >= 0");
  need(c.robust.initial >= 0.0, "robust.initial: must be >= 0");
  need(c.robust.upsilon >= 0.0, "robust.upsilon: must be >= 0");
  need(c.robust.step > 0.0, "robust.step: must be > 0");

  need(c.planner.rounding == "randomized" || c.planner.rounding == "floor" || c.planner.rounding == "none",
       "planner.rounding: expected randomized, floor or none");
  need(c.planner.ipm_threshold >= 0, "planner.ipm_threshold: must be >= 0");
  need(c.planner.time_limit > 0.0, "planner.time_limit: must be > 0");

  const auto& a = c.simulator.arrivals;
  need(!a.phi.empty(), "simulator.arrivals.phi: need at least one lag");
  need(a.kappa_level.size() == L, "simulator.arrivals.kappa_level: need one entry per site");
  for (double k : a.kappa_level) need(k >= 0.0, "simulator.arrivals.kappa_level: entries must be >= 0");
  need(a.dow_profile.size() == 7, "simulator.arrivals.dow_profile: need 7 entries");
  for (double k : a.dow_profile) need(k >= 0.0, "simulator.arrivals.dow_profile: entries must be >= 0");
  need(a.scale.size() == L, "simulator.arrivals.scale: need one entry per site");
  for (double k : a.scale) need(k >= 0.0, "simulator.arrivals.scale: entries must be >= 0");
  need(a.t_start <= a.t_peak && a.t_peak <= a.t_end, "simulator.arrivals: need t_start <= t_peak <= t_end");
  need(a.t_start < a.t_peak || a.c_peak == 1.0, "simulator.arrivals.t_peak: must exceed t_start");
  need(a.c_peak >= 1.0, "simulator.arrivals.c_peak: must be >= 1");
  need(a.noise_scale >= 0.0, "simulator.arrivals.noise_scale: must be >= 0");
  need(a.spatial_strength >= 0.0, "simulator.arrivals.spatial_strength: must be >= 0");
  need(a.surge_mode == "multiplicative" || a.surge_mode == "literal",
       "simulator.arrivals.surge_mode: expected multiplicative or literal");
  need(a.z_sp > 0.0, "simulator.arrivals.z_sp: must be > 0");
  need(a.t_lag >= 0, "simulator.arrivals.t_lag: must be >= 0");
  need(a.spread_window >= 0, "simulator.arrivals.spread_window: must be >= 0");
  need(a.lambda2_seed_fraction >= 0.0, "simulator.arrivals.lambda2_seed_fraction: must be >= 0");

  const auto& s = c.simulator;
  for (int u = 0; u < sim::kUnits; ++u) {
    double sum = 0.0;
    for (double p : s.transitions[u]) {
      need(p >= 0.0 && p <= 1.0, "simulator.transitions[" + std::to_string(u) + "]: entries must lie in [0, 1]");
      sum += p;
    }
    need(std::abs(sum - 1.0) <= 1e-6, "simulator.transitions[" + std::to_string(u) + "]: row must sum to 1");
    need(s.arrival_split[u] >= 0.0, "simulator.arrival_split: entries must be >= 0");
    need(s.nurse_ratios[u] > 0.0, "simulator.nurse_ratios: entries must be > 0");
  }
  need(std::abs(s.arrival_split[0] + s.arrival_split[1] + s.arrival_split[2] - 1.0) <= 1e-6,
       "simulator.arrival_split: must sum to 1");
  need(s.initial_capacity.size() == L, "simulator.initial_capacity: need one entry per site");
  for (double k : s.initial_capacity) need(k >= 0.0, "simulator.initial_capacity: entries must be >= 0");
  need(s.capacity_adjustment.size() == L, "simulator.capacity_adjustment: need one entry per site");
  need(s.capacity_up >= 0.0 && s.capacity_down >= 0.0, "simulator.capacity_up/down: must be >= 0");
  need(s.estimation_window_days >= 1, "simulator.estimation_window_days: must be >= 1");
  need(s.history_days >= s.estimation_window_days,
       "simulator.history_days: must cover estimation_window_days");
  need(s.warmup_days >= 0, "simulator.warmup_days: must be >= 0");

  if (!e.empty()) throw ValidationError(e);
}

std::string to_json(const ExperimentConfig& cfg, int indent) { return to_json_value(cfg).dump(indent); }

int location_index(const ExperimentConfig& cfg, const std::string& name) {
  const auto& l = cfg.network.locations;
  auto it = std::find(l.begin(), l.end(), name);
  if (it == l.end()) throw ArgumentError("unknown site '" + name + "'");
  return static_cast<int>(it - l.begin());
}

core::NetworkConfig build_network(const ExperimentConfig& cfg) {
  const auto& n = cfg.network;
  const int L = cfg.num_locations();
  core::NetworkConfig net;
  net.num_locations = L;
  net.names = n.locations;
  net.hub = location_index(cfg, n.hub);
  net.distance = core::SquareMatrix<double>(L, 0.0);
  net.transfer_bonus = core::SquareMatrix<double>(L, 0.0);
  net.secondment = core::SquareMatrix<int>(L, 1);
  net.arc_allowed = core::SquareMatrix<int>(L, 0);
  double dmin = 0.0;
  bool first = true;
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      net.distance(i, j) = n.distances[i][j];
      if (i != j) {
        dmin = first ? n.distances[i][j] : std::min(dmin, n.distances[i][j]);
        first = false;
      }
    }
  const int rural = rural_secondment(n.secondment);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      if (i == j) continue;
      net.transfer_bonus(i, j) =
          n.transfer_bonus ? (*n.transfer_bonus)[i][j] : n.tau_min + n.tau_per_mile * (net.distance(i, j) - dmin);
      if (n.secondment == "custom") net.secondment(i, j) = (*n.secondment_matrix)[i][j];
      else net.secondment(i, j) = (i == net.hub || j == net.hub) ? 1 : rural;
    }
  const std::string design = to_string(n.design);
  auto custom = n.arcs_by_design.find(design);
  if (custom != n.arcs_by_design.end()) {
    for (const auto& [x, y] : custom->second) {
      const int i = location_index(cfg, x), j = location_index(cfg, y);
      net.arc_allowed(i, j) = 1;
      net.arc_allowed(j, i) = 1;
    }
  } else {
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j)
        if (i != j && (n.design == NetworkDesign::FullyConnected || i == net.hub || j == net.hub))
          net.arc_allowed(i, j) = 1;
  }
  net.capacity = cfg.simulator.initial_capacity;
  net.validate();
  return net;
}

core::CostParams build_costs(const ExperimentConfig& cfg) {
  core::CostParams c;
  c.premium = cfg.costs.premium;
  c.emergency_multiplier = {cfg.costs.emergency_multiplier};
  c.cancellation_pct = cfg.costs.cancellation_pct;
  c.shortage_cost.assign(cfg.num_locations(), cfg.costs.shortage_cost);
  c.coordination_cost = cfg.costs.coordination_cost;
  c.validate(cfg.num_locations());
  return c;
}

sim::ArrivalModelParams build_arrival_params(const ExperimentConfig& cfg) {
  const auto& a = cfg.simulator.arrivals;
  const int L = cfg.num_locations();
  sim::ArrivalModelParams p;
  p.num_locations = L;
  p.period = static_cast<int>(a.dow_profile.size());
  p.phi.assign(L, a.phi);
  p.kappa.assign(L, std::vector<double>(p.period));
  for (int i = 0; i < L; ++i)
    for (int y = 0; y < p.period; ++y) p.kappa[i][y] = a.kappa_level[i] * a.dow_profile[y];
  p.scale = a.scale;
  p.surge = {a.t_start, a.t_peak, a.t_end, a.c_peak};
  p.noise_scale = a.noise_scale;
  p.spatial_strength = a.spatial_strength;
  p.surge_mode = sim::surge_mode_from_string(a.surge_mode);
  core::SquareMatrix<double> d(L, 0.0);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) d(i, j) = cfg.network.distances[i][j];
  p.theta = sim::spatial_weights(d, a.z_sp);
  p.t_lag = a.t_lag;
  p.spread_window = a.spread_window;
  p.lambda2_seed_fraction = a.lambda2_seed_fraction;
  p.validate();
  return p;
}

sim::TransitionModel build_transitions(const ExperimentConfig& cfg) {
  auto tm = sim::TransitionModel::uniform(cfg.num_locations(), static_cast<int>(cfg.simulator.arrivals.dow_profile.size()),
                                          cfg.simulator.transitions, cfg.simulator.arrival_split);
  tm.validate(1e-6);
  return tm;
}

sim::CapacityParams build_capacity_params(const ExperimentConfig& cfg) {
  const auto& s = cfg.simulator;
  return {s.initial_capacity, s.capacity_adjustment, s.capacity_up, s.capacity_down, s.round_capacity};
}

sim::NurseRatios build_ratios(const ExperimentConfig& cfg) { return {cfg.simulator.nurse_ratios}; }

planner::PlannerSettings build_planner_settings(const ExperimentConfig& cfg) {
  planner::PlannerSettings s;
  s.horizon = cfg.counts.T;
  s.clip_support = cfg.planner.clip_support;
  s.rounding = planner::rounding_mode_from_string(cfg.planner.rounding);
  s.solver.ipm_threshold = cfg.planner.ipm_threshold;
  s.solver.time_limit_seconds = cfg.planner.time_limit;
  return s;
}

planner::RobustParamSchedule build_schedule(const ExperimentConfig& cfg, Method m) {
  planner::RobustParamSchedule s;
  if (m == Method::Saa) {
    s.adaptive = false;
    s.fixed_epsilon = 0.0;
    return s;
  }
  s.adaptive = cfg.robust.schedule == "adaptive";
  s.fixed_epsilon = cfg.robust.epsilon;
  s.initial = cfg.robust.initial;
  s.upsilon = cfg.robust.upsilon;
  s.step = cfg.robust.step;
  return s;
}

}  // namespace redeploy::config
