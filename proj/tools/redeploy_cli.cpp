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

// Command line front end. Talks to the library only through redeploy.h.
//
// Exit codes: 0 ok, 1 validation (bad flags or config), 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "redeploy/redeploy.h"

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string method;
  std::string network;
  int jobs = 0;
  std::string freeze;
};

int exit_code(redeploy_status s) {
  switch (s) {
    case REDEPLOY_OK: return 0;
    case REDEPLOY_ERR_VALIDATION:
    case REDEPLOY_ERR_ARGUMENT: return 1;
    default: return 2;
  }
}

int report_error(redeploy_status s) {
  std::fprintf(stderr, "redeploy: %s\n", redeploy_last_error());
  return exit_code(s);
}

// Owns a config handle.
struct Config {
  redeploy_config* h = nullptr;
  ~Config() { redeploy_config_free(h); }
};

redeploy_status make_config(const Common& c, Config& cfg) {
  redeploy_status s = c.config.empty() ? redeploy_config_default(c.preset.empty() ? "baseline" : c.preset.c_str(), &cfg.h)
                                       : redeploy_config_load(c.config.c_str(), &cfg.h);
  if (s != REDEPLOY_OK) return s;
  if (c.seed_set && (s = redeploy_config_set_seed(cfg.h, c.seed)) != REDEPLOY_OK) return s;
  if (!c.out.empty() && (s = redeploy_config_set_output_dir(cfg.h, c.out.c_str())) != REDEPLOY_OK) return s;
  if (!c.method.empty() && (s = redeploy_config_set_method(cfg.h, c.method.c_str())) != REDEPLOY_OK) return s;
  if (!c.network.empty() && (s = redeploy_config_set_network(cfg.h, c.network.c_str())) != REDEPLOY_OK) return s;
  if (c.jobs > 0 && (s = redeploy_config_set_jobs(cfg.h, c.jobs)) != REDEPLOY_OK) return s;
  return REDEPLOY_OK;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "Configuration file (JSON) or a run manifest")->check(CLI::ExistingFile);
  app->add_option("--preset", c.preset, "Scenario preset when no --config is given")
      ->check(CLI::IsMember({"baseline", "special_one_shortage", "low_transfer_cost", "higher_peak",
                             "six_week_window", "estimated_transitions"}));
  app->add_option_function<std::uint64_t>(
      "--seed", [&c](const std::uint64_t& v) { c.seed = v, c.seed_set = true; }, "Experiment seed");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--method", c.method, "saa, sro or both")->check(CLI::IsMember({"saa", "sro", "both"}));
  app->add_option("--network", c.network, "hub_and_spoke or fully_connected")
      ->check(CLI::IsMember({"hub_and_spoke", "fully_connected", "hs", "fc"}));
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--freeze-paths", c.freeze,
                  "Flows CSV pinning the testing data; written on first use, read afterwards");
}

void log_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nurse redeployment planning under demand uncertainty"};
  app.set_version_flag("--version", std::string(redeploy_version()));
  app.require_subcommand(1);

  Common sim_opts, plan_opts, run_opts, report_opts;
  auto* simulate = app.add_subcommand("simulate", "Write testing demand, capacity and flow datasets");
  add_common(simulate, sim_opts);

  auto* plan = app.add_subcommand("plan", "Solve one weekly plan and print it as JSON");
  add_common(plan, plan_opts);
  int plan_week = 1, plan_h = 0, plan_m = 0;
  double plan_eps = 0.0;
  plan->add_option("--week", plan_week, "Week to plan (from 1)")->check(CLI::PositiveNumber);
  plan->add_option("--path", plan_h, "Testing path index h (from 0)")->check(CLI::NonNegativeNumber);
  plan->add_option("--set", plan_m, "Training set index m (from 0)")->check(CLI::NonNegativeNumber);
  plan->add_option("--epsilon", plan_eps, "Robust radius")->check(CLI::NonNegativeNumber);

  auto* run = app.add_subcommand("run", "Run the full experiment");
  add_common(run, run_opts);
  bool no_audit = false, quiet = false;
  run->add_flag("--no-audit", no_audit, "Skip audit.jsonl");
  run->add_flag("--quiet", quiet, "No progress lines");

  auto* report = app.add_subcommand("report", "Rebuild summary tables from metrics.csv files");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("--input", report_inputs, "Run directory holding metrics.csv (repeatable)")
      ->check(CLI::ExistingDirectory);
  report->add_option("--out", report_out, "Where to write the tables (default: the single input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (*simulate) {
    Config cfg;
    redeploy_status s = make_config(sim_opts, cfg);
    if (s == REDEPLOY_OK) s = redeploy_simulate(cfg.h, sim_opts.freeze.empty() ? nullptr : sim_opts.freeze.c_str());
    return s == REDEPLOY_OK ? 0 : report_error(s);
  }

  if (*plan) {
    Config cfg;
    redeploy_status s = make_config(plan_opts, cfg);
    char* json = nullptr;
    if (s == REDEPLOY_OK)
      s = redeploy_plan_week(cfg.h, plan_h, plan_m, plan_week - 1, plan_eps,
                             plan_opts.freeze.empty() ? nullptr : plan_opts.freeze.c_str(), &json);
    if (s != REDEPLOY_OK) return report_error(s);
    std::printf("%s\n", json);
    redeploy_string_free(json);
    return 0;
  }

  if (*run) {
    Config cfg;
    redeploy_status s = make_config(run_opts, cfg);
    if (s != REDEPLOY_OK) return report_error(s);
    redeploy_run_options opt{};
    opt.freeze_paths = run_opts.freeze.empty() ? nullptr : run_opts.freeze.c_str();
    opt.write_files = 1;
    opt.write_audit = no_audit ? 0 : 1;
    opt.log = quiet ? nullptr : log_line;
    redeploy_result* res = nullptr;
    s = redeploy_run(cfg.h, &opt, &res);
    if (s != REDEPLOY_OK) return report_error(s);
    std::printf("%-6s %12s %12s %12s %12s\n", "method", "cost/week", "shortage", "transfers", "miles");
    for (size_t c = 0; c < redeploy_result_num_cells(res); ++c) {
      double cost = 0, shortage = 0, transfers = 0, miles = 0;
      redeploy_result_metric(res, c, -1, "cost", &cost);
      redeploy_result_metric(res, c, -1, "shortage", &shortage);
      redeploy_result_metric(res, c, -1, "transfers", &transfers);
      redeploy_result_metric(res, c, -1, "miles", &miles);
      std::printf("%-6s %12.2f %12.2f %12.2f %12.2f\n", redeploy_result_cell_method(res, c), cost, shortage,
                  transfers, miles);
    }
    std::fprintf(stderr, "wall time %.1f s\n", redeploy_result_wall_seconds(res));
    redeploy_result_free(res);
    return 0;
  }

  if (*report) {
    if (report_inputs.empty()) {
      std::fprintf(stderr, "redeploy: report needs at least one --input directory\n");
      return 1;
    }
    if (report_out.empty()) {
      if (report_inputs.size() != 1) {
        std::fprintf(stderr, "redeploy: --out is required with several inputs\n");
        return 1;
      }
      report_out = report_inputs.front();
    }
    std::vector<const char*> dirs;
    for (const auto& d : report_inputs) dirs.push_back(d.c_str());
    char* summary = nullptr;
    const redeploy_status s = redeploy_report(dirs.data(), dirs.size(), report_out.c_str(), &summary);
    if (s != REDEPLOY_OK) return report_error(s);
    std::printf("%s", summary);
    redeploy_string_free(summary);
    return 0;
  }
  return 1;
}
