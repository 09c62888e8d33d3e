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

#include "redeploy/redeploy.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "redeploy/config.hpp"
#include "redeploy/errors.hpp"
#include "redeploy/experiment.hpp"
#include "redeploy/planner.hpp"

struct redeploy_config {
  redeploy::config::ExperimentConfig cfg;
};

struct redeploy_result {
  redeploy::experiment::ExperimentResult res;
};

namespace {

thread_local std::string g_error;

redeploy_status fail(redeploy_status s, std::string msg) {
  g_error = std::move(msg);
  return s;
}

// Maps exceptions onto status codes.
template <typename F>
redeploy_status guarded(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const redeploy::ValidationError& e) {
    std::string msg;
    for (const auto& s : e.failures()) msg += (msg.empty() ? "" : "\n") + s;
    return fail(REDEPLOY_ERR_VALIDATION, msg);
  } catch (const redeploy::ArgumentError& e) {
    return fail(REDEPLOY_ERR_ARGUMENT, e.what());
  } catch (const redeploy::RuntimeFailure& e) {
    return fail(REDEPLOY_ERR_RUNTIME, e.what());
  } catch (const redeploy::BuildError& e) {
    return fail(REDEPLOY_ERR_RUNTIME, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(REDEPLOY_ERR_RUNTIME, e.what());
  } catch (const std::bad_alloc&) {
    return fail(REDEPLOY_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(REDEPLOY_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(REDEPLOY_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

redeploy::experiment::TestingData testing_data(const redeploy::config::ExperimentConfig& cfg, const char* freeze) {
  namespace ex = redeploy::experiment;
  if (freeze && std::filesystem::exists(freeze))
    return ex::testing_data_from_records(cfg, redeploy::io::load_flows(freeze));
  return ex::generate_testing_data(cfg);
}

}  // namespace

extern "C" {

const char* redeploy_version(void) { return redeploy::experiment::version(); }
const char* redeploy_last_error(void) { return g_error.c_str(); }
void redeploy_string_free(char* s) { std::free(s); }

redeploy_status redeploy_config_default(const char* preset, redeploy_config** out) {
  return guarded([&] {
    if (!out) return fail(REDEPLOY_ERR_ARGUMENT, "null output handle");
    *out = new redeploy_config{redeploy::config::default_config(preset ? preset : "baseline")};
    return REDEPLOY_OK;
  });
}

redeploy_status redeploy_config_load(const char* path, redeploy_config** out) {
  return guarded([&] {
    if (!out || !path) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    *out = new redeploy_config{redeploy::config::load_config(path)};
    return REDEPLOY_OK;
  });
}

redeploy_status redeploy_config_parse(const char* json_text, redeploy_config** out) {
  return guarded([&] {
    if (!out || !json_text) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    *out = new redeploy_config{redeploy::config::parse_config(json_text)};
    return REDEPLOY_OK;
  });
}

void redeploy_config_free(redeploy_config* cfg) { delete cfg; }

redeploy_status redeploy_config_set_seed(redeploy_config* cfg, uint64_t seed) {
  if (!cfg) return fail(REDEPLOY_ERR_ARGUMENT, "null config");
  cfg->cfg.seed = seed;
  return REDEPLOY_OK;
}

redeploy_status redeploy_config_set_output_dir(redeploy_config* cfg, const char* dir) {
  if (!cfg || !dir || !*dir) return fail(REDEPLOY_ERR_ARGUMENT, "null config or empty directory");
  cfg->cfg.output_dir = dir;
  return REDEPLOY_OK;
}

redeploy_status redeploy_config_set_method(redeploy_config* cfg, const char* method) {
  if (!cfg || !method) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
  const std::string m = method;
  if (m != "saa" && m != "sro" && m != "both")
    return fail(REDEPLOY_ERR_VALIDATION, "method: expected saa, sro or both");
  cfg->cfg.method = m;
  return REDEPLOY_OK;
}

redeploy_status redeploy_config_set_network(redeploy_config* cfg, const char* design) {
  return guarded([&] {
    if (!cfg || !design) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    try {
      cfg->cfg.network.design = redeploy::config::network_design_from_string(design);
    } catch (const redeploy::ArgumentError& e) {
      return fail(REDEPLOY_ERR_VALIDATION, std::string("network.design: ") + e.what());
    }
    return REDEPLOY_OK;
  });
}

redeploy_status redeploy_config_set_jobs(redeploy_config* cfg, int jobs) {
  if (!cfg) return fail(REDEPLOY_ERR_ARGUMENT, "null config");
  if (jobs < 1) return fail(REDEPLOY_ERR_VALIDATION, "jobs: must be >= 1");
  cfg->cfg.jobs = jobs;
  return REDEPLOY_OK;
}

redeploy_status redeploy_config_to_json(const redeploy_config* cfg, char** json_out) {
  return guarded([&] {
    if (!cfg || !json_out) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    *json_out = dup_string(redeploy::config::to_json(cfg->cfg));
    return REDEPLOY_OK;
  });
}

redeploy_status redeploy_simulate(const redeploy_config* cfg, const char* freeze_paths) {
  return guarded([&] {
    if (!cfg) return fail(REDEPLOY_ERR_ARGUMENT, "null config");
    redeploy::experiment::RunOptions opt;
    if (freeze_paths) opt.freeze_paths = freeze_paths;
    redeploy::experiment::simulate_datasets(cfg->cfg, opt);
    return REDEPLOY_OK;
  });
}

redeploy_status redeploy_run(const redeploy_config* cfg, const redeploy_run_options* options, redeploy_result** out) {
  return guarded([&] {
    if (!cfg || !out) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    redeploy::experiment::RunOptions opt;
    if (options) {
      if (options->freeze_paths) opt.freeze_paths = options->freeze_paths;
      opt.write_files = options->write_files != 0;
      opt.write_audit = options->write_audit != 0;
      if (options->log) {
        auto fn = options->log;
        void* user = options->log_user;
        opt.log = [fn, user](const std::string& line) { fn(line.c_str(), user); };
      }
    }
    auto* r = new redeploy_result{redeploy::experiment::run_experiment(cfg->cfg, opt)};
    *out = r;
    return REDEPLOY_OK;
  });
}

void redeploy_result_free(redeploy_result* res) { delete res; }

size_t redeploy_result_num_cells(const redeploy_result* res) { return res ? res->res.cells.size() : 0; }

size_t redeploy_result_num_weeks(const redeploy_result* res) {
  return res && !res->res.cells.empty() ? res->res.cells.front().weekly.size() : 0;
}

const char* redeploy_result_cell_method(const redeploy_result* res, size_t cell) {
  if (!res || cell >= res->res.cells.size()) return nullptr;
  return res->res.cells[cell].method.c_str();
}

redeploy_status redeploy_result_metric(const redeploy_result* res, size_t cell, int week, const char* metric,
                                       double* value) {
  return guarded([&] {
    if (!res || !metric || !value) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    if (cell >= res->res.cells.size()) return fail(REDEPLOY_ERR_ARGUMENT, "cell index out of range");
    const auto& c = res->res.cells[cell];
    if (week >= static_cast<int>(c.weekly.size())) return fail(REDEPLOY_ERR_ARGUMENT, "week out of range");
    *value = redeploy::eval::metric_value(week < 0 ? c.aggregate() : c.weekly[week], metric);
    return REDEPLOY_OK;
  });
}

double redeploy_result_wall_seconds(const redeploy_result* res) { return res ? res->res.wall_seconds : 0.0; }

redeploy_status redeploy_plan_week(const redeploy_config* cfg, int h, int m, int week, double epsilon,
                                   const char* freeze_paths, char** json_out) {
  return guarded([&] {
    namespace ex = redeploy::experiment;
    if (!cfg || !json_out) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    const auto& c = cfg->cfg;
    redeploy::config::validate(c);
    if (h < 0 || h >= c.counts.H || m < 0 || m >= c.counts.M || week < 0 || week >= c.counts.W)
      return fail(REDEPLOY_ERR_ARGUMENT, "h, m or week out of range");
    if (!(epsilon >= 0.0)) return fail(REDEPLOY_ERR_ARGUMENT, "epsilon must be >= 0");
    const auto net = redeploy::config::build_network(c);
    const auto data = testing_data(c, freeze_paths);
    const auto est = ex::rolling_estimates(c, data.records[h]);
    const auto in = ex::week_inputs(c, net, data, est, h, m, week);
    const auto settings = redeploy::config::build_planner_settings(c);
    redeploy::Rng rng(in.rounding_seed);
    const auto plan = redeploy::planner::plan_week(in.network, in.costs, in.plan_training, epsilon, settings, rng);
    nlohmann::json j;
    j["week"] = week + 1;
    j["h"] = h;
    j["m"] = m;
    j["epsilon"] = epsilon;
    j["lp_objective"] = plan.lp_objective;
    j["network"] = redeploy::config::to_string(c.network.design);
    j["locations"] = net.names;
    j["capacity"] = in.network.capacity;
    nlohmann::json rows = nlohmann::json::array();
    for (int t = 0; t < plan.plan.days(); ++t)
      for (const auto& a : net.arcs()) {
        const double x = plan.plan.at(t, a.from, a.to), f = plan.fractional.at(t, a.from, a.to);
        if (x == 0.0 && f <= 1e-9) continue;
        rows.push_back({{"day", t + 1},
                        {"from", net.names[a.from]},
                        {"to", net.names[a.to]},
                        {"nurses", x},
                        {"fractional", f}});
      }
    j["plan"] = rows;
    *json_out = dup_string(j.dump(2));
    return REDEPLOY_OK;
  });
}

redeploy_status redeploy_report(const char* const* input_dirs, size_t num_inputs, const char* out_dir,
                                 char** summary_out) {
  return guarded([&] {
    if (!out_dir || (num_inputs > 0 && !input_dirs)) return fail(REDEPLOY_ERR_ARGUMENT, "null argument");
    std::vector<std::string> dirs;
    for (size_t k = 0; k < num_inputs; ++k) dirs.emplace_back(input_dirs[k]);
    const auto cmp = redeploy::experiment::rebuild_report(dirs, out_dir);
    if (summary_out) {
      std::ostringstream os;
      redeploy::eval::write_summary_csv(os, cmp);
      *summary_out = dup_string(os.str());
    }
    return REDEPLOY_OK;
  });
}

}  // extern "C"
