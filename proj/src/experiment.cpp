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

#include "redeploy/experiment.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "redeploy/errors.hpp"
#include "redeploy/random.hpp"

#ifndef REDEPLOY_VERSION
#define REDEPLOY_VERSION "0.0.0"
#endif

namespace redeploy::experiment {

namespace fs = std::filesystem;
using config::ExperimentConfig;

const char* version() { return REDEPLOY_VERSION; }

namespace {

std::uint64_t testing_seed(std::uint64_t base, int h) { return child_seed(base, {1, static_cast<std::uint64_t>(h)}); }
std::uint64_t training_root(std::uint64_t base, int h, int m) {
  return child_seed(base, {2, static_cast<std::uint64_t>(h), static_cast<std::uint64_t>(m)});
}
std::uint64_t rounding_root(std::uint64_t base, int h, int m) {
  return child_seed(base, {3, static_cast<std::uint64_t>(h), static_cast<std::uint64_t>(m)});
}

io::CapacityTable capacities_for(const ExperimentConfig& cfg, const std::vector<sim::PatientFlowRecord>& records) {
  const auto params = config::build_capacity_params(cfg);
  const auto ratios = config::build_ratios(cfg);
  const int W = cfg.counts.W, T = cfg.counts.T;
  io::CapacityTable out;
  for (const auto& r : records) out.push_back(sim::generate_capacity(r.demand(1, W * T, ratios), params, W, T));
  return out;
}

}  // namespace

TestingData generate_testing_data(const ExperimentConfig& cfg) {
  const auto arrivals = config::build_arrival_params(cfg);
  const auto tm = config::build_transitions(cfg);
  sim::TestingPathSpec spec;
  spec.history_days = cfg.simulator.history_days;
  spec.warmup_days = cfg.simulator.warmup_days;
  spec.planned_days = cfg.counts.W * cfg.counts.T;
  TestingData data;
  for (int h = 0; h < cfg.counts.H; ++h) {
    Rng rng(testing_seed(cfg.seed, h));
    data.records.push_back(sim::generate_testing_path(arrivals, tm, spec, rng));
  }
  data.capacity = capacities_for(cfg, data.records);
  return data;
}

TestingData testing_data_from_records(const ExperimentConfig& cfg, std::vector<sim::PatientFlowRecord> records) {
  const int H = cfg.counts.H, L = cfg.num_locations();
  const int first = 1 - cfg.simulator.history_days, last = cfg.counts.W * cfg.counts.T;
  if (static_cast<int>(records.size()) < H) {
    throw ValidationError({"frozen paths: file holds " + std::to_string(records.size()) + " paths, need H = " +
                           std::to_string(H)});
  }
  records.resize(H);
  std::vector<std::string> errs;
  for (int h = 0; h < H; ++h) {
    const auto& r = records[h];
    if (r.num_locations != L) errs.push_back("frozen path " + std::to_string(h) + ": wrong number of sites");
    if (!r.covers(first) || !r.covers(last))
      errs.push_back("frozen path " + std::to_string(h) + ": must cover days " + std::to_string(first) + " to " +
                     std::to_string(last));
  }
  if (!errs.empty()) throw ValidationError(errs);
  TestingData data;
  data.records = std::move(records);
  data.capacity = capacities_for(cfg, data.records);
  return data;
}

std::vector<sim::FlowEstimates> rolling_estimates(const ExperimentConfig& cfg, const sim::PatientFlowRecord& record) {
  const int days = cfg.counts.W * cfg.counts.T;
  std::vector<sim::FlowEstimates> out;
  out.reserve(days);
  for (int d = 1; d <= days; ++d)
    out.push_back(sim::estimate_rolling_params(record, d, cfg.simulator.estimation_window_days,
                                               out.empty() ? nullptr : &out.back()));
  return out;
}

planner::WeekInputs week_inputs(const ExperimentConfig& cfg, const core::NetworkConfig& net, const TestingData& data,
                                const std::vector<sim::FlowEstimates>& estimates, int h, int m, int w) {
  const int T = cfg.counts.T;
  const int per_set = cfg.counts.H_hat / cfg.counts.M;
  const int g0 = w * T + 1;
  const auto& rec = data.records.at(h);
  const auto ratios = config::build_ratios(cfg);
  const std::uint64_t troot = training_root(cfg.seed, h, m);

  planner::WeekInputs in;
  in.network = net;
  in.network.capacity = data.capacity.at(h).at(w);
  in.costs = config::build_costs(cfg);
  in.realized = rec.demand(g0, T, ratios);
  {
    Rng rng(child_seed(troot, {static_cast<std::uint64_t>(g0), 0}));
    in.plan_training = sim::generate_training_paths(estimates.at(g0 - 1), rec.census_at(g0 - 1), g0 - 1, g0, T,
                                                    per_set, rng, ratios);
  }
  for (int t = 0; t < T; ++t) {
    const int g = g0 + t;
    const int S = planner::subhorizon_length(in.network, t, T);
    Rng rng(child_seed(troot, {static_cast<std::uint64_t>(g), 1}));
    in.daily.push_back(
        sim::generate_training_paths(estimates.at(g - 1), rec.census_at(g), g, g, S, per_set, rng, ratios));
  }
  in.rounding_seed = child_seed(rounding_root(cfg.seed, h, m), {static_cast<std::uint64_t>(w)});
  return in;
}

const eval::CellSummary& ExperimentResult::cell(const std::string& method) const {
  for (const auto& c : cells)
    if (c.method == method) return c;
  throw ArgumentError("no results for method '" + method + "'");
}

std::string file_sha256(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw RuntimeFailure("cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof buf);
    if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char two[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(two, sizeof two, "%02x", md[k]);
    hex += two;
  }
  return hex;
}

namespace {

template <typename F>
void write_file(const fs::path& p, F&& body) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw RuntimeFailure("cannot write " + p.string());
  body(os);
  if (!os) throw RuntimeFailure("error while writing " + p.string());
}

TestingData obtain_testing_data(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (opt.freeze_paths && fs::exists(*opt.freeze_paths)) {
    if (opt.log) opt.log("loading frozen testing paths from " + *opt.freeze_paths);
    return testing_data_from_records(cfg, io::load_flows(*opt.freeze_paths));
  }
  TestingData data = generate_testing_data(cfg);
  if (opt.freeze_paths) {
    io::save_flows(*opt.freeze_paths, data.records);
    if (opt.log) opt.log("froze testing paths into " + *opt.freeze_paths);
  }
  return data;
}

void write_datasets(const fs::path& dir, const ExperimentConfig& cfg, const TestingData& data) {
  const auto ratios = config::build_ratios(cfg);
  std::vector<core::DemandPath> demand;
  const int first = 1 - cfg.simulator.history_days;
  for (const auto& r : data.records) demand.push_back(r.demand(first, cfg.counts.W * cfg.counts.T - first + 1, ratios));
  write_file(dir / "demand.csv", [&](std::ostream& os) { io::write_demand_csv(os, demand, first); });
  write_file(dir / "capacity.csv", [&](std::ostream& os) { io::write_capacity_csv(os, data.capacity); });
  write_file(dir / "flows.csv", [&](std::ostream& os) { io::write_flows_csv(os, data.records); });
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

TestingData simulate_datasets(const ExperimentConfig& cfg, const RunOptions& options) {
  config::validate(cfg);
  TestingData data = obtain_testing_data(cfg, options);
  if (options.write_files) {
    fs::create_directories(cfg.output_dir);
    write_datasets(cfg.output_dir, cfg, data);
  }
  return data;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  config::validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = now_utc();
  const core::NetworkConfig net = config::build_network(cfg);
  const auto settings = config::build_planner_settings(cfg);
  const auto methods = cfg.methods();
  const int H = cfg.counts.H, M = cfg.counts.M, W = cfg.counts.W;

  const fs::path dir = cfg.output_dir;
  if (opt.write_files) fs::create_directories(dir);

  ExperimentResult res;
  res.network = config::to_string(cfg.network.design);
  res.secondment = cfg.network.secondment;

  auto manifest = [&](const std::string& status, const std::string& error, const std::vector<std::string>& files) {
    nlohmann::json j;
    j["manifest_version"] = 1;
    j["status"] = status;
    j["error"] = error.empty() ? nlohmann::json(nullptr) : nlohmann::json(error);
    j["code_version"] = version();
    j["started_at"] = started_at;
    j["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    j["config"] = nlohmann::json::parse(config::to_json(cfg));
    j["frozen_paths"] = opt.freeze_paths ? nlohmann::json(*opt.freeze_paths) : nlohmann::json(nullptr);
    nlohmann::json workers = nlohmann::json::array();
    for (int h = 0; h < H; ++h)
      for (int m = 0; m < M; ++m)
        workers.push_back({{"h", h},
                           {"m", m},
                           {"testing_seed", testing_seed(cfg.seed, h)},
                           {"training_root", training_root(cfg.seed, h, m)},
                           {"rounding_root", rounding_root(cfg.seed, h, m)}});
    j["seeds"] = {{"base", cfg.seed}, {"workers", workers}};
    nlohmann::json sums = nlohmann::json::object();
    for (const auto& f : files)
      if (fs::exists(dir / f)) sums[f] = "sha256:" + file_sha256((dir / f).string());
    j["files"] = sums;
    write_file(dir / "manifest.json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  };

  TestingData data;
  std::vector<std::vector<sim::FlowEstimates>> estimates;
  try {
    data = obtain_testing_data(cfg, opt);
    for (int h = 0; h < H; ++h) estimates.push_back(rolling_estimates(cfg, data.records[h]));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    if (opt.write_files) manifest("incomplete", std::string("testing data: ") + e.what(), {});
    throw RuntimeFailure(std::string("testing data: ") + e.what());
  }

  // runs[method][m][h]
  std::vector<std::vector<std::vector<planner::Trajectory>>> runs(
      methods.size(), std::vector<std::vector<planner::Trajectory>>(M, std::vector<planner::Trajectory>(H)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::atomic<std::size_t> hits{0};
  std::mutex mu;
  std::string first_error;
  const std::size_t tasks = static_cast<std::size_t>(H) * M;

  auto worker = [&] {
    for (;;) {
      if (failed) return;
      const std::size_t k = next++;
      if (k >= tasks) return;
      const int h = static_cast<int>(k / M), m = static_cast<int>(k % M);
      planner::WeekCache cache;
      auto provider = [&](int w) { return week_inputs(cfg, net, data, estimates[h], h, m, w); };
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const char* mname = config::to_string(methods[mi]);
        try {
          runs[mi][m][h] = planner::run_horizon(provider, W, config::build_schedule(cfg, methods[mi]), settings, &cache);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failed) first_error = std::string("method=") + mname + " h=" + std::to_string(h) + " m=" +
                                     std::to_string(m) + ": " + e.what();
          failed = true;
          return;
        }
      }
      hits += cache.hits();
      if (opt.log) {
        std::lock_guard<std::mutex> lock(mu);
        opt.log("finished h=" + std::to_string(h) + " m=" + std::to_string(m));
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(tasks)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed) {
    if (opt.write_files) manifest("incomplete", first_error, {});
    throw RuntimeFailure(first_error);
  }
  res.cache_hits = hits;

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const std::string mname = config::to_string(methods[mi]);
    eval::CellSummary cell{mname, res.network, res.secondment, {}};
    std::vector<std::vector<const planner::Trajectory*>> ptr(M, std::vector<const planner::Trajectory*>(H));
    for (int m = 0; m < M; ++m)
      for (int h = 0; h < H; ++h) ptr[m][h] = &runs[mi][m][h];
    for (int w = 0; w < W; ++w) cell.weekly.push_back(eval::weekly_cost(ptr, w, net));
    res.cells.push_back(std::move(cell));
    auto& eps = res.epsilon[mname];
    eps.assign(H, std::vector<std::vector<double>>(M));
    for (int h = 0; h < H; ++h)
      for (int m = 0; m < M; ++m)
        for (const auto& wk : runs[mi][m][h].weeks) eps[h][m].push_back(wk.epsilon);
  }

  if (opt.write_files) {
    std::vector<std::string> files{"demand.csv", "capacity.csv", "flows.csv", "metrics.csv", "summary.csv",
                                   "deltas.csv", "weekly_cost.csv", "epsilon.csv", "config.resolved.json"};
    try {
      write_datasets(dir, cfg, data);
      const auto cmp = eval::compare_scenarios(res.cells);
      write_file(dir / "metrics.csv", [&](std::ostream& os) { eval::write_metrics_csv(os, res.cells); });
      write_file(dir / "summary.csv", [&](std::ostream& os) { eval::write_summary_csv(os, cmp); });
      write_file(dir / "deltas.csv", [&](std::ostream& os) { eval::write_deltas_csv(os, cmp); });
      write_file(dir / "weekly_cost.csv", [&](std::ostream& os) { eval::write_weekly_curves_csv(os, res.cells); });
      write_file(dir / "epsilon.csv", [&](std::ostream& os) {
        os << "method,h,m,week,epsilon\n";
        for (const auto& [mname, e] : res.epsilon)
          for (int h = 0; h < H; ++h)
            for (int m = 0; m < M; ++m)
              for (std::size_t w = 0; w < e[h][m].size(); ++w)
                os << mname << ',' << h << ',' << m << ',' << w + 1 << ',' << io::format_number(e[h][m][w]) << '\n';
      });
      write_file(dir / "config.resolved.json", [&](std::ostream& os) { os << config::to_json(cfg) << '\n'; });
      if (opt.write_audit) {
        files.push_back("audit.jsonl");
        write_file(dir / "audit.jsonl", [&](std::ostream& os) {
          for (std::size_t mi = 0; mi < methods.size(); ++mi)
            for (int h = 0; h < H; ++h)
              for (int m = 0; m < M; ++m)
                planner::write_audit_trail(os, runs[mi][m][h], net,
                                           std::string(config::to_string(methods[mi])) + "/" + std::to_string(h) +
                                               "/" + std::to_string(m));
        });
      }
    } catch (const std::exception& e) {
      manifest("incomplete", e.what(), files);
      throw;
    }
    manifest("complete", "", files);
  }

  if (opt.keep_trajectories)
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      auto& t = res.trajectories[config::to_string(methods[mi])];
      t.assign(H, std::vector<planner::Trajectory>(M));
      for (int h = 0; h < H; ++h)
        for (int m = 0; m < M; ++m) t[h][m] = std::move(runs[mi][m][h]);
    }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return res;
}

eval::Comparison rebuild_report(const std::vector<std::string>& input_dirs, const std::string& out_dir) {
  if (input_dirs.empty()) throw ArgumentError("report: no input directories");
  std::vector<eval::CellSummary> cells;
  for (const auto& d : input_dirs) {
    const fs::path p = fs::path(d) / "metrics.csv";
    std::ifstream is(p);
    if (!is) throw RuntimeFailure("cannot read " + p.string());
    for (auto& c : eval::read_metrics_csv(is)) {
      for (const auto& o : cells)
        if (o.method == c.method && o.network == c.network && o.secondment == c.secondment)
          throw RuntimeFailure("report: cell " + c.method + "/" + c.network + "/" + c.secondment +
                               " appears in more than one input");
      cells.push_back(std::move(c));
    }
  }
  const fs::path dir = out_dir;
  fs::create_directories(dir);
  const auto cmp = eval::compare_scenarios(cells);
  write_file(dir / "summary.csv", [&](std::ostream& os) { eval::write_summary_csv(os, cmp); });
  write_file(dir / "deltas.csv", [&](std::ostream& os) { eval::write_deltas_csv(os, cmp); });
  write_file(dir / "weekly_cost.csv", [&](std::ostream& os) { eval::write_weekly_curves_csv(os, cells); });
  return cmp;
}

}  // namespace redeploy::experiment
