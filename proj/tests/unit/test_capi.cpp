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

// Links the shared library through the C header only. The CLI checks run
// the built binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "redeploy/redeploy.h"

namespace fs = std::filesystem;

namespace {

const std::string kTiny = std::string(REDEPLOY_TEST_DATA) + "/tiny.json";

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("redeploy_capi_" + name);
  fs::remove_all(p);
  return p;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(REDEPLOY_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("status codes and error messages") {
  redeploy_config* cfg = nullptr;
  CHECK(redeploy_config_parse("{\"costs\": {\"cancellation_pct\": 1.5}}", &cfg) == REDEPLOY_ERR_VALIDATION);
  CHECK(cfg == nullptr);
  CHECK(std::string(redeploy_last_error()).find("cancellation_pct") != std::string::npos);
  CHECK(redeploy_config_default("nope", &cfg) == REDEPLOY_ERR_VALIDATION);
  CHECK(redeploy_config_default(nullptr, nullptr) == REDEPLOY_ERR_ARGUMENT);
  CHECK(redeploy_config_set_seed(nullptr, 1) == REDEPLOY_ERR_ARGUMENT);

  REQUIRE(redeploy_config_default("baseline", &cfg) == REDEPLOY_OK);
  CHECK(redeploy_config_set_method(cfg, "magic") == REDEPLOY_ERR_VALIDATION);
  CHECK(redeploy_config_set_network(cfg, "hub_and_spoke") == REDEPLOY_OK);
  CHECK(redeploy_config_set_jobs(cfg, 0) == REDEPLOY_ERR_VALIDATION);
  char* json = nullptr;
  REQUIRE(redeploy_config_to_json(cfg, &json) == REDEPLOY_OK);
  CHECK(std::string(json).find("hub_and_spoke") != std::string::npos);
  redeploy_string_free(json);
  redeploy_config_free(cfg);
  CHECK(std::string(redeploy_version()).size() > 0);
}

TEST_CASE("tiny run through the C API") {
  redeploy_config* cfg = nullptr;
  REQUIRE(redeploy_config_load(kTiny.c_str(), &cfg) == REDEPLOY_OK);
  const auto out = scratch("run");
  REQUIRE(redeploy_config_set_output_dir(cfg, out.c_str()) == REDEPLOY_OK);
  redeploy_run_options opt{};
  opt.write_files = 1;
  opt.write_audit = 1;
  redeploy_result* res = nullptr;
  const auto t0 = std::chrono::steady_clock::now();
  REQUIRE(redeploy_run(cfg, &opt, &res) == REDEPLOY_OK);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 10.0);
  REQUIRE(redeploy_result_num_cells(res) == 2);
  CHECK(redeploy_result_num_weeks(res) == 1);
  CHECK(std::string(redeploy_result_cell_method(res, 0)) == "saa");
  CHECK(redeploy_result_cell_method(res, 5) == nullptr);
  double cost = -1, planned = -1, emergency = -1, cancellation = -1, shortage = -1, coordination = -1;
  REQUIRE(redeploy_result_metric(res, 0, 0, "cost", &cost) == REDEPLOY_OK);
  redeploy_result_metric(res, 0, 0, "planned", &planned);
  redeploy_result_metric(res, 0, 0, "emergency", &emergency);
  redeploy_result_metric(res, 0, 0, "cancellation", &cancellation);
  redeploy_result_metric(res, 0, 0, "shortage", &shortage);
  redeploy_result_metric(res, 0, 0, "coordination", &coordination);
  CHECK(cost == doctest::Approx(planned + emergency + cancellation + shortage + coordination));
  CHECK(redeploy_result_metric(res, 0, 0, "nonsense", &cost) == REDEPLOY_ERR_ARGUMENT);
  CHECK(redeploy_result_metric(res, 0, 3, "cost", &cost) == REDEPLOY_ERR_ARGUMENT);
  redeploy_result_free(res);

  for (const char* f : {"metrics.csv", "summary.csv", "deltas.csv", "weekly_cost.csv", "manifest.json", "audit.jsonl"})
    CHECK_MESSAGE(fs::exists(out / f), f);

  // Rebuilding the report from the run directory gives the same summary.
  const auto rep = scratch("report");
  const std::string dir = out.string();
  const char* dirs[] = {dir.c_str()};
  char* summary = nullptr;
  REQUIRE(redeploy_report(dirs, 1, rep.c_str(), &summary) == REDEPLOY_OK);
  CHECK(std::string(summary) == slurp(out / "summary.csv"));
  redeploy_string_free(summary);

  char* plan = nullptr;
  REQUIRE(redeploy_plan_week(cfg, 0, 0, 0, 0.0, nullptr, &plan) == REDEPLOY_OK);
  CHECK(std::string(plan).find("plan") != std::string::npos);
  redeploy_string_free(plan);
  CHECK(redeploy_plan_week(cfg, 0, 0, 4, 0.0, nullptr, &plan) == REDEPLOY_ERR_ARGUMENT);
  redeploy_config_free(cfg);
}

TEST_CASE("CLI exit codes") {
  const auto out = scratch("cli");
  CHECK(cli("--help") == 0);
  CHECK(cli("run --config " + kTiny + " --out " + out.string() + " --quiet") == 0);
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(cli("simulate --config " + kTiny + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "demand.csv"));
  CHECK(cli("report --input " + out.string()) == 0);

  const auto bad = fs::temp_directory_path() / "redeploy_capi_bad.json";
  std::ofstream(bad) << R"({"costs": {"cancellation_pct": 1.5}})";
  CHECK(cli("run --config " + bad.string()) == 1);
  CHECK(cli("run --bogus-flag") == 1);
  CHECK(cli("report") == 1);

  // A frozen dataset that cannot be parsed is a runtime failure.
  const auto junk = fs::temp_directory_path() / "redeploy_capi_junk.csv";
  std::ofstream(junk) << "this is not a flows file\n1,2\n";
  CHECK(cli("run --config " + kTiny + " --out " + out.string() + " --freeze-paths " + junk.string()) == 2);
}
