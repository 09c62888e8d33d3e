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

#include "redeploy/path_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "redeploy/errors.hpp"

namespace redeploy::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse(const std::string& s, int line_no) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw RuntimeFailure("csv line " + std::to_string(line_no) + ": cannot parse '" + s + "'");
  }
  return v;
}

// Reads rows after checking the header matches.
std::vector<std::vector<std::string>> read_rows(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line)) throw RuntimeFailure("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw RuntimeFailure("csv: expected header '" + header + "', got '" + line + "'");
  const std::size_t cols = split(header).size();
  std::vector<std::vector<std::string>> rows;
  int n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto r = split(line);
    if (r.size() != cols) throw RuntimeFailure("csv line " + std::to_string(n) + ": wrong number of columns");
    rows.push_back(std::move(r));
  }
  return rows;
}

constexpr const char* kDemandHeader = "path_id,location,day,value";
constexpr const char* kCapacityHeader = "path_id,location,week,value";
constexpr const char* kFlowsHeader = "path_id,day,location,unit,census,admitted,to_MS,to_PCU,to_ICU,discharged";

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw RuntimeFailure("format_number failed");
  return std::string(buf, p);
}

void write_demand_csv(std::ostream& os, const std::vector<core::DemandPath>& paths, int first_day, bool header) {
  if (header) os << kDemandHeader << '\n';
  for (std::size_t n = 0; n < paths.size(); ++n) {
    const auto& p = paths[n];
    for (int i = 0; i < p.num_locations(); ++i)
      for (int t = 0; t < p.days(); ++t)
        os << n << ',' << i << ',' << first_day + t << ',' << format_number(p.at(t, i)) << '\n';
  }
}

DemandTable read_demand_csv(std::istream& is) {
  const auto rows = read_rows(is, kDemandHeader);
  DemandTable out;
  if (rows.empty()) return out;
  int paths = 0, L = 0, lo = 0, hi = 0;
  bool first = true;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int n = parse<int>(rows[r][0], static_cast<int>(r) + 2);
    const int i = parse<int>(rows[r][1], static_cast<int>(r) + 2);
    const int d = parse<int>(rows[r][2], static_cast<int>(r) + 2);
    if (n < 0 || i < 0) throw RuntimeFailure("demand csv: negative path or location id");
    paths = std::max(paths, n + 1);
    L = std::max(L, i + 1);
    lo = first ? d : std::min(lo, d);
    hi = first ? d : std::max(hi, d);
    first = false;
  }
  out.first_day = lo;
  out.paths.assign(paths, core::DemandPath(hi - lo + 1, L));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int line = static_cast<int>(r) + 2;
    out.paths[parse<int>(rows[r][0], line)].at(parse<int>(rows[r][2], line) - lo, parse<int>(rows[r][1], line)) =
        parse<double>(rows[r][3], line);
  }
  return out;
}

void write_capacity_csv(std::ostream& os, const CapacityTable& capacity, bool header) {
  if (header) os << kCapacityHeader << '\n';
  for (std::size_t n = 0; n < capacity.size(); ++n) {
    const auto& c = capacity[n];
    if (c.empty()) continue;
    for (std::size_t i = 0; i < c.front().size(); ++i)
      for (std::size_t w = 0; w < c.size(); ++w)
        os << n << ',' << i << ',' << w + 1 << ',' << format_number(c[w][i]) << '\n';
  }
}

CapacityTable read_capacity_csv(std::istream& is) {
  const auto rows = read_rows(is, kCapacityHeader);
  int paths = 0, L = 0, W = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int line = static_cast<int>(r) + 2;
    const int n = parse<int>(rows[r][0], line), i = parse<int>(rows[r][1], line), w = parse<int>(rows[r][2], line);
    if (n < 0 || i < 0 || w < 1) throw RuntimeFailure("capacity csv line " + std::to_string(line) + ": bad index");
    paths = std::max(paths, n + 1);
    L = std::max(L, i + 1);
    W = std::max(W, w);
  }
  CapacityTable out(paths, std::vector<std::vector<double>>(W, std::vector<double>(L, 0.0)));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int line = static_cast<int>(r) + 2;
    out[parse<int>(rows[r][0], line)][parse<int>(rows[r][2], line) - 1][parse<int>(rows[r][1], line)] =
        parse<double>(rows[r][3], line);
  }
  return out;
}

void write_flows_csv(std::ostream& os, const std::vector<sim::PatientFlowRecord>& records, bool header) {
  using sim::kOutcomes;
  using sim::kUnits;
  if (header) os << kFlowsHeader << '\n';
  for (std::size_t n = 0; n < records.size(); ++n) {
    const auto& r = records[n];
    for (int day = r.first_day; day <= r.last_day(); ++day)
      for (int i = 0; i < r.num_locations; ++i)
        for (int u = 0; u < kUnits; ++u) {
          os << n << ',' << day << ',' << i << ',' << u << ',' << r.census_of(day, i, u) << ','
             << r.admitted_at(day, i, u);
          for (int v = 0; v < kOutcomes; ++v) os << ',' << r.moved_at(day, i, u, v);
          os << '\n';
        }
  }
}

std::vector<sim::PatientFlowRecord> read_flows_csv(std::istream& is) {
  using sim::kOutcomes;
  using sim::kUnits;
  const auto rows = read_rows(is, kFlowsHeader);
  struct Extent {
    int lo = 0, hi = 0, L = 0;
    bool seen = false;
  };
  std::vector<Extent> ext;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int line = static_cast<int>(r) + 2;
    const int n = parse<int>(rows[r][0], line), d = parse<int>(rows[r][1], line);
    const int i = parse<int>(rows[r][2], line), u = parse<int>(rows[r][3], line);
    if (n < 0 || i < 0 || u < 0 || u >= kUnits) throw RuntimeFailure("flows csv line " + std::to_string(line) + ": bad index");
    if (static_cast<int>(ext.size()) <= n) ext.resize(n + 1);
    Extent& e = ext[n];
    e.lo = e.seen ? std::min(e.lo, d) : d;
    e.hi = e.seen ? std::max(e.hi, d) : d;
    e.L = std::max(e.L, i + 1);
    e.seen = true;
  }
  std::vector<sim::PatientFlowRecord> out(ext.size());
  for (std::size_t n = 0; n < ext.size(); ++n) {
    auto& rec = out[n];
    if (!ext[n].seen) throw RuntimeFailure("flows csv: path " + std::to_string(n) + " has no rows");
    rec.first_day = ext[n].lo;
    rec.days = ext[n].hi - ext[n].lo + 1;
    rec.num_locations = ext[n].L;
    const std::size_t cells = static_cast<std::size_t>(rec.days) * rec.num_locations * kUnits;
    rec.census.assign(cells, 0);
    rec.admitted.assign(cells, 0);
    rec.moved.assign(cells * kOutcomes, 0);
  }
  std::vector<std::size_t> filled(out.size(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int line = static_cast<int>(r) + 2;
    const int n = parse<int>(rows[r][0], line);
    auto& rec = out[n];
    const int d = parse<int>(rows[r][1], line) - rec.first_day;
    const int i = parse<int>(rows[r][2], line), u = parse<int>(rows[r][3], line);
    const std::size_t cell = (static_cast<std::size_t>(d) * rec.num_locations + i) * kUnits + u;
    rec.census[cell] = parse<std::int64_t>(rows[r][4], line);
    rec.admitted[cell] = parse<std::int64_t>(rows[r][5], line);
    for (int v = 0; v < kOutcomes; ++v) rec.moved[cell * kOutcomes + v] = parse<std::int64_t>(rows[r][6 + v], line);
    ++filled[n];
  }
  for (std::size_t n = 0; n < out.size(); ++n)
    if (filled[n] != out[n].census.size())
      throw RuntimeFailure("flows csv: path " + std::to_string(n) + " is missing rows");
  return out;
}

void save_flows(const std::string& path, const std::vector<sim::PatientFlowRecord>& records) {
  std::ofstream os(path);
  if (!os) throw RuntimeFailure("cannot write " + path);
  write_flows_csv(os, records);
  if (!os) throw RuntimeFailure("error while writing " + path);
}

std::vector<sim::PatientFlowRecord> load_flows(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw RuntimeFailure("cannot read " + path);
  return read_flows_csv(is);
}

}  // namespace redeploy::io
