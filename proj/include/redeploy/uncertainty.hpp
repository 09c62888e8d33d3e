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

// Infinity-norm boxes around demand sample paths.

#pragma once

#include <vector>

#include "redeploy/core.hpp"

namespace redeploy::uncertainty {

using core::DemandPath;

struct SamplePathSet {
  int days = 0;
  int num_locations = 0;
  std::vector<DemandPath> paths;

  // Throws ArgumentError when paths disagree in shape or hold negatives.
  void validate() const;
  std::size_t size() const { return paths.size(); }
};

struct UncertaintyBox {
  DemandPath lower;
  DemandPath upper;
  double epsilon = 0.0;

  int days() const { return lower.days(); }
  int num_locations() const { return lower.num_locations(); }
  bool degenerate(int t, int i) const { return lower.at(t, i) == upper.at(t, i); }
  bool contains(const DemandPath& p, double tol = 0.0) const;
};

// One box per sample: [max(xi - eps, 0), xi + eps], or [xi - eps, xi + eps]
// when clip_support is false.
std::vector<UncertaintyBox> build_uncertainty_sets(const SamplePathSet& samples, double epsilon,
                                                   bool clip_support = true);

// A single box centred on one path; used to pin observed days.
UncertaintyBox point_box(const DemandPath& path);

// Corner enumeration for oracle tests. Refuses boxes with more than
// `max_dims` free coordinates (default 20, i.e. about a million corners).
std::vector<DemandPath> enumerate_vertices(const UncertaintyBox& box, int max_dims = 20);

// max over the box of sum_{t,i} coeff(t, i) * zeta(t, i).
double box_max_linear(const UncertaintyBox& box, const DemandPath& coeff);

}  // namespace redeploy::uncertainty
