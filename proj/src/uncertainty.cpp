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

#include "redeploy/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace redeploy::uncertainty {

void SamplePathSet::validate() const {
  for (std::size_t n = 0; n < paths.size(); ++n) {
    const DemandPath& p = paths[n];
    if (p.days() != days || p.num_locations() != num_locations) {
      throw ArgumentError("sample path " + std::to_string(n) + " has shape " + std::to_string(p.num_locations()) +
                          "x" + std::to_string(p.days()) + ", expected " + std::to_string(num_locations) + "x" +
                          std::to_string(days));
    }
    for (double v : p.data()) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ArgumentError("sample path " + std::to_string(n) + " holds a negative or non-finite demand");
      }
    }
  }
}

bool UncertaintyBox::contains(const DemandPath& p, double tol) const {
  if (p.days() != days() || p.num_locations() != num_locations()) return false;
  for (std::size_t k = 0; k < p.data().size(); ++k) {
    if (p.data()[k] < lower.data()[k] - tol || p.data()[k] > upper.data()[k] + tol) return false;
  }
  return true;
}

std::vector<UncertaintyBox> build_uncertainty_sets(const SamplePathSet& samples, double epsilon, bool clip_support) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ArgumentError("epsilon must be a finite value >= 0");
  samples.validate();
  std::vector<UncertaintyBox> boxes;
  boxes.reserve(samples.paths.size());
  for (const DemandPath& p : samples.paths) {
    UncertaintyBox b{p, p, epsilon};
    for (std::size_t k = 0; k < p.data().size(); ++k) {
      const double lo = p.data()[k] - epsilon;
      b.lower.data()[k] = clip_support ? std::max(lo, 0.0) : lo;
      b.upper.data()[k] = p.data()[k] + epsilon;
    }
    boxes.push_back(std::move(b));
  }
  return boxes;
}

UncertaintyBox point_box(const DemandPath& path) { return UncertaintyBox{path, path, 0.0}; }

std::vector<DemandPath> enumerate_vertices(const UncertaintyBox& box, int max_dims) {
  std::vector<std::size_t> free;
  for (std::size_t k = 0; k < box.lower.data().size(); ++k) {
    if (box.lower.data()[k] != box.upper.data()[k]) free.push_back(k);
  }
  if (static_cast<int>(free.size()) > max_dims) {
    throw ArgumentError("enumerate_vertices: " + std::to_string(free.size()) + " free coordinates exceed the limit of " +
                        std::to_string(max_dims));
  }
  std::vector<DemandPath> out;
  const std::size_t count = std::size_t{1} << free.size();
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    DemandPath v = box.lower;
    for (std::size_t b = 0; b < free.size(); ++b) {
      if (mask & (std::size_t{1} << b)) v.data()[free[b]] = box.upper.data()[free[b]];
    }
    out.push_back(std::move(v));
  }
  return out;
}

double box_max_linear(const UncertaintyBox& box, const DemandPath& coeff) {
  double s = 0.0;
  for (std::size_t k = 0; k < coeff.data().size(); ++k) {
    const double c = coeff.data()[k];
    s += c >= 0.0 ? c * box.upper.data()[k] : c * box.lower.data()[k];
  }
  return s;
}

}  // namespace redeploy::uncertainty
