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

// Seeding helpers. Every worker gets its own engine seeded from a child of
// the experiment seed, so results never depend on scheduling order.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace redeploy {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// child(base, a, b, ...) mixes each label in turn; distinct label paths give
// unrelated streams.
inline std::uint64_t child_seed(std::uint64_t base, std::initializer_list<std::uint64_t> labels) {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t l : labels) s = splitmix64(s ^ splitmix64(l + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> labels) {
  return Rng(child_seed(base, labels));
}

}  // namespace redeploy
