//
// Copyright 2026 The sibkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SIBKIT_ORACLE_HPP
#define SIBKIT_ORACLE_HPP

#include <cstdint>

#include "sibkit/models.hpp"
#include "sibkit/regions.hpp"

namespace sibkit {

// Exhaustive enumeration of encoder channels whose rows lie on the uniform
// simplex lattice with `resolution` steps. The channel count is
// C(resolution + card_v - 1, card_v - 1)^|X| and must stay under the cap.
struct GridSpec {
  int card_v = 2;
  int resolution = 100;
  std::uint64_t max_channels = 2000000;
};

std::uint64_t grid_channel_count(const SourceModel& model, const GridSpec& spec);

// Evaluates the logloss triple of every lattice channel; points are in
// lattice-lexicographic order, so the output is deterministic for any
// thread count.
Frontier grid_frontier(const SourceModel& model, const GridSpec& spec, int threads = 1);

// Maximum payload over frontier points with rate <= r_cap and leakage
// <= l_cap; -infinity when no point is feasible.
double max_dprime(const Frontier& frontier, double r_cap, double l_cap);

}  // namespace sibkit

#endif  // SIBKIT_ORACLE_HPP
