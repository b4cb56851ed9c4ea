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

#ifndef SIBKIT_TEST_UTIL_HPP
#define SIBKIT_TEST_UTIL_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "sibkit/probcore.hpp"

namespace sibkit::testutil {

using Rng = std::mt19937_64;

inline std::vector<double> random_simplex(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(1e-12, 1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = -std::log(u(rng));
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

inline JointPMF random_joint(Rng& rng, std::vector<VarLabel> vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= static_cast<std::size_t>(v.cardinality);
  return JointPMF(std::move(vars), random_simplex(rng, n));
}

inline Channel random_channel(Rng& rng, std::vector<VarLabel> inputs, VarLabel output) {
  std::size_t rows = 1;
  for (const auto& v : inputs) rows *= static_cast<std::size_t>(v.cardinality);
  std::vector<double> table;
  table.reserve(rows * static_cast<std::size_t>(output.cardinality));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = random_simplex(rng, static_cast<std::size_t>(output.cardinality));
    table.insert(table.end(), row.begin(), row.end());
  }
  return Channel(std::move(inputs), std::move(output), std::move(table));
}

}  // namespace sibkit::testutil

#endif  // SIBKIT_TEST_UTIL_HPP
