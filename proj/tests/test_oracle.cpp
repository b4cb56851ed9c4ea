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

#include <cmath>
#include <doctest.h>

#include "sibkit/models.hpp"
#include "sibkit/oracle.hpp"
#include "sibkit/probcore.hpp"
#include "sibkit/regions.hpp"

using namespace sibkit;

TEST_CASE("grid_channel_count counts lattice channels") {
  const SourceModel m = binary_cascade({0.1, 0.2});
  // C(res + 1, 1)^2 rows-of-two for a binary V.
  CHECK(grid_channel_count(m, {2, 4, 1000}) == 25);
  CHECK(grid_channel_count(m, {3, 4, 100000}) == 15 * 15);
  CHECK_THROWS(grid_frontier(m, {2, 1000, 10}));  // cap exceeded
}

TEST_CASE("card_v = 1 yields the single uninformative point") {
  const SourceModel m = binary_cascade({0.1, 0.2});
  const Frontier f = grid_frontier(m, {1, 10, 1000});
  REQUIRE(f.points.size() == 1);
  CHECK(f.points[0].rate_bits == doctest::Approx(0.0));
  CHECK(f.points[0].payload == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.points[0].leakage_bits == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.pareto.size() == 1);
}

TEST_CASE("noiseless cascade reaches a full bit") {
  const SourceModel m = binary_cascade({0.0, 0.0});
  const Frontier f = grid_frontier(m, {2, 64, 100000});
  CHECK(max_dprime(f, 1.0, 1.0) == doctest::Approx(1.0).epsilon(5e-3));
  // And the unconstrained optimum never exceeds I(X;Yp).
  for (const auto& pt : f.points) {
    CHECK(pt.payload <= 1.0 + 1e-9);
  }
}

TEST_CASE("every grid point reproduces through the logloss evaluator") {
  const SourceModel m = binary_cascade({0.1, 0.2});
  const GridSpec spec{2, 16, 100000};
  const Frontier f = grid_frontier(m, spec);
  const double h_yp = cond_entropy(m.joint, {"Yp"});

  // Re-evaluate a systematic sample of lattice channels and match payloads.
  const int steps = spec.resolution + 1;
  REQUIRE(f.points.size() == static_cast<std::size_t>(steps) * steps);
  for (int a = 0; a <= spec.resolution; a += 3) {
    for (int b = 0; b <= spec.resolution; b += 3) {
      const double pa = static_cast<double>(a) / spec.resolution;
      const double pb = static_cast<double>(b) / spec.resolution;
      const Channel ch({{"X", 2}}, {"V", 2}, {pa, 1.0 - pa, pb, 1.0 - pb});
      const TradeoffPoint ref = logloss_point(m, ch);
      const auto idx = static_cast<std::size_t>(a) * steps + b;
      CHECK(std::abs(f.points[idx].rate_bits - ref.rate_bits) <= 1e-12);
      CHECK(std::abs(f.points[idx].payload - (h_yp - ref.payload)) <= 1e-12);
      CHECK(std::abs(f.points[idx].leakage_bits - ref.leakage_bits) <= 1e-12);
    }
  }
}

TEST_CASE("grid_frontier is identical for any thread count") {
  const SourceModel m = binary_cascade({0.1, 0.2});
  const GridSpec spec{2, 48, 100000};
  const Frontier a = grid_frontier(m, spec, 1);
  const Frontier b = grid_frontier(m, spec, 4);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].rate_bits == b.points[i].rate_bits);
    CHECK(a.points[i].payload == b.points[i].payload);
    CHECK(a.points[i].leakage_bits == b.points[i].leakage_bits);
  }
  CHECK(a.pareto == b.pareto);
}

TEST_CASE("max_dprime caps behave monotonically") {
  const SourceModel m = binary_cascade({0.1, 0.2});
  const Frontier f = grid_frontier(m, {2, 64, 100000});
  double prev = -1.0;
  for (double r : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double v = max_dprime(f, r, 1.0);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  prev = -1.0;
  for (double l : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double v = max_dprime(f, 1.0, l);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  // The loosest caps recover the closed-form unconstrained optimum.
  CHECK(max_dprime(f, 1.0, 1.0) ==
        doctest::Approx(binary_dprime_max({0.1, 0.2}, 1.0, 1.0)).epsilon(5e-3));
  CHECK(std::isinf(max_dprime(f, -1.0, -1.0)));
  CHECK_THROWS(max_dprime(Frontier{}, 1.0, 1.0));
}
