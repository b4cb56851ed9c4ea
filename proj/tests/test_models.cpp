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
#include "sibkit/probcore.hpp"
#include "sibkit/regions.hpp"

using namespace sibkit;

TEST_CASE("from_table validates and wraps") {
  std::vector<double> uniform(8, 0.125);
  const SourceModel m = from_table({{"X", 2}, {"Ys", 2}, {"Yp", 2}}, uniform);
  CHECK(cond_mi(m.joint, {"X"}, {"Ys"}) == doctest::Approx(0.0));
  CHECK(cond_mi(m.joint, {"X"}, {"Yp"}) == doctest::Approx(0.0));
  CHECK(cond_mi(m.joint, {"Ys"}, {"Yp"}) == doctest::Approx(0.0));

  std::vector<double> off(8, 0.1225);  // sums to 0.98
  CHECK_THROWS(from_table({{"X", 2}, {"Ys", 2}, {"Yp", 2}}, off));
  CHECK_THROWS(from_table({{"X", 2}, {"Ys", 2}}, {0.25, 0.25, 0.25, 0.25}));  // no Yp

  // Noiseless cascade entered manually.
  std::vector<double> noiseless(8, 0.0);
  noiseless[0] = 0.5;  // (0,0,0)
  noiseless[7] = 0.5;  // (1,1,1)
  const SourceModel n = from_table({{"X", 2}, {"Ys", 2}, {"Yp", 2}}, noiseless);
  CHECK(cond_mi(n.joint, {"X"}, {"Yp"}) == doctest::Approx(1.0));
}

TEST_CASE("binary_cascade structure") {
  const SourceModel degenerate = binary_cascade({0.0, 0.0});
  CHECK(degenerate.joint.table()[0] == doctest::Approx(0.5));
  CHECK(degenerate.joint.table()[7] == doctest::Approx(0.5));
  CHECK(cond_mi(degenerate.joint, {"X"}, {"Yp"}) == doctest::Approx(1.0));

  const SourceModel m = binary_cascade({0.1, 0.2});
  CHECK(cond_mi(m.joint, {"X"}, {"Yp"}) ==
        doctest::Approx(1.0 - binary_entropy(0.26)).epsilon(1e-12));
  CHECK(cond_mi(m.joint, {"X"}, {"Yp"}) == doctest::Approx(0.17325).epsilon(1e-4));

  const SourceModel noisy = binary_cascade({0.5, 0.2});
  CHECK(cond_mi(noisy.joint, {"X"}, {"Ys"}) == doctest::Approx(0.0));

  CHECK_THROWS(binary_cascade({0.6, 0.1}));
  CHECK_THROWS(binary_cascade({-0.1, 0.1}));
}

TEST_CASE("binary_cascade marginals stay uniform and match the convolution identity") {
  for (double p : {0.0, 0.05, 0.2, 0.37}) {
    for (double q : {0.0, 0.1, 0.33, 0.5}) {
      const SourceModel m = binary_cascade({p, q});
      CHECK(marginal(m.joint, {"Ys"}).table()[0] == doctest::Approx(0.5).epsilon(1e-14));
      CHECK(marginal(m.joint, {"Yp"}).table()[0] == doctest::Approx(0.5).epsilon(1e-14));
      const double conv = binary_convolution(p, q);
      CHECK(cond_mi(m.joint, {"X"}, {"Yp"}) ==
            doctest::Approx(1.0 - binary_entropy(conv)).epsilon(1e-12));
      CHECK(verify_markov(m.joint, {"X"}, {"Ys"}, {"Yp"}, 1e-12));
    }
  }
}

TEST_CASE("gaussian_cascade_discretized matches analytic mutual information") {
  const GaussianCascadeParams params{1.0, 0.5, 1.0};
  const SourceModel m = gaussian_cascade_discretized(params, 64, 5.0);
  const double analytic = 0.5 * std::log2((params.n_x + params.n_p) / params.n_p);
  CHECK(cond_mi(m.joint, {"X"}, {"Yp"}) == doctest::Approx(analytic).epsilon(0.02));
  CHECK(std::abs(cond_mi(m.joint, {"X"}, {"Yp"}) - analytic) < 0.01);
  CHECK(verify_markov(m.joint, {"X"}, {"Ys"}, {"Yp"}, 1e-12));
}

TEST_CASE("gaussian_cascade_discretized: huge noise kills information") {
  const SourceModel m = gaussian_cascade_discretized({1.0, 1e6, 1e6}, 64, 5.0);
  CHECK(cond_mi(m.joint, {"X"}, {"Ys"}) < 0.01);
}

TEST_CASE("gaussian discretization converges with bin count") {
  const GaussianCascadeParams params{1.0, 0.5, 1.0};
  const double analytic = 0.5 * std::log2(2.0);
  double prev_err = 1.0;
  for (int bins : {32, 64, 128}) {
    const SourceModel m = gaussian_cascade_discretized(params, bins, 5.0);
    const double err = std::abs(cond_mi(m.joint, {"X"}, {"Yp"}) - analytic);
    CHECK(err < prev_err + 0.005);
    prev_err = err;
  }
  CHECK(prev_err < 0.005);
}

TEST_CASE("gaussian_cascade_discretized parameter validation") {
  CHECK_THROWS(gaussian_cascade_discretized({0.0, 0.5, 1.0}));
  CHECK_THROWS(gaussian_cascade_discretized({1.0, 0.5, 0.4}));
  CHECK_THROWS(gaussian_cascade_discretized({1.0, 0.5, 1.0}, 4));
}
