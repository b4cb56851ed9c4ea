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

#ifndef SIBKIT_MODELS_HPP
#define SIBKIT_MODELS_HPP

#include <string>
#include <vector>

#include "sibkit/probcore.hpp"

namespace sibkit {

// Source joint over a subset of {X, Yp, Ys, Y, Z}. Variables absent from
// the model are treated as degenerate (cardinality 1) by all downstream
// evaluators.
struct SourceModel {
  JointPMF joint;
  std::string description;
};

// X ~ Bernoulli(1/2), Ys = BSC(p)(X), Yp = BSC(q)(Ys).
struct BinaryCascadeParams {
  double p = 0.0;  // crossover X -> Ys, in [0, 1/2]
  double q = 0.0;  // crossover Ys -> Yp, in [0, 1/2]
};

// X ~ N(0, N_x), Ys = X + noise(N_s), Yp = Ys + noise(N_p - N_s).
struct GaussianCascadeParams {
  double n_x = 1.0;
  double n_s = 1.0;
  double n_p = 1.0;
};

// Wraps a validated table as a SourceModel. Tables more than 1e-9 off
// unit mass are rejected; smaller residue is renormalized away.
SourceModel from_table(std::vector<VarLabel> vars, std::vector<double> table,
                       std::string description = "");

SourceModel binary_cascade(const BinaryCascadeParams& params);

// Midpoint-rule discretization on uniform grids of `bins` cells covering
// +/- span standard deviations of each marginal; tail mass is folded into
// the edge bins. Built channel-by-channel so X - Ys - Yp holds exactly.
SourceModel gaussian_cascade_discretized(const GaussianCascadeParams& params,
                                         int bins = 64, double span = 5.0);

// Binary symmetric channel from a binary input variable.
Channel bsc(const VarLabel& input, const std::string& output_name, double crossover);

}  // namespace sibkit

#endif  // SIBKIT_MODELS_HPP
