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

#include "sibkit/models.hpp"

#include <cmath>
#include <stdexcept>

namespace sibkit {

namespace {

double gauss_pdf(double x, double var) {
  return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

// 1 - Phi(x / sigma), the upper-tail mass of N(0, var).
double gauss_upper_tail(double x, double var) {
  return 0.5 * std::erfc(x / std::sqrt(2.0 * var));
}

// Uniform grid of `bins` cell midpoints covering [-half, half].
std::vector<double> grid_midpoints(double half, int bins) {
  std::vector<double> mid(static_cast<std::size_t>(bins));
  const double w = 2.0 * half / bins;
  for (int i = 0; i < bins; ++i) {
    mid[static_cast<std::size_t>(i)] = -half + (i + 0.5) * w;
  }
  return mid;
}

// Cell masses of N(mean, var) on the grid: midpoint rule per cell, the
// tails beyond the grid folded into the edge bins, then renormalized.
std::vector<double> discretized_gaussian_row(const std::vector<double>& mid,
                                             double cell_width, double mean,
                                             double var) {
  std::vector<double> row(mid.size());
  for (std::size_t i = 0; i < mid.size(); ++i) {
    row[i] = gauss_pdf(mid[i] - mean, var) * cell_width;
  }
  const double lo = mid.front() - 0.5 * cell_width;
  const double hi = mid.back() + 0.5 * cell_width;
  row.front() += gauss_upper_tail(mean - lo, var);
  row.back() += gauss_upper_tail(hi - mean, var);
  long double sum = 0.0L;
  for (double p : row) sum += p;
  for (double& p : row) p = static_cast<double>(p / sum);
  return row;
}

// Deterministic nearest-cell mapping, used when the cascade noise variance
// is zero (N_p == N_s) and the channel degenerates to a copy.
std::vector<double> nearest_cell_row(const std::vector<double>& mid,
                                     double cell_width, double mean) {
  std::vector<double> row(mid.size(), 0.0);
  const double lo = mid.front() - 0.5 * cell_width;
  auto idx = static_cast<long>(std::floor((mean - lo) / cell_width));
  idx = std::max(0L, std::min(static_cast<long>(mid.size()) - 1, idx));
  row[static_cast<std::size_t>(idx)] = 1.0;
  return row;
}

}  // namespace

SourceModel from_table(std::vector<VarLabel> vars, std::vector<double> table,
                       std::string description) {
  bool has_x = false, has_yp = false;
  for (const auto& v : vars) {
    has_x = has_x || v.name == "X";
    has_yp = has_yp || v.name == "Yp";
  }
  if (!has_x || !has_yp) {
    throw std::invalid_argument("source model must contain X and Yp");
  }
  long double sum = 0.0L;
  for (double p : table) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative or NaN table entry");
    sum += p;
  }
  if (std::abs(static_cast<double>(sum) - 1.0) > 1e-9) {
    throw std::invalid_argument("table sums to " + std::to_string(static_cast<double>(sum)) +
                                ", more than 1e-9 off unit mass");
  }
  for (double& p : table) p = static_cast<double>(p / sum);
  return SourceModel{JointPMF(std::move(vars), std::move(table)), std::move(description)};
}

Channel bsc(const VarLabel& input, const std::string& output_name, double crossover) {
  if (input.cardinality != 2) throw std::invalid_argument("bsc: input must be binary");
  if (!(crossover >= 0.0 && crossover <= 1.0)) {
    throw std::invalid_argument("bsc: crossover out of [0, 1]");
  }
  return Channel({input}, {output_name, 2},
                 {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

SourceModel binary_cascade(const BinaryCascadeParams& params) {
  if (!(params.p >= 0.0 && params.p <= 0.5) || !(params.q >= 0.0 && params.q <= 0.5)) {
    throw std::invalid_argument("binary cascade crossovers must lie in [0, 1/2]");
  }
  JointPMF joint({{"X", 2}}, {0.5, 0.5});
  joint = extend_with_channel(joint, bsc({"X", 2}, "Ys", params.p));
  joint = extend_with_channel(joint, bsc({"Ys", 2}, "Yp", params.q));
  return SourceModel{marginal(joint, {"X", "Ys", "Yp"}),
                     "binary cascade p=" + std::to_string(params.p) +
                         " q=" + std::to_string(params.q)};
}

SourceModel gaussian_cascade_discretized(const GaussianCascadeParams& params,
                                         int bins, double span) {
  if (!(params.n_x > 0.0) || !(params.n_s > 0.0) || !(params.n_p >= params.n_s)) {
    throw std::invalid_argument("gaussian cascade needs N_x > 0, N_s > 0, N_p >= N_s");
  }
  if (bins < 8) throw std::invalid_argument("bins must be >= 8");
  if (!(span > 0.0)) throw std::invalid_argument("span must be positive");

  const double sx = std::sqrt(params.n_x);
  const double ss = std::sqrt(params.n_x + params.n_s);
  const double sp = std::sqrt(params.n_x + params.n_p);
  const auto x_mid = grid_midpoints(span * sx, bins);
  const auto ys_mid = grid_midpoints(span * ss, bins);
  const auto yp_mid = grid_midpoints(span * sp, bins);
  const double wx = 2.0 * span * sx / bins;
  const double ws = 2.0 * span * ss / bins;
  const double wp = 2.0 * span * sp / bins;

  JointPMF joint({{"X", bins}}, discretized_gaussian_row(x_mid, wx, 0.0, params.n_x));

  std::vector<double> t_s;
  t_s.reserve(x_mid.size() * ys_mid.size());
  for (double x : x_mid) {
    const auto row = discretized_gaussian_row(ys_mid, ws, x, params.n_s);
    t_s.insert(t_s.end(), row.begin(), row.end());
  }
  joint = extend_with_channel(joint, Channel({{"X", bins}}, {"Ys", bins}, std::move(t_s)));

  const double noise_p = params.n_p - params.n_s;
  std::vector<double> t_p;
  t_p.reserve(ys_mid.size() * yp_mid.size());
  for (double ys : ys_mid) {
    const auto row = noise_p > 0.0
                         ? discretized_gaussian_row(yp_mid, wp, ys, noise_p)
                         : nearest_cell_row(yp_mid, wp, ys);
    t_p.insert(t_p.end(), row.begin(), row.end());
  }
  joint = extend_with_channel(joint, Channel({{"Ys", bins}}, {"Yp", bins}, std::move(t_p)));

  return SourceModel{marginal(joint, {"X", "Ys", "Yp"}),
                     "discretized gaussian cascade Nx=" + std::to_string(params.n_x) +
                         " Ns=" + std::to_string(params.n_s) +
                         " Np=" + std::to_string(params.n_p)};
}

}  // namespace sibkit
