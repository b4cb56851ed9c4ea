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

#ifndef SIBKIT_SIBSOLVER_HPP
#define SIBKIT_SIBSOLVER_HPP

#include <cstdint>
#include <vector>

#include "sibkit/models.hpp"
#include "sibkit/regions.hpp"

namespace sibkit {

struct SolverConfig {
  double beta = 1.0;   // information tradeoff weight, >= 0
  double gamma = 0.0;  // privacy weight, >= 0
  int card_v = 2;
  int max_iters = 10000;
  double tol = 1e-9;  // convergence threshold on max |delta p(v|x)|
  int restarts = 8;
  std::uint64_t seed = 0;
  double prob_floor = 1e-12;
};

// Current encoder p(v|x) with the derived tables of the self-consistent
// system and the quantities evaluated at it. Restart -1 marks a warm start.
struct SolverState {
  std::vector<double> ch_v;           // [x][v]
  std::vector<double> p_v_given_y;    // [y][v]
  std::vector<double> p_vy;           // [v][y]
  std::vector<double> p_yp_given_vy;  // [v][y][yp]
  std::vector<double> p_ys_given_vy;  // [v][y][ys]
  double lagrangian = 0.0;
  TradeoffPoint triple;
  bool converged = false;
  int iters = 0;
  int restart = -1;
  int reseeded_rows = 0;
};

// Dense conditionals of the source extracted once per model. Requires X,
// Yp, Ys; Y is optional and Z must equal Y or be absent.
class CompiledModel {
 public:
  explicit CompiledModel(const SourceModel& model);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nyp() const { return nyp_; }
  int nys() const { return nys_; }

  const std::vector<double>& p_xy() const { return p_xy_; }          // [x][y]
  const std::vector<double>& p_y_given_x() const { return p_ygx_; }  // [x][y]
  const std::vector<double>& p_x() const { return p_x_; }
  const std::vector<double>& p_y() const { return p_y_; }
  const std::vector<double>& p_yp() const { return p_yp_; }
  const std::vector<double>& p_ys() const { return p_ys_; }
  const std::vector<double>& p_yp_given_xy() const { return p_ypgxy_; }  // [x][y][yp]
  const std::vector<double>& p_ys_given_xy() const { return p_ysgxy_; }  // [x][y][ys]

  // X -> V channel view of an encoder table, for cross-checks against the
  // regions evaluators.
  Channel encoder_channel(const std::vector<double>& ch_v) const;

 private:
  int nx_ = 0, ny_ = 0, nyp_ = 0, nys_ = 0;
  std::vector<double> p_xy_, p_ygx_, p_x_, p_y_, p_yp_, p_ys_, p_ypgxy_, p_ysgxy_;
};

// Derived tables, triple and Lagrangian for a given encoder.
SolverState evaluate_state(const CompiledModel& model, std::vector<double> ch_v,
                           const SolverConfig& config);

// One pass of the self-consistent update: derived tables from the current
// encoder, then the stationary-point reassignment of every p(v|x) row.
SolverState update_step(const CompiledModel& model, const SolverState& state,
                        const SolverConfig& config);

// I(X;V|Y) - beta * I(Yp;V,Y) + beta * gamma * I(Ys;V,Y), in bits.
double lagrangian(const CompiledModel& model, const SolverState& state,
                  const SolverConfig& config);

// Best-of-restarts fixed-point iteration. Besides the configured restarts,
// the fully collapsed encoder (everything mapped to one symbol) is always
// evaluated as a candidate with restart index `restarts`: it is a fixed
// point, and for strong privacy weights it is the minimizer yet is
// unreachable from generic starts.
SolverState solve(const CompiledModel& model, const SolverConfig& config);

struct SweepRecord {
  double beta = 0.0;
  double gamma = 0.0;
  int restart = -1;
  bool converged = false;
  int iters = 0;
  TradeoffPoint point;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // beta ascending within each gamma
  Frontier frontier;
};

// Anneals beta ascending with warm starts, gamma outermost. Results depend
// only on (seed, beta index, gamma index, restart index), never on thread
// scheduling.
SweepResult sweep(const CompiledModel& model, const std::vector<double>& betas,
                  const std::vector<double>& gammas, const SolverConfig& config,
                  int threads = 1);

struct MergeEvent {
  int i = 0, j = 0;  // merged V symbols (j folded into i)
  double rate_after = 0.0;
  double dprime_after = 0.0;
  double leakage_after = 0.0;
  double dprime_loss = 0.0;
};

struct AgglomerateResult {
  SolverState state;
  std::vector<MergeEvent> merges;
};

// Greedy merging from V = X: applies the feasible pairwise merge with the
// smallest information loss until none remains.
AgglomerateResult agglomerate(const CompiledModel& model, double dprime_target,
                              double leak_target);

}  // namespace sibkit

#endif  // SIBKIT_SIBSOLVER_HPP
