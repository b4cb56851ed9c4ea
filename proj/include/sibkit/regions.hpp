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

#ifndef SIBKIT_REGIONS_HPP
#define SIBKIT_REGIONS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "sibkit/models.hpp"
#include "sibkit/probcore.hpp"

namespace sibkit {

enum class Provenance { kInner, kOuter, kLogloss, kSolver, kOracle, kClosedForm };

const char* provenance_name(Provenance p);

// A (rate, payload, leakage) triple in bits. The payload is either an
// expected distortion D or an information value D' = H(Yp) - D, depending
// on provenance.
struct TradeoffPoint {
  double rate_bits = 0.0;
  double payload = 0.0;
  double leakage_bits = 0.0;
  Provenance provenance = Provenance::kInner;
};

// All evaluated points plus the indices of the Pareto-optimal subset
// under (rate minimized, payload maximized, leakage minimized).
struct Frontier {
  std::vector<TradeoffPoint> points;
  std::vector<std::size_t> pareto;
};

std::vector<std::size_t> pareto_filter(const std::vector<TradeoffPoint>& points);

// Auxiliary-channel selection parameterizing the single-letter bounds.
// ch_tv carries a composite output of cardinality card_t * |V|, decoded as
// t = symbol / |V|, v = symbol % |V|; its V-marginal acts as ch_v when the
// outer bound is evaluated.
struct AuxiliaryChoice {
  std::optional<Channel> ch_v;   // X -> V
  std::optional<Channel> ch_u;   // V -> U (degenerate when absent)
  std::optional<Channel> ch_tv;  // X -> (T, V) composite
  int card_t = 1;
  std::optional<Channel> recon;  // g : (V, Y) -> Yp_hat
};

// Raw achievable-leakage expression value; it can be negative for
// adversarial auxiliary choices, so clamping is left to the caller.
struct LeakageValue {
  double bits = 0.0;
  bool negative_expression = false;
};

// R >= I(X; V | Y)
double inner_rate(const SourceModel& model, const AuxiliaryChoice& aux);

// D >= E[d(Yp, g(V, Y))]; loss is a dense |Yp| x |Yp_hat| matrix.
double inner_distortion(const SourceModel& model, const AuxiliaryChoice& aux,
                        const std::vector<double>& loss);

// L >= I(Ys;V,Y) + I(Z;X,Ys|U) - I(Y;X,Ys|U) - I(X;Z|V,Ys,Y) + I(X;Y|Ys,Z)
LeakageValue inner_leakage(const SourceModel& model, const AuxiliaryChoice& aux);

// Same expression with the final term replaced by I(X;Y|T,Ys,Z).
LeakageValue outer_leakage(const SourceModel& model, const AuxiliaryChoice& aux);

// Lossless reconstruction of X: rate H(X|Y) and the leakage expression
// with V = X; ch_u maps X -> U here.
std::pair<double, LeakageValue> lossless_inner(const SourceModel& model,
                                               const std::optional<Channel>& ch_u);

// Logloss region point (I(X;V|Y), H(Yp|V,Y), I(Ys;V,Y)). Requires the
// eavesdropper side information to equal Y (or be absent).
TradeoffPoint logloss_point(const SourceModel& model, const Channel& ch_v);

// Expected logarithmic loss E[log2 1/q(Yp|V,Y)] of a soft reconstruction.
// The joint must contain Yp, V and (optionally) Y.
double logloss_distortion(const JointPMF& joint_with_v, const Channel& recon);

// Deterministic minimum-expected-loss reconstruction (V, Y) -> Yp_hat.
Channel map_reconstruction(const SourceModel& model, const Channel& ch_v,
                           const std::vector<double>& loss);
// Soft reconstruction equal to the true posterior p(yp | v, y).
Channel posterior_reconstruction(const SourceModel& model, const Channel& ch_v);

// Binary helpers: h, its inverse onto [0, 1/2], and the crossover of
// cascaded BSCs a*b = a(1-b) + (1-a)b.
double binary_entropy(double u);
double binary_entropy_inverse(double t);
double binary_convolution(double a, double b);

// Closed-form information-rate-leakage function of the binary cascade:
// 1 - max{ h(h^-1(1-L)*q), h(h^-1(1-R)*p*q) }.
double binary_dprime_max(const BinaryCascadeParams& params, double rate, double leak);

// Closed-form Gaussian counterpart.
double gaussian_dprime_max(const GaussianCascadeParams& params, double rate, double leak);

// Quadratic-Gaussian region boundary (R_min, L_min) at distortion D > N_p,
// and the inverse direction D_min(R, L).
std::pair<double, double> gaussian_quadratic_region(const GaussianCascadeParams& params,
                                                    double distortion);
double gaussian_quadratic_dmin(const GaussianCascadeParams& params, double rate,
                               double leak);

// Achievable (R, D, L) of the jointly Gaussian test channel V = X + Q,
// Q ~ N(0, N_q); payload carries the distortion D.
TradeoffPoint gaussian_achievable_triple(const GaussianCascadeParams& params, double n_q);

}  // namespace sibkit

#endif  // SIBKIT_REGIONS_HPP
