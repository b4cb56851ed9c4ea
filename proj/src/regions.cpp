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

#include "sibkit/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sibkit/log.hpp"

namespace sibkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ensures Ys, Y, Z exist in the joint, adding degenerate variables so the
// "no side information" cases need no separate code paths.
JointPMF base_joint(const SourceModel& model) {
  JointPMF j = model.joint;
  if (!j.has("X") || !j.has("Yp")) {
    throw std::invalid_argument("model must contain X and Yp");
  }
  for (const char* name : {"Ys", "Y", "Z"}) {
    if (!j.has(name)) j = add_constant_var(j, name);
  }
  return j;
}

bool z_is_copy_of_y(const JointPMF& joint) {
  const auto& y = joint.var("Y");
  const auto& z = joint.var("Z");
  if (z.cardinality == 1) return true;  // treated as absent
  if (y.cardinality != z.cardinality) return false;
  const JointPMF yz = marginal(joint, {"Y", "Z"});
  const auto n = static_cast<std::size_t>(y.cardinality);
  double off = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) off += yz.table()[a * n + b];
    }
  }
  return off <= 1e-12;
}

void warn_cardinalities(const SourceModel& model, const Channel& ch_v) {
  const int nx = model.joint.var("X").cardinality;
  const int nv = ch_v.output().cardinality;
  if (nv > (nx + 3) * (nx + 2)) {
    log(LogLevel::kWarn, "|V| = " + std::to_string(nv) +
                             " exceeds the sufficiency bound (|X|+3)(|X|+2)");
  }
}

// The V-marginal of a composite (T, V) channel.
Channel tv_v_marginal(const Channel& ch_tv, int card_t) {
  const int card_tv = ch_tv.output().cardinality;
  if (card_t < 1 || card_tv % card_t != 0) {
    throw std::invalid_argument("composite (T,V) cardinality not divisible by |T|");
  }
  const int cv = card_tv / card_t;
  std::vector<double> table(ch_tv.rows() * static_cast<std::size_t>(cv), 0.0);
  for (std::size_t r = 0; r < ch_tv.rows(); ++r) {
    const auto row = ch_tv.row(r);
    for (int t = 0; t < card_t; ++t) {
      for (int v = 0; v < cv; ++v) {
        table[r * static_cast<std::size_t>(cv) + static_cast<std::size_t>(v)] +=
            row[static_cast<std::size_t>(t * cv + v)];
      }
    }
  }
  return Channel(ch_tv.inputs(), {"V", cv}, std::move(table));
}

// Deterministic extraction of one factor of the composite symbol:
// t = tv / |V|, v = tv % |V|.
Channel tv_factor(const VarLabel& tv, const std::string& out_name, int card_out,
                  int divisor, int modulus) {
  std::vector<double> table(static_cast<std::size_t>(tv.cardinality) *
                                static_cast<std::size_t>(card_out),
                            0.0);
  for (int s = 0; s < tv.cardinality; ++s) {
    const int o = (s / divisor) % modulus;
    table[static_cast<std::size_t>(s) * static_cast<std::size_t>(card_out) +
          static_cast<std::size_t>(o)] = 1.0;
  }
  return Channel({tv}, {out_name, card_out}, std::move(table));
}

const Channel& effective_v(const AuxiliaryChoice& aux, std::optional<Channel>& storage) {
  if (aux.ch_v.has_value()) return *aux.ch_v;
  if (aux.ch_tv.has_value()) {
    storage = tv_v_marginal(*aux.ch_tv, aux.card_t);
    return *storage;
  }
  throw std::invalid_argument("auxiliary choice has neither ch_v nor ch_tv");
}

// Joint over the model variables plus V and U (U degenerate when no ch_u).
JointPMF joint_with_vu(const SourceModel& model, const AuxiliaryChoice& aux) {
  std::optional<Channel> storage;
  const Channel& ch_v = effective_v(aux, storage);
  warn_cardinalities(model, ch_v);
  JointPMF j = extend_with_channel(base_joint(model), ch_v);
  if (aux.ch_u.has_value()) {
    j = extend_with_channel(j, *aux.ch_u);
  } else {
    j = add_constant_var(j, "U");
  }
  return j;
}

double leakage_expression(const JointPMF& j, const std::string& v_name,
                          const std::string& u_name, const std::string& last_cond) {
  const double t1 = cond_mi(j, {"Ys"}, {v_name, "Y"});
  const double t2 = cond_mi(j, {"Z"}, {"X", "Ys"}, {u_name});
  const double t3 = cond_mi(j, {"Y"}, {"X", "Ys"}, {u_name});
  const double t4 = cond_mi(j, {"X"}, {"Z"}, {v_name, "Ys", "Y"});
  const double t5 = last_cond.empty() ? cond_mi(j, {"X"}, {"Y"}, {"Ys", "Z"})
                                      : cond_mi(j, {"X"}, {"Y"}, {last_cond, "Ys", "Z"});
  return t1 + t2 - t3 - t4 + t5;
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kInner: return "inner";
    case Provenance::kOuter: return "outer";
    case Provenance::kLogloss: return "logloss";
    case Provenance::kSolver: return "solver";
    case Provenance::kOracle: return "oracle";
    case Provenance::kClosedForm: return "closedform";
  }
  return "unknown";
}

std::vector<std::size_t> pareto_filter(const std::vector<TradeoffPoint>& points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& p = points[a];
    const auto& q = points[b];
    if (p.rate_bits != q.rate_bits) return p.rate_bits < q.rate_bits;
    if (p.leakage_bits != q.leakage_bits) return p.leakage_bits < q.leakage_bits;
    if (p.payload != q.payload) return p.payload > q.payload;
    return a < b;
  });
  // Staircase over survivors: leakage -> best payload, strictly increasing
  // in both coordinates. A point is dominated iff some earlier point in the
  // sort order has leakage <= its leakage and payload >= its payload.
  std::map<double, double> stair;
  std::vector<std::size_t> keep;
  for (std::size_t idx : order) {
    const double leak = points[idx].leakage_bits;
    const double pay = points[idx].payload;
    auto it = stair.upper_bound(leak);
    if (it != stair.begin() && std::prev(it)->second >= pay) continue;
    keep.push_back(idx);
    auto [ins, fresh] = stair.insert_or_assign(leak, pay);
    auto next = std::next(ins);
    while (next != stair.end() && next->second <= pay) next = stair.erase(next);
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

double inner_rate(const SourceModel& model, const AuxiliaryChoice& aux) {
  std::optional<Channel> storage;
  const Channel& ch_v = effective_v(aux, storage);
  const JointPMF j = extend_with_channel(base_joint(model), ch_v);
  return cond_mi(j, {"X"}, {ch_v.output().name}, {"Y"});
}

double inner_distortion(const SourceModel& model, const AuxiliaryChoice& aux,
                        const std::vector<double>& loss) {
  if (!aux.recon.has_value()) throw std::invalid_argument("no reconstruction g supplied");
  std::optional<Channel> storage;
  const Channel& ch_v = effective_v(aux, storage);
  JointPMF j = extend_with_channel(base_joint(model), ch_v);
  j = extend_with_channel(j, *aux.recon);
  const std::string& yhat = aux.recon->output().name;
  const JointPMF m = marginal(j, {"Yp", yhat});
  const auto nyp = static_cast<std::size_t>(m.var("Yp").cardinality);
  const auto nyh = static_cast<std::size_t>(m.var(yhat).cardinality);
  if (loss.size() != nyp * nyh) throw std::invalid_argument("loss matrix dimension mismatch");
  long double d = 0.0L;
  for (std::size_t a = 0; a < nyp; ++a) {
    for (std::size_t b = 0; b < nyh; ++b) {
      d += static_cast<long double>(m.table()[a * nyh + b]) * loss[a * nyh + b];
    }
  }
  return static_cast<double>(d);
}

LeakageValue inner_leakage(const SourceModel& model, const AuxiliaryChoice& aux) {
  const JointPMF j = joint_with_vu(model, aux);
  std::optional<Channel> storage;
  const std::string v_name = effective_v(aux, storage).output().name;
  const std::string u_name = aux.ch_u.has_value() ? aux.ch_u->output().name : "U";
  const double value = leakage_expression(j, v_name, u_name, "");
  return {value, value < 0.0};
}

LeakageValue outer_leakage(const SourceModel& model, const AuxiliaryChoice& aux) {
  JointPMF j = base_joint(model);
  std::string v_name = "V";
  std::string t_name = "T";
  if (aux.ch_tv.has_value()) {
    const int card_tv = aux.ch_tv->output().cardinality;
    if (aux.card_t < 1 || card_tv % aux.card_t != 0) {
      throw std::invalid_argument("composite (T,V) cardinality not divisible by |T|");
    }
    const int cv = card_tv / aux.card_t;
    j = extend_with_channel(j, *aux.ch_tv);
    const VarLabel tv = aux.ch_tv->output();
    j = extend_with_channel(j, tv_factor(tv, "T", aux.card_t, cv, aux.card_t));
    j = extend_with_channel(j, tv_factor(tv, "V", cv, 1, cv));
    std::vector<std::string> keep;
    for (const auto& v : j.vars()) {
      if (v.name != tv.name) keep.push_back(v.name);
    }
    j = marginal(j, keep);
  } else if (aux.ch_v.has_value()) {
    j = extend_with_channel(j, *aux.ch_v);
    v_name = aux.ch_v->output().name;
    j = add_constant_var(j, "T");
  } else {
    throw std::invalid_argument("outer bound needs ch_tv or ch_v");
  }
  std::string u_name = "U";
  if (aux.ch_u.has_value()) {
    j = extend_with_channel(j, *aux.ch_u);
    u_name = aux.ch_u->output().name;
  } else {
    j = add_constant_var(j, "U");
  }
  const double value = leakage_expression(j, v_name, u_name, t_name);
  return {value, value < 0.0};
}

std::pair<double, LeakageValue> lossless_inner(const SourceModel& model,
                                               const std::optional<Channel>& ch_u) {
  JointPMF j = base_joint(model);
  std::string u_name = "U";
  if (ch_u.has_value()) {
    j = extend_with_channel(j, *ch_u);
    u_name = ch_u->output().name;
  } else {
    j = add_constant_var(j, "U");
  }
  const double rate = cond_entropy(j, {"X"}, {"Y"});
  const double t1 = cond_mi(j, {"Ys"}, {"X", "Y"});
  const double t2 = cond_mi(j, {"Z"}, {"X", "Ys"}, {u_name});
  const double t3 = cond_mi(j, {"Y"}, {"X", "Ys"}, {u_name});
  const double t5 = cond_mi(j, {"X"}, {"Y"}, {"Ys", "Z"});
  const double value = t1 + t2 - t3 + t5;
  return {rate, {value, value < 0.0}};
}

TradeoffPoint logloss_point(const SourceModel& model, const Channel& ch_v) {
  JointPMF base = base_joint(model);
  if (!z_is_copy_of_y(base)) {
    throw std::invalid_argument("logloss region requires Z = Y (or Z absent)");
  }
  const int nx = base.var("X").cardinality;
  if (ch_v.output().cardinality > nx + 2) {
    log(LogLevel::kWarn, "logloss |V| exceeds the sufficiency bound |X|+2");
  }
  const JointPMF j = extend_with_channel(base, ch_v);
  const std::string& v = ch_v.output().name;
  TradeoffPoint pt;
  pt.rate_bits = cond_mi(j, {"X"}, {v}, {"Y"});
  pt.payload = cond_entropy(j, {"Yp"}, {v, "Y"});
  pt.leakage_bits = cond_mi(j, {"Ys"}, {v, "Y"});
  pt.provenance = Provenance::kLogloss;
  return pt;
}

double logloss_distortion(const JointPMF& joint_with_v, const Channel& recon) {
  std::vector<std::string> keep = {"Yp"};
  for (const auto& in : recon.inputs()) keep.push_back(in.name);
  const JointPMF m = marginal(joint_with_v, keep);
  // Positions of the reconstruction inputs and Yp in the reduced joint.
  std::vector<int> in_pos;
  for (const auto& in : recon.inputs()) {
    const int pos = m.index_of(in.name);
    if (pos < 0 || m.vars()[static_cast<std::size_t>(pos)].cardinality != in.cardinality) {
      throw std::invalid_argument("reconstruction input mismatch on '" + in.name + "'");
    }
    in_pos.push_back(pos);
  }
  const int yp_pos = m.index_of("Yp");
  if (m.var("Yp").cardinality != recon.output().cardinality) {
    throw std::invalid_argument("reconstruction output alphabet must match Yp");
  }
  const auto nvars = m.vars().size();
  std::vector<int> digits(nvars, 0);
  long double d = 0.0L;
  for (std::size_t idx = 0; idx < m.size(); ++idx) {
    const double p = m.table()[idx];
    if (p > 0.0) {
      std::size_t row_idx = 0;
      for (std::size_t k = 0; k < in_pos.size(); ++k) {
        row_idx = row_idx * static_cast<std::size_t>(recon.inputs()[k].cardinality) +
                  static_cast<std::size_t>(digits[static_cast<std::size_t>(in_pos[k])]);
      }
      const double q = recon.row(row_idx)[static_cast<std::size_t>(digits[static_cast<std::size_t>(yp_pos)])];
      if (q <= 0.0) return kInf;
      d -= static_cast<long double>(p) * std::log2(q);
    }
    for (int k = static_cast<int>(nvars) - 1; k >= 0; --k) {
      const auto uk = static_cast<std::size_t>(k);
      if (++digits[uk] < m.vars()[uk].cardinality) break;
      digits[uk] = 0;
    }
  }
  return static_cast<double>(d);
}

namespace {

// p(yp, v, y) of the model extended by ch_v, plus the alphabet sizes.
struct PosteriorTables {
  std::vector<double> p_vy;        // [v][y]
  std::vector<double> p_yp_vy;     // [v][y][yp], conditional
  int nv = 0, ny = 0, nyp = 0;
  VarLabel v_label, y_label;
};

PosteriorTables posterior_tables(const SourceModel& model, const Channel& ch_v) {
  JointPMF j = extend_with_channel(base_joint(model), ch_v);
  const std::string& v = ch_v.output().name;
  const JointPMF m = marginal(j, {"Yp", "Y", v});
  PosteriorTables t;
  t.nyp = m.var("Yp").cardinality;
  t.ny = m.var("Y").cardinality;
  t.nv = m.var(v).cardinality;
  t.v_label = m.var(v);
  t.y_label = m.var("Y");
  const auto nv = static_cast<std::size_t>(t.nv);
  const auto ny = static_cast<std::size_t>(t.ny);
  const auto nyp = static_cast<std::size_t>(t.nyp);
  t.p_vy.assign(nv * ny, 0.0);
  t.p_yp_vy.assign(nv * ny * nyp, 0.0);
  const std::size_t s_yp = m.stride(m.index_of("Yp"));
  const std::size_t s_y = m.stride(m.index_of("Y"));
  const std::size_t s_v = m.stride(m.index_of(v));
  for (std::size_t yp = 0; yp < nyp; ++yp) {
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t v_i = 0; v_i < nv; ++v_i) {
        const double p = m.table()[yp * s_yp + y * s_y + v_i * s_v];
        t.p_vy[v_i * ny + y] += p;
        t.p_yp_vy[(v_i * ny + y) * nyp + yp] += p;
      }
    }
  }
  for (std::size_t c = 0; c < nv * ny; ++c) {
    const double mass = t.p_vy[c];
    for (std::size_t yp = 0; yp < nyp; ++yp) {
      t.p_yp_vy[c * nyp + yp] = mass > 0.0 ? t.p_yp_vy[c * nyp + yp] / mass : 1.0 / nyp;
    }
  }
  return t;
}

}  // namespace

Channel map_reconstruction(const SourceModel& model, const Channel& ch_v,
                           const std::vector<double>& loss) {
  const PosteriorTables t = posterior_tables(model, ch_v);
  const auto nyp = static_cast<std::size_t>(t.nyp);
  if (loss.size() % nyp != 0) throw std::invalid_argument("loss matrix dimension mismatch");
  const std::size_t nyh = loss.size() / nyp;
  const auto cells = static_cast<std::size_t>(t.nv * t.ny);
  std::vector<double> table(cells * nyh, 0.0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t best = 0;
    double best_cost = kInf;
    for (std::size_t b = 0; b < nyh; ++b) {
      double cost = 0.0;
      for (std::size_t a = 0; a < nyp; ++a) {
        cost += t.p_yp_vy[c * nyp + a] * loss[a * nyh + b];
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = b;
      }
    }
    table[c * nyh + best] = 1.0;
  }
  return Channel({t.v_label, t.y_label}, {"Yhat", static_cast<int>(nyh)}, std::move(table));
}

Channel posterior_reconstruction(const SourceModel& model, const Channel& ch_v) {
  PosteriorTables t = posterior_tables(model, ch_v);
  return Channel({t.v_label, t.y_label}, {"Yp", t.nyp}, std::move(t.p_yp_vy));
}

double binary_entropy(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("binary_entropy domain is [0,1]");
  if (u == 0.0 || u == 1.0) return 0.0;
  return -u * std::log2(u) - (1.0 - u) * std::log2(1.0 - u);
}

double binary_entropy_inverse(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("binary_entropy_inverse domain is [0,1]");
  }
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double h = binary_entropy(mid);
    if (std::abs(h - t) <= 1e-15) return mid;
    (h < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double binary_convolution(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw std::invalid_argument("binary_convolution domain is [0,1]^2");
  }
  return a * (1.0 - b) + (1.0 - a) * b;
}

double binary_dprime_max(const BinaryCascadeParams& params, double rate, double leak) {
  if (!(params.p >= 0.0 && params.p <= 0.5) || !(params.q >= 0.0 && params.q <= 0.5)) {
    throw std::invalid_argument("binary cascade crossovers must lie in [0, 1/2]");
  }
  if (!(rate >= 0.0 && rate <= 1.0) || !(leak >= 0.0 && leak <= 1.0)) {
    throw std::invalid_argument("R and L must lie in [0, H(X)] = [0, 1]");
  }
  const double leak_branch =
      binary_entropy(binary_convolution(binary_entropy_inverse(1.0 - leak), params.q));
  const double rate_branch = binary_entropy(binary_convolution(
      binary_convolution(binary_entropy_inverse(1.0 - rate), params.p), params.q));
  return 1.0 - std::max(leak_branch, rate_branch);
}

double gaussian_dprime_max(const GaussianCascadeParams& params, double rate, double leak) {
  if (!(params.n_x > 0.0) || !(params.n_s > 0.0) || !(params.n_p >= params.n_s)) {
    throw std::invalid_argument("invalid gaussian cascade parameters");
  }
  if (!(rate >= 0.0) || !(leak >= 0.0)) throw std::invalid_argument("R, L must be >= 0");
  const double top = params.n_x + params.n_p;
  const double rate_branch =
      0.5 * std::log2(top / (params.n_x * std::exp2(-2.0 * rate) + params.n_p));
  const double leak_branch =
      0.5 * std::log2(top / ((params.n_x + params.n_s) * std::exp2(-2.0 * leak) +
                             params.n_p - params.n_s));
  return std::min(rate_branch, leak_branch);
}

std::pair<double, double> gaussian_quadratic_region(const GaussianCascadeParams& params,
                                                    double distortion) {
  if (!(distortion > params.n_p)) {
    throw std::invalid_argument("quadratic Gaussian region requires D > N_p");
  }
  const double r = 0.5 * std::log2(params.n_x / (distortion - params.n_p));
  const double l = 0.5 * std::log2((params.n_x + params.n_s) /
                                   (distortion - params.n_p + params.n_s));
  return {std::max(0.0, r), std::max(0.0, l)};
}

double gaussian_quadratic_dmin(const GaussianCascadeParams& params, double rate,
                               double leak) {
  if (!(rate >= 0.0) || !(leak >= 0.0)) throw std::invalid_argument("R, L must be >= 0");
  return std::max(params.n_p + params.n_x * std::exp2(-2.0 * rate),
                  params.n_p - params.n_s +
                      (params.n_x + params.n_s) * std::exp2(-2.0 * leak));
}

TradeoffPoint gaussian_achievable_triple(const GaussianCascadeParams& params, double n_q) {
  if (!(n_q > 0.0)) throw std::invalid_argument("N_q must be positive");
  const double mmse = params.n_x * n_q / (params.n_x + n_q);
  TradeoffPoint pt;
  pt.rate_bits = 0.5 * std::log2((params.n_x + n_q) / n_q);
  pt.payload = params.n_p + mmse;  // distortion D
  pt.leakage_bits = 0.5 * std::log2((params.n_x + params.n_s) / (params.n_s + mmse));
  pt.provenance = Provenance::kClosedForm;
  return pt;
}

}  // namespace sibkit
