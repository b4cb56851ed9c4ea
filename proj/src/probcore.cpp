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

#include "sibkit/probcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace sibkit {

namespace {

constexpr double kLog2e = 1.4426950408889634;  // 1 / ln 2

std::size_t table_size(const std::vector<VarLabel>& vars) {
  std::size_t n = 1;
  for (const auto& v : vars) {
    if (v.cardinality < 1) {
      throw std::invalid_argument("variable '" + v.name + "' has cardinality < 1");
    }
    n *= static_cast<std::size_t>(v.cardinality);
  }
  return n;
}

void check_unique_names(const std::vector<VarLabel>& vars) {
  std::unordered_set<std::string> seen;
  for (const auto& v : vars) {
    if (!seen.insert(v.name).second) {
      throw std::invalid_argument("duplicate variable name '" + v.name + "'");
    }
  }
}

double stable_sum(std::span<const double> xs) {
  long double s = 0.0L;
  for (double x : xs) s += x;
  return static_cast<double>(s);
}

void check_disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      throw std::invalid_argument("variable sets overlap at '" + x + "'");
    }
  }
}

std::vector<std::string> set_union(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
  std::vector<std::string> u = a;
  for (const auto& x : b) {
    if (std::find(u.begin(), u.end(), x) == u.end()) u.push_back(x);
  }
  return u;
}

}  // namespace

JointPMF::JointPMF(std::vector<VarLabel> vars, std::vector<double> table)
    : vars_(std::move(vars)), table_(std::move(table)) {
  if (vars_.empty()) throw std::invalid_argument("JointPMF needs at least one variable");
  check_unique_names(vars_);
  const std::size_t n = table_size(vars_);
  if (table_.size() != n) {
    throw std::invalid_argument("table length " + std::to_string(table_.size()) +
                                " does not match alphabet product " + std::to_string(n));
  }
  for (double p : table_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative or NaN probability entry");
  }
  const double sum = stable_sum(table_);
  if (std::abs(sum - 1.0) > kProbTol) {
    throw std::invalid_argument("joint table sums to " + std::to_string(sum) + ", not 1");
  }
  strides_.assign(vars_.size(), 1);
  for (int i = static_cast<int>(vars_.size()) - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * static_cast<std::size_t>(vars_[i + 1].cardinality);
  }
}

int JointPMF::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const VarLabel& JointPMF::var(std::string_view name) const {
  const int i = index_of(name);
  if (i < 0) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
  return vars_[static_cast<std::size_t>(i)];
}

Channel::Channel(std::vector<VarLabel> inputs, VarLabel output, std::vector<double> table)
    : inputs_(std::move(inputs)), output_(std::move(output)), table_(std::move(table)) {
  if (output_.cardinality < 1) throw std::invalid_argument("output cardinality < 1");
  rows_ = table_size(inputs_);
  const std::size_t expected = rows_ * static_cast<std::size_t>(output_.cardinality);
  if (table_.size() != expected) {
    throw std::invalid_argument("channel table length mismatch");
  }
  for (double p : table_) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative or NaN channel entry");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    const double sum = stable_sum(row(r));
    if (std::abs(sum - 1.0) > kProbTol) {
      throw std::invalid_argument("channel row " + std::to_string(r) +
                                  " sums to " + std::to_string(sum) + ", not 1");
    }
  }
}

JointPMF extend_with_channel(const JointPMF& joint, const Channel& ch) {
  if (joint.has(ch.output().name)) {
    throw std::invalid_argument("output variable '" + ch.output().name +
                                "' already present in joint");
  }
  // Map channel inputs onto joint positions.
  std::vector<int> in_pos;
  in_pos.reserve(ch.inputs().size());
  for (const auto& in : ch.inputs()) {
    const int pos = joint.index_of(in.name);
    if (pos < 0) throw std::invalid_argument("channel input '" + in.name + "' not in joint");
    if (joint.vars()[static_cast<std::size_t>(pos)].cardinality != in.cardinality) {
      throw std::invalid_argument("cardinality mismatch on channel input '" + in.name + "'");
    }
    in_pos.push_back(pos);
  }

  std::vector<VarLabel> out_vars = joint.vars();
  out_vars.push_back(ch.output());
  const auto nout = static_cast<std::size_t>(ch.output().cardinality);
  std::vector<double> out(joint.size() * nout);

  const auto nvars = joint.vars().size();
  std::vector<int> digits(nvars, 0);
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    std::size_t row_idx = 0;
    for (std::size_t k = 0; k < in_pos.size(); ++k) {
      row_idx = row_idx * static_cast<std::size_t>(ch.inputs()[k].cardinality) +
                static_cast<std::size_t>(digits[static_cast<std::size_t>(in_pos[k])]);
    }
    const double p = joint.table()[idx];
    const auto row = ch.row(row_idx);
    for (std::size_t o = 0; o < nout; ++o) out[idx * nout + o] = p * row[o];

    for (int d = static_cast<int>(nvars) - 1; d >= 0; --d) {
      if (++digits[static_cast<std::size_t>(d)] <
          joint.vars()[static_cast<std::size_t>(d)].cardinality) break;
      digits[static_cast<std::size_t>(d)] = 0;
    }
  }
  return JointPMF(std::move(out_vars), std::move(out));
}

JointPMF add_constant_var(const JointPMF& joint, const std::string& name) {
  if (joint.has(name)) throw std::invalid_argument("variable '" + name + "' already present");
  std::vector<VarLabel> vars = joint.vars();
  vars.push_back({name, 1});
  return JointPMF(std::move(vars), joint.table());
}

JointPMF marginal(const JointPMF& joint, const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("marginal over empty variable set");
  for (const auto& name : keep) {
    if (!joint.has(name)) throw std::invalid_argument("unknown variable '" + name + "'");
  }
  const auto nvars = joint.vars().size();
  std::vector<bool> kept(nvars, false);
  std::vector<VarLabel> out_vars;
  for (std::size_t i = 0; i < nvars; ++i) {
    if (std::find(keep.begin(), keep.end(), joint.vars()[i].name) != keep.end()) {
      kept[i] = true;
      out_vars.push_back(joint.vars()[i]);
    }
  }
  // Per-variable stride in the reduced table (0 for summed-out variables).
  std::vector<std::size_t> out_stride(nvars, 0);
  std::size_t s = 1;
  for (int i = static_cast<int>(nvars) - 1; i >= 0; --i) {
    const auto ui = static_cast<std::size_t>(i);
    if (kept[ui]) {
      out_stride[ui] = s;
      s *= static_cast<std::size_t>(joint.vars()[ui].cardinality);
    }
  }
  std::vector<double> out(s, 0.0);
  std::vector<int> digits(nvars, 0);
  std::size_t out_idx = 0;
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    out[out_idx] += joint.table()[idx];
    for (int d = static_cast<int>(nvars) - 1; d >= 0; --d) {
      const auto ud = static_cast<std::size_t>(d);
      if (++digits[ud] < joint.vars()[ud].cardinality) {
        out_idx += out_stride[ud];
        break;
      }
      out_idx -= out_stride[ud] * static_cast<std::size_t>(joint.vars()[ud].cardinality - 1);
      digits[ud] = 0;
    }
  }
  return JointPMF(std::move(out_vars), std::move(out));
}

double entropy_bits(const JointPMF& joint) {
  long double h = 0.0L;
  for (double p : joint.table()) {
    if (p > 0.0) h -= static_cast<long double>(p) * std::log(p);
  }
  return static_cast<double>(h) * kLog2e;
}

double cond_entropy(const JointPMF& joint, const std::vector<std::string>& a,
                    const std::vector<std::string>& c) {
  if (a.empty()) throw std::invalid_argument("cond_entropy: empty target set");
  check_disjoint(a, c);
  const double h_ac = entropy_bits(marginal(joint, set_union(a, c)));
  const double h_c = c.empty() ? 0.0 : entropy_bits(marginal(joint, c));
  return h_ac - h_c;
}

double cond_mi(const JointPMF& joint, const std::vector<std::string>& a,
               const std::vector<std::string>& b, const std::vector<std::string>& c) {
  check_disjoint(a, b);
  check_disjoint(a, c);
  check_disjoint(b, c);
  const double v = cond_entropy(joint, a, c) - cond_entropy(joint, a, set_union(b, c));
  if (v < -1e-9) {
    throw std::runtime_error("conditional MI " + std::to_string(v) +
                             " below the -1e-9 rounding floor");
  }
  return v < 0.0 ? 0.0 : v;
}

double kl_bits(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl: length mismatch");
  long double d = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
      d += static_cast<long double>(p[i]) * std::log(p[i] / q[i]);
    }
  }
  return static_cast<double>(d) * kLog2e;
}

bool verify_markov(const JointPMF& joint, const std::vector<std::string>& a,
                   const std::vector<std::string>& b, const std::vector<std::string>& c,
                   double tol) {
  return cond_mi(joint, a, c, b) <= tol;
}

Channel identity_channel(const VarLabel& input, const std::string& output_name) {
  const auto n = static_cast<std::size_t>(input.cardinality);
  std::vector<double> table(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) table[i * n + i] = 1.0;
  return Channel({input}, {output_name, input.cardinality}, std::move(table));
}

Channel constant_channel(const VarLabel& input, const VarLabel& output, int symbol) {
  if (symbol < 0 || symbol >= output.cardinality) {
    throw std::invalid_argument("constant_channel: symbol out of range");
  }
  const auto rows = static_cast<std::size_t>(input.cardinality);
  const auto n = static_cast<std::size_t>(output.cardinality);
  std::vector<double> table(rows * n, 0.0);
  for (std::size_t r = 0; r < rows; ++r) table[r * n + static_cast<std::size_t>(symbol)] = 1.0;
  return Channel({input}, output, std::move(table));
}

}  // namespace sibkit
