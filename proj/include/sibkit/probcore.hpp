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

#ifndef SIBKIT_PROBCORE_HPP
#define SIBKIT_PROBCORE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sibkit {

// Probability mass below this is treated as an exact zero when validating
// tables; normalization checks use the same tolerance.
inline constexpr double kProbTol = 1e-12;

struct VarLabel {
  std::string name;
  int cardinality = 1;
};

// Dense joint distribution over an ordered set of labeled finite variables.
// Row-major indexing: the last variable varies fastest. Immutable after
// construction; all operations below are pure functions.
class JointPMF {
 public:
  JointPMF(std::vector<VarLabel> vars, std::vector<double> table);

  const std::vector<VarLabel>& vars() const { return vars_; }
  const std::vector<double>& table() const { return table_; }
  std::size_t size() const { return table_.size(); }

  // Position of a variable in the order, or -1.
  int index_of(std::string_view name) const;
  bool has(std::string_view name) const { return index_of(name) >= 0; }
  const VarLabel& var(std::string_view name) const;

  // Stride of variable i in the row-major table.
  std::size_t stride(int i) const { return strides_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<VarLabel> vars_;
  std::vector<double> table_;
  std::vector<std::size_t> strides_;
};

// Row-stochastic conditional table p(output | inputs). Rows are indexed
// row-major by the input order; columns by the output symbol.
class Channel {
 public:
  Channel(std::vector<VarLabel> inputs, VarLabel output, std::vector<double> table);

  const std::vector<VarLabel>& inputs() const { return inputs_; }
  const VarLabel& output() const { return output_; }
  const std::vector<double>& table() const { return table_; }

  std::size_t rows() const { return rows_; }
  std::span<const double> row(std::size_t r) const {
    const auto n = static_cast<std::size_t>(output_.cardinality);
    return {table_.data() + r * n, n};
  }

 private:
  std::vector<VarLabel> inputs_;
  VarLabel output_;
  std::vector<double> table_;
  std::size_t rows_ = 0;
};

// p(vars, out) = p(vars) * p(out | inputs); the new variable is appended
// last and is conditionally independent of the non-input variables given
// the inputs.
JointPMF extend_with_channel(const JointPMF& joint, const Channel& ch);

// Appends a degenerate (cardinality 1) variable; used to realize the
// "Y = empty" style special cases without separate code paths.
JointPMF add_constant_var(const JointPMF& joint, const std::string& name);

// Sums out every variable not in `keep`; result preserves the joint's
// variable order.
JointPMF marginal(const JointPMF& joint, const std::vector<std::string>& keep);

// H(vars) of the full table, in bits.
double entropy_bits(const JointPMF& joint);

// H(A | C), C may be empty. 0 log 0 = 0.
double cond_entropy(const JointPMF& joint, const std::vector<std::string>& a,
                    const std::vector<std::string>& c = {});

// I(A ; B | C), C may be empty. Rounding residue in [-1e-9, 0) is clamped
// to 0; anything more negative throws.
double cond_mi(const JointPMF& joint, const std::vector<std::string>& a,
               const std::vector<std::string>& b,
               const std::vector<std::string>& c = {});

// KL divergence in bits; +infinity when p_i > 0 with q_i = 0.
double kl_bits(std::span<const double> p, std::span<const double> q);

// True iff I(A ; C | B) <= tol, i.e. A - B - C forms a Markov chain up
// to tolerance.
bool verify_markov(const JointPMF& joint, const std::vector<std::string>& a,
                   const std::vector<std::string>& b,
                   const std::vector<std::string>& c, double tol = 1e-9);

// Convenience constructors for common channels.
Channel identity_channel(const VarLabel& input, const std::string& output_name);
Channel constant_channel(const VarLabel& input, const VarLabel& output, int symbol);

}  // namespace sibkit

#endif  // SIBKIT_PROBCORE_HPP
