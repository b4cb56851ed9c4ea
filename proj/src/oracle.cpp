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

#include "sibkit/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sibkit {

namespace {

// All compositions of `total` into `parts` nonnegative integers, in
// lexicographic order of the count vectors.
void compositions(int total, int parts, std::vector<int>& prefix,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int c = 0; c <= total; ++c) {
    prefix.push_back(c);
    compositions(total - c, parts - 1, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<double>> lattice_rows(int resolution, int card_v) {
  std::vector<std::vector<int>> counts;
  std::vector<int> prefix;
  compositions(resolution, card_v, prefix, counts);
  std::vector<std::vector<double>> rows;
  rows.reserve(counts.size());
  for (const auto& c : counts) {
    std::vector<double> row(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      row[i] = static_cast<double>(c[i]) / resolution;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::uint64_t grid_channel_count(const SourceModel& model, const GridSpec& spec) {
  if (spec.resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  if (spec.card_v < 1) throw std::invalid_argument("card_v must be >= 1");
  const auto nx = static_cast<std::uint64_t>(model.joint.var("X").cardinality);
  const std::uint64_t per_row =
      binomial(static_cast<std::uint64_t>(spec.resolution + spec.card_v - 1),
               static_cast<std::uint64_t>(spec.card_v - 1));
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < nx; ++i) {
    if (count > spec.max_channels / per_row + 1) return std::numeric_limits<std::uint64_t>::max();
    count *= per_row;
  }
  return count;
}

Frontier grid_frontier(const SourceModel& model, const GridSpec& spec, int threads) {
  const std::uint64_t count = grid_channel_count(model, spec);
  if (count > spec.max_channels) {
    throw std::invalid_argument("lattice has " + std::to_string(count) +
                                " channels, above the cap of " +
                                std::to_string(spec.max_channels));
  }
  const VarLabel x_label = model.joint.var("X");
  const auto nx = static_cast<std::size_t>(x_label.cardinality);
  const auto nv = static_cast<std::size_t>(spec.card_v);
  const auto rows = lattice_rows(spec.resolution, spec.card_v);
  const std::uint64_t per_row = rows.size();
  const double h_yp = entropy_bits(marginal(model.joint, {"Yp"}));

  Frontier frontier;
  frontier.points.resize(count);

  auto evaluate_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::vector<double> table(nx * nv);
    for (std::uint64_t c = begin; c < end; ++c) {
      std::uint64_t rem = c;
      for (std::size_t x = nx; x-- > 0;) {
        const auto& row = rows[rem % per_row];
        rem /= per_row;
        std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(x * nv));
      }
      Channel ch({x_label}, {"V", spec.card_v}, table);
      TradeoffPoint pt = logloss_point(model, ch);
      // Store the information payload D' = H(Yp) - D so frontier queries
      // maximize the right quantity.
      pt.payload = h_yp - pt.payload;
      pt.provenance = Provenance::kOracle;
      frontier.points[c] = pt;
    }
  };

  const int width = std::max(1, threads);
  if (width == 1 || count < 1024) {
    evaluate_range(0, count);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (count + width - 1) / width;
    for (int t = 0; t < width; ++t) {
      const std::uint64_t begin = static_cast<std::uint64_t>(t) * chunk;
      const std::uint64_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(evaluate_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  frontier.pareto = pareto_filter(frontier.points);
  return frontier;
}

double max_dprime(const Frontier& frontier, double r_cap, double l_cap) {
  if (frontier.points.empty()) throw std::invalid_argument("empty frontier");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& pt : frontier.points) {
    if (pt.rate_bits <= r_cap && pt.leakage_bits <= l_cap) {
      best = std::max(best, pt.payload);
    }
  }
  return best;
}

}  // namespace sibkit
