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

#ifndef SIBKIT_IO_HPP
#define SIBKIT_IO_HPP

#include <ostream>
#include <string>
#include <vector>

#include "sibkit/models.hpp"
#include "sibkit/regions.hpp"
#include "sibkit/sibsolver.hpp"

namespace sibkit {

// Model files: {"vars": [{"name", "cardinality"}...], "table": [...],
// "description"?}. Channel files: {"inputs": [...], "output": {...},
// "table": [...]}. Probabilities are decimal with >= 15 significant digits.
SourceModel load_model(const std::string& path);
void save_model(const std::string& path, const SourceModel& model);
Channel load_channel(const std::string& path);
void save_channel(const std::string& path, const Channel& ch);

// 12 significant digits, the file-format contract for all emitted values.
std::string format_double(double v);

enum class OutputFormat { kCsv, kJson };

// Solver rows: beta,gamma,restart,converged,iters,rate_bits,dprime_bits,
// leakage_bits.
void emit_sweep(std::ostream& os, const std::vector<SweepRecord>& records,
                OutputFormat format);

// Bound/oracle rows: rate_bits,distortion,leakage_bits,provenance. The
// distortion column carries whichever payload the provenance implies.
void emit_points(std::ostream& os, const std::vector<TradeoffPoint>& points,
                 OutputFormat format);

}  // namespace sibkit

#endif  // SIBKIT_IO_HPP
