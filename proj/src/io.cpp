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

#include "sibkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sibkit {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  in >> j;
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

std::vector<VarLabel> labels_from_json(const json& arr) {
  std::vector<VarLabel> vars;
  for (const auto& v : arr) {
    vars.push_back({v.at("name").get<std::string>(), v.at("cardinality").get<int>()});
  }
  return vars;
}

json labels_to_json(const std::vector<VarLabel>& vars) {
  json arr = json::array();
  for (const auto& v : vars) {
    arr.push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  }
  return arr;
}

}  // namespace

SourceModel load_model(const std::string& path) {
  const json j = read_json(path);
  return from_table(labels_from_json(j.at("vars")),
                    j.at("table").get<std::vector<double>>(),
                    j.value("description", std::string{}));
}

void save_model(const std::string& path, const SourceModel& model) {
  json j;
  j["vars"] = labels_to_json(model.joint.vars());
  j["table"] = model.joint.table();
  if (!model.description.empty()) j["description"] = model.description;
  write_json(path, j);
}

Channel load_channel(const std::string& path) {
  const json j = read_json(path);
  const json& out = j.at("output");
  return Channel(labels_from_json(j.at("inputs")),
                 {out.at("name").get<std::string>(), out.at("cardinality").get<int>()},
                 j.at("table").get<std::vector<double>>());
}

void save_channel(const std::string& path, const Channel& ch) {
  json j;
  j["inputs"] = labels_to_json(ch.inputs());
  j["output"] = {{"name", ch.output().name}, {"cardinality", ch.output().cardinality}};
  j["table"] = ch.table();
  write_json(path, j);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void emit_sweep(std::ostream& os, const std::vector<SweepRecord>& records,
                OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    os << "beta,gamma,restart,converged,iters,rate_bits,dprime_bits,leakage_bits\n";
    for (const auto& r : records) {
      os << format_double(r.beta) << ',' << format_double(r.gamma) << ',' << r.restart
         << ',' << (r.converged ? 1 : 0) << ',' << r.iters << ','
         << format_double(r.point.rate_bits) << ',' << format_double(r.point.payload)
         << ',' << format_double(r.point.leakage_bits) << '\n';
    }
    return;
  }
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back({{"beta", format_double(r.beta)},
                   {"gamma", format_double(r.gamma)},
                   {"restart", r.restart},
                   {"converged", r.converged},
                   {"iters", r.iters},
                   {"rate_bits", format_double(r.point.rate_bits)},
                   {"dprime_bits", format_double(r.point.payload)},
                   {"leakage_bits", format_double(r.point.leakage_bits)}});
  }
  os << arr.dump(2) << '\n';
}

void emit_points(std::ostream& os, const std::vector<TradeoffPoint>& points,
                 OutputFormat format) {
  if (format == OutputFormat::kCsv) {
    os << "rate_bits,distortion,leakage_bits,provenance\n";
    for (const auto& p : points) {
      os << format_double(p.rate_bits) << ',' << format_double(p.payload) << ','
         << format_double(p.leakage_bits) << ',' << provenance_name(p.provenance) << '\n';
    }
    return;
  }
  json arr = json::array();
  for (const auto& p : points) {
    arr.push_back({{"rate_bits", format_double(p.rate_bits)},
                   {"distortion", format_double(p.payload)},
                   {"leakage_bits", format_double(p.leakage_bits)},
                   {"provenance", provenance_name(p.provenance)}});
  }
  os << arr.dump(2) << '\n';
}

}  // namespace sibkit
