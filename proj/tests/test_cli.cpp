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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sibkit/io.hpp"
#include "sibkit/probcore.hpp"

using namespace sibkit;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "sibkit_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_file = {}) {
  std::string cmd = std::string(SIBKIT_CLI_PATH) + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file.string();
  cmd += " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::size_t column_count(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("closedform binary prints the expected optimum") {
  const fs::path out = work_dir() / "cf.txt";
  REQUIRE(run_cli("closedform binary --p 0.1 --q 0.2 --rate 1 --leak 1", out) == 0);
  CHECK(std::stod(slurp(out)) == doctest::Approx(0.17325).epsilon(1e-4));
}

TEST_CASE("closedform gaussian variants") {
  const fs::path out = work_dir() / "cfg.txt";
  REQUIRE(run_cli("closedform gaussian --nx 1 --ns 0.5 --np 1 --rate 0.5 --leak 10", out) == 0);
  CHECK(std::stod(slurp(out)) == doctest::Approx(0.20752).epsilon(1e-4));

  REQUIRE(run_cli("closedform gaussian-dmin --nx 1 --ns 0.5 --np 1 --rate 0.5 --leak 0.5",
                  out) == 0);
  CHECK(std::stod(slurp(out)) == doctest::Approx(1.5).epsilon(1e-10));

  REQUIRE(run_cli("closedform gaussian-triple --nx 1 --ns 0.5 --np 1 --nq 1", out) == 0);
  const std::string triple = slurp(out);
  CHECK(std::stod(triple) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("model export/import round trip preserves information quantities") {
  const fs::path m1 = work_dir() / "cascade.json";
  const fs::path m2 = work_dir() / "cascade2.json";
  REQUIRE(run_cli("model binary --p 0.1 --q 0.2 --out " + m1.string()) == 0);
  REQUIRE(run_cli("model import --in " + m1.string() + " --out " + m2.string()) == 0);

  const SourceModel a = load_model(m1.string());
  const SourceModel b = load_model(m2.string());
  CHECK(std::abs(cond_mi(a.joint, {"X"}, {"Yp"}) - cond_mi(b.joint, {"X"}, {"Yp"})) <= 1e-15);
  CHECK(std::abs(cond_mi(a.joint, {"Ys"}, {"Yp"}) - cond_mi(b.joint, {"Ys"}, {"Yp"})) <=
        1e-15);
  CHECK(std::abs(cond_entropy(a.joint, {"X"}) - cond_entropy(b.joint, {"X"})) <= 1e-15);
}

TEST_CASE("solve emits strict CSV with beta ascending") {
  const fs::path m1 = work_dir() / "cascade.json";
  REQUIRE(run_cli("model binary --p 0.1 --q 0.2 --out " + m1.string()) == 0);
  const fs::path out = work_dir() / "sweep.csv";
  REQUIRE(run_cli("solve --model " + m1.string() +
                      " --beta-grid 0.1:50:6 --gamma-grid 0:1:2 --card-v 2 --restarts 2"
                      " --seed 3 --max-iters 2000 --out " +
                  out.string()) == 0);
  const auto lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 13);  // header + 6 betas x 2 gammas
  CHECK(lines[0] ==
        "beta,gamma,restart,converged,iters,rate_bits,dprime_bits,leakage_bits");
  const std::size_t cols = column_count(lines[0]);
  double prev_beta = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(column_count(lines[i]) == cols);
    const double beta = std::stod(lines[i]);
    if ((i - 1) % 6 == 0) {
      prev_beta = 0.0;  // new gamma block restarts the ramp
    }
    CHECK(beta > prev_beta);
    prev_beta = beta;
  }
}

TEST_CASE("solve output is byte-identical across thread counts") {
  const fs::path m1 = work_dir() / "cascade.json";
  REQUIRE(run_cli("model binary --p 0.1 --q 0.2 --out " + m1.string()) == 0);
  const std::string base = "solve --model " + m1.string() +
                           " --beta-grid 0.2:20:5 --gamma-grid 0:1.5:3 --card-v 3"
                           " --restarts 3 --seed 11 --max-iters 2000";
  const fs::path out1 = work_dir() / "sweep_t1.csv";
  const fs::path out4 = work_dir() / "sweep_t4.csv";
  REQUIRE(run_cli(base + " --threads 1 --out " + out1.string()) == 0);
  REQUIRE(run_cli(base + " --threads 4 --out " + out4.string()) == 0);
  CHECK(slurp(out1) == slurp(out4));
  REQUIRE(run_cli(base + " --threads 2 --out " + out4.string()) == 0);
  CHECK(slurp(out1) == slurp(out4));
}

TEST_CASE("oracle emits frontier points and honors the cap") {
  const fs::path m1 = work_dir() / "cascade.json";
  REQUIRE(run_cli("model binary --p 0.1 --q 0.2 --out " + m1.string()) == 0);
  const fs::path out = work_dir() / "oracle.csv";
  REQUIRE(run_cli("oracle --model " + m1.string() +
                      " --card-v 2 --resolution 16 --pareto-only --out " +
                  out.string()) == 0);
  const auto lines = csv_lines(slurp(out));
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "rate_bits,distortion,leakage_bits,provenance");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(column_count(lines[i]) == 4);
    CHECK(lines[i].find("oracle") != std::string::npos);
  }

  // Exceeding the enumeration cap is a numerical failure: exit 2.
  CHECK(run_cli("oracle --model " + m1.string() +
                " --card-v 2 --resolution 200 --max-channels 100") == 2);
}

TEST_CASE("region logloss evaluates a stored channel") {
  const fs::path m1 = work_dir() / "cascade.json";
  REQUIRE(run_cli("model binary --p 0.1 --q 0.2 --out " + m1.string()) == 0);
  const fs::path chv = work_dir() / "chv.json";
  save_channel(chv.string(), Channel({{"X", 2}}, {"V", 2}, {0.95, 0.05, 0.05, 0.95}));
  const fs::path out = work_dir() / "region.csv";
  REQUIRE(run_cli("region logloss --model " + m1.string() + " --ch-v " + chv.string() +
                      " --out " + out.string()) == 0);
  const auto lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].find("logloss") != std::string::npos);
  CHECK(std::stod(lines[1]) == doctest::Approx(0.71360).epsilon(1e-4));  // rate column
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("definitely-not-a-subcommand") == 1);
  CHECK(run_cli("closedform binary --p 0.1") == 1);           // missing --q
  CHECK(run_cli("solve --model /nonexistent/model.json") == 1);
}
