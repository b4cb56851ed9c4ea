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

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sibkit/io.hpp"
#include "sibkit/log.hpp"
#include "sibkit/models.hpp"
#include "sibkit/oracle.hpp"
#include "sibkit/probcore.hpp"
#include "sibkit/regions.hpp"
#include "sibkit/sibsolver.hpp"

namespace {

using namespace sibkit;

// Raised for failures that are numerical rather than usage errors:
// non-convergence under --strict, infeasible targets, enumeration caps.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::string path;  // empty = stdout
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--out", out.path, "output file (default: stdout)");
  cmd->add_option("--format", out.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

OutputFormat parse_format(const std::string& f) {
  return f == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
}

template <typename Fn>
void with_output(const OutputOptions& out, Fn&& fn) {
  if (out.path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream os(out.path);
  if (!os) throw std::invalid_argument("cannot open output file '" + out.path + "'");
  fn(os);
}

// "lo:hi:n" -> n grid values, log- or linearly spaced.
std::vector<double> parse_grid(const std::string& s, bool log_spaced) {
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw CLI::ValidationError("grid", "expected lo:hi:n, got '" + s + "'");
  }
  double lo = 0.0, hi = 0.0;
  int n = 0;
  try {
    lo = std::stod(s.substr(0, c1));
    hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    n = std::stoi(s.substr(c2 + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("grid", "expected lo:hi:n, got '" + s + "'");
  }
  if (n < 1 || hi < lo) throw CLI::ValidationError("grid", "need hi >= lo and n >= 1");
  if (log_spaced && lo <= 0.0) {
    throw CLI::ValidationError("grid", "log-spaced grid needs lo > 0");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    values.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo));
  }
  return values;
}

std::vector<double> hamming_loss(int n) {
  std::vector<double> loss(static_cast<std::size_t>(n) * n, 1.0);
  for (int i = 0; i < n; ++i) loss[static_cast<std::size_t>(i) * n + i] = 0.0;
  return loss;
}

struct ModelArgs {
  std::string path;
  SourceModel load() const { return load_model(path); }
};

int run(int argc, char** argv) {
  CLI::App app{"secure information bottleneck toolkit"};
  app.require_subcommand(1);

  // --- model ---------------------------------------------------------
  auto* model_cmd = app.add_subcommand("model", "build or re-export source models");
  model_cmd->require_subcommand(1);

  double p = 0.0, q = 0.0;
  std::string model_out;
  auto* model_binary = model_cmd->add_subcommand("binary", "uniform binary cascade");
  model_binary->add_option("--p", p, "crossover X -> Ys")->required();
  model_binary->add_option("--q", q, "crossover Ys -> Yp")->required();
  model_binary->add_option("--out", model_out, "model file to write")->required();

  GaussianCascadeParams gparams;
  int bins = 64;
  double span = 5.0;
  auto* model_gauss = model_cmd->add_subcommand("gaussian", "discretized Gaussian cascade");
  model_gauss->add_option("--nx", gparams.n_x, "source variance")->required();
  model_gauss->add_option("--ns", gparams.n_s, "secret-branch noise variance")->required();
  model_gauss->add_option("--np", gparams.n_p, "public-branch noise variance")->required();
  model_gauss->add_option("--bins", bins, "grid cells per variable");
  model_gauss->add_option("--span", span, "grid half-width in standard deviations");
  model_gauss->add_option("--out", model_out, "model file to write")->required();

  std::string model_in;
  auto* model_import = model_cmd->add_subcommand("import", "validate and re-export a model");
  model_import->add_option("--in", model_in, "model file to read")->required();
  model_import->add_option("--out", model_out, "model file to write")->required();

  // --- region --------------------------------------------------------
  auto* region_cmd = app.add_subcommand("region", "evaluate single-letter bounds");
  region_cmd->require_subcommand(1);
  ModelArgs region_model;
  std::string ch_v_path, ch_u_path, ch_tv_path, recon_path;
  int card_t = 1;
  OutputOptions region_out;

  auto* region_inner = region_cmd->add_subcommand("inner", "achievability bound");
  auto* region_outer = region_cmd->add_subcommand("outer", "converse bound");
  auto* region_lossless = region_cmd->add_subcommand("lossless", "lossless special case");
  auto* region_logloss = region_cmd->add_subcommand("logloss", "logarithmic-loss point");
  for (auto* sub : {region_inner, region_outer, region_lossless, region_logloss}) {
    sub->add_option("--model", region_model.path, "model file")->required();
    add_output_flags(sub, region_out);
  }
  region_inner->add_option("--ch-v", ch_v_path, "encoder channel X -> V")->required();
  region_inner->add_option("--ch-u", ch_u_path, "layer channel V -> U");
  region_inner->add_option("--recon", recon_path, "reconstruction channel (V,Y) -> Yhat");
  region_outer->add_option("--ch-tv", ch_tv_path, "composite channel X -> (T,V)")->required();
  region_outer->add_option("--card-t", card_t, "cardinality of T in the composite");
  region_outer->add_option("--ch-u", ch_u_path, "layer channel V -> U");
  region_lossless->add_option("--ch-u", ch_u_path, "layer channel X -> U");
  region_logloss->add_option("--ch-v", ch_v_path, "encoder channel X -> V")->required();

  // --- solve ---------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "secure information bottleneck sweep");
  ModelArgs solve_model;
  SolverConfig solver_cfg;
  std::string beta_grid = "0.1:100:20", gamma_grid = "0:0:1";
  int threads = 1;
  bool strict = false;
  OutputOptions solve_out;
  solve_cmd->add_option("--model", solve_model.path, "model file")->required();
  solve_cmd->add_option("--beta-grid", beta_grid, "lo:hi:n, log-spaced");
  solve_cmd->add_option("--gamma-grid", gamma_grid, "lo:hi:n, linearly spaced");
  solve_cmd->add_option("--card-v", solver_cfg.card_v, "encoder alphabet size");
  solve_cmd->add_option("--restarts", solver_cfg.restarts, "random restarts per point");
  solve_cmd->add_option("--seed", solver_cfg.seed, "restart seed");
  solve_cmd->add_option("--tol", solver_cfg.tol, "fixed-point tolerance");
  solve_cmd->add_option("--max-iters", solver_cfg.max_iters, "iteration cap");
  solve_cmd->add_option("--threads", threads, "worker threads");
  solve_cmd->add_flag("--strict", strict, "fail on any non-converged point");
  add_output_flags(solve_cmd, solve_out);

  // --- agglomerate ---------------------------------------------------
  auto* agg_cmd = app.add_subcommand("agglomerate", "greedy encoder coarsening from V = X");
  ModelArgs agg_model;
  double dprime_target = 0.0, leak_target = 1e9;
  OutputOptions agg_out;
  agg_cmd->add_option("--model", agg_model.path, "model file")->required();
  agg_cmd->add_option("--dprime-target", dprime_target, "information floor in bits")
      ->required();
  agg_cmd->add_option("--leak-target", leak_target, "leakage ceiling in bits");
  add_output_flags(agg_cmd, agg_out);

  // --- oracle --------------------------------------------------------
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive lattice frontier");
  ModelArgs oracle_model;
  GridSpec grid;
  bool pareto_only = false;
  int oracle_threads = 1;
  OutputOptions oracle_out;
  oracle_cmd->add_option("--model", oracle_model.path, "model file")->required();
  oracle_cmd->add_option("--card-v", grid.card_v, "encoder alphabet size");
  oracle_cmd->add_option("--resolution", grid.resolution, "simplex lattice steps per row");
  oracle_cmd->add_option("--max-channels", grid.max_channels, "enumeration cap");
  oracle_cmd->add_option("--threads", oracle_threads, "worker threads");
  oracle_cmd->add_flag("--pareto-only", pareto_only, "emit only non-dominated points");
  add_output_flags(oracle_cmd, oracle_out);

  // --- closedform ----------------------------------------------------
  auto* cf_cmd = app.add_subcommand("closedform", "closed-form tradeoff values");
  cf_cmd->require_subcommand(1);
  double rate = 1.0, leak = 1.0, distortion = 0.0, n_q = 1.0;

  auto* cf_binary = cf_cmd->add_subcommand("binary", "binary cascade optimum");
  cf_binary->add_option("--p", p, "crossover X -> Ys")->required();
  cf_binary->add_option("--q", q, "crossover Ys -> Yp")->required();
  cf_binary->add_option("--rate", rate, "rate budget in bits");
  cf_binary->add_option("--leak", leak, "leakage budget in bits");

  auto* cf_gauss = cf_cmd->add_subcommand("gaussian", "Gaussian cascade optimum");
  auto* cf_region = cf_cmd->add_subcommand("gaussian-region", "quadratic region boundary");
  auto* cf_dmin = cf_cmd->add_subcommand("gaussian-dmin", "quadratic distortion floor");
  auto* cf_triple = cf_cmd->add_subcommand("gaussian-triple", "Gaussian test-channel triple");
  for (auto* sub : {cf_gauss, cf_region, cf_dmin, cf_triple}) {
    sub->add_option("--nx", gparams.n_x, "source variance")->required();
    sub->add_option("--ns", gparams.n_s, "secret-branch noise variance")->required();
    sub->add_option("--np", gparams.n_p, "public-branch noise variance")->required();
  }
  cf_gauss->add_option("--rate", rate, "rate budget in bits");
  cf_gauss->add_option("--leak", leak, "leakage budget in bits");
  cf_region->add_option("--distortion", distortion, "target distortion")->required();
  cf_dmin->add_option("--rate", rate, "rate budget in bits");
  cf_dmin->add_option("--leak", leak, "leakage budget in bits");
  cf_triple->add_option("--nq", n_q, "test-channel noise variance")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  // model -------------------------------------------------------------
  if (model_binary->parsed()) {
    save_model(model_out, binary_cascade({p, q}));
    return 0;
  }
  if (model_gauss->parsed()) {
    save_model(model_out, gaussian_cascade_discretized(gparams, bins, span));
    return 0;
  }
  if (model_import->parsed()) {
    save_model(model_out, load_model(model_in));
    return 0;
  }

  // region ------------------------------------------------------------
  if (region_cmd->parsed()) {
    const SourceModel model = region_model.load();
    TradeoffPoint pt;
    if (region_inner->parsed()) {
      AuxiliaryChoice aux;
      aux.ch_v = load_channel(ch_v_path);
      if (!ch_u_path.empty()) aux.ch_u = load_channel(ch_u_path);
      const int nyp = model.joint.var("Yp").cardinality;
      aux.recon = recon_path.empty()
                      ? map_reconstruction(model, *aux.ch_v, hamming_loss(nyp))
                      : load_channel(recon_path);
      pt.rate_bits = inner_rate(model, aux);
      pt.payload = inner_distortion(model, aux, hamming_loss(nyp));
      pt.leakage_bits = inner_leakage(model, aux).bits;
      pt.provenance = Provenance::kInner;
    } else if (region_outer->parsed()) {
      AuxiliaryChoice aux;
      aux.ch_tv = load_channel(ch_tv_path);
      aux.card_t = card_t;
      if (!ch_u_path.empty()) aux.ch_u = load_channel(ch_u_path);
      pt.rate_bits = inner_rate(model, aux);
      pt.payload = 0.0;  // the converse constrains (R, L); D needs a recon
      pt.leakage_bits = outer_leakage(model, aux).bits;
      pt.provenance = Provenance::kOuter;
    } else if (region_lossless->parsed()) {
      std::optional<Channel> ch_u;
      if (!ch_u_path.empty()) ch_u = load_channel(ch_u_path);
      const auto [r, l] = lossless_inner(model, ch_u);
      pt.rate_bits = r;
      pt.payload = 0.0;  // exact reconstruction of X
      pt.leakage_bits = l.bits;
      pt.provenance = Provenance::kInner;
    } else {
      pt = logloss_point(model, load_channel(ch_v_path));
    }
    with_output(region_out, [&](std::ostream& os) {
      emit_points(os, {pt}, parse_format(region_out.format));
    });
    return 0;
  }

  // solve --------------------------------------------------------------
  if (solve_cmd->parsed()) {
    const CompiledModel compiled(solve_model.load());
    const auto betas = parse_grid(beta_grid, /*log_spaced=*/true);
    const auto gammas = parse_grid(gamma_grid, /*log_spaced=*/false);
    const SweepResult result = sweep(compiled, betas, gammas, solver_cfg, threads);
    with_output(solve_out, [&](std::ostream& os) {
      emit_sweep(os, result.records, parse_format(solve_out.format));
    });
    if (strict) {
      for (const auto& rec : result.records) {
        if (!rec.converged) {
          throw NumericalFailure("solver did not converge at beta=" +
                                 format_double(rec.beta) + " gamma=" +
                                 format_double(rec.gamma));
        }
      }
    }
    return 0;
  }

  // agglomerate ---------------------------------------------------------
  if (agg_cmd->parsed()) {
    const CompiledModel compiled(agg_model.load());
    AgglomerateResult result;
    try {
      result = agglomerate(compiled, dprime_target, leak_target);
    } catch (const std::invalid_argument& e) {
      throw NumericalFailure(e.what());
    }
    for (const auto& ev : result.merges) {
      log(LogLevel::kInfo, "merged symbols " + std::to_string(ev.i) + " and " +
                               std::to_string(ev.j) + ", information loss " +
                               format_double(ev.dprime_loss));
    }
    result.state.triple.provenance = Provenance::kSolver;
    with_output(agg_out, [&](std::ostream& os) {
      emit_points(os, {result.state.triple}, parse_format(agg_out.format));
    });
    return 0;
  }

  // oracle --------------------------------------------------------------
  if (oracle_cmd->parsed()) {
    const SourceModel model = oracle_model.load();
    Frontier frontier;
    try {
      frontier = grid_frontier(model, grid, oracle_threads);
    } catch (const std::invalid_argument& e) {
      throw NumericalFailure(e.what());
    }
    std::vector<TradeoffPoint> points;
    if (pareto_only) {
      points.reserve(frontier.pareto.size());
      for (std::size_t i : frontier.pareto) points.push_back(frontier.points[i]);
    } else {
      points = std::move(frontier.points);
    }
    with_output(oracle_out, [&](std::ostream& os) {
      emit_points(os, points, parse_format(oracle_out.format));
    });
    return 0;
  }

  // closedform ----------------------------------------------------------
  if (cf_binary->parsed()) {
    std::cout << format_double(binary_dprime_max({p, q}, rate, leak)) << "\n";
  } else if (cf_gauss->parsed()) {
    std::cout << format_double(gaussian_dprime_max(gparams, rate, leak)) << "\n";
  } else if (cf_region->parsed()) {
    const auto [r, l] = gaussian_quadratic_region(gparams, distortion);
    std::cout << format_double(r) << "," << format_double(l) << "\n";
  } else if (cf_dmin->parsed()) {
    std::cout << format_double(gaussian_quadratic_dmin(gparams, rate, leak)) << "\n";
  } else if (cf_triple->parsed()) {
    const TradeoffPoint pt = gaussian_achievable_triple(gparams, n_q);
    std::cout << format_double(pt.rate_bits) << "," << format_double(pt.payload) << ","
              << format_double(pt.leakage_bits) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
