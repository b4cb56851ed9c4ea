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

#include "sibkit/sibsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "sibkit/log.hpp"

namespace sibkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// splitmix64; used to derive independent per-(grid point, restart) streams.
std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t beta_idx,
                       std::uint64_t gamma_idx, std::uint64_t restart) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0x5851f42d4c957f2dULL * (beta_idx + 1);
  splitmix64(s);
  s ^= 0x14057b7ef767814fULL * (gamma_idx + 1);
  splitmix64(s);
  s ^= 0x2545f4914f6cdd1dULL * (restart + 1);
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  // Uniform in (0, 1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(splitmix64(state_) >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

struct Derived {
  std::vector<double> p_v_given_y;    // [y][v]
  std::vector<double> p_vy;           // [v][y]
  std::vector<double> p_yp_given_vy;  // [v][y][yp]
  std::vector<double> p_ys_given_vy;  // [v][y][ys]
};

Derived derive_tables(const CompiledModel& m, const std::vector<double>& ch_v) {
  const auto nx = static_cast<std::size_t>(m.nx());
  const auto ny = static_cast<std::size_t>(m.ny());
  const auto nyp = static_cast<std::size_t>(m.nyp());
  const auto nys = static_cast<std::size_t>(m.nys());
  const auto nv = ch_v.size() / nx;

  Derived d;
  d.p_vy.assign(nv * ny, 0.0);
  d.p_v_given_y.assign(ny * nv, 0.0);
  d.p_yp_given_vy.assign(nv * ny * nyp, 0.0);
  d.p_ys_given_vy.assign(nv * ny * nys, 0.0);

  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double pxy = m.p_xy()[x * ny + y];
      if (pxy == 0.0) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        const double w = pxy * ch_v[x * nv + v];
        if (w == 0.0) continue;
        d.p_vy[v * ny + y] += w;
        for (std::size_t a = 0; a < nyp; ++a) {
          d.p_yp_given_vy[(v * ny + y) * nyp + a] += w * m.p_yp_given_xy()[(x * ny + y) * nyp + a];
        }
        for (std::size_t a = 0; a < nys; ++a) {
          d.p_ys_given_vy[(v * ny + y) * nys + a] += w * m.p_ys_given_xy()[(x * ny + y) * nys + a];
        }
      }
    }
  }
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double mass = d.p_vy[v * ny + y];
      const double py = m.p_y()[y];
      d.p_v_given_y[y * nv + v] = py > 0.0 ? mass / py : 1.0 / static_cast<double>(nv);
      const std::size_t cell = v * ny + y;
      if (mass > 0.0) {
        for (std::size_t a = 0; a < nyp; ++a) d.p_yp_given_vy[cell * nyp + a] /= mass;
        for (std::size_t a = 0; a < nys; ++a) d.p_ys_given_vy[cell * nys + a] /= mass;
      } else {
        for (std::size_t a = 0; a < nyp; ++a) d.p_yp_given_vy[cell * nyp + a] = 1.0 / static_cast<double>(nyp);
        for (std::size_t a = 0; a < nys; ++a) d.p_ys_given_vy[cell * nys + a] = 1.0 / static_cast<double>(nys);
      }
    }
  }
  return d;
}

// KL in nats between a stored conditional row and a derived one; +inf on
// absolute-continuity failure.
double kl_nats(const double* p, const double* q, std::size_t n) {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return kInf;
      d += p[i] * std::log(p[i] / q[i]);
    }
  }
  return d;
}

// Stationary-point reassignment of p(v|x): exponent computed in the
// natural-log domain with per-row max subtraction, probabilities below
// prob_floor zeroed and renormalized.
std::vector<double> update_rows(const CompiledModel& m, const Derived& d,
                                std::size_t nv, const SolverConfig& cfg,
                                int* reseeded_rows) {
  const auto nx = static_cast<std::size_t>(m.nx());
  const auto ny = static_cast<std::size_t>(m.ny());
  const auto nyp = static_cast<std::size_t>(m.nyp());
  const auto nys = static_cast<std::size_t>(m.nys());
  std::vector<double> out(nx * nv, 0.0);
  std::vector<double> logit(nv);

  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t v = 0; v < nv; ++v) {
      double acc = 0.0;
      bool pos_inf = false, neg_inf = false;
      for (std::size_t y = 0; y < ny; ++y) {
        const double w = m.p_y_given_x()[x * ny + y];
        if (w == 0.0) continue;
        const double pvy = d.p_v_given_y[y * nv + v];
        double term;
        if (pvy <= 0.0) {
          neg_inf = true;
          continue;
        }
        term = std::log(pvy);
        if (cfg.beta != 0.0) {
          const std::size_t cell = v * ny + y;
          const double klp = kl_nats(&m.p_yp_given_xy()[(x * ny + y) * nyp],
                                     &d.p_yp_given_vy[cell * nyp], nyp);
          if (std::isinf(klp)) {
            neg_inf = true;
            continue;
          }
          double kls = 0.0;
          if (cfg.gamma != 0.0) {
            kls = kl_nats(&m.p_ys_given_xy()[(x * ny + y) * nys],
                          &d.p_ys_given_vy[cell * nys], nys);
            if (std::isinf(kls)) {
              pos_inf = true;
              continue;
            }
          }
          term -= cfg.beta * (klp - cfg.gamma * kls);
        }
        acc += w * term;
      }
      logit[v] = pos_inf ? kInf : (neg_inf ? -kInf : acc);
    }

    double amax = -kInf;
    for (double a : logit) amax = std::max(amax, a);
    double* row = &out[x * nv];
    if (std::isinf(amax) && amax > 0.0) {
      // Degenerate limit: all mass on the +inf entries.
      std::size_t count = 0;
      for (std::size_t v = 0; v < nv; ++v) count += logit[v] == kInf;
      for (std::size_t v = 0; v < nv; ++v) row[v] = logit[v] == kInf ? 1.0 / count : 0.0;
    } else if (std::isinf(amax)) {
      // Every symbol collapsed; reset the row to uniform and flag it.
      for (std::size_t v = 0; v < nv; ++v) row[v] = 1.0 / static_cast<double>(nv);
      ++*reseeded_rows;
    } else {
      double sum = 0.0;
      for (std::size_t v = 0; v < nv; ++v) {
        row[v] = std::isinf(logit[v]) ? 0.0 : std::exp(logit[v] - amax);
        sum += row[v];
      }
      for (std::size_t v = 0; v < nv; ++v) {
        row[v] /= sum;
        if (row[v] < cfg.prob_floor) row[v] = 0.0;
      }
      double fsum = 0.0;
      for (std::size_t v = 0; v < nv; ++v) fsum += row[v];
      if (fsum == 0.0) {
        for (std::size_t v = 0; v < nv; ++v) row[v] = 1.0 / static_cast<double>(nv);
        ++*reseeded_rows;
      } else {
        for (std::size_t v = 0; v < nv; ++v) row[v] /= fsum;
      }
    }
  }
  return out;
}

TradeoffPoint triple_from_tables(const CompiledModel& m, const std::vector<double>& ch_v,
                                 const Derived& d) {
  const auto nx = static_cast<std::size_t>(m.nx());
  const auto ny = static_cast<std::size_t>(m.ny());
  const auto nyp = static_cast<std::size_t>(m.nyp());
  const auto nys = static_cast<std::size_t>(m.nys());
  const auto nv = ch_v.size() / nx;

  long double rate = 0.0L;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double pxy = m.p_xy()[x * ny + y];
      if (pxy == 0.0) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        const double pv = ch_v[x * nv + v];
        if (pv > 0.0) {
          rate += static_cast<long double>(pxy) * pv *
                  std::log2(pv / d.p_v_given_y[y * nv + v]);
        }
      }
    }
  }
  long double dprime = 0.0L, leak = 0.0L;
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t y = 0; y < ny; ++y) {
      const double pvy = d.p_vy[v * ny + y];
      if (pvy == 0.0) continue;
      const std::size_t cell = v * ny + y;
      for (std::size_t a = 0; a < nyp; ++a) {
        const double c = d.p_yp_given_vy[cell * nyp + a];
        if (c > 0.0) dprime += static_cast<long double>(pvy) * c * std::log2(c / m.p_yp()[a]);
      }
      for (std::size_t a = 0; a < nys; ++a) {
        const double c = d.p_ys_given_vy[cell * nys + a];
        if (c > 0.0) leak += static_cast<long double>(pvy) * c * std::log2(c / m.p_ys()[a]);
      }
    }
  }
  TradeoffPoint pt;
  pt.rate_bits = std::max(0.0, static_cast<double>(rate));
  pt.payload = std::max(0.0, static_cast<double>(dprime));
  pt.leakage_bits = std::max(0.0, static_cast<double>(leak));
  pt.provenance = Provenance::kSolver;
  return pt;
}

std::vector<double> identity_leaning_start(std::size_t nx, std::size_t nv) {
  std::vector<double> ch(nx * nv, nv > 1 ? 0.1 / static_cast<double>(nv - 1) : 1.0);
  for (std::size_t x = 0; x < nx; ++x) ch[x * nv + x % nv] = nv > 1 ? 0.9 : 1.0;
  return ch;
}

std::vector<double> dirichlet_start(std::size_t nx, std::size_t nv, Rng& rng) {
  std::vector<double> ch(nx * nv);
  for (std::size_t x = 0; x < nx; ++x) {
    double sum = 0.0;
    for (std::size_t v = 0; v < nv; ++v) {
      ch[x * nv + v] = -std::log(rng.uniform());
      sum += ch[x * nv + v];
    }
    for (std::size_t v = 0; v < nv; ++v) ch[x * nv + v] /= sum;
  }
  return ch;
}

struct RunOutcome {
  std::vector<double> ch_v;
  bool converged = false;
  int iters = 0;
  int reseeded_rows = 0;
};

RunOutcome iterate(const CompiledModel& m, std::vector<double> ch_v,
                   const SolverConfig& cfg) {
  const auto nx = static_cast<std::size_t>(m.nx());
  const auto nv = ch_v.size() / nx;
  RunOutcome out;
  std::vector<bool> reseeded_symbol(nv, false);
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const Derived d = derive_tables(m, ch_v);
    std::vector<double> next = update_rows(m, d, nv, cfg, &out.reseeded_rows);

    // A symbol whose total mass collapsed is reseeded to uniform once,
    // then allowed to die.
    for (std::size_t v = 0; v < nv; ++v) {
      double mass = 0.0;
      for (std::size_t x = 0; x < nx; ++x) mass += next[x * nv + v];
      if (mass < cfg.prob_floor * static_cast<double>(nx) && !reseeded_symbol[v]) {
        reseeded_symbol[v] = true;
        for (std::size_t x = 0; x < nx; ++x) next[x * nv + v] = 1.0 / static_cast<double>(nv);
        for (std::size_t x = 0; x < nx; ++x) {
          double sum = 0.0;
          for (std::size_t w = 0; w < nv; ++w) sum += next[x * nv + w];
          for (std::size_t w = 0; w < nv; ++w) next[x * nv + w] /= sum;
        }
      }
    }

    double delta = 0.0;
    for (std::size_t i = 0; i < ch_v.size(); ++i) {
      delta = std::max(delta, std::abs(next[i] - ch_v[i]));
    }
    ch_v = std::move(next);
    out.iters = it;
    if (delta < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.ch_v = std::move(ch_v);
  return out;
}

SolverState solve_point(const CompiledModel& m, const SolverConfig& cfg,
                        std::uint64_t beta_idx, std::uint64_t gamma_idx,
                        const std::vector<double>* warm_start) {
  if (cfg.card_v < 1 || cfg.restarts < 1) {
    throw std::invalid_argument("card_v and restarts must be >= 1");
  }
  const auto nx = static_cast<std::size_t>(m.nx());
  const auto nv = static_cast<std::size_t>(cfg.card_v);
  if (cfg.card_v > m.nx() + 2) {
    log(LogLevel::kWarn, "card_v = " + std::to_string(cfg.card_v) +
                             " exceeds the sufficiency bound |X|+2");
  }

  SolverState best;
  bool have_best = false;
  auto consider = [&](std::vector<double> init, int restart) {
    RunOutcome run = iterate(m, std::move(init), cfg);
    SolverState s = evaluate_state(m, std::move(run.ch_v), cfg);
    s.converged = run.converged;
    s.iters = run.iters;
    s.restart = restart;
    s.reseeded_rows = run.reseeded_rows;
    if (!have_best || s.lagrangian < best.lagrangian) {
      best = std::move(s);
      have_best = true;
    }
  };

  if (warm_start != nullptr) consider(*warm_start, -1);
  for (int r = 0; r < cfg.restarts; ++r) {
    if (r == 0) {
      consider(identity_leaning_start(nx, nv), 0);
    } else {
      Rng rng(mix_seed(cfg.seed, beta_idx, gamma_idx, static_cast<std::uint64_t>(r)));
      consider(dirichlet_start(nx, nv, rng), r);
    }
  }
  // The fully collapsed encoder is always a fixed point, and for strong
  // privacy weights it is the global minimizer; the self-consistent
  // iteration cannot reach it from generic starts, so evaluate it
  // explicitly as a final candidate.
  std::vector<double> collapsed(nx * nv, 0.0);
  for (std::size_t x = 0; x < nx; ++x) collapsed[x * nv] = 1.0;
  consider(std::move(collapsed), cfg.restarts);
  return best;
}

}  // namespace

CompiledModel::CompiledModel(const SourceModel& model) {
  JointPMF j = model.joint;
  for (const char* req : {"X", "Yp", "Ys"}) {
    if (!j.has(req)) throw std::invalid_argument(std::string("solver model must contain ") + req);
  }
  if (!j.has("Y")) j = add_constant_var(j, "Y");
  if (j.has("Z") && j.var("Z").cardinality > 1) {
    // The logloss solver scope requires identical side information.
    const JointPMF yz = marginal(j, {"Y", "Z"});
    const int ny = j.var("Y").cardinality;
    const int nz = j.var("Z").cardinality;
    double off = 0.0;
    if (ny == nz) {
      for (int a = 0; a < ny; ++a) {
        for (int b = 0; b < nz; ++b) {
          if (a != b) off += yz.table()[static_cast<std::size_t>(a * nz + b)];
        }
      }
    }
    if (ny != nz || off > 1e-12) {
      throw std::invalid_argument("solver requires Z = Y or Z absent");
    }
  }

  nx_ = j.var("X").cardinality;
  ny_ = j.var("Y").cardinality;
  nyp_ = j.var("Yp").cardinality;
  nys_ = j.var("Ys").cardinality;
  const auto nx = static_cast<std::size_t>(nx_);
  const auto ny = static_cast<std::size_t>(ny_);
  const auto nyp = static_cast<std::size_t>(nyp_);
  const auto nys = static_cast<std::size_t>(nys_);

  auto gather = [&](const std::vector<std::string>& keep, auto&& fill) {
    const JointPMF m = marginal(j, keep);
    std::vector<std::size_t> strides;
    for (const auto& name : keep) strides.push_back(m.stride(m.index_of(name)));
    fill(m, strides);
  };

  p_xy_.assign(nx * ny, 0.0);
  gather({"X", "Y"}, [&](const JointPMF& m, const std::vector<std::size_t>& s) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) p_xy_[x * ny + y] = m.table()[x * s[0] + y * s[1]];
    }
  });
  p_x_.assign(nx, 0.0);
  p_y_.assign(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      p_x_[x] += p_xy_[x * ny + y];
      p_y_[y] += p_xy_[x * ny + y];
    }
  }
  p_ygx_.assign(nx * ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      p_ygx_[x * ny + y] = p_x_[x] > 0.0 ? p_xy_[x * ny + y] / p_x_[x] : (y == 0 ? 1.0 : 0.0);
    }
  }

  p_ypgxy_.assign(nx * ny * nyp, 0.0);
  gather({"X", "Y", "Yp"}, [&](const JointPMF& m, const std::vector<std::size_t>& s) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double pxy = p_xy_[x * ny + y];
        for (std::size_t a = 0; a < nyp; ++a) {
          const double p = m.table()[x * s[0] + y * s[1] + a * s[2]];
          p_ypgxy_[(x * ny + y) * nyp + a] = pxy > 0.0 ? p / pxy : 1.0 / static_cast<double>(nyp);
        }
      }
    }
  });
  p_ysgxy_.assign(nx * ny * nys, 0.0);
  gather({"X", "Y", "Ys"}, [&](const JointPMF& m, const std::vector<std::size_t>& s) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double pxy = p_xy_[x * ny + y];
        for (std::size_t a = 0; a < nys; ++a) {
          const double p = m.table()[x * s[0] + y * s[1] + a * s[2]];
          p_ysgxy_[(x * ny + y) * nys + a] = pxy > 0.0 ? p / pxy : 1.0 / static_cast<double>(nys);
        }
      }
    }
  });
  p_yp_.assign(nyp, 0.0);
  gather({"Yp"}, [&](const JointPMF& m, const std::vector<std::size_t>&) {
    p_yp_ = m.table();
  });
  p_ys_.assign(nys, 0.0);
  gather({"Ys"}, [&](const JointPMF& m, const std::vector<std::size_t>&) {
    p_ys_ = m.table();
  });
}

Channel CompiledModel::encoder_channel(const std::vector<double>& ch_v) const {
  const auto nx = static_cast<std::size_t>(nx_);
  if (ch_v.size() % nx != 0) throw std::invalid_argument("encoder table size mismatch");
  const int nv = static_cast<int>(ch_v.size() / nx);
  return Channel({{"X", nx_}}, {"V", nv}, ch_v);
}

SolverState evaluate_state(const CompiledModel& model, std::vector<double> ch_v,
                           const SolverConfig& config) {
  Derived d = derive_tables(model, ch_v);
  SolverState s;
  s.triple = triple_from_tables(model, ch_v, d);
  s.lagrangian = s.triple.rate_bits - config.beta * s.triple.payload +
                 config.beta * config.gamma * s.triple.leakage_bits;
  s.ch_v = std::move(ch_v);
  s.p_v_given_y = std::move(d.p_v_given_y);
  s.p_vy = std::move(d.p_vy);
  s.p_yp_given_vy = std::move(d.p_yp_given_vy);
  s.p_ys_given_vy = std::move(d.p_ys_given_vy);
  return s;
}

SolverState update_step(const CompiledModel& model, const SolverState& state,
                        const SolverConfig& config) {
  const auto nx = static_cast<std::size_t>(model.nx());
  const auto nv = state.ch_v.size() / nx;
  const Derived d = derive_tables(model, state.ch_v);
  int reseeded = state.reseeded_rows;
  std::vector<double> next = update_rows(model, d, nv, config, &reseeded);
  SolverState s = evaluate_state(model, std::move(next), config);
  s.iters = state.iters + 1;
  s.restart = state.restart;
  s.reseeded_rows = reseeded;
  return s;
}

double lagrangian(const CompiledModel& model, const SolverState& state,
                  const SolverConfig& config) {
  const SolverState s = evaluate_state(model, state.ch_v, config);
  return s.lagrangian;
}

SolverState solve(const CompiledModel& model, const SolverConfig& config) {
  return solve_point(model, config, 0, 0, nullptr);
}

SweepResult sweep(const CompiledModel& model, const std::vector<double>& betas,
                  const std::vector<double>& gammas, const SolverConfig& config,
                  int threads) {
  if (betas.empty() || gammas.empty()) {
    throw std::invalid_argument("sweep needs nonempty beta and gamma grids");
  }
  SweepResult result;
  result.records.resize(betas.size() * gammas.size());

  // Each gamma owns a warm-start chain over ascending beta; chains are
  // independent, so they may run on separate threads.
  auto run_chain = [&](std::size_t gi) {
    std::vector<double> sorted = betas;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> warm;
    for (std::size_t bi = 0; bi < sorted.size(); ++bi) {
      SolverConfig cfg = config;
      cfg.beta = sorted[bi];
      cfg.gamma = gammas[gi];
      SolverState s = solve_point(model, cfg, bi, gi, warm.empty() ? nullptr : &warm);
      warm = s.ch_v;
      SweepRecord& rec = result.records[gi * sorted.size() + bi];
      rec.beta = cfg.beta;
      rec.gamma = cfg.gamma;
      rec.restart = s.restart;
      rec.converged = s.converged;
      rec.iters = s.iters;
      rec.point = s.triple;
    }
  };

  if (threads <= 1 || gammas.size() == 1) {
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) run_chain(gi);
  } else {
    std::vector<std::thread> pool;
    const std::size_t width =
        std::min<std::size_t>(static_cast<std::size_t>(threads), gammas.size());
    for (std::size_t t = 0; t < width; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t gi = t; gi < gammas.size(); gi += width) run_chain(gi);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& rec : result.records) result.frontier.points.push_back(rec.point);
  result.frontier.pareto = pareto_filter(result.frontier.points);
  return result;
}

AgglomerateResult agglomerate(const CompiledModel& model, double dprime_target,
                              double leak_target) {
  const auto nx = static_cast<std::size_t>(model.nx());
  SolverConfig cfg;
  cfg.card_v = model.nx();

  std::vector<double> ch(nx * nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x) ch[x * nx + x] = 1.0;

  AgglomerateResult result;
  result.state = evaluate_state(model, ch, cfg);
  if (result.state.triple.payload < dprime_target - 1e-12) {
    throw std::invalid_argument("information target infeasible even at V = X");
  }

  std::vector<int> alive(nx, 1);
  while (true) {
    const double cur_dprime = result.state.triple.payload;
    bool found = false;
    std::pair<int, int> best_pair{-1, -1};
    SolverState best_state;
    double best_loss = kInf;
    double best_leak = kInf;
    for (std::size_t i = 0; i < nx; ++i) {
      if (!alive[i]) continue;
      for (std::size_t jj = i + 1; jj < nx; ++jj) {
        if (!alive[jj]) continue;
        std::vector<double> cand = result.state.ch_v;
        for (std::size_t x = 0; x < nx; ++x) {
          cand[x * nx + i] += cand[x * nx + jj];
          cand[x * nx + jj] = 0.0;
        }
        SolverState s = evaluate_state(model, std::move(cand), cfg);
        if (s.triple.payload < dprime_target - 1e-12) continue;
        if (s.triple.leakage_bits > leak_target + 1e-12) continue;
        const double loss = cur_dprime - s.triple.payload;
        if (loss < best_loss ||
            (loss == best_loss && s.triple.leakage_bits < best_leak)) {
          best_loss = loss;
          best_leak = s.triple.leakage_bits;
          best_pair = {static_cast<int>(i), static_cast<int>(jj)};
          best_state = std::move(s);
          found = true;
        }
      }
    }
    if (!found) break;
    alive[static_cast<std::size_t>(best_pair.second)] = 0;
    result.state = std::move(best_state);
    result.merges.push_back({best_pair.first, best_pair.second,
                             result.state.triple.rate_bits, result.state.triple.payload,
                             result.state.triple.leakage_bits, best_loss});
  }
  result.state.converged = true;
  return result;
}

}  // namespace sibkit
