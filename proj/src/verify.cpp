// Copyright 2026 The vacheat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vacheat/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "vacheat/errors.hpp"
#include "vacheat/mode_oracle.hpp"
#include "vacheat/multimode.hpp"

namespace vacheat {
namespace {

constexpr double kIdentityTolerance = 1e-8;
constexpr double kLemmaTolerance = 1e-12;
constexpr double kLawTolerance = 1e-12;

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double rel_to(std::complex<double> got, std::complex<double> want, double floor) {
  return std::abs(got - want) / std::max(std::abs(want), floor);
}

// Runs body, turning library errors into a failed or non-converged result.
CheckResult guarded(const std::string& name, double tolerance,
                    const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  r.tolerance = tolerance;
  try {
    body(r);
    if (r.status == CheckStatus::pass && !(r.metric <= tolerance)) r.status = CheckStatus::fail;
  } catch (const Error& e) {
    r.status = is_nonconvergence(e.code()) ? CheckStatus::nonconvergence : CheckStatus::fail;
    r.detail = std::string(to_string(e.code())) + ": " + e.what();
  }
  return r;
}

bool is_sum_identity(Identity id) {
  return id == Identity::odd_sum_cancellation || id == Identity::even_sum;
}

bool parity_applies(Identity id, int j, int k) {
  if (id == Identity::odd_sum_cancellation) return (j + k) % 2 == 1;
  if (id == Identity::even_sum) return (j + k) % 2 == 0;
  return true;
}

const ModeFunctionContext kContexts[] = {{1.0, 0.0, 8}, {2.5, 0.5, 8}, {0.3, -1.4, 8}};

CheckResult identity_check(const OracleOptions& opt) {
  return guarded("identity_suite", kIdentityTolerance, [&](CheckResult& r) {
    for (const auto& ctx : kContexts) {
      for (Identity id : all_identities()) {
        if (is_sum_identity(id)) continue;
        for (int n = 1; n <= 2; ++n) {
          for (int j = 1; j <= ctx.j_max; ++j) {
            for (int k = 1; k <= ctx.j_max; ++k) {
              const IdentityReport rep = verify_identity(ctx, id, j, k, n, opt);
              if (rep.rel_error > r.metric) {
                r.metric = rep.rel_error;
                r.detail = std::string(to_string(id)) + " j=" + std::to_string(j) +
                           " k=" + std::to_string(k) + " n=" + std::to_string(n);
              }
              ++r.cases;
            }
          }
        }
      }
    }
  });
}

CheckResult series_check(const OracleOptions& opt) {
  // The metric is the extrapolated limit's distance from the target, relative
  // to the first residual; the check also requires monotone residuals.
  return guarded("series_convergence", 1e-3, [&](CheckResult& r) {
    for (const auto& ctx : kContexts) {
      for (Identity id : {Identity::odd_sum_cancellation, Identity::even_sum}) {
        for (int j = 1; j <= ctx.j_max; ++j) {
          for (int k = 1; k <= ctx.j_max; ++k) {
            if (!parity_applies(id, j, k)) continue;
            const IdentityReport rep = verify_identity(ctx, id, j, k, 1, opt);
            const ConvergenceReport& s = *rep.series;
            ++r.cases;
            if (!s.monotone) {
              r.status = CheckStatus::fail;
              r.detail = std::string("non-monotone ") + to_string(id) + " j=" + std::to_string(j) +
                         " k=" + std::to_string(k);
            }
            const double m = std::abs(s.extrapolated - s.target) / s.residuals.front();
            r.metric = std::max(r.metric, m);
          }
        }
      }
    }
  });
}

CheckResult lemma_check() {
  return guarded("antisymmetry_lemmas", kLemmaTolerance, [](CheckResult& r) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      for (const auto& l : verify_antisymmetry_lemmas(12, seed)) {
        r.metric = std::max(r.metric, l.relative_residual);
        ++r.cases;
      }
    }
  });
}

MultimodeFactors factors_for(const RunConfig& cfg, const CavityConfig& cav, bool flip) {
  const MirrorParams m1 = cfg.mirror1.params();
  const int n = cutoff_mode_count(cav, cfg.constants);
  MultimodeFactors f = multimode_factors(n, cav.beta(m1.omega_m, cfg.constants), cfg.solver.mode);
  if (flip) f.sigma2 = -f.sigma2;
  return f;
}

CheckResult ratio_check(const RunConfig& cfg, bool flip) {
  return guarded("ratio_law", kLawTolerance, [&](CheckResult& r) {
    const MirrorParams m1 = cfg.mirror1.params();
    const MirrorParams m2 = cfg.mirror2.params();
    SweepSpec spec;
    spec.start = 1e-7;
    spec.stop = 1e-4;
    spec.points = 31;
    for (double l0 : spec.values()) {
      CavitySpec cs = cfg.cavity;
      cs.l0_m = l0;
      const CavityConfig cav = cs.config();
      const EffectiveParams p = effective_params(m1, m2, cav, SumMode::beta_zero, cfg.constants);
      const MultimodeFactors f = factors_for(cfg, cav, flip);
      r.metric = std::max(r.metric, rel_diff(p.delta_b1 / p.xi, -f.sigma1 / f.sigma2));
      ++r.cases;
    }
  });
}

CheckResult cube_check(const RunConfig& cfg) {
  return guarded("cube_law", kLawTolerance, [&](CheckResult& r) {
    const MirrorParams m1 = cfg.mirror1.params();
    const MirrorParams m2 = cfg.mirror2.params();
    for (double l0 : {1e-7, 1e-6, 1e-5}) {
      CavitySpec a = cfg.cavity, b = cfg.cavity;
      a.l0_m = l0;
      b.l0_m = 2.0 * l0;
      const EffectiveParams pa = effective_params(m1, m2, a.config(), SumMode::beta_zero, cfg.constants);
      const EffectiveParams pb = effective_params(m1, m2, b.config(), SumMode::beta_zero, cfg.constants);
      if (pa.factors.n_cut != pb.factors.n_cut) continue;  // cutoff-frequency cavities
      r.metric = std::max(r.metric, rel_diff(pb.delta_b1 / pa.delta_b1, 0.125));
      r.metric = std::max(r.metric, rel_diff(pb.xi / pa.xi, 0.125));
      ++r.cases;
    }
  });
}

CheckResult casimir_check(const RunConfig& cfg, bool flip) {
  return guarded("casimir_ratio", kLawTolerance, [&](CheckResult& r) {
    const MirrorParams m1 = cfg.mirror1.params();
    const MirrorParams m2 = cfg.mirror2.params();
    for (int n : {1, 14, 130}) {
      const CavityConfig cav = CavityConfig::with_mode_count(cfg.cavity.l0_m, n);
      const CasimirComparison c = casimir_comparison(m1, m2, cav, cfg.constants);
      MultimodeFactors f = multimode_factors(n, 0.0, SumMode::beta_zero);
      if (flip) f.sigma2 = -f.sigma2;
      r.metric = std::max(r.metric, rel_diff(c.ratio, 12.0 * f.sigma2));
      ++r.cases;
    }
  });
}

CheckResult cross_solver_check(const RunConfig& cfg) {
  return guarded("cross_solver", cfg.solver.cross_solver_rel_tol, [&](CheckResult& r) {
    SteadyStateOptions so;
    so.residual_tol = cfg.solver.steady_residual_tol;
    so.leak_threshold = cfg.solver.leak_threshold;
    so.cap = cfg.solver.dimension_cap;
    // Solver units: gamma = 1, equal shifts.
    for (double xi : {0.3, 2.0}) {
      ExchangeRates rates{-0.2, -0.2, xi, 1.0, 1.0, 0.6, 0.2};
      const SolverComparison c = compare_solvers(rates, 10.0, so);
      r.metric = std::max({r.metric, c.second_rel, c.fourth_rel, c.flux_rel});
      ++r.cases;
    }
  });
}

}  // namespace

const char* to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::nonconvergence: return "nonconvergence";
  }
  return "unknown";
}

int VerifyReport::exit_code() const {
  bool nonconv = false;
  for (const auto& c : checks) {
    if (c.status == CheckStatus::fail) return 1;
    if (c.status == CheckStatus::nonconvergence) nonconv = true;
  }
  return nonconv ? 3 : 0;
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json j;
  j["exit_code"] = exit_code();
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"status", to_string(c.status)},
                   {"metric", c.metric},
                   {"tolerance", c.tolerance},
                   {"cases", c.cases},
                   {"detail", c.detail}});
  }
  return j.dump(2);
}

std::string VerifyReport::to_log() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << to_string(c.status) << ' ' << c.name << " metric=" << c.metric
       << " tol=" << c.tolerance << " cases=" << c.cases;
    if (!c.detail.empty()) os << " (" << c.detail << ')';
    os << '\n';
  }
  return os.str();
}

SolverComparison compare_solvers(const ExchangeRates& rates, double omega_m,
                                 const SteadyStateOptions& options) {
  SolverComparison c{solve_steady_state(rates, options, omega_m)};
  const DensityMatrix& rho = c.steady.rho;

  c.second_numeric = second_moments(rho);
  c.second_closed = second_moments_steady(rates);
  c.fourth_numeric = fourth_moments(rho);
  c.fourth_closed = fourth_moments_steady(rates);
  c.fourth_diag_closed = fourth_moments_closed_form(rates);

  const SecondMoments& sn = c.second_numeric;
  const SecondMoments& sc = c.second_closed;
  const double pop = std::max(sc.n1, sc.n2);
  c.second_rel = std::max({rel_to(sn.n1, sc.n1, 1e-300), rel_to(sn.n2, sc.n2, 1e-300),
                           rel_to(sn.c12, sc.c12, 1e-12 * pop)});

  double fourth_scale = 0.0;
  for (const auto& v : c.fourth_closed.v) fourth_scale = std::max(fourth_scale, std::abs(v));
  c.fourth_rel = std::max(rel_to(c.fourth_numeric.v[0], c.fourth_diag_closed[0], 1e-300),
                          rel_to(c.fourth_numeric.v[8], c.fourth_diag_closed[1], 1e-300));
  for (std::size_t i = 0; i < c.fourth_closed.v.size(); ++i) {
    c.fourth_rel = std::max(c.fourth_rel,
                            rel_to(c.fourth_numeric.v[i], c.fourth_closed.v[i], fourth_scale));
  }

  const SystemOperators ops = SystemOperators::build(rates, rho.truncation(), omega_m, options.cap);
  c.flux_numeric = heat_flux_numeric(rho, ops);
  c.flux_closed = heat_flux_analytic(rates, omega_m, 1.0).flux;
  c.flux_rel = std::max(rel_to(c.flux_numeric.J1, c.flux_closed.J1, 1e-300),
                        rel_to(c.flux_numeric.J2, c.flux_closed.J2, 1e-300));
  return c;
}

VerifyReport run_verify(const RunConfig& config, const VerifyOptions& options) {
  config.validate();
  OracleOptions opt;
  opt.quadrature.rel_tol = options.quadrature_rel_tol.value_or(config.solver.quadrature_rel_tol);

  VerifyReport rep;
  rep.checks.push_back(identity_check(opt));
  rep.checks.push_back(series_check(opt));
  rep.checks.push_back(lemma_check());
  rep.checks.push_back(ratio_check(config, options.flip_sigma2_sign));
  rep.checks.push_back(cube_check(config));
  rep.checks.push_back(casimir_check(config, options.flip_sigma2_sign));
  if (options.lindblad) rep.checks.push_back(cross_solver_check(config));
  return rep;
}

}  // namespace vacheat
