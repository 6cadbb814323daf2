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

// Command-line front end.
//
// Settings resolve in three layers: built-in defaults, then the JSON file
// given with --config, then individual flags. A flag always wins.
//
// Exit status: 0 success, 1 failed check or runtime error, 2 bad
// configuration or usage, 3 numerical non-convergence.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "vacheat/config.hpp"
#include "vacheat/csv.hpp"
#include "vacheat/errors.hpp"
#include "vacheat/lindblad.hpp"
#include "vacheat/moments.hpp"
#include "vacheat/multimode.hpp"
#include "vacheat/sweeps.hpp"
#include "vacheat/verify.hpp"

using namespace vacheat;
using json = nlohmann::ordered_json;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> l0_m, cutoff_freq_hz, T1_K, T2_K, mass_kg, freq_hz, gamma;
  std::optional<int> n_cut, threads, dimension_cap;
  std::optional<std::string> mode, output_dir;
};

void add_overrides(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--l0-m", o.l0_m, "rest cavity length [m]");
  app.add_option("--n-cut", o.n_cut, "cavity mode count");
  app.add_option("--cutoff-freq-hz", o.cutoff_freq_hz, "mirror cutoff frequency [Hz]");
  app.add_option("--T1-K", o.T1_K, "bath temperature of mirror 1 [K]");
  app.add_option("--T2-K", o.T2_K, "bath temperature of mirror 2 [K]");
  app.add_option("--mass-kg", o.mass_kg, "mass of both mirrors [kg]");
  app.add_option("--freq-hz", o.freq_hz, "mechanical frequency of both mirrors [Hz]");
  app.add_option("--gamma-rad-per-s", o.gamma, "damping rate of both mirrors [rad/s]");
  app.add_option("--mode", o.mode, "multimode sum: beta_zero or exact");
  app.add_option("--threads", o.threads, "sweep worker threads, 0 for all cores");
  app.add_option("--dimension-cap", o.dimension_cap, "Fock-space dimension cap");
  app.add_option("--output-dir", o.output_dir, "directory for emitted files");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.l0_m) c.cavity.l0_m = *o.l0_m;
  if (o.n_cut) {
    c.cavity.n_cut = *o.n_cut;
    c.cavity.cutoff_freq_hz.reset();
  }
  if (o.cutoff_freq_hz) {
    c.cavity.cutoff_freq_hz = *o.cutoff_freq_hz;
    c.cavity.n_cut.reset();
  }
  if (o.T1_K) c.mirror1.T_bath_K = *o.T1_K;
  if (o.T2_K) c.mirror2.T_bath_K = *o.T2_K;
  for (MirrorSpec* m : {&c.mirror1, &c.mirror2}) {
    if (o.mass_kg) m->mass_kg = *o.mass_kg;
    if (o.freq_hz) m->freq_hz = *o.freq_hz;
    if (o.gamma) m->gamma_rad_per_s = *o.gamma;
  }
  if (o.mode) {
    try {
      c.solver.mode = sum_mode_from_string(o.mode->c_str());
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, e.what());
    }
  }
  if (o.threads) c.solver.threads = *o.threads;
  if (o.dimension_cap) c.solver.dimension_cap = *o.dimension_cap;
  if (o.output_dir) c.output_dir = *o.output_dir;
  try {
    c.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, e.what());
  }
  return c;
}

// Rates for steady/evolve, in whatever unit the caller picks (gamma = 1 by default).
struct RateFlags {
  ExchangeRates r{0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0};
  double omega_m = 10.0;
};

void add_rate_flags(CLI::App& app, RateFlags& f) {
  app.add_option("--delta1", f.r.delta1, "frequency shift of mode 1")->capture_default_str();
  app.add_option("--delta2", f.r.delta2, "frequency shift of mode 2")->capture_default_str();
  app.add_option("--xi", f.r.xi, "exchange coupling")->capture_default_str();
  app.add_option("--gamma1", f.r.gamma1, "damping of mode 1")->capture_default_str();
  app.add_option("--gamma2", f.r.gamma2, "damping of mode 2")->capture_default_str();
  app.add_option("--nbar1", f.r.nbar1, "bath occupation of mode 1")->capture_default_str();
  app.add_option("--nbar2", f.r.nbar2, "bath occupation of mode 2")->capture_default_str();
  app.add_option("--omega-m", f.omega_m, "bare mechanical frequency")->capture_default_str();
}

std::ofstream open_file(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot open " + path);
  return out;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

int cmd_params(const RunConfig& c) {
  const MirrorParams m1 = c.mirror1.params();
  const MirrorParams m2 = c.mirror2.params();
  const CavityConfig cav = c.cavity.config();
  json j;
  j["x_zpf1_m"] = zero_point_fluctuation(m1, c.constants);
  j["x_zpf2_m"] = zero_point_fluctuation(m2, c.constants);
  j["nbar1"] = thermal_occupation(m1, c.constants);
  j["nbar2"] = thermal_occupation(m2, c.constants);
  j["n_cut"] = cutoff_mode_count(cav, c.constants);
  j["free_spectral_range_rad_per_s"] = cav.free_spectral_range(c.constants);
  j["beta"] = cav.beta(m1.omega_m, c.constants);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_factors(const RunConfig& c, std::optional<double> beta) {
  const CavityConfig cav = c.cavity.config();
  const int n = cutoff_mode_count(cav, c.constants);
  const double b = beta.value_or(cav.beta(c.mirror1.params().omega_m, c.constants));
  const MultimodeFactors f = multimode_factors(n, b, c.solver.mode);
  json j;
  j["n_cut"] = f.n_cut;
  j["beta"] = f.beta;
  j["mode"] = to_string(f.mode);
  j["sigma1"] = f.sigma1;
  j["sigma2"] = f.sigma2;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_effective(const RunConfig& c) {
  const MirrorParams m1 = c.mirror1.params();
  const MirrorParams m2 = c.mirror2.params();
  const EffectiveParams p = effective_params(m1, m2, c.cavity.config(), c.solver.mode, c.constants);
  json j;
  j["sigma1"] = p.factors.sigma1;
  j["sigma2"] = p.factors.sigma2;
  j["n_cut"] = p.factors.n_cut;
  j["delta_b1_rad_per_s"] = p.delta_b1;
  j["delta_b2_rad_per_s"] = p.delta_b2;
  j["xi_rad_per_s"] = p.xi;
  j["xi_over_gamma"] = p.xi / m1.gamma;
  j["delta_b_over_omega_m"] = p.delta_b1 / m1.omega_m;
  j["casimir_delta_b_rad_per_s"] = p.casimir_delta_b;
  j["casimir_zeta_rad_per_s"] = p.casimir_zeta;
  j["xi_over_zeta"] = p.xi / p.casimir_zeta;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_steady(const RunConfig& c, const RateFlags& f, const std::string& solver,
               const std::string& distribution_path) {
  const ExchangeRates& r = f.r;
  r.validate();
  json j;
  j["solver"] = solver;
  SecondMoments s;
  FourthMoments q;
  json fluxes = nullptr;
  if (solver == "analytic") {
    s = second_moments_steady(r);
    q = fourth_moments_steady(r);
  } else if (solver == "ode") {
    const MomentTrajectoryPoint p = moments_by_ode(r);
    s = p.second;
    q = p.fourth;
    j["time"] = p.t;
  } else {
    SteadyStateOptions so;
    so.cap = c.solver.dimension_cap;
    so.residual_tol = c.solver.steady_residual_tol;
    so.leak_threshold = c.solver.leak_threshold;
    const SteadyStateResult res = solve_steady_state(r, so, f.omega_m);
    s = second_moments(res.rho);
    q = fourth_moments(res.rho);
    const SystemOperators ops = SystemOperators::build(r, res.rho.truncation(), f.omega_m, so.cap);
    const HeatFlux h = heat_flux_numeric(res.rho, ops);
    fluxes = {{"J1", h.J1}, {"J2", h.J2}};
    j["residual"] = res.residual;
    j["truncation"] = {res.rho.truncation().dim1, res.rho.truncation().dim2};
    j["leak"] = res.leak;
    j["min_eigenvalue"] = res.min_eigenvalue;
    j["iterations"] = res.iterations;
    j["method"] = res.method;
    if (!distribution_path.empty()) {
      auto out = open_file(distribution_path);
      const auto p1 = phonon_distribution(res.rho, 1);
      const auto p2 = phonon_distribution(res.rho, 2);
      CsvWriter w(out, {"n", "p1", "p2"});
      for (std::size_t n = 0; n < std::max(p1.size(), p2.size()); ++n) {
        w.row({std::to_string(n), csv_field(n < p1.size() ? std::optional(p1[n]) : std::nullopt),
               csv_field(n < p2.size() ? std::optional(p2[n]) : std::nullopt)});
      }
    }
  }
  if (fluxes.is_null() && degenerate_shifts(r)) {
    const HeatFlux h = heat_flux_analytic(r, f.omega_m, 1.0).flux;
    fluxes = {{"J1", h.J1}, {"J2", h.J2}};
  }
  j["occupations"] = {{"n1", s.n1}, {"n2", s.n2}, {"c12", complex_json(s.c12)}};
  const auto g2 = [](double nn, double n) { return n > 0.0 ? json(nn / (n * n)) : json(nullptr); };
  j["g2"] = {{"mirror1", g2(q.n1n1(), s.n1)}, {"mirror2", g2(q.n2n2(), s.n2)}};
  j["fluxes"] = fluxes;
  if (!j.contains("residual")) j["residual"] = nullptr;
  if (!j.contains("truncation")) j["truncation"] = nullptr;
  if (!j.contains("leak")) j["leak"] = nullptr;
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_evolve(const RunConfig& c, const RateFlags& f, double t_final, int samples, int dim1,
               int dim2, const std::string& initial, const std::string& out_path) {
  const FockTruncation trunc{dim1, dim2};
  const Liouvillian L = build_liouvillian(f.r, trunc, f.omega_m, c.solver.dimension_cap);
  DensityMatrix rho0 = DensityMatrix::fock(trunc, 0, 0);
  if (initial == "thermal") rho0 = DensityMatrix::thermal_product(trunc, f.r.nbar1, f.r.nbar2);
  EvolveOptions eo;
  eo.samples = samples;
  eo.leak_threshold = c.solver.leak_threshold;
  const Trajectory tr = evolve(rho0, L, t_final, eo);

  std::ofstream file;
  if (!out_path.empty()) file = open_file(out_path);
  std::ostream& out = out_path.empty() ? std::cout : file;
  CsvWriter w(out, {"t", "trace", "n1", "n2", "c12_re", "c12_im", "hermiticity_error",
                    "min_eigenvalue"});
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const DensityMatrix& rho = tr.states[i];
    const SecondMoments s = second_moments(rho);
    w.row({format_double(tr.times[i]), format_double(rho.trace()), format_double(s.n1),
           format_double(s.n2), format_double(s.c12.real()), format_double(s.c12.imag()),
           format_double(rho.hermiticity_error()), format_double(rho.min_eigenvalue())});
  }
  return 0;
}

struct SweepFlags {
  std::optional<std::string> variable;
  std::optional<double> start, stop;
  std::optional<int> points;
  bool linear = false;
  std::string out;
};

int cmd_sweep(const RunConfig& c, const SweepFlags& f) {
  SweepSpec spec = c.sweep.value_or(SweepSpec{});
  try {
    if (f.variable) spec.variable = sweep_variable_from_string(*f.variable);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  if (f.start) spec.start = *f.start;
  if (f.stop) spec.stop = *f.stop;
  if (f.points) spec.points = *f.points;
  if (f.linear) spec.log_scale = false;
  spec.validate();
  const auto rows = run_sweep(c, spec);
  if (f.out.empty()) {
    write_sweep_csv(std::cout, spec.variable, rows);
  } else {
    auto out = open_file(f.out);
    write_sweep_csv(out, spec.variable, rows);
    std::cerr << "wrote " << f.out << '\n';
  }
  return 0;
}

int print_paths(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cerr << "wrote " << p << '\n';
  return 0;
}

int cmd_verify(const RunConfig& c, const VerifyOptions& vo, const std::string& json_path) {
  const VerifyReport rep = run_verify(c, vo);
  std::cerr << rep.to_log();
  if (json_path.empty()) {
    std::cout << rep.to_json() << '\n';
  } else {
    auto out = open_file(json_path);
    out << rep.to_json() << '\n';
  }
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vacuum-mediated phonon exchange between two cavity mirrors"};
  app.require_subcommand(1);
  app.fallthrough();  // global overrides may follow the subcommand
  Overrides ov;
  add_overrides(app, ov);

  auto* params = app.add_subcommand("params", "zero-point amplitudes, occupations, mode count");
  auto* factors = app.add_subcommand("factors", "multimode factors sigma1, sigma2");
  std::optional<double> beta;
  factors->add_option("--beta", beta, "override omega_m / free spectral range");
  auto* effective = app.add_subcommand("effective", "frequency shift and exchange coupling");

  auto* steady = app.add_subcommand("steady", "steady state in solver units");
  RateFlags steady_rates;
  add_rate_flags(*steady, steady_rates);
  std::string solver = "analytic", distribution;
  steady->add_option("--solver", solver, "analytic, ode or lindblad")
      ->check(CLI::IsMember({"analytic", "ode", "lindblad"}))
      ->capture_default_str();
  steady->add_option("--distribution", distribution, "CSV of phonon distributions (lindblad)");

  auto* evolve_cmd = app.add_subcommand("evolve", "density-matrix evolution in solver units");
  RateFlags evolve_rates;
  add_rate_flags(*evolve_cmd, evolve_rates);
  double t_final = 10.0;
  int samples = 101, dim1 = 12, dim2 = 12;
  std::string initial = "vacuum", evolve_out;
  evolve_cmd->add_option("--t-final", t_final)->capture_default_str();
  evolve_cmd->add_option("--samples", samples)->capture_default_str();
  evolve_cmd->add_option("--dim1", dim1)->capture_default_str();
  evolve_cmd->add_option("--dim2", dim2)->capture_default_str();
  evolve_cmd->add_option("--initial", initial)
      ->check(CLI::IsMember({"vacuum", "thermal"}))
      ->capture_default_str();
  evolve_cmd->add_option("--out", evolve_out, "CSV path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  SweepFlags sf;
  sweep->add_option("--variable", sf.variable, "l0_m, n_cut, xi_over_gamma, T1_K or T2_K");
  sweep->add_option("--start", sf.start);
  sweep->add_option("--stop", sf.stop);
  sweep->add_option("--points", sf.points);
  sweep->add_flag("--linear", sf.linear, "linear spacing instead of logarithmic");
  sweep->add_option("--out", sf.out, "CSV path (default stdout)");

  auto* fig1 = app.add_subcommand("fig1", "multimode factors and coupling vs cavity length");
  auto* fig2 = app.add_subcommand("fig2", "mode temperatures and heat flux vs cavity length");
  auto* tables = app.add_subcommand("tables", "zero-point grid and cutoff sums");

  auto* verify = app.add_subcommand("verify", "run the self-check suite");
  VerifyOptions vo;
  std::optional<double> qtol;
  bool no_lindblad = false;
  std::string verify_json;
  verify->add_flag("--flip-sigma2", vo.flip_sigma2_sign, "test hook: negate sigma2");
  verify->add_option("--quadrature-tol", qtol, "quadrature relative tolerance override");
  verify->add_flag("--no-lindblad", no_lindblad, "skip the density-matrix cross check");
  verify->add_option("--json", verify_json, "write the JSON summary here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = resolve(ov);
    if (*params) return cmd_params(cfg);
    if (*factors) return cmd_factors(cfg, beta);
    if (*effective) return cmd_effective(cfg);
    if (*steady) return cmd_steady(cfg, steady_rates, solver, distribution);
    if (*evolve_cmd) {
      return cmd_evolve(cfg, evolve_rates, t_final, samples, dim1, dim2, initial, evolve_out);
    }
    if (*sweep) return cmd_sweep(cfg, sf);
    if (*fig1) return print_paths(run_fig1(cfg));
    if (*fig2) return print_paths(run_fig2(cfg));
    if (*tables) return print_paths(run_tables(cfg));
    if (*verify) {
      vo.quadrature_rel_tol = qtol;
      vo.lindblad = !no_lindblad;
      return cmd_verify(cfg, vo, verify_json);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    if (e.code() == ErrorCode::ConfigError) return 2;
    if (is_nonconvergence(e.code())) return 3;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
