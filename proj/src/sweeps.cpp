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

#include "vacheat/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <thread>

#include "vacheat/csv.hpp"
#include "vacheat/errors.hpp"
#include "vacheat/moments.hpp"
#include "vacheat/multimode.hpp"

namespace vacheat {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

RunConfig apply_variable(RunConfig cfg, SweepVariable variable, double value) {
  switch (variable) {
    case SweepVariable::l0: cfg.cavity.l0_m = value; break;
    case SweepVariable::n_cut:
      cfg.cavity.cutoff_freq_hz.reset();
      cfg.cavity.n_cut = static_cast<int>(std::lround(value));
      break;
    case SweepVariable::T1: cfg.mirror1.T_bath_K = value; break;
    case SweepVariable::T2: cfg.mirror2.T_bath_K = value; break;
    case SweepVariable::xi_over_gamma: break;  // applied after the effective parameters
  }
  return cfg;
}

std::filesystem::path prepare_dir(const RunConfig& config) {
  std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "cannot create output directory " + dir.string());
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot open " + path.string());
  return out;
}

int worker_count(const RunConfig& config, std::size_t jobs) {
  int n = config.solver.threads;
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

}  // namespace

std::vector<std::string> sweep_header(SweepVariable variable) {
  return {to_string(variable), "sigma1", "sigma2", "delta_b_rad_per_s", "xi_rad_per_s",
          "xi_over_gamma", "nbar1", "nbar2", "n1_ss", "n2_ss", "T_m1_K", "T_m2_K",
          "J1_W", "J2_W", "g2_1", "g2_2", "flags"};
}

std::vector<std::string> sweep_fields(const SweepRow& r) {
  return {format_double(r.value), csv_field(r.sigma1), csv_field(r.sigma2),
          csv_field(r.delta_b), csv_field(r.xi), csv_field(r.xi_over_gamma),
          csv_field(r.nbar1), csv_field(r.nbar2), csv_field(r.n1_ss), csv_field(r.n2_ss),
          csv_field(r.T_m1), csv_field(r.T_m2), csv_field(r.J1), csv_field(r.J2),
          csv_field(r.g2_1), csv_field(r.g2_2), join_flags(r.flags)};
}

SweepRow compute_sweep_point(const RunConfig& base, SweepVariable variable, double value) {
  const RunConfig cfg = apply_variable(base, variable, value);
  const PhysicalConstants& consts = cfg.constants;
  const MirrorParams m1 = cfg.mirror1.params();
  const MirrorParams m2 = cfg.mirror2.params();
  const CavityConfig cav = cfg.cavity.config();

  SweepRow row;
  row.value = value;
  if (m1.omega_m != m2.omega_m) row.flags.push_back("unequal_frequencies");
  row.nbar1 = thermal_occupation(m1, consts);
  row.nbar2 = thermal_occupation(m2, consts);

  EffectiveParams eff;
  try {
    eff = effective_params(m1, m2, cav, cfg.solver.mode, consts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ResonantPole) {
      row.flags.push_back("resonant_pole");
      return row;
    }
    if (e.code() == ErrorCode::NonDegenerateMirrors) {
      row.flags.push_back("nondegenerate");
      return row;
    }
    throw;
  }
  row.sigma1 = eff.factors.sigma1;
  row.sigma2 = eff.factors.sigma2;
  row.delta_b = eff.delta_b1;

  ExchangeRates rates;
  rates.delta1 = eff.delta_b1;
  rates.delta2 = eff.delta_b2;
  rates.xi = variable == SweepVariable::xi_over_gamma ? value * m1.gamma : eff.xi;
  rates.gamma1 = m1.gamma;
  rates.gamma2 = m2.gamma;
  rates.nbar1 = *row.nbar1;
  rates.nbar2 = *row.nbar2;
  row.xi = rates.xi;
  row.xi_over_gamma = rates.xi / m1.gamma;

  const SteadyStateReport rep = analytic_report(rates, m1.omega_m, m1.T_bath, m2.T_bath, consts);
  row.n1_ss = rep.n1_ss;
  row.n2_ss = rep.n2_ss;
  row.T_m1 = rep.T_high.T_m1;
  row.T_m2 = rep.T_high.T_m2;
  if (rep.n1_ss > 0.0) row.g2_1 = rep.g2_1;
  if (rep.n2_ss > 0.0) row.g2_2 = rep.g2_2;
  if (rep.flux_available) {
    row.J1 = rep.flux.J1;
    row.J2 = rep.flux.J2;
  } else {
    row.flags.push_back("nondegenerate");
  }
  if (rep.omega_b_negative) row.flags.push_back("omega_b_negative");
  if (rep.T_high.high_T_warning) row.flags.push_back("high_T_warning");
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& config, const SweepSpec& spec) {
  config.validate();
  spec.validate();
  const std::vector<double> values = spec.values();
  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        rows[i] = compute_sweep_point(config, spec.variable, values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = worker_count(config, values.size());
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  // Report the earliest failing point so the error is independent of scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepVariable variable, const std::vector<SweepRow>& rows) {
  CsvWriter w(out, sweep_header(variable));
  for (const auto& r : rows) w.row(sweep_fields(r));
}

SweepSpec default_length_sweep() { return SweepSpec{}; }

std::vector<MultimodeRow> multimode_rows(int n_cut_max) {
  if (n_cut_max < 1) throw Error(ErrorCode::ZeroModes, "need at least one cavity mode");
  std::vector<MultimodeRow> rows;
  rows.reserve(static_cast<std::size_t>(n_cut_max));
  for (int n = 1; n <= n_cut_max; ++n) {
    const MultimodeFactors f = multimode_factors(n, 0.0, SumMode::beta_zero);
    rows.push_back({n, f.sigma1, f.sigma2});
  }
  return rows;
}

std::vector<CouplingRow> coupling_rows(const RunConfig& config, const SweepSpec& spec) {
  config.validate();
  spec.validate();
  if (spec.variable != SweepVariable::l0) {
    throw Error(ErrorCode::ConfigError, "coupling rows sweep l0_m");
  }
  const MirrorParams m1 = config.mirror1.params();
  const MirrorParams m2 = config.mirror2.params();
  std::vector<CouplingRow> rows;
  for (double l0 : spec.values()) {
    CavitySpec cs = config.cavity;
    cs.l0_m = l0;
    const EffectiveParams p =
        effective_params(m1, m2, cs.config(), config.solver.mode, config.constants);
    CouplingRow r;
    r.l0 = l0;
    r.sigma1 = p.factors.sigma1;
    r.sigma2 = p.factors.sigma2;
    r.delta_b_over_omega_m = p.delta_b1 / m1.omega_m;
    r.xi_over_omega_m = p.xi / m1.omega_m;
    r.xi_over_gamma = p.xi / m1.gamma;
    rows.push_back(r);
  }
  return rows;
}

ZpfTable zpf_table(const PhysicalConstants& consts) {
  ZpfTable t;
  for (int e = -13; e >= -19; --e) t.masses_kg.push_back(std::pow(10.0, e));
  for (int e = 4; e <= 9; ++e) t.freqs_hz.push_back(std::pow(10.0, e));
  for (double m : t.masses_kg) {
    std::vector<double> row;
    for (double f : t.freqs_hz) {
      MirrorParams mp;
      mp.mass = m;
      mp.omega_m = kTwoPi * f;
      row.push_back(zero_point_fluctuation(mp, consts));
    }
    t.x_zpf_m.push_back(std::move(row));
  }
  return t;
}

std::vector<CutoffRow> cutoff_table() {
  const PhysicalConstants consts = PhysicalConstants::rounded_light_speed();
  const struct {
    const char* name;
    double cutoff_hz;
  } metals[] = {{"Au", 2.196e15}, {"Ag", 2.18e15}};
  std::vector<CutoffRow> rows;
  for (const auto& metal : metals) {
    for (int e = -7; e <= -3; ++e) {
      const double l0 = std::pow(10.0, e);
      const CavityConfig cav = CavityConfig::with_cutoff_frequency(l0, kTwoPi * metal.cutoff_hz);
      CutoffRow r;
      r.material = metal.name;
      r.cutoff_freq_hz = metal.cutoff_hz;
      r.l0 = l0;
      r.delta_omega_c = cav.free_spectral_range(consts);
      r.n_cut = cutoff_mode_count(cav, consts);
      const MultimodeFactors f = multimode_factors(r.n_cut, 0.0, SumMode::beta_zero);
      r.sigma1 = f.sigma1;
      r.sigma2 = f.sigma2;
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<std::string> run_fig1(const RunConfig& config) {
  config.validate();
  const auto dir = prepare_dir(config);
  std::vector<std::string> written;

  const int n_max = cutoff_mode_count(config.cavity.config(), config.constants);
  {
    const auto path = dir / "fig1_sigma_vs_ncut.csv";
    auto out = open_output(path);
    CsvWriter w(out, {"n_cut", "sigma1", "sigma2"});
    for (const auto& r : multimode_rows(n_max)) {
      w.row({std::to_string(r.n_cut), format_double(r.sigma1), format_double(r.sigma2)});
    }
    written.push_back(path.string());
  }
  {
    SweepSpec spec = default_length_sweep();
    if (config.sweep && config.sweep->variable == SweepVariable::l0) spec = *config.sweep;
    const auto path = dir / "fig1_coupling_vs_l0.csv";
    auto out = open_output(path);
    CsvWriter w(out, {"l0_m", "sigma1", "sigma2", "delta_b_over_omega_m", "xi_over_omega_m",
                      "xi_over_gamma"});
    for (const auto& r : coupling_rows(config, spec)) {
      w.row({format_double(r.l0), format_double(r.sigma1), format_double(r.sigma2),
             format_double(r.delta_b_over_omega_m), format_double(r.xi_over_omega_m),
             format_double(r.xi_over_gamma)});
    }
    written.push_back(path.string());
  }
  return written;
}

std::vector<std::string> run_fig2(const RunConfig& config) {
  config.validate();
  const auto dir = prepare_dir(config);
  SweepSpec spec = default_length_sweep();
  if (config.sweep && config.sweep->variable == SweepVariable::l0) spec = *config.sweep;
  const auto rows = run_sweep(config, spec);
  const auto path = dir / "fig2_temperatures_flux_vs_l0.csv";
  auto out = open_output(path);
  write_sweep_csv(out, SweepVariable::l0, rows);
  return {path.string()};
}

std::vector<std::string> run_tables(const RunConfig& config) {
  const auto dir = prepare_dir(config);
  std::vector<std::string> written;
  {
    const ZpfTable t = zpf_table(config.constants);
    const auto path = dir / "zpf_grid.csv";
    auto out = open_output(path);
    CsvWriter w(out, {"mass_kg", "freq_hz", "x_zpf_m"});
    for (std::size_t i = 0; i < t.masses_kg.size(); ++i) {
      for (std::size_t j = 0; j < t.freqs_hz.size(); ++j) {
        w.row({format_double(t.masses_kg[i]), format_double(t.freqs_hz[j]),
               format_double(t.x_zpf_m[i][j])});
      }
    }
    written.push_back(path.string());
  }
  {
    const auto path = dir / "cutoff_sums.csv";
    auto out = open_output(path);
    CsvWriter w(out, {"material", "cutoff_freq_hz", "l0_m", "delta_omega_c_rad_per_s", "n_cut",
                      "sigma1", "sigma2"});
    for (const auto& r : cutoff_table()) {
      w.row({r.material, format_double(r.cutoff_freq_hz), format_double(r.l0),
             format_double(r.delta_omega_c), std::to_string(r.n_cut), format_double(r.sigma1),
             format_double(r.sigma2)});
    }
    written.push_back(path.string());
  }
  return written;
}

}  // namespace vacheat
