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

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vacheat/config.hpp"

namespace vacheat {

struct SweepRow {
  double value = 0.0;
  std::optional<double> sigma1, sigma2;
  std::optional<double> delta_b, xi, xi_over_gamma;  // rad/s, rad/s, ratio
  std::optional<double> nbar1, nbar2, n1_ss, n2_ss;
  std::optional<double> T_m1, T_m2;  // K, high-temperature form
  std::optional<double> J1, J2;      // W
  std::optional<double> g2_1, g2_2;
  std::vector<std::string> flags;
};

std::vector<std::string> sweep_header(SweepVariable variable);
std::vector<std::string> sweep_fields(const SweepRow& row);

SweepRow compute_sweep_point(const RunConfig& config, SweepVariable variable, double value);

// Points run on a worker pool; rows come back in sweep order.
std::vector<SweepRow> run_sweep(const RunConfig& config, const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, SweepVariable variable, const std::vector<SweepRow>& rows);

// Default l0 axis for the figure sweeps: 1e-7 .. 1e-4 m, log spaced.
SweepSpec default_length_sweep();

struct MultimodeRow {
  int n_cut = 0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};
std::vector<MultimodeRow> multimode_rows(int n_cut_max);

struct CouplingRow {
  double l0 = 0.0;
  double sigma1 = 0.0, sigma2 = 0.0;
  double delta_b_over_omega_m = 0.0;
  double xi_over_omega_m = 0.0;
  double xi_over_gamma = 0.0;
};
std::vector<CouplingRow> coupling_rows(const RunConfig& config, const SweepSpec& spec);

struct ZpfTable {
  std::vector<double> masses_kg;  // rows
  std::vector<double> freqs_hz;   // columns
  std::vector<std::vector<double>> x_zpf_m;
};
ZpfTable zpf_table(const PhysicalConstants& consts = {});

struct CutoffRow {
  std::string material;
  double cutoff_freq_hz = 0.0;
  double l0 = 0.0;
  double delta_omega_c = 0.0;  // rad/s
  int n_cut = 0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};
// Gold and silver cutoffs over l0 = 1e-7 .. 1e-3 m, with c = 3e8 m/s.
std::vector<CutoffRow> cutoff_table();

// Each returns the paths written under config.output_dir.
std::vector<std::string> run_fig1(const RunConfig& config);
std::vector<std::string> run_fig2(const RunConfig& config);
std::vector<std::string> run_tables(const RunConfig& config);

}  // namespace vacheat
