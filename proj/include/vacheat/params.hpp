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

// Physical constants, per-mirror and per-cavity scalars.
//
// Everything is SI with angular frequencies in rad/s. Unit-scaled work
// (hbar = k_B = c = 1) goes through a PhysicalConstants override, never a
// separate code path.

#pragma once

#include <optional>

namespace vacheat {

struct PhysicalConstants {
  double hbar = 1.0545718e-34;  // J s
  double k_B = 1.380649e-23;    // J / K
  double c = 2.99792458e8;      // m / s

  static PhysicalConstants codata() { return {}; }
  static PhysicalConstants natural() { return {1.0, 1.0, 1.0}; }
  // c rounded to 3e8 m/s; the published cutoff-count tables use this value.
  static PhysicalConstants rounded_light_speed() { return {1.0545718e-34, 1.380649e-23, 3.0e8}; }

  void validate() const;
};

struct MirrorParams {
  double mass = 0.0;     // kg
  double omega_m = 0.0;  // rad/s
  double gamma = 0.0;    // rad/s
  double T_bath = 0.0;   // K

  void validate() const;
};

struct CavityConfig {
  double l0 = 0.0;                  // m
  std::optional<double> omega_cut;  // rad/s
  std::optional<int> n_cut;         // explicit mode count

  static CavityConfig with_cutoff_frequency(double l0, double omega_cut);
  static CavityConfig with_mode_count(double l0, int n_cut);

  void validate() const;
  double free_spectral_range(const PhysicalConstants& consts) const;
  double beta(double omega_m, const PhysicalConstants& consts) const;
};

// Inputs of the two-mode open-system model, in any consistent rate unit.
struct ExchangeRates {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double xi = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double nbar1 = 0.0;
  double nbar2 = 0.0;

  double detuning() const { return delta1 - delta2; }
  void validate() const;
};

double zero_point_fluctuation(const MirrorParams& m, const PhysicalConstants& consts = {});

double thermal_occupation(double omega, double temperature, const PhysicalConstants& consts = {});
double thermal_occupation(const MirrorParams& m, const PhysicalConstants& consts = {});

// floor(omega_cut * l0 / (pi c)); a ratio within 1e-12 relative below an
// integer counts as that integer, so a mode sitting exactly on the cutoff
// survives despite rounding in the inputs.
int cutoff_mode_count(const CavityConfig& cav, const PhysicalConstants& consts = {});

}  // namespace vacheat
