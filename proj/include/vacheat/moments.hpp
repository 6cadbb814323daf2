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

#include <array>
#include <complex>
#include <string>

#include "vacheat/params.hpp"

namespace vacheat {

struct SecondMoments {
  double n1 = 0.0;                 // <b1^+ b1>
  std::complex<double> c12{};      // <b1^+ b2>
  std::complex<double> c21{};      // <b1 b2^+>
  double n2 = 0.0;                 // <b2^+ b2>
};

// Order: <b1+b1+b1b1>, <b1+b1+b1b2>, <b1+b1b1b2+>, <b1+b1+b2b2>, <b1+b1b2+b2>,
//        <b1b1b2+b2+>, <b1+b2+b2b2>, <b1b2+b2+b2>, <b2+b2+b2b2>
struct FourthMoments {
  std::array<std::complex<double>, 9> v{};

  double n1n1() const { return v[0].real(); }
  double n2n2() const { return v[8].real(); }
  double n1n2() const { return v[4].real(); }
};

inline constexpr double kDegenerateShiftTolerance = 1e-12;

bool degenerate_shifts(const ExchangeRates& rates);

SecondMoments second_moment_rhs(const SecondMoments& s, const ExchangeRates& rates);
SecondMoments second_moments_steady(const ExchangeRates& rates);

FourthMoments fourth_moment_rhs(const FourthMoments& f, const SecondMoments& s,
                                const ExchangeRates& rates);
FourthMoments fourth_moments_steady(const ExchangeRates& rates);
// The two diagonal steady values in closed form: {<b1+b1+b1b1>, <b2+b2+b2b2>}.
std::array<double, 2> fourth_moments_closed_form(const ExchangeRates& rates);

struct MomentTrajectoryPoint {
  double t = 0.0;
  SecondMoments second;
  FourthMoments fourth;
};

// Fixed-step RK4 over the joint second/fourth-order system.
MomentTrajectoryPoint integrate_moments(const SecondMoments& s0, const FourthMoments& f0,
                                        const ExchangeRates& rates, double t_final,
                                        int steps);

// Integrates from the vacuum until the second-moment derivative drops below
// tol (relative to the occupations) or max_time elapses.
MomentTrajectoryPoint moments_by_ode(const ExchangeRates& rates, double tol = 1e-13,
                                     double max_time = 1e4);

double g2_analytic(const ExchangeRates& rates, int mirror);

enum class TemperatureForm { exact_ln, high_T };
const char* to_string(TemperatureForm form) noexcept;

inline constexpr double kHighTemperatureGuard = 0.01;

struct ModeTemperatures {
  double T_m1 = 0.0;  // K
  double T_m2 = 0.0;  // K
  TemperatureForm form = TemperatureForm::exact_ln;
  bool high_T_warning = false;  // hbar omega_m / (k_B min T) above the guard
};

// rates carry nbar for exact_ln; high_T uses the bath temperatures directly.
ModeTemperatures mode_temperatures(const ExchangeRates& rates, double omega_m, double T1,
                                   double T2, TemperatureForm form,
                                   const PhysicalConstants& consts = {});

struct HeatFlux {
  double J1 = 0.0;
  double J2 = 0.0;
};

struct AnalyticFlux {
  HeatFlux flux;
  double omega_b = 0.0;
  bool omega_b_negative = false;
};

// Degenerate shifts only. Units follow hbar * omega_m * rate.
AnalyticFlux heat_flux_analytic(const ExchangeRates& rates, double omega_m, double hbar);

enum class Provenance { analytic, ode, lindblad };
const char* to_string(Provenance p) noexcept;

struct SteadyStateReport {
  double n1_ss = 0.0;
  double n2_ss = 0.0;
  ModeTemperatures T_exact;
  ModeTemperatures T_high;
  HeatFlux flux;
  double g2_1 = 0.0;
  double g2_2 = 0.0;
  Provenance provenance = Provenance::analytic;
  bool omega_b_negative = false;
  bool flux_available = false;
};

// Rates in rad/s, omega_m in rad/s, temperatures in K, flux in W.
SteadyStateReport analytic_report(const ExchangeRates& rates, double omega_m, double T1,
                                  double T2, const PhysicalConstants& consts = {});

}  // namespace vacheat
