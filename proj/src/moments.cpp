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

#include "vacheat/moments.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "vacheat/errors.hpp"

namespace vacheat {
namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double steady_denominator(const ExchangeRates& r) {
  const double G = r.gamma1 + r.gamma2;
  const double d = r.detuning();
  return 4.0 * r.xi * r.xi * G * G + r.gamma1 * r.gamma2 * (4.0 * d * d + G * G);
}

// Fourth-order generator split as d v/dt = A v + B(second moments).
Eigen::Matrix<cd, 9, 9> fourth_generator(const ExchangeRates& r) {
  const double d = r.detuning();
  const double g1 = r.gamma1, g2 = r.gamma2, G = g1 + g2;
  const cd x = I * r.xi;
  Eigen::Matrix<cd, 9, 9> A = Eigen::Matrix<cd, 9, 9>::Zero();
  A(0, 0) = -2.0 * g1;
  A(0, 1) = -2.0 * x;
  A(0, 2) = 2.0 * x;

  A(1, 1) = I * d - 1.5 * g1 - 0.5 * g2;
  A(1, 0) = -x;
  A(1, 3) = -x;
  A(1, 4) = 2.0 * x;

  A(2, 2) = -I * d - 1.5 * g1 - 0.5 * g2;
  A(2, 0) = x;
  A(2, 5) = x;
  A(2, 4) = -2.0 * x;

  A(3, 3) = 2.0 * I * d - G;
  A(3, 1) = -2.0 * x;
  A(3, 6) = 2.0 * x;

  A(4, 4) = -G;
  A(4, 1) = x;
  A(4, 2) = -x;
  A(4, 6) = -x;
  A(4, 7) = x;

  A(5, 5) = -2.0 * I * d - G;
  A(5, 7) = -2.0 * x;
  A(5, 2) = 2.0 * x;

  A(6, 6) = I * d - 0.5 * g1 - 1.5 * g2;
  A(6, 8) = x;
  A(6, 3) = x;
  A(6, 4) = -2.0 * x;

  A(7, 7) = -I * d - 0.5 * g1 - 1.5 * g2;
  A(7, 4) = 2.0 * x;
  A(7, 8) = -x;
  A(7, 5) = -x;

  A(8, 8) = -2.0 * g2;
  A(8, 6) = 2.0 * x;
  A(8, 7) = -2.0 * x;
  return A;
}

Eigen::Matrix<cd, 9, 1> fourth_source(const SecondMoments& s, const ExchangeRates& r) {
  const double p1 = r.gamma1 * r.nbar1, p2 = r.gamma2 * r.nbar2;
  Eigen::Matrix<cd, 9, 1> b = Eigen::Matrix<cd, 9, 1>::Zero();
  b(0) = 4.0 * p1 * s.n1;
  b(1) = 2.0 * p1 * s.c12;
  b(2) = 2.0 * p1 * s.c21;
  b(4) = p2 * s.n1 + p1 * s.n2;
  b(6) = 2.0 * p2 * s.c12;
  b(7) = 2.0 * p2 * s.c21;
  b(8) = 4.0 * p2 * s.n2;
  return b;
}

SecondMoments axpy(const SecondMoments& a, double h, const SecondMoments& d) {
  return {a.n1 + h * d.n1, a.c12 + h * d.c12, a.c21 + h * d.c21, a.n2 + h * d.n2};
}

FourthMoments axpy(const FourthMoments& a, double h, const FourthMoments& d) {
  FourthMoments out;
  for (int i = 0; i < 9; ++i) out.v[i] = a.v[i] + h * d.v[i];
  return out;
}

double rate_scale(const ExchangeRates& r) {
  return std::max({r.gamma1, r.gamma2, std::abs(r.xi), std::abs(r.detuning()), 1e-300});
}

}  // namespace

bool degenerate_shifts(const ExchangeRates& r) {
  const double scale = std::max(std::abs(r.delta1), std::abs(r.delta2));
  return std::abs(r.delta1 - r.delta2) <= kDegenerateShiftTolerance * scale;
}

SecondMoments second_moment_rhs(const SecondMoments& s, const ExchangeRates& r) {
  const double d = r.detuning();
  const double half = 0.5 * (r.gamma1 + r.gamma2);
  const cd x = I * r.xi;
  SecondMoments out;
  out.n1 = (-x * s.c12 + x * s.c21).real() - r.gamma1 * s.n1 + r.gamma1 * r.nbar1;
  out.c12 = (I * d - half) * s.c12 - x * s.n1 + x * s.n2;
  out.c21 = (-I * d - half) * s.c21 + x * s.n1 - x * s.n2;
  out.n2 = (x * s.c12 - x * s.c21).real() - r.gamma2 * s.n2 + r.gamma2 * r.nbar2;
  return out;
}

SecondMoments second_moments_steady(const ExchangeRates& r) {
  r.validate();
  const double den = steady_denominator(r);
  if ((r.gamma1 == 0.0 && r.gamma2 == 0.0) || den == 0.0) {
    throw Error(ErrorCode::DegenerateRates, "steady moments need nonvanishing damping");
  }
  const double G = r.gamma1 + r.gamma2;
  const double d = r.detuning();
  const double shared = 4.0 * r.xi * r.xi * G * (r.gamma1 * r.nbar1 + r.gamma2 * r.nbar2);
  const double own = r.gamma1 * r.gamma2 * (4.0 * d * d + G * G);
  SecondMoments s;
  s.n1 = (shared + own * r.nbar1) / den;
  s.n2 = (shared + own * r.nbar2) / den;
  s.c12 = I * r.xi * (s.n1 - s.n2) / (I * d - 0.5 * G);
  s.c21 = std::conj(s.c12);
  return s;
}

FourthMoments fourth_moment_rhs(const FourthMoments& f, const SecondMoments& s,
                                const ExchangeRates& r) {
  Eigen::Matrix<cd, 9, 1> v;
  for (int i = 0; i < 9; ++i) v(i) = f.v[i];
  const Eigen::Matrix<cd, 9, 1> dv = fourth_generator(r) * v + fourth_source(s, r);
  FourthMoments out;
  for (int i = 0; i < 9; ++i) out.v[i] = dv(i);
  return out;
}

FourthMoments fourth_moments_steady(const ExchangeRates& r) {
  const SecondMoments s = second_moments_steady(r);
  const Eigen::FullPivLU<Eigen::Matrix<cd, 9, 9>> lu(fourth_generator(r));
  if (lu.rank() < 9) throw Error(ErrorCode::SingularSystem, "fourth-order generator is singular");
  const Eigen::Matrix<cd, 9, 1> v = lu.solve(-fourth_source(s, r));
  FourthMoments out;
  for (int i = 0; i < 9; ++i) out.v[i] = v(i);
  // The diagonal moments are real; drop the roundoff imaginary parts.
  for (int i : {0, 4, 8}) out.v[i] = out.v[i].real();
  return out;
}

std::array<double, 2> fourth_moments_closed_form(const ExchangeRates& r) {
  const double G = r.gamma1 + r.gamma2;
  const double d = r.detuning();
  const double own = r.gamma1 * r.gamma2 * (G * G + 4.0 * d * d);
  const double shared = 4.0 * G * (r.nbar1 * r.gamma1 + r.nbar2 * r.gamma2) * r.xi * r.xi;
  const double den = own + 4.0 * G * G * r.xi * r.xi;
  if (den == 0.0) throw Error(ErrorCode::DegenerateRates, "closed form needs damping");
  const double a = r.nbar1 * own + shared;
  const double b = r.nbar2 * own + shared;
  return {2.0 * a * a / (den * den), 2.0 * b * b / (den * den)};
}

MomentTrajectoryPoint integrate_moments(const SecondMoments& s0, const FourthMoments& f0,
                                        const ExchangeRates& r, double t_final, int steps) {
  if (steps < 1 || !(t_final >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "integration needs t_final >= 0 and steps >= 1");
  }
  const double h = t_final / steps;
  SecondMoments s = s0;
  FourthMoments f = f0;
  for (int i = 0; i < steps; ++i) {
    const SecondMoments k1 = second_moment_rhs(s, r);
    const FourthMoments l1 = fourth_moment_rhs(f, s, r);
    const SecondMoments s2 = axpy(s, 0.5 * h, k1);
    const FourthMoments f2 = axpy(f, 0.5 * h, l1);
    const SecondMoments k2 = second_moment_rhs(s2, r);
    const FourthMoments l2 = fourth_moment_rhs(f2, s2, r);
    const SecondMoments s3 = axpy(s, 0.5 * h, k2);
    const FourthMoments f3 = axpy(f, 0.5 * h, l2);
    const SecondMoments k3 = second_moment_rhs(s3, r);
    const FourthMoments l3 = fourth_moment_rhs(f3, s3, r);
    const SecondMoments s4 = axpy(s, h, k3);
    const FourthMoments f4 = axpy(f, h, l3);
    const SecondMoments k4 = second_moment_rhs(s4, r);
    const FourthMoments l4 = fourth_moment_rhs(f4, s4, r);
    s.n1 += h / 6.0 * (k1.n1 + 2.0 * k2.n1 + 2.0 * k3.n1 + k4.n1);
    s.n2 += h / 6.0 * (k1.n2 + 2.0 * k2.n2 + 2.0 * k3.n2 + k4.n2);
    s.c12 += h / 6.0 * (k1.c12 + 2.0 * k2.c12 + 2.0 * k3.c12 + k4.c12);
    s.c21 += h / 6.0 * (k1.c21 + 2.0 * k2.c21 + 2.0 * k3.c21 + k4.c21);
    for (int m = 0; m < 9; ++m) {
      f.v[m] += h / 6.0 * (l1.v[m] + 2.0 * l2.v[m] + 2.0 * l3.v[m] + l4.v[m]);
    }
  }
  return {t_final, s, f};
}

MomentTrajectoryPoint moments_by_ode(const ExchangeRates& r, double tol, double max_time) {
  r.validate();
  const double h = 0.05 / rate_scale(r);
  const int chunk = 200;
  MomentTrajectoryPoint state{0.0, SecondMoments{}, FourthMoments{}};
  while (state.t < max_time) {
    const MomentTrajectoryPoint next = integrate_moments(state.second, state.fourth, r, chunk * h, chunk);
    state.second = next.second;
    state.fourth = next.fourth;
    state.t += next.t;
    const SecondMoments d = second_moment_rhs(state.second, r);
    const FourthMoments df = fourth_moment_rhs(state.fourth, state.second, r);
    const double scale = rate_scale(r);
    const double occ = std::max({1.0, state.second.n1, state.second.n2});
    double worst = std::max({std::abs(d.n1), std::abs(d.n2), std::abs(d.c12)}) / (scale * occ);
    for (const cd& z : df.v) worst = std::max(worst, std::abs(z) / (scale * occ * occ));
    if (worst < tol) return state;
  }
  throw Error(ErrorCode::NonConvergence, "moment integration did not settle before max_time");
}

double g2_analytic(const ExchangeRates& r, int mirror) {
  if (mirror != 1 && mirror != 2) throw Error(ErrorCode::InvalidArgument, "mirror must be 1 or 2");
  const SecondMoments s = second_moments_steady(r);
  const double n = (mirror == 1) ? s.n1 : s.n2;
  if (!(n > 0.0)) throw Error(ErrorCode::ZeroPopulation, "g2 is undefined for an empty mode");
  const FourthMoments f = fourth_moments_steady(r);
  const double num = (mirror == 1) ? f.n1n1() : f.n2n2();
  return num / (n * n);
}

const char* to_string(TemperatureForm form) noexcept {
  return form == TemperatureForm::exact_ln ? "exact_ln" : "high_T";
}

ModeTemperatures mode_temperatures(const ExchangeRates& r, double omega_m, double T1, double T2,
                                   TemperatureForm form, const PhysicalConstants& consts) {
  ModeTemperatures out;
  out.form = form;
  if (form == TemperatureForm::exact_ln) {
    const SecondMoments s = second_moments_steady(r);
    const auto temp = [&](double n) {
      if (!(n > 0.0)) return 0.0;
      return consts.hbar * omega_m / (consts.k_B * std::log1p(1.0 / n));
    };
    out.T_m1 = temp(s.n1);
    out.T_m2 = temp(s.n2);
    return out;
  }

  const double t_min = std::min(T1, T2);
  out.high_T_warning = !(t_min > 0.0) ||
                       consts.hbar * omega_m / (consts.k_B * t_min) > kHighTemperatureGuard;
  const double G = r.gamma1 + r.gamma2;
  const double xi2 = r.xi * r.xi;
  if (degenerate_shifts(r)) {
    const double den = G * (4.0 * xi2 + r.gamma1 * r.gamma2);
    if (den == 0.0) throw Error(ErrorCode::DegenerateRates, "mode temperatures need damping");
    out.T_m1 = T1 + 4.0 * xi2 * r.gamma2 * (T2 - T1) / den;
    out.T_m2 = T2 + 4.0 * xi2 * r.gamma1 * (T1 - T2) / den;
    return out;
  }
  // Occupations replaced by k_B T / (hbar omega_m); the prefactor cancels.
  const double d = r.detuning();
  const double own = r.gamma1 * r.gamma2 * (d * d + 0.25 * G * G);
  const double den = xi2 * G * G + own;
  if (den == 0.0) throw Error(ErrorCode::DegenerateRates, "mode temperatures need damping");
  const double shared = xi2 * G * (r.gamma1 * T1 + r.gamma2 * T2);
  out.T_m1 = (shared + own * T1) / den;
  out.T_m2 = (shared + own * T2) / den;
  return out;
}

AnalyticFlux heat_flux_analytic(const ExchangeRates& r, double omega_m, double hbar) {
  if (!degenerate_shifts(r)) {
    throw Error(ErrorCode::NonDegenerateShifts, "closed-form flux needs equal frequency shifts");
  }
  AnalyticFlux out;
  out.omega_b = omega_m + r.delta1;
  out.omega_b_negative = out.omega_b < 0.0;
  const double G = r.gamma1 + r.gamma2;
  const double gg = r.gamma1 * r.gamma2;
  const double xi2 = r.xi * r.xi;
  const double den = G * (gg + 4.0 * xi2);
  if (den == 0.0) return out;
  out.flux.J1 = 4.0 * hbar * out.omega_b * (r.nbar1 - r.nbar2) * gg * xi2 / den;
  out.flux.J2 = -out.flux.J1;
  return out;
}

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::analytic: return "analytic";
    case Provenance::ode: return "ode";
    case Provenance::lindblad: return "lindblad";
  }
  return "unknown";
}

SteadyStateReport analytic_report(const ExchangeRates& r, double omega_m, double T1, double T2,
                                  const PhysicalConstants& consts) {
  SteadyStateReport rep;
  const SecondMoments s = second_moments_steady(r);
  rep.n1_ss = s.n1;
  rep.n2_ss = s.n2;
  rep.T_exact = mode_temperatures(r, omega_m, T1, T2, TemperatureForm::exact_ln, consts);
  rep.T_high = mode_temperatures(r, omega_m, T1, T2, TemperatureForm::high_T, consts);
  if (s.n1 > 0.0) rep.g2_1 = g2_analytic(r, 1);
  if (s.n2 > 0.0) rep.g2_2 = g2_analytic(r, 2);
  if (degenerate_shifts(r)) {
    const AnalyticFlux f = heat_flux_analytic(r, omega_m, consts.hbar);
    rep.flux = f.flux;
    rep.omega_b_negative = f.omega_b_negative;
    rep.flux_available = true;
  }
  rep.provenance = Provenance::analytic;
  return rep;
}

}  // namespace vacheat
