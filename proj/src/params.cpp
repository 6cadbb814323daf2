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

#include "vacheat/params.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vacheat/errors.hpp"

namespace vacheat {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }
bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

constexpr double kBoundarySlack = 1e-12;

}  // namespace

void PhysicalConstants::validate() const {
  require(finite_positive(hbar), "hbar must be positive");
  require(finite_positive(k_B), "k_B must be positive");
  require(finite_positive(c), "c must be positive");
}

void MirrorParams::validate() const {
  require(finite_positive(mass), "mirror mass must be positive");
  require(finite_positive(omega_m), "mirror frequency must be positive");
  require(finite_non_negative(gamma), "mirror damping must be non-negative");
  require(finite_non_negative(T_bath), "bath temperature must be non-negative");
}

CavityConfig CavityConfig::with_cutoff_frequency(double l0, double omega_cut) {
  CavityConfig cav;
  cav.l0 = l0;
  cav.omega_cut = omega_cut;
  return cav;
}

CavityConfig CavityConfig::with_mode_count(double l0, int n_cut) {
  CavityConfig cav;
  cav.l0 = l0;
  cav.n_cut = n_cut;
  return cav;
}

void CavityConfig::validate() const {
  require(finite_positive(l0), "cavity length must be positive");
  require(omega_cut.has_value() != n_cut.has_value(),
          "cavity needs exactly one of a cutoff frequency or a mode count");
  if (omega_cut) require(finite_positive(*omega_cut), "cutoff frequency must be positive");
  if (n_cut) require(*n_cut >= 1, "mode count must be at least 1");
}

double CavityConfig::free_spectral_range(const PhysicalConstants& consts) const {
  return std::numbers::pi * consts.c / l0;
}

double CavityConfig::beta(double omega_m, const PhysicalConstants& consts) const {
  return omega_m / free_spectral_range(consts);
}

void ExchangeRates::validate() const {
  require(std::isfinite(delta1) && std::isfinite(delta2) && std::isfinite(xi),
          "shifts and coupling must be finite");
  require(finite_non_negative(gamma1) && finite_non_negative(gamma2),
          "damping rates must be non-negative");
  require(finite_non_negative(nbar1) && finite_non_negative(nbar2),
          "thermal occupations must be non-negative");
}

double zero_point_fluctuation(const MirrorParams& m, const PhysicalConstants& consts) {
  m.validate();
  consts.validate();
  return std::sqrt(consts.hbar / (2.0 * m.mass * m.omega_m));
}

double thermal_occupation(double omega, double temperature, const PhysicalConstants& consts) {
  require(finite_positive(omega), "frequency must be positive");
  require(finite_non_negative(temperature), "temperature must be non-negative");
  if (temperature == 0.0) return 0.0;
  const double x = consts.hbar * omega / (consts.k_B * temperature);
  return 1.0 / std::expm1(x);
}

double thermal_occupation(const MirrorParams& m, const PhysicalConstants& consts) {
  m.validate();
  return thermal_occupation(m.omega_m, m.T_bath, consts);
}

int cutoff_mode_count(const CavityConfig& cav, const PhysicalConstants& consts) {
  cav.validate();
  consts.validate();
  if (cav.n_cut) return *cav.n_cut;
  const double ratio = *cav.omega_cut / cav.free_spectral_range(consts);
  const double count = std::floor(ratio * (1.0 + kBoundarySlack));
  if (count < 1.0) {
    throw Error(ErrorCode::ZeroModes, "cutoff frequency is below the fundamental cavity mode");
  }
  if (count > static_cast<double>(std::numeric_limits<int>::max())) {
    throw Error(ErrorCode::InvalidArgument, "mode count overflows");
  }
  return static_cast<int>(count);
}

}  // namespace vacheat
