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

// Multimode vacuum-exchange parameters.
//
// Mirror 1 is the right mirror (position q1), mirror 2 the left one (q2).

#pragma once

#include <array>

#include "vacheat/params.hpp"

namespace vacheat {

// Dimensionless coupling g_kj^(n) between cavity modes k and j induced by
// motion of mirror n (1 or 2). Antisymmetric in (k, j); zero on the diagonal.
double coupling_coefficient(int k, int j, int mirror);

enum class SumMode { exact, beta_zero };

const char* to_string(SumMode mode) noexcept;
SumMode sum_mode_from_string(const char* name);

// Relative distance |beta - s| / beta below which a pair-sum pole s = j + k
// is considered hit.
inline constexpr double kPoleTolerance = 1e-6;

struct MultimodeFactors {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double beta = 0.0;
  int n_cut = 0;
  SumMode mode = SumMode::beta_zero;
};

// Pair sums over j, k = 1..n_cut of jk(j+k)/((j+k)^2 - beta^2), with an
// alternating sign (-1)^(j+k) for sigma2. beta_zero drops beta entirely.
// Throws ResonantPole in exact mode when beta sits on some j + k.
MultimodeFactors multimode_factors(int n_cut, double beta, SumMode mode);

struct EffectiveParams {
  double delta_b1 = 0.0;  // rad/s
  double delta_b2 = 0.0;  // rad/s
  double xi = 0.0;        // rad/s
  MultimodeFactors factors;
  std::array<double, 2> casimir_delta_b{};  // rad/s
  double casimir_zeta = 0.0;                // rad/s
};

// In exact mode the shifts and coupling are summed directly over the cavity
// mode frequencies, which is an independent route to the same numbers as
// scaling the exact-mode factors.
EffectiveParams effective_params(const MirrorParams& m1, const MirrorParams& m2,
                                 const CavityConfig& cav, SumMode mode,
                                 const PhysicalConstants& consts = {});

struct CasimirComparison {
  std::array<double, 2> delta_b{};
  double zeta = 0.0;
  double ratio = 0.0;  // xi / zeta with xi from the beta_zero factors
};

CasimirComparison casimir_comparison(const MirrorParams& m1, const MirrorParams& m2,
                                     const CavityConfig& cav,
                                     const PhysicalConstants& consts = {});

struct SingleModeSpectrum {
  int k = 0;
  double omega_k = 0.0;          // rad/s
  double g_k1 = 0.0;             // rad/s
  double g_k2 = 0.0;             // rad/s
  double n_c = 0.0;              // critical photon number
  double x_r_per_photon = 0.0;   // m

  double x_r_mean_at(double photons) const { return photons * x_r_per_photon; }
};

SingleModeSpectrum single_mode_spectrum(int k, const MirrorParams& m1, const MirrorParams& m2,
                                        const CavityConfig& cav,
                                        const PhysicalConstants& consts = {});

}  // namespace vacheat
