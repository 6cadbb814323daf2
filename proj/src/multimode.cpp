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

#include "vacheat/multimode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <string>

#include "vacheat/compensated.hpp"
#include "vacheat/errors.hpp"

namespace vacheat {
namespace {

// Largest n_cut for which the per-diagonal integer sums below stay exact in
// 64-bit arithmetic.
constexpr int kMaxModeCount = 1'000'000;

constexpr double kDegeneracyTolerance = 1e-12;

int sign_of_parity(std::int64_t s) { return (s % 2 == 0) ? 1 : -1; }

// Sum of j * (s - j) over the pairs (j, s - j) with both indices in [1, n].
// Exact integer; it is the common numerator of every term on diagonal s.
std::int64_t diagonal_weight(std::int64_t s, std::int64_t n) {
  const std::int64_t a = std::max<std::int64_t>(1, s - n);
  const std::int64_t b = std::min<std::int64_t>(n, s - 1);
  if (b < a) return 0;
  const std::int64_t count = b - a + 1;
  const std::int64_t sum_j = (a + b) * count / 2;
  const auto sum_sq = [](std::int64_t m) { return m * (m + 1) * (2 * m + 1) / 6; };
  return s * sum_j - (sum_sq(b) - sum_sq(a - 1));
}

void check_pole(int n_cut, double beta) {
  const double nearest = std::round(beta);
  if (nearest < 2.0 || nearest > 2.0 * n_cut) return;
  if (std::abs(beta - nearest) < kPoleTolerance * beta) {
    throw Error(ErrorCode::ResonantPole,
                "beta = " + std::to_string(beta) + " is resonant with mode pair sum " +
                    std::to_string(static_cast<long long>(nearest)));
  }
}

void require_degenerate(const MirrorParams& m1, const MirrorParams& m2) {
  const double scale = std::max(m1.omega_m, m2.omega_m);
  if (std::abs(m1.omega_m - m2.omega_m) > kDegeneracyTolerance * scale) {
    throw Error(ErrorCode::NonDegenerateMirrors,
                "the exchange model needs equal mirror frequencies");
  }
}

}  // namespace

double coupling_coefficient(int k, int j, int mirror) {
  if (k < 1 || j < 1) throw Error(ErrorCode::InvalidArgument, "mode indices start at 1");
  if (mirror != 1 && mirror != 2) throw Error(ErrorCode::InvalidArgument, "mirror must be 1 or 2");
  if (j == k) return 0.0;
  const double kd = k;
  const double jd = j;
  const double bracket = (mirror == 1) ? sign_of_parity(j + k) : -1.0;
  return 2.0 * kd * jd * bracket / (jd * jd - kd * kd);
}

const char* to_string(SumMode mode) noexcept {
  return mode == SumMode::exact ? "exact" : "beta_zero";
}

SumMode sum_mode_from_string(const char* name) {
  if (std::strcmp(name, "exact") == 0 || std::strcmp(name, "exact_sum") == 0) return SumMode::exact;
  if (std::strcmp(name, "beta_zero") == 0) return SumMode::beta_zero;
  throw Error(ErrorCode::InvalidArgument, std::string("unknown sum mode: ") + name);
}

MultimodeFactors multimode_factors(int n_cut, double beta, SumMode mode) {
  if (n_cut < 1) throw Error(ErrorCode::ZeroModes, "n_cut must be at least 1");
  if (n_cut > kMaxModeCount) throw Error(ErrorCode::InvalidArgument, "n_cut out of range");
  if (!std::isfinite(beta) || beta < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite and non-negative");
  }
  if (mode == SumMode::exact) check_pole(n_cut, beta);

  // Every term on the diagonal s = j + k shares its denominator, so each
  // diagonal contributes weight(s) * f(s); diagonals are added in ascending s.
  CompensatedSum s1;
  CompensatedSum s2;
  const double beta_sq = beta * beta;
  for (std::int64_t s = 2; s <= 2 * static_cast<std::int64_t>(n_cut); ++s) {
    const double w = static_cast<double>(diagonal_weight(s, n_cut));
    const double sd = static_cast<double>(s);
    const double term = (mode == SumMode::beta_zero) ? w / sd : w * sd / (sd * sd - beta_sq);
    s1 += term;
    s2 += sign_of_parity(s) * term;
  }

  MultimodeFactors f;
  f.sigma1 = s1.value();
  f.sigma2 = s2.value();
  f.beta = beta;
  f.n_cut = n_cut;
  f.mode = mode;
  return f;
}

EffectiveParams effective_params(const MirrorParams& m1, const MirrorParams& m2,
                                 const CavityConfig& cav, SumMode mode,
                                 const PhysicalConstants& consts) {
  require_degenerate(m1, m2);
  const double x1 = zero_point_fluctuation(m1, consts);
  const double x2 = zero_point_fluctuation(m2, consts);
  const int n_cut = cutoff_mode_count(cav, consts);
  const double l0 = cav.l0;
  const double fsr = cav.free_spectral_range(consts);
  const double beta = m1.omega_m / fsr;
  const double l0_cubed = l0 * l0 * l0;
  const double pi_c = std::numbers::pi * consts.c;

  EffectiveParams p;
  p.factors = multimode_factors(n_cut, beta, mode);

  if (mode == SumMode::beta_zero) {
    p.delta_b1 = -pi_c * x1 * x1 / l0_cubed * p.factors.sigma1;
    p.delta_b2 = -pi_c * x2 * x2 / l0_cubed * p.factors.sigma1;
    p.xi = pi_c * x1 * x2 / l0_cubed * p.factors.sigma2;
  } else {
    // Direct sum over mode frequencies w_j, w_k of
    //   w_j w_k (w_j + w_k) / (w_M^2 - (w_j + w_k)^2).
    const double wm_sq = m1.omega_m * m1.omega_m;
    CompensatedSum direct;
    CompensatedSum alternating;
    for (int s = 2; s <= 2 * n_cut; ++s) {
      const double ws = s * fsr;
      const double denom = wm_sq - ws * ws;
      const int lo = std::max(1, s - n_cut);
      const int hi = std::min(n_cut, s - 1);
      for (int j = lo; j <= hi; ++j) {
        const double term = (j * fsr) * ((s - j) * fsr) * ws / denom;
        direct += term;
        alternating += sign_of_parity(s) * term;
      }
    }
    p.delta_b1 = x1 * x1 / (l0 * l0) * direct.value();
    p.delta_b2 = x2 * x2 / (l0 * l0) * direct.value();
    p.xi = -x1 * x2 / (l0 * l0) * alternating.value();
  }

  p.casimir_delta_b = {pi_c * x1 * x1 / (12.0 * l0_cubed), pi_c * x2 * x2 / (12.0 * l0_cubed)};
  p.casimir_zeta = pi_c * x1 * x2 / (12.0 * l0_cubed);
  return p;
}

CasimirComparison casimir_comparison(const MirrorParams& m1, const MirrorParams& m2,
                                     const CavityConfig& cav, const PhysicalConstants& consts) {
  const EffectiveParams p = effective_params(m1, m2, cav, SumMode::beta_zero, consts);
  CasimirComparison out;
  out.delta_b = p.casimir_delta_b;
  out.zeta = p.casimir_zeta;
  out.ratio = p.xi / p.casimir_zeta;
  return out;
}

SingleModeSpectrum single_mode_spectrum(int k, const MirrorParams& m1, const MirrorParams& m2,
                                        const CavityConfig& cav, const PhysicalConstants& consts) {
  const int n_cut = cutoff_mode_count(cav, consts);
  if (k < 1 || k > n_cut) {
    throw Error(ErrorCode::InvalidArgument, "mode index must lie in [1, n_cut]");
  }
  const double x1 = zero_point_fluctuation(m1, consts);
  const double x2 = zero_point_fluctuation(m2, consts);
  const double w1 = m1.omega_m;
  const double w2 = m2.omega_m;

  SingleModeSpectrum out;
  out.k = k;
  out.omega_k = k * cav.free_spectral_range(consts);
  out.g_k1 = out.omega_k * x1 / cav.l0;
  out.g_k2 = out.omega_k * x2 / cav.l0;
  out.n_c = w1 * w2 * out.omega_k / (2.0 * (w1 * out.g_k2 * out.g_k2 + w2 * out.g_k1 * out.g_k1));
  out.x_r_per_photon =
      (consts.hbar / (m1.mass * w1 * w1) + consts.hbar / (m2.mass * w2 * w2)) * out.omega_k / cav.l0;
  return out;
}

}  // namespace vacheat
