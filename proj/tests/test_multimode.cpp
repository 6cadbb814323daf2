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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vacheat/errors.hpp"
#include "vacheat/multimode.hpp"

using namespace vacheat;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

MirrorParams fig_mirror(double mass = 0.3e-18) {
  MirrorParams m;
  m.mass = mass;
  m.omega_m = kTwoPi * 50e6;
  m.gamma = 1e-6 * m.omega_m;
  m.T_bath = 3.0;
  return m;
}

}  // namespace

TEST_CASE("coupling coefficients") {
  CHECK(coupling_coefficient(1, 1, 1) == 0.0);
  CHECK(coupling_coefficient(1, 2, 1) == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
  CHECK(coupling_coefficient(2, 1, 2) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  for (int n = 1; n <= 2; ++n) {
    for (int k = 1; k <= 64; ++k) {
      for (int j = 1; j <= 64; ++j) {
        REQUIRE(coupling_coefficient(k, j, n) == -coupling_coefficient(j, k, n));
        REQUIRE(coupling_coefficient(k, j, n) == doctest::Approx(oracle::coupling(k, j, n)).epsilon(1e-15));
      }
    }
  }
  CHECK_THROWS_AS(coupling_coefficient(0, 1, 1), Error);
  CHECK_THROWS_AS(coupling_coefficient(1, 2, 3), Error);
}

TEST_CASE("multimode factors at small cutoffs") {
  const MultimodeFactors f1 = multimode_factors(1, 0.0, SumMode::beta_zero);
  CHECK(f1.sigma1 == 0.5);
  CHECK(f1.sigma2 == 0.5);
  const MultimodeFactors f2 = multimode_factors(2, 0.0, SumMode::beta_zero);
  CHECK(f2.sigma1 == doctest::Approx(17.0 / 6.0).epsilon(1e-15));
  CHECK(f2.sigma2 == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  const MultimodeFactors f14 = multimode_factors(14, 0.0, SumMode::beta_zero);
  CHECK(f14.sigma1 == doctest::Approx(621.181).epsilon(1e-3));
  CHECK(f14.sigma2 == doctest::Approx(1.6475).epsilon(1e-3));
}

TEST_CASE("multimode factors against the brute-force double sum") {
  for (int n = 1; n <= 50; ++n) {
    double s1 = 0.0, s2 = 0.0;
    oracle::sigma_bruteforce(n, 0.0, true, s1, s2);
    const MultimodeFactors f = multimode_factors(n, 0.0, SumMode::beta_zero);
    REQUIRE(oracle::rel(f.sigma1, s1) < 1e-12);
    REQUIRE(std::abs(f.sigma2 - s2) < 1e-12 * s1);

    oracle::sigma_bruteforce(n, 0.37, false, s1, s2);
    const MultimodeFactors e = multimode_factors(n, 0.37, SumMode::exact);
    REQUIRE(oracle::rel(e.sigma1, s1) < 1e-12);
    REQUIRE(std::abs(e.sigma2 - s2) < 1e-12 * s1);
  }
}

TEST_CASE("multimode factor ordering and monotonicity") {
  // sigma2 alternates in sign per diagonal, so only sigma1 is monotone.
  double p1 = 0.0;
  for (int n = 1; n <= 300; ++n) {
    const MultimodeFactors f = multimode_factors(n, 0.0, SumMode::beta_zero);
    REQUIRE(f.sigma1 > 0.0);
    REQUIRE(f.sigma1 >= std::abs(f.sigma2));
    REQUIRE(f.sigma1 >= p1);
    p1 = f.sigma1;
  }
}

TEST_CASE("resonant pole guard and bad counts") {
  CHECK_THROWS_AS(multimode_factors(5, 7.0, SumMode::exact), Error);
  try {
    multimode_factors(5, 7.0 * (1.0 + 1e-8), SumMode::exact);
    FAIL("expected ResonantPole");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResonantPole);
  }
  CHECK_NOTHROW(multimode_factors(5, 7.0, SumMode::beta_zero));
  CHECK_NOTHROW(multimode_factors(5, 7.5, SumMode::exact));
  try {
    multimode_factors(0, 0.0, SumMode::beta_zero);
    FAIL("expected ZeroModes");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroModes);
  }
}

TEST_CASE("sum mode names") {
  CHECK(sum_mode_from_string(to_string(SumMode::exact)) == SumMode::exact);
  CHECK(sum_mode_from_string(to_string(SumMode::beta_zero)) == SumMode::beta_zero);
  CHECK_THROWS_AS(sum_mode_from_string("approx"), Error);
}

TEST_CASE("effective parameters: ratio and cube laws") {
  const MirrorParams m = fig_mirror();
  for (int n_cut : {1, 14, 130}) {
    double ref = 0.0;
    for (double l0 = 1e-7; l0 <= 1e-4 * 1.0001; l0 *= std::pow(10.0, 0.25)) {
      const EffectiveParams p =
          effective_params(m, m, CavityConfig::with_mode_count(l0, n_cut), SumMode::beta_zero);
      CHECK(oracle::rel(p.delta_b1 / p.xi, -p.factors.sigma1 / p.factors.sigma2) < 1e-12);
      const double scaled = p.delta_b1 * l0 * l0 * l0;
      if (ref == 0.0) ref = scaled;
      CHECK(oracle::rel(scaled, ref) < 1e-12);
    }
    const EffectiveParams a =
        effective_params(m, m, CavityConfig::with_mode_count(2e-6, n_cut), SumMode::beta_zero);
    const EffectiveParams b =
        effective_params(m, m, CavityConfig::with_mode_count(4e-6, n_cut), SumMode::beta_zero);
    CHECK(oracle::rel(b.delta_b1 / a.delta_b1, 0.125) < 1e-12);
    CHECK(oracle::rel(b.xi / a.xi, 0.125) < 1e-12);
  }
}

TEST_CASE("effective parameters: closed-form prefactor") {
  const PhysicalConstants c;
  const MirrorParams m = fig_mirror();
  const double l0 = 3e-6;
  const EffectiveParams p = effective_params(m, m, CavityConfig::with_mode_count(l0, 14), SumMode::beta_zero);
  const double x = std::sqrt(c.hbar / (2.0 * m.mass * m.omega_m));
  const double pre = std::numbers::pi * c.c * x * x / (l0 * l0 * l0);
  CHECK(oracle::rel(p.delta_b1, -pre * 621.181) < 1e-3);
  CHECK(oracle::rel(p.xi, pre * p.factors.sigma2) < 1e-13);
  CHECK(p.delta_b1 < 0.0);
  CHECK(p.xi > 0.0);
}

TEST_CASE("effective parameters: unequal masses") {
  const MirrorParams m1 = fig_mirror(0.3e-18);
  const MirrorParams m2 = fig_mirror(0.9e-18);
  const EffectiveParams p = effective_params(m1, m2, CavityConfig::with_mode_count(1e-6, 20), SumMode::beta_zero);
  CHECK(oracle::rel(p.delta_b1 / p.delta_b2, 3.0) < 1e-13);
}

TEST_CASE("effective parameters reject nondegenerate mirrors") {
  MirrorParams m1 = fig_mirror();
  MirrorParams m2 = fig_mirror();
  m2.omega_m *= 1.01;
  try {
    effective_params(m1, m2, CavityConfig::with_mode_count(1e-6, 5), SumMode::beta_zero);
    FAIL("expected NonDegenerateMirrors");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonDegenerateMirrors);
  }
}

TEST_CASE("exact sums approach the beta-free limit") {
  const PhysicalConstants c;
  MirrorParams m = fig_mirror();
  const int n_cut = 14;
  auto length_for_beta = [&](double beta) {
    return beta * std::numbers::pi * c.c / m.omega_m;
  };

  {
    const CavityConfig cav = CavityConfig::with_mode_count(length_for_beta(1e-4), n_cut);
    const EffectiveParams e = effective_params(m, m, cav, SumMode::exact);
    const EffectiveParams z = effective_params(m, m, cav, SumMode::beta_zero);
    CHECK(oracle::rel(e.delta_b1, z.delta_b1) < 1e-6);
    CHECK(oracle::rel(e.xi, z.xi) < 1e-6);
    // Exact mode sums over mode frequencies directly; it must agree with the
    // scaled exact-mode factors.
    const double pre = z.delta_b1 / z.factors.sigma1;
    CHECK(oracle::rel(e.delta_b1, pre * e.factors.sigma1) < 1e-10);
  }

  double prev = 1.0;
  double prev_beta = 0.0;
  for (double beta = 1e-2; beta >= 1e-5; beta *= 0.5) {
    const CavityConfig cav = CavityConfig::with_mode_count(length_for_beta(beta), n_cut);
    const double d = oracle::rel(effective_params(m, m, cav, SumMode::exact).delta_b1,
                                 effective_params(m, m, cav, SumMode::beta_zero).delta_b1);
    CHECK(d < prev);
    if (prev_beta > 0.0 && d > 1e-11) CHECK(prev / d == doctest::Approx(4.0).epsilon(0.02));
    prev = d;
    prev_beta = beta;
  }
}

TEST_CASE("coupling sign: explicit-minus form with full denominators") {
  // xi written with a leading minus, alternating signs and the negative
  // denominator omega_M^2 - (w_j + w_k)^2, summed over mode frequencies.
  const PhysicalConstants c;
  const MirrorParams m1 = fig_mirror(0.3e-18);
  const MirrorParams m2 = fig_mirror(0.5e-18);
  const int n_cut = 14;
  for (double beta : {1e-3, 0.3, 2.5}) {
    const double l0 = beta * std::numbers::pi * c.c / m1.omega_m;
    const EffectiveParams e = effective_params(m1, m2, CavityConfig::with_mode_count(l0, n_cut), SumMode::exact);
    const long double wm = m1.omega_m;
    const long double dw = std::numbers::pi_v<long double> * c.c / l0;
    long double sum = 0.0L;
    for (int k = 1; k <= n_cut; ++k) {
      for (int n = 1; n <= n_cut; ++n) {
        const long double wk = k * dw, wn = n * dw, s = wk + wn;
        const long double sign = ((n + k) % 2 == 0) ? 1.0L : -1.0L;
        sum += sign * (wn * wk / wm) * s / (wm * wm - s * s);
      }
    }
    const long double xi = -0.5L * c.hbar / (l0 * l0 * std::sqrt((long double)m1.mass * m2.mass)) * sum;
    CHECK(oracle::rel(e.xi, double(xi)) < 1e-12);
    if (beta < 2.0) CHECK(e.xi > 0.0);  // below the first resonance j + k = 2
  }
}

TEST_CASE("Casimir comparison") {
  const MirrorParams m = fig_mirror();
  const CasimirComparison c1 = casimir_comparison(m, m, CavityConfig::with_mode_count(1e-6, 1));
  CHECK(c1.ratio == doctest::Approx(6.0).epsilon(1e-13));
  const CasimirComparison c14 = casimir_comparison(m, m, CavityConfig::with_mode_count(1e-6, 14));
  CHECK(c14.ratio == doctest::Approx(19.77).epsilon(1e-3));
  for (int n : {1, 2, 14, 130, 1000}) {
    const CasimirComparison c = casimir_comparison(m, m, CavityConfig::with_mode_count(2e-6, n));
    CHECK(oracle::rel(c.ratio, 12.0 * multimode_factors(n, 0.0, SumMode::beta_zero).sigma2) < 1e-12);
    CHECK(oracle::rel(c.delta_b[0], c.zeta) < 1e-14);
  }
}

TEST_CASE("single-mode spectrum") {
  const PhysicalConstants c;
  const MirrorParams m = fig_mirror();
  const CavityConfig cav = CavityConfig::with_mode_count(1e-6, 20);
  const SingleModeSpectrum s = single_mode_spectrum(3, m, m, cav);
  CHECK(s.n_c > 0.0);
  CHECK(oracle::rel(s.x_r_mean_at(s.n_c), cav.l0) < 1e-12);
  CHECK(s.x_r_mean_at(0.0) == 0.0);
  CHECK(oracle::rel(s.x_r_mean_at(2.0 * s.n_c), 2.0 * s.x_r_mean_at(s.n_c)) < 1e-15);

  // n_c recomputed from its definition at two lengths.
  const double x = zero_point_fluctuation(m, c);
  for (double l0 : {1e-6, 2e-6}) {
    const SingleModeSpectrum t = single_mode_spectrum(3, m, m, CavityConfig::with_mode_count(l0, 20));
    const double wk = 3.0 * std::numbers::pi * c.c / l0;
    const double g = wk * x / l0;
    CHECK(oracle::rel(t.g_k1, g) < 1e-14);
    CHECK(oracle::rel(t.n_c, m.omega_m * m.omega_m * wk / (2.0 * 2.0 * m.omega_m * g * g)) < 1e-12);
  }
  const double ratio = single_mode_spectrum(3, m, m, CavityConfig::with_mode_count(2e-6, 20)).n_c /
                       single_mode_spectrum(3, m, m, CavityConfig::with_mode_count(1e-6, 20)).n_c;
  CHECK(ratio == doctest::Approx(8.0).epsilon(1e-12));

  CHECK_THROWS_AS(single_mode_spectrum(21, m, m, cav), Error);
}

TEST_CASE("factor evaluation is deterministic") {
  const MultimodeFactors a = multimode_factors(14640, 0.0, SumMode::beta_zero);
  const MultimodeFactors b = multimode_factors(14640, 0.0, SumMode::beta_zero);
  CHECK(a.sigma1 == b.sigma1);
  CHECK(a.sigma2 == b.sigma2);
}
