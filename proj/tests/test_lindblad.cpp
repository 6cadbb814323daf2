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
#include <functional>
#include <random>

#include "oracles.hpp"
#include "vacheat/errors.hpp"
#include "vacheat/lindblad.hpp"
#include "vacheat/moments.hpp"

using namespace vacheat;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

CMatrix random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(u(rng), u(rng));
  CMatrix h = a + a.adjoint();
  return h / h.trace().real();
}

ExchangeRates rates(double xi, double nbar1, double nbar2, double g1 = 1.0, double g2 = 1.0,
                    double d1 = 0.0, double d2 = 0.0) {
  return ExchangeRates{d1, d2, xi, g1, g2, nbar1, nbar2};
}

double total_excitation(const DensityMatrix& rho) {
  const SecondMoments s = second_moments(rho);
  return s.n1 + s.n2;
}

}  // namespace

TEST_CASE("truncation limits") {
  CHECK(code_of([] { FockTruncation{1, 4}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { FockTruncation{65, 64}.validate(); }) == ErrorCode::DimensionCap);
  CHECK_NOTHROW(FockTruncation{64, 64}.validate());
  CHECK(code_of([] { build_liouvillian(rates(1, 1, 1), {100, 100}); }) == ErrorCode::DimensionCap);
}

TEST_CASE("system operators") {
  const SystemOperators ops = SystemOperators::build(rates(0.7, 1, 0, 1, 1, -0.3, 0.2), {4, 3}, 5.0);
  CHECK((CMatrix(ops.H_eff) - CMatrix(ops.H_eff).adjoint()).norm() < 1e-15);
  CHECK((CMatrix(ops.H_S) - CMatrix(ops.H_S).adjoint()).norm() < 1e-15);
  const DensityMatrix f = DensityMatrix::fock({4, 3}, 2, 1);
  // b1 |2,1> = sqrt 2 |1,1>
  const CMatrix v = CMatrix(ops.b1) * f.matrix().col(f.index(2, 1));
  CHECK(std::abs(v(f.index(1, 1)) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(v.norm() - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(f.expect(ops.H_S).real() - (2.0 * (5.0 - 0.3) + 1.0 * (5.0 + 0.2))) < 1e-13);
}

TEST_CASE("Liouvillian matches the element-wise master equation") {
  const ExchangeRates r = rates(0.8, 1.3, 0.4, 0.9, 1.7, 0.25, -0.6);
  for (auto [d1, d2] : {std::pair{3, 4}, std::pair{5, 2}, std::pair{4, 4}}) {
    const Liouvillian L = build_liouvillian(r, {d1, d2});
    const CMatrix rho = random_hermitian(d1 * d2, 11 + d1);
    const CMatrix want = oracle::master_equation_elements(rho, r, d1, d2);
    CHECK((L.apply(rho) - want).norm() < 1e-12 * want.norm());
    CHECK(std::abs(L.apply(rho).trace()) < 1e-12);
  }
}

TEST_CASE("single-mode decay rate") {
  const Liouvillian L = build_liouvillian(rates(0.0, 0.0, 0.0, 0.7, 0.2), {3, 3});
  const DensityMatrix rho = DensityMatrix::fock({3, 3}, 1, 0);
  const SecondMoments s = second_moments(DensityMatrix({3, 3}, L.apply(rho.matrix())));
  CHECK(s.n1 == doctest::Approx(-0.7).epsilon(1e-14));
  CHECK(std::abs(s.n2) < 1e-15);
}

TEST_CASE("thermal product is a fixed point without coupling") {
  const FockTruncation t{9, 7};
  const Liouvillian L = build_liouvillian(rates(0.0, 0.8, 2.1, 1.0, 0.4, 0.3, -0.1), t);
  const DensityMatrix rho = DensityMatrix::thermal_product(t, 0.8, 2.1);
  CHECK(L.apply(rho.matrix()).norm() < 1e-15);
}

TEST_CASE("evolution with a zero generator is the identity") {
  const FockTruncation t{10, 10};
  const Liouvillian L = build_liouvillian(rates(0.0, 0.0, 0.0, 0.0, 0.0), t);
  const DensityMatrix rho0 = DensityMatrix::coherent_product(t, cplx(0.4, 0.1), cplx(0.0, 0.3));
  const Trajectory tr = evolve(rho0, L, 3.0);
  for (const auto& s : tr.states) CHECK((s.matrix() - rho0.matrix()).norm() == 0.0);
}

TEST_CASE("beam splitter conserves total excitation") {
  const FockTruncation t{6, 6};
  const Liouvillian L = build_liouvillian(rates(1.3, 0.0, 0.0, 0.0, 0.0, 0.4, -0.2), t);
  const DensityMatrix rho0 = DensityMatrix::fock(t, 3, 1);
  EvolveOptions opt;
  opt.samples = 21;
  const Trajectory tr = evolve(rho0, L, 5.0, opt);
  double moved = 0.0;
  for (const auto& s : tr.states) {
    CHECK(std::abs(total_excitation(s) - 4.0) < 4e-10);
    moved = std::max(moved, std::abs(second_moments(s).n1 - 3.0));
  }
  CHECK(moved > 0.5);
}

TEST_CASE("relaxation towards the bath occupation") {
  const FockTruncation t{45, 2};
  const Liouvillian L = build_liouvillian(rates(0.0, 2.0, 0.0, 0.6, 1.0), t);
  EvolveOptions opt;
  opt.samples = 11;
  const Trajectory tr = evolve(DensityMatrix::fock(t, 0, 0), L, 5.0, opt);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const DensityMatrix& rho = tr.states[i];
    const double want = 2.0 * (1.0 - std::exp(-0.6 * tr.times[i]));
    CHECK(std::abs(second_moments(rho).n1 - want) < 1e-6);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
    CHECK(rho.hermiticity_error() < 1e-12);
    CHECK(rho.min_eigenvalue() > -1e-9);
  }
}

TEST_CASE("trajectory preserves trace, Hermiticity and positivity") {
  const FockTruncation t{14, 14};
  const Liouvillian L = build_liouvillian(rates(1.1, 0.4, 0.1, 1.0, 0.5, 0.2, 0.0), t);
  const DensityMatrix rho0 = DensityMatrix::coherent_product(t, cplx(0.8, 0.3), cplx(-0.2, 0.5));
  EvolveOptions opt;
  opt.samples = 26;
  const Trajectory tr = evolve(rho0, L, 6.0, opt);
  CHECK(tr.states.size() == 26);
  CHECK(tr.times.back() == doctest::Approx(6.0));
  for (const auto& s : tr.states) {
    CHECK(std::abs(s.trace() - 1.0) < 1e-9);
    CHECK(s.hermiticity_error() < 1e-12);
    CHECK(s.min_eigenvalue() > -1e-9);
  }
}

TEST_CASE("leak detection during evolution") {
  const FockTruncation t{5, 2};
  const Liouvillian L = build_liouvillian(rates(0.0, 4.0, 0.0), t);
  CHECK(code_of([&] { evolve(DensityMatrix::fock(t, 0, 0), L, 10.0); }) == ErrorCode::TruncationLeak);
}

TEST_CASE("invalid initial state is rejected") {
  const FockTruncation t{3, 3};
  const Liouvillian L = build_liouvillian(rates(0.1, 0.1, 0.1), t);
  CMatrix bad = DensityMatrix::fock(t, 0, 0).matrix() * 2.0;
  CHECK_THROWS_AS(evolve(DensityMatrix(t, bad), L, 1.0), Error);
}

TEST_CASE("steady state without coupling is a thermal product") {
  const ExchangeRates r = rates(0.0, 1.5, 0.3, 0.8, 1.2);
  const SteadyStateResult res = solve_steady_state(r);
  const auto p1 = phonon_distribution(res.rho, 1);
  const auto p2 = phonon_distribution(res.rho, 2);
  for (std::size_t n = 0; n < 10; ++n) {
    CHECK(std::abs(p1[n] - oracle::geometric(1.5, int(n))) < 1e-10);
    CHECK(std::abs(p2[n] - oracle::geometric(0.3, int(n))) < 1e-10);
  }
  CHECK(second_moments(res.rho).n1 == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(res.residual < 1e-10);
  CHECK(res.leak < 1e-6);
}

TEST_CASE("equal baths leave both marginals thermal") {
  const SteadyStateResult res = solve_steady_state(rates(2.5, 1.2, 1.2, 1.0, 0.3, 0.4, -0.1));
  const SecondMoments s = second_moments(res.rho);
  CHECK(s.n1 == doctest::Approx(1.2).epsilon(1e-8));
  CHECK(s.n2 == doctest::Approx(1.2).epsilon(1e-8));
  CHECK(std::abs(s.c12) < 1e-9);
}

TEST_CASE("steady moments match the hand-derived linear system") {
  for (double xi : {0.2, 1.0, 3.0}) {
    const ExchangeRates r = rates(xi, 3.0, 1.0);
    SteadyStateOptions opt;
    opt.tail_tolerance = 1e-11;  // c12 is compared below the default tail bound
    const SteadyStateResult res = solve_steady_state(r, opt);
    const oracle::SecondOrder o = oracle::second_moments_linear(r);
    const SecondMoments s = second_moments(res.rho);
    CHECK(oracle::rel(s.n1, o.n1) < 1e-8);
    CHECK(oracle::rel(s.n2, o.n2) < 1e-8);
    CHECK(std::abs(s.c12 - o.c12) < 1e-8 * std::abs(o.c12));
    CHECK(std::abs(s.c21 - std::conj(s.c12)) < 1e-12);
    CHECK(res.min_eigenvalue > -1e-10);
    CHECK(std::abs(res.rho.trace() - 1.0) < 1e-10);
  }
}

TEST_CASE("steady state with an unequal detuning") {
  const ExchangeRates r = rates(0.9, 1.0, 0.2, 1.0, 0.5, 0.7, -0.4);
  const SteadyStateResult res = solve_steady_state(r);
  const oracle::SecondOrder o = oracle::second_moments_linear(r);
  CHECK(oracle::rel(second_moments(res.rho).n1, o.n1) < 1e-8);
  CHECK(std::abs(second_moments(res.rho).c12 - o.c12) < 1e-8 * std::abs(o.c12));
}

TEST_CASE("non-unique steady states are reported") {
  CHECK(code_of([] { solve_steady_state(rates(1.0, 1.0, 0.0, 0.0, 0.0)); }) ==
        ErrorCode::NonUniqueSteadyState);
  CHECK(code_of([] { solve_steady_state(rates(0.0, 1.0, 0.0, 1.0, 0.0)); }) ==
        ErrorCode::NonUniqueSteadyState);
  // One damped mode still fixes everything once the modes are coupled.
  CHECK_NOTHROW(solve_steady_state(rates(0.7, 0.5, 0.0, 1.0, 0.0)));
}

TEST_CASE("explicit truncation that is too small leaks") {
  SteadyStateOptions opt;
  opt.truncation = FockTruncation{6, 6};
  CHECK(code_of([&] { solve_steady_state(rates(1.0, 3.0, 1.0), opt); }) == ErrorCode::TruncationLeak);
}

TEST_CASE("automatic truncation sizes") {
  const FockTruncation a = auto_truncation(3.0, 1.0, 1e-8, 4096);
  CHECK(a.dim1 >= a.dim2);
  CHECK(a.total() <= 4096);
  const FockTruncation b = auto_truncation(6.0, 2.0, 1e-8, 4096);
  CHECK(b.dim1 > a.dim1);
  const FockTruncation c = auto_truncation(30.0, 30.0, 1e-8, 900);
  CHECK(c.total() <= 900);
}

TEST_CASE("phonon distributions") {
  const FockTruncation t{5, 4};
  const auto vac = phonon_distribution(DensityMatrix::fock(t, 0, 0), 1);
  CHECK(vac[0] == 1.0);
  CHECK(vac.size() == 5);
  const auto p2 = phonon_distribution(DensityMatrix::fock(t, 1, 3), 2);
  CHECK(p2[3] == 1.0);

  const SteadyStateResult res = solve_steady_state(rates(3.0, 3.0, 1.0));
  for (int m = 1; m <= 2; ++m) {
    const auto p = phonon_distribution(res.rho, m);
    double total = 0.0;
    for (double v : p) total += v;
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("weak coupling keeps mode 1 near its bath") {
  const SteadyStateResult res = solve_steady_state(rates(0.01, 2.0, 0.5));
  const auto p = phonon_distribution(res.rho, 1);
  double tv = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) tv += std::abs(p[n] - oracle::geometric(2.0, int(n)));
  CHECK(0.5 * tv < 1e-3);
}

TEST_CASE("second-order correlation") {
  const FockTruncation t{30, 2};
  CHECK(g2_zero(DensityMatrix::thermal_product(t, 1.0, 0.0), 1) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(g2_zero(DensityMatrix::fock(t, 1, 0), 1) == 0.0);
  CHECK(g2_zero(DensityMatrix::coherent_product(t, cplx(1.2, -0.4), 0.0), 1) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(code_of([&] { g2_zero(DensityMatrix::fock(t, 1, 0), 2); }) == ErrorCode::ZeroPopulation);
}

TEST_CASE("numeric heat flux") {
  SUBCASE("equal baths") {
    const ExchangeRates r = rates(1.0, 1.0, 1.0);
    const SteadyStateResult res = solve_steady_state(r, {}, 10.0);
    const HeatFlux h = heat_flux_numeric(res.rho, SystemOperators::build(r, res.rho.truncation(), 10.0));
    CHECK(std::abs(h.J1) < 1e-9);
    CHECK(std::abs(h.J2) < 1e-9);
  }
  SUBCASE("no coupling") {
    const ExchangeRates r = rates(0.0, 2.0, 0.5);
    const SteadyStateResult res = solve_steady_state(r, {}, 10.0);
    const HeatFlux h = heat_flux_numeric(res.rho, SystemOperators::build(r, res.rho.truncation(), 10.0));
    CHECK(std::abs(h.J1) < 1e-9);
    CHECK(std::abs(h.J2) < 1e-9);
  }
  SUBCASE("matches the closed form") {
    const ExchangeRates r = rates(3.0, 3.0, 1.0, 1.0, 1.0, -0.5, -0.5);
    const SteadyStateResult res = solve_steady_state(r, {}, 10.0);
    const HeatFlux h = heat_flux_numeric(res.rho, SystemOperators::build(r, res.rho.truncation(), 10.0));
    const HeatFlux a = heat_flux_analytic(r, 10.0, 1.0).flux;
    CHECK(oracle::rel(h.J1, a.J1) < 1e-6);
    CHECK(std::abs(h.J1 + h.J2) < 1e-10 * std::abs(h.J1));
    const HeatFlux scaled = heat_flux_numeric(res.rho, SystemOperators::build(r, res.rho.truncation(), 10.0), 2.0, 3.0);
    CHECK(oracle::rel(scaled.J1, 18.0 * h.J1) < 1e-14);
  }
}
