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
#include <numbers>

#include "oracles.hpp"
#include "vacheat/errors.hpp"
#include "vacheat/mode_oracle.hpp"
#include "vacheat/multimode.hpp"

using namespace vacheat;

namespace {

const ModeFunctionContext kUnit{1.0, 0.0, 8};
const ModeFunctionContext kShifted{2.5, 0.5, 8};
const ModeFunctionContext kNegative{0.3, -1.4, 8};

bool parity_ok(Identity id, int j, int k) {
  if (id == Identity::odd_sum_cancellation) return (j + k) % 2 == 1;
  if (id == Identity::even_sum) return (j + k) % 2 == 0;
  return true;
}

bool has_closed_form(Identity id) {
  return id != Identity::odd_sum_cancellation && id != Identity::even_sum;
}

// Composite Simpson on a fine uniform grid: a second quadrature route that
// shares nothing with the adaptive integrator.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("mode function values") {
  for (const auto& ctx : {kUnit, kShifted, kNegative}) {
    for (int k = 1; k <= 5; ++k) {
      CHECK(std::abs(eval_mode_function(ctx, k, ctx.q2)) < 1e-15);
      CHECK(std::abs(eval_mode_function(ctx, k, ctx.q1)) < 1e-14);
    }
    CHECK(eval_mode_function(ctx, 1, 0.5 * (ctx.q1 + ctx.q2)) ==
          doctest::Approx(std::sqrt(2.0 / ctx.length())).epsilon(1e-15));
  }
  CHECK(code_of([] { eval_mode_function(kUnit, 1, 1.5); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([] { eval_mode_function(kUnit, 0, 0.5); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ModeFunctionContext{0.0, 1.0, 8}.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("analytic mirror derivatives match finite differences") {
  for (const auto& ctx : {kUnit, kNegative}) {
    for (int k = 1; k <= 6; ++k) {
      for (double t : {0.1, 0.37, 0.5, 0.81}) {
        const double x = ctx.q2 + t * ctx.length();
        for (int n = 1; n <= 2; ++n) {
          const double a = mode_function_dq(ctx, k, n, x);
          const double f = mode_function_dq_fd(ctx, k, n, x, 1e-5);
          CHECK(std::abs(a - f) < 1e-7 * (1.0 + std::abs(a)));
          for (int b = 1; b <= 2; ++b) {
            const double a2 = mode_function_d2q(ctx, k, n, b, x);
            const double f2 = mode_function_d2q_fd(ctx, k, n, b, x, 1e-4);
            CHECK(std::abs(a2 - f2) < 1e-5 * (1.0 + std::abs(a2)));
          }
        }
      }
    }
  }
}

TEST_CASE("orthonormality and first-derivative overlap examples") {
  const IdentityReport a = verify_identity(kUnit, Identity::orthonormality, 3, 3, 1);
  CHECK(a.lhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(a.rhs == 1.0);
  CHECK(a.rel_error < 1e-10);
  CHECK(a.abs_error == std::abs(a.lhs - a.rhs));
  CHECK(a.nodes > 0);

  const IdentityReport b = verify_identity(kShifted, Identity::first_derivative_overlap, 2, 1, 1);
  CHECK(b.rhs == doctest::Approx(coupling_coefficient(1, 2, 1) / kShifted.length()).epsilon(1e-15));
  CHECK(b.rel_error < 1e-10);
}

TEST_CASE("closed-form identities at three mirror configurations") {
  for (const auto& ctx : {kUnit, kShifted, kNegative}) {
    for (Identity id : all_identities()) {
      if (!has_closed_form(id)) continue;
      for (int n = 1; n <= 2; ++n) {
        for (int j = 1; j <= 8; ++j) {
          for (int k = 1; k <= 8; ++k) {
            const IdentityReport r = verify_identity(ctx, id, j, k, n);
            INFO(to_string(id), " j=", j, " k=", k, " n=", n);
            REQUIRE(r.rel_error < 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("closed forms against an independent Simpson integral") {
  const ModeFunctionContext& ctx = kNegative;
  const double a = ctx.q2, b = ctx.q1;
  for (int j = 1; j <= 4; ++j) {
    for (int k = 1; k <= 4; ++k) {
      const double h = 1e-5;
      auto dphi = [&](int m, int n, double x) { return mode_function_dq_fd(ctx, m, n, x, h); };
      const double cross = simpson([&](double x) { return dphi(j, 1, x) * dphi(k, 2, x); }, a, b, 4000);
      const IdentityReport r = verify_identity(ctx, Identity::cross_derivative_product, j, k, 1);
      CHECK(std::abs(cross - r.rhs) < 1e-6 * (1.0 + std::abs(r.rhs)));

      const double mixed = simpson(
          [&](double x) { return eval_mode_function(ctx, j, x) * mode_function_d2q_fd(ctx, k, 1, 2, x, 1e-4); },
          a, b, 4000);
      const IdentityReport m = verify_identity(ctx, Identity::mixed_derivative, j, k, 1);
      CHECK(std::abs(mixed - m.rhs) < 1e-5 * (1.0 + std::abs(m.rhs)));
    }
  }
}

TEST_CASE("identities are invariant under translation") {
  const ModeFunctionContext moved{kUnit.q1 + 3.25, kUnit.q2 + 3.25, 8};
  for (Identity id : {Identity::orthonormality, Identity::first_derivative_overlap,
                      Identity::derivative_product, Identity::second_derivative}) {
    for (int j = 1; j <= 5; ++j) {
      for (int k = 1; k <= 5; ++k) {
        const IdentityReport a = verify_identity(kUnit, id, j, k, 2);
        const IdentityReport b = verify_identity(moved, id, j, k, 2);
        CHECK(std::abs(a.lhs - b.lhs) < 1e-9 * (1.0 + std::abs(a.lhs)));
        CHECK(a.rhs == doctest::Approx(b.rhs).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("odd-sum cancellation converges with truncation") {
  OracleOptions opt;
  opt.series_start = 250;
  opt.series_levels = 4;  // up to 2000 terms
  const IdentityReport r = verify_identity(kUnit, Identity::odd_sum_cancellation, 1, 2, 1, opt);
  REQUIRE(r.series.has_value());
  const ConvergenceReport& s = *r.series;
  CHECK(s.truncations.back() == 2000);
  CHECK(std::abs(s.partial_sums.back()) < 1e-3);
  CHECK(s.monotone);
  for (std::size_t i = 1; i < s.residuals.size(); ++i) CHECK(s.residuals[i] < s.residuals[i - 1]);
  CHECK(s.order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(s.extrapolated) < 1e-2 * s.residuals.back());
}

TEST_CASE("even sums converge to the mixed-derivative integral") {
  for (const auto& ctx : {kUnit, kShifted, kNegative}) {
    for (int j = 1; j <= 8; ++j) {
      for (int k = 1; k <= 8; ++k) {
        if (!parity_ok(Identity::even_sum, j, k)) continue;
        const IdentityReport r = verify_identity(ctx, Identity::even_sum, j, k, 1);
        const ConvergenceReport& s = *r.series;
        CHECK(s.monotone);
        CHECK(std::abs(s.extrapolated - s.target) < 1e-3 * s.residuals.front());
        CHECK(r.rhs == doctest::Approx(s.target));
      }
    }
  }
}

TEST_CASE("series attached to infinite-sum identities") {
  for (Identity id : {Identity::derivative_product, Identity::cross_derivative_product,
                      Identity::second_derivative, Identity::mixed_derivative}) {
    const IdentityReport r = verify_identity(kShifted, id, 2, 3, 1);
    REQUIRE(r.series.has_value());
    CHECK(r.series->residuals.back() < r.series->residuals.front());
    CHECK(std::abs(r.series->target - r.rhs) < 1e-12 * (1.0 + std::abs(r.rhs)));
  }
}

TEST_CASE("argument validation") {
  CHECK(code_of([] { verify_identity(kUnit, Identity::odd_sum_cancellation, 1, 3, 1); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { verify_identity(kUnit, Identity::even_sum, 1, 2, 1); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { verify_identity(kUnit, Identity::orthonormality, 9, 1, 1); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { verify_identity(kUnit, Identity::derivative_product, 1, 2, 3); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("strict quadrature tolerance reports non-convergence") {
  OracleOptions opt;
  opt.quadrature.rel_tol = 1e-15;
  CHECK(code_of([&] { verify_identity(kUnit, Identity::derivative_product, 3, 5, 1, opt); }) ==
        ErrorCode::QuadratureNonConvergence);
}

TEST_CASE("antisymmetry lemmas vanish") {
  for (const auto& l : verify_antisymmetry_lemmas(12, 42)) {
    INFO(l.name);
    CHECK(l.relative_residual < 1e-10);
    CHECK(l.max_term > 0.0);
  }
  const auto small = verify_antisymmetry_lemmas(8, 7);
  CHECK(small.size() == 4);
  for (const auto& l : small) CHECK(l.relative_residual < 1e-10);
}
