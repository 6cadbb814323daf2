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

#include "vacheat/mode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "vacheat/compensated.hpp"
#include "vacheat/errors.hpp"
#include "vacheat/multimode.hpp"

namespace vacheat {
namespace {

using std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// phi_k without the domain check, so finite differences may step q past x.
double phi_raw(double q1, double q2, int k, double x) {
  const double L = q1 - q2;
  return std::sqrt(2.0 / L) * std::sin(k * pi * (x - q2) / L);
}

void require_mirror(int n) {
  if (n != 1 && n != 2) throw Error(ErrorCode::InvalidArgument, "mirror index must be 1 or 2");
}

double g(int k, int j, int n) { return coupling_coefficient(k, j, n); }

int parity_sign(int m) { return (m % 2 == 0) ? 1 : -1; }

// Closed forms of the overlap integrals, all scaled by 1/L^2.
double derivative_product_closed(int j, int k, int n, double L) {
  const double jd = j, kd = k, L2 = L * L;
  if (j == k) return 0.25 / L2 + pi * pi * kd * kd / (3.0 * L2);
  const double c = (n == 1) ? parity_sign(j + k) : 1.0;
  const double d = jd * jd - kd * kd;
  return c * 4.0 * jd * kd * (jd * jd + kd * kd) / (L2 * d * d);
}

// int d_1 phi_j d_2 phi_k
double cross_product_closed(int j, int k, double L) {
  const double jd = j, kd = k, L2 = L * L;
  if (j == k) return -0.25 / L2 + jd * jd * pi * pi / (6.0 * L2);
  const double d = jd * jd - kd * kd;
  return 2.0 * jd * kd / (L2 * d) -
         jd * kd * (3.0 * jd * jd + kd * kd) / (L2 * d * d) * (parity_sign(j + k) + 1.0);
}

double second_derivative_closed(int j, int k, int n, double L) {
  const double jd = j, kd = k, L2 = L * L;
  if (j == k) return -0.25 / L2 - kd * kd * pi * pi / (3.0 * L2);
  const double c = (n == 1) ? parity_sign(j + k) : 1.0;
  const double d = jd * jd - kd * kd;
  return -c * 4.0 * jd * kd * (jd * jd + kd * kd) / (L2 * d * d) - c * 2.0 * jd * kd / (L2 * d);
}

double mixed_derivative_closed(int j, int k, double L) {
  const double jd = j, kd = k, L2 = L * L;
  if (j == k) return 0.25 / L2 - jd * jd * pi * pi / (6.0 * L2);
  const double d = jd * jd - kd * kd;
  return jd * kd * (3.0 * jd * jd + kd * kd) / (L2 * d * d) * (parity_sign(j + k) + 1.0);
}

// Partial sums of a series in the intermediate index s, recorded at the
// doubling truncations, compared with a target value.
ConvergenceReport series_report(const std::function<double(int)>& term, double offset,
                                double target, const OracleOptions& opt) {
  ConvergenceReport rep;
  rep.target = target;
  int next = opt.series_start;
  const int last = opt.series_start << (opt.series_levels - 1);
  CompensatedSum acc;
  acc += offset;
  for (int s = 1; s <= last; ++s) {
    acc += term(s);
    if (s == next) {
      rep.truncations.push_back(s);
      rep.partial_sums.push_back(acc.value());
      rep.residuals.push_back(std::abs(acc.value() - target));
      next *= 2;
    }
  }
  const std::size_t m = rep.residuals.size();
  rep.monotone = m >= 2;
  for (std::size_t i = 1; i < m; ++i) rep.monotone = rep.monotone && rep.residuals[i] < rep.residuals[i - 1];
  if (m >= 2 && rep.residuals[m - 1] > 0.0 && rep.residuals[m - 2] > 0.0) {
    rep.order = std::log2(rep.residuals[m - 2] / rep.residuals[m - 1]);
  }
  rep.extrapolated = rep.partial_sums.empty() ? offset : rep.partial_sums.back();
  if (m >= 2 && rep.order > 0.0) {
    const double step = rep.partial_sums[m - 1] - rep.partial_sums[m - 2];
    rep.extrapolated = rep.partial_sums[m - 1] + step / (std::exp2(rep.order) - 1.0);
  }
  return rep;
}

}  // namespace

void ModeFunctionContext::validate() const {
  if (!(std::isfinite(q1) && std::isfinite(q2) && q1 > q2)) {
    throw Error(ErrorCode::InvalidArgument, "mirror positions need q1 > q2");
  }
  if (j_max < 1) throw Error(ErrorCode::InvalidArgument, "j_max must be positive");
}

double eval_mode_function(const ModeFunctionContext& ctx, int k, double x) {
  ctx.validate();
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "mode index starts at 1");
  if (!(x >= ctx.q2 && x <= ctx.q1)) {
    throw Error(ErrorCode::OutOfDomain, "x lies outside [q2, q1]");
  }
  return phi_raw(ctx.q1, ctx.q2, k, x);
}

double mode_function_dq(const ModeFunctionContext& ctx, int k, int n, double x) {
  require_mirror(n);
  const double L = ctx.length();
  const double w = k * pi / L;
  const double phi = phi_raw(ctx.q1, ctx.q2, k, x);
  const double c = std::cos(w * (x - ctx.q2));
  const double q_other = (n == 1) ? ctx.q2 : ctx.q1;
  const double sign = (n == 1) ? -1.0 : 1.0;
  return sign * phi / (2.0 * L) - sign * kSqrt2 * w * (q_other - x) / std::pow(L, 1.5) * c;
}

double mode_function_d2q(const ModeFunctionContext& ctx, int k, int a, int b, double x) {
  require_mirror(a);
  require_mirror(b);
  const double L = ctx.length();
  const double w = k * pi / L;
  const double phi = phi_raw(ctx.q1, ctx.q2, k, x);
  const double c = std::cos(w * (x - ctx.q2));
  const double L2 = L * L;
  const double L52 = std::pow(L, 2.5);
  if (a == b) {
    const double r = ((a == 1) ? ctx.q2 : ctx.q1) - x;
    return 0.75 * phi / L2 - 3.0 * kSqrt2 * w * r / L52 * c - w * w * r * r / L2 * phi;
  }
  return phi / L2 * (w * w * (x - ctx.q1) * (x - ctx.q2) - 0.75) +
         3.0 * w * (ctx.q1 + ctx.q2 - 2.0 * x) / (kSqrt2 * L52) * c;
}

double mode_function_dq_fd(const ModeFunctionContext& ctx, int k, int n, double x, double h) {
  require_mirror(n);
  const double d1 = (n == 1) ? h : 0.0;
  const double d2 = (n == 2) ? h : 0.0;
  return (phi_raw(ctx.q1 + d1, ctx.q2 + d2, k, x) - phi_raw(ctx.q1 - d1, ctx.q2 - d2, k, x)) /
         (2.0 * h);
}

double mode_function_d2q_fd(const ModeFunctionContext& ctx, int k, int a, int b, double x,
                            double h) {
  require_mirror(a);
  require_mirror(b);
  const auto f = [&](double s1, double s2) { return phi_raw(ctx.q1 + s1, ctx.q2 + s2, k, x); };
  if (a == b) {
    const double e1 = (a == 1) ? h : 0.0;
    const double e2 = (a == 2) ? h : 0.0;
    return (f(e1, e2) - 2.0 * f(0.0, 0.0) + f(-e1, -e2)) / (h * h);
  }
  return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
}

const char* to_string(Identity id) noexcept {
  switch (id) {
    case Identity::orthonormality: return "orthonormality";
    case Identity::first_derivative_overlap: return "first_derivative_overlap";
    case Identity::derivative_product: return "derivative_product";
    case Identity::cross_derivative_product: return "cross_derivative_product";
    case Identity::second_derivative: return "second_derivative";
    case Identity::mixed_derivative: return "mixed_derivative";
    case Identity::odd_sum_cancellation: return "odd_sum_cancellation";
    case Identity::even_sum: return "even_sum";
  }
  return "unknown";
}

std::vector<Identity> all_identities() {
  return {Identity::orthonormality,     Identity::first_derivative_overlap,
          Identity::derivative_product, Identity::cross_derivative_product,
          Identity::second_derivative,  Identity::mixed_derivative,
          Identity::odd_sum_cancellation, Identity::even_sum};
}

IdentityReport verify_identity(const ModeFunctionContext& ctx, Identity id, int j, int k, int n,
                               const OracleOptions& options) {
  ctx.validate();
  if (j < 1 || k < 1 || j > ctx.j_max || k > ctx.j_max) {
    throw Error(ErrorCode::InvalidArgument, "mode indices must lie in [1, j_max]");
  }
  if (id != Identity::orthonormality) require_mirror(n);
  if (id == Identity::odd_sum_cancellation && (j + k) % 2 == 0) {
    throw Error(ErrorCode::InvalidArgument, "odd-sum cancellation needs j + k odd");
  }
  if (id == Identity::even_sum && (j + k) % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "even-sum check needs j + k even");
  }

  const double L = ctx.length();
  const double L2 = L * L;
  const int other = (n == 1) ? 2 : 1;
  const auto phi = [&](int m, double x) { return phi_raw(ctx.q1, ctx.q2, m, x); };
  const auto dphi = [&](int m, int mirror, double x) { return mode_function_dq(ctx, m, mirror, x); };

  std::function<double(double)> integrand;
  switch (id) {
    case Identity::orthonormality:
      integrand = [&](double x) { return phi(j, x) * phi(k, x); };
      break;
    case Identity::first_derivative_overlap:
      integrand = [&](double x) { return phi(j, x) * dphi(k, n, x); };
      break;
    case Identity::derivative_product:
      integrand = [&](double x) { return dphi(j, n, x) * dphi(k, n, x); };
      break;
    case Identity::cross_derivative_product:
      integrand = [&](double x) { return dphi(j, n, x) * dphi(k, other, x); };
      break;
    case Identity::second_derivative:
      integrand = [&](double x) { return phi(j, x) * mode_function_d2q(ctx, k, n, n, x); };
      break;
    case Identity::mixed_derivative:
    case Identity::even_sum:
      integrand = [&](double x) { return phi(j, x) * mode_function_d2q(ctx, k, 1, 2, x); };
      break;
    case Identity::odd_sum_cancellation:
      break;
  }

  IdentityReport rep;
  rep.id = id;
  rep.j = j;
  rep.k = k;
  rep.n = n;

  QuadratureResult quad;
  if (integrand) {
    // Panel edges at the zeros of the faster of the two mode functions.
    const int panels = 2 * std::max({j, k, 2});
    const auto edges = uniform_breakpoints(ctx.q2, ctx.q1, panels);
    quad = integrate(integrand, edges, options.quadrature);
    rep.nodes = quad.evaluations;
  }

  // Series over the intermediate mode index s.
  const auto cross_series = [&](int s) { return g(k, s, 2) * g(j, s, 1); };
  double scale = 0.0;
  switch (id) {
    case Identity::orthonormality:
      rep.lhs = quad.value;
      rep.rhs = (j == k) ? 1.0 : 0.0;
      scale = quad.l1_norm;
      break;
    case Identity::first_derivative_overlap:
      rep.lhs = quad.value;
      rep.rhs = g(k, j, n) / L;
      scale = quad.l1_norm;
      break;
    case Identity::derivative_product:
      rep.lhs = quad.value;
      rep.rhs = derivative_product_closed(j, k, n, L);
      rep.series = series_report([&](int s) { return g(j, s, n) * g(k, s, n) / L2; }, 0.0,
                                 quad.value, options);
      scale = quad.l1_norm;
      break;
    case Identity::cross_derivative_product:
      rep.lhs = quad.value;
      rep.rhs = (n == 1) ? cross_product_closed(j, k, L) : cross_product_closed(k, j, L);
      rep.series = series_report([&](int s) { return g(j, s, n) * g(k, s, other) / L2; }, 0.0,
                                 quad.value, options);
      scale = quad.l1_norm;
      break;
    case Identity::second_derivative: {
      rep.lhs = quad.value;
      rep.rhs = second_derivative_closed(j, k, n, L);
      const double sign = (n == 1) ? -1.0 : 1.0;
      rep.series = series_report([&](int s) { return -g(j, s, n) * g(k, s, n) / L2; },
                                 sign * g(k, j, n) / L2, quad.value, options);
      scale = quad.l1_norm;
      break;
    }
    case Identity::mixed_derivative:
      rep.lhs = quad.value;
      rep.rhs = mixed_derivative_closed(j, k, L);
      rep.series = series_report([&](int s) { return -cross_series(s) / L2; }, -g(k, j, 2) / L2,
                                 quad.value, options);
      scale = quad.l1_norm;
      break;
    case Identity::odd_sum_cancellation:
      rep.series = series_report(cross_series, g(k, j, 2), 0.0, options);
      rep.lhs = rep.series->partial_sums.back();
      rep.rhs = 0.0;
      scale = std::abs(g(k, j, 2));
      break;
    case Identity::even_sum:
      rep.rhs = -L2 * quad.value;
      rep.series = series_report(cross_series, g(k, j, 2), rep.rhs, options);
      rep.lhs = rep.series->partial_sums.back();
      scale = std::abs(rep.rhs);
      break;
  }

  rep.abs_error = std::abs(rep.lhs - rep.rhs);
  const double denom = (rep.rhs != 0.0) ? std::abs(rep.rhs) : scale;
  rep.rel_error = (denom > 0.0) ? rep.abs_error / denom : rep.abs_error;
  return rep;
}

std::vector<LemmaReport> verify_antisymmetry_lemmas(int j_max, std::uint64_t seed) {
  if (j_max < 1) throw Error(ErrorCode::InvalidArgument, "j_max must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::vector<double> q(j_max + 1), qdot(j_max + 1);
  for (int i = 1; i <= j_max; ++i) q[i] = uniform(rng);
  for (int i = 1; i <= j_max; ++i) qdot[i] = uniform(rng);

  std::vector<LemmaReport> out;
  const auto finish = [&out](std::string name, const CompensatedSum& acc, double max_term) {
    LemmaReport r;
    r.name = std::move(name);
    r.sum = acc.value();
    r.max_term = max_term;
    r.relative_residual = (max_term > 0.0) ? std::abs(r.sum) / max_term : std::abs(r.sum);
    out.push_back(r);
  };

  {
    CompensatedSum acc;
    double biggest = 0.0;
    for (int j = 1; j <= j_max; ++j) {
      for (int k = 1; k <= j_max; ++k) {
        const double t = qdot[j] * qdot[k] * g(j, k, 1);
        acc += t;
        biggest = std::max(biggest, std::abs(t));
      }
    }
    finish("velocity_contraction", acc, biggest);
  }

  // Quadruple sums sum_{j,l,k,s} Q_j Q_l A_.. B_.. C_..; the index pattern
  // makes each one a quadratic form with an antisymmetric kernel.
  const auto quadruple = [&](const std::string& name,
                             const std::function<double(int, int, int, int)>& kernel) {
    CompensatedSum acc;
    double biggest = 0.0;
    for (int j = 1; j <= j_max; ++j)
      for (int l = 1; l <= j_max; ++l)
        for (int k = 1; k <= j_max; ++k)
          for (int s = 1; s <= j_max; ++s) {
            const double t = q[j] * q[l] * kernel(j, l, k, s);
            acc += t;
            biggest = std::max(biggest, std::abs(t));
          }
    finish(name, acc, biggest);
  };
  quadruple("triple_first_mirror",
            [](int j, int l, int k, int s) { return g(l, s, 1) * g(k, s, 1) * g(j, k, 1); });
  quadruple("second_second_first",
            [](int j, int l, int k, int s) { return g(j, k, 2) * g(l, s, 2) * g(k, s, 1); });
  quadruple("first_second_first",
            [](int j, int l, int k, int s) { return g(l, s, 1) * g(j, k, 1) * g(k, s, 2); });
  return out;
}

}  // namespace vacheat
