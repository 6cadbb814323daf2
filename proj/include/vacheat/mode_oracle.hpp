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

// Quadrature checks of the integral relations between cavity mode functions
// phi_k(x; q1, q2) and their derivatives with respect to the mirror
// positions. The quadrature never uses antiderivatives, so it is an
// independent oracle for the closed forms and for coupling_coefficient.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vacheat/quadrature.hpp"

namespace vacheat {

struct ModeFunctionContext {
  double q1 = 1.0;  // right mirror
  double q2 = 0.0;  // left mirror
  int j_max = 8;

  double length() const { return q1 - q2; }
  void validate() const;
};

double eval_mode_function(const ModeFunctionContext& ctx, int k, double x);

// d phi_k / d q_n, analytic.
double mode_function_dq(const ModeFunctionContext& ctx, int k, int n, double x);

// d^2 phi_k / (d q_a d q_b), analytic; a, b in {1, 2}.
double mode_function_d2q(const ModeFunctionContext& ctx, int k, int a, int b, double x);

// Central finite-difference versions for cross-checking the analytic forms.
double mode_function_dq_fd(const ModeFunctionContext& ctx, int k, int n, double x, double h);
double mode_function_d2q_fd(const ModeFunctionContext& ctx, int k, int a, int b, double x,
                            double h);

enum class Identity {
  orthonormality,            // int phi_j phi_k = delta_jk
  first_derivative_overlap,  // int phi_j d_n phi_k = g_kj^(n) / L
  derivative_product,        // int d_n phi_j d_n phi_k
  cross_derivative_product,  // int d_n phi_j d_n' phi_k, n' != n
  second_derivative,         // int phi_j d_n^2 phi_k
  mixed_derivative,          // int phi_j d_1 d_2 phi_k
  odd_sum_cancellation,      // g_kj^(2) + sum_s g_ks^(2) g_js^(1) = 0, j + k odd
  even_sum,                  // same sum for j + k even, against quadrature
};

const char* to_string(Identity id) noexcept;
std::vector<Identity> all_identities();

// Truncated-series behaviour of an identity whose right side is an infinite
// sum over an intermediate mode index.
struct ConvergenceReport {
  std::vector<int> truncations;
  std::vector<double> partial_sums;
  std::vector<double> residuals;  // |partial - target|
  double target = 0.0;
  double order = 0.0;             // from the last two residuals
  double extrapolated = 0.0;      // Richardson estimate of the limit
  bool monotone = false;          // residuals strictly decreasing
};

struct IdentityReport {
  Identity id = Identity::orthonormality;
  int j = 0;
  int k = 0;
  int n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  int nodes = 0;  // integrand evaluations
  std::optional<ConvergenceReport> series;
};

struct OracleOptions {
  QuadratureOptions quadrature{};
  int series_start = 250;  // first truncation; doubled per level
  int series_levels = 5;
};

IdentityReport verify_identity(const ModeFunctionContext& ctx, Identity id, int j, int k, int n,
                               const OracleOptions& options = {});

struct LemmaReport {
  std::string name;
  double sum = 0.0;
  double max_term = 0.0;
  double relative_residual = 0.0;  // |sum| / max_term
};

// Contractions of products of the antisymmetric coupling matrices with
// seeded random coefficient vectors; each vanishes identically.
std::vector<LemmaReport> verify_antisymmetry_lemmas(int j_max, std::uint64_t seed);

}  // namespace vacheat
