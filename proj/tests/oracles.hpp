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

// Independent reference implementations used only by the tests. Each one is
// written from the defining formula with no shared code path into the
// library's fast routines.

#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "vacheat/lindblad.hpp"
#include "vacheat/params.hpp"

namespace oracle {

using cplx = std::complex<double>;

// g_kj^(n) straight from its definition.
inline double coupling(int k, int j, int n) {
  if (j == k) return 0.0;
  const double sign = (n == 1) ? (((j + k) % 2 == 0) ? 1.0 : -1.0) : -1.0;
  return 2.0 * k * j * sign / (static_cast<double>(j) * j - static_cast<double>(k) * k);
}

// Plain row-by-row double loop in long double.
inline void sigma_bruteforce(int n_cut, double beta, bool beta_zero, double& s1, double& s2) {
  long double a = 0.0L, b = 0.0L;
  for (int j = 1; j <= n_cut; ++j) {
    for (int k = 1; k <= n_cut; ++k) {
      const long double s = j + k;
      const long double den = beta_zero ? s * s : s * s - static_cast<long double>(beta) * beta;
      const long double term = static_cast<long double>(j) * k * s / den;
      a += term;
      b += ((j + k) % 2 == 0 ? 1.0L : -1.0L) * term;
    }
  }
  s1 = static_cast<double>(a);
  s2 = static_cast<double>(b);
}

// Matrix-element form of the master equation, d rho_{(j,k),(n,m)} / dt,
// assembled term by term. Truncated ladder operators: b b^+ on the top Fock
// level is zero, matching the matrix products of truncated b and b^+.
inline Eigen::MatrixXcd master_equation_elements(const Eigen::MatrixXcd& rho,
                                                 const vacheat::ExchangeRates& r, int d1,
                                                 int d2) {
  const cplx I(0.0, 1.0);
  auto at = [&](int j, int k, int n, int m) -> cplx {
    if (j < 0 || k < 0 || n < 0 || m < 0 || j >= d1 || n >= d1 || k >= d2 || m >= d2) return 0.0;
    return rho(j * d2 + k, n * d2 + m);
  };
  auto sq = [](int x) { return std::sqrt(static_cast<double>(x)); };
  auto bbdag = [](int level, int dim) { return level + 1 < dim ? double(level + 1) : 0.0; };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d1 * d2, d1 * d2);
  for (int j = 0; j < d1; ++j) {
    for (int k = 0; k < d2; ++k) {
      for (int n = 0; n < d1; ++n) {
        for (int m = 0; m < d2; ++m) {
          const cplx p = at(j, k, n, m);
          // Hamiltonian part, H = d1 N1 + d2 N2 + xi (b1^+ b2 + b2^+ b1).
          cplx h = (r.delta1 * (j - n) + r.delta2 * (k - m)) * p;
          h += r.xi * (sq(j) * sq(k + 1) * at(j - 1, k + 1, n, m) +
                       sq(j + 1) * sq(k) * at(j + 1, k - 1, n, m) -
                       sq(n + 1) * sq(m) * at(j, k, n + 1, m - 1) -
                       sq(n) * sq(m + 1) * at(j, k, n - 1, m + 1));
          cplx v = -I * h;
          // Mode 1 loss and gain.
          const double lo1 = r.gamma1 * (r.nbar1 + 1.0), up1 = r.gamma1 * r.nbar1;
          v += lo1 * (sq(j + 1) * sq(n + 1) * at(j + 1, k, n + 1, m) - 0.5 * (j + n) * p);
          v += up1 * (sq(j) * sq(n) * at(j - 1, k, n - 1, m) -
                      0.5 * (bbdag(j, d1) + bbdag(n, d1)) * p);
          // Mode 2 loss and gain.
          const double lo2 = r.gamma2 * (r.nbar2 + 1.0), up2 = r.gamma2 * r.nbar2;
          v += lo2 * (sq(k + 1) * sq(m + 1) * at(j, k + 1, n, m + 1) - 0.5 * (k + m) * p);
          v += up2 * (sq(k) * sq(m) * at(j, k - 1, n, m - 1) -
                      0.5 * (bbdag(k, d2) + bbdag(m, d2)) * p);
          out(j * d2 + k, n * d2 + m) = v;
        }
      }
    }
  }
  return out;
}

struct SecondOrder {
  double n1, n2;
  cplx c12, c21;
};

// Heisenberg equations for (n1, n2, <b1^+ b2>, <b2^+ b1>) derived by hand and
// solved as a dense 4x4 system.
inline SecondOrder second_moments_linear(const vacheat::ExchangeRates& r) {
  const cplx I(0.0, 1.0);
  const double G = r.gamma1 + r.gamma2;
  const double d = r.delta1 - r.delta2;
  Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
  Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
  // x = (n1, n2, c12, c21)
  A(0, 0) = -r.gamma1; A(0, 2) = -I * r.xi; A(0, 3) = I * r.xi; b(0) = r.gamma1 * r.nbar1;
  A(1, 1) = -r.gamma2; A(1, 2) = I * r.xi; A(1, 3) = -I * r.xi; b(1) = r.gamma2 * r.nbar2;
  A(2, 2) = I * d - 0.5 * G; A(2, 0) = -I * r.xi; A(2, 1) = I * r.xi;
  A(3, 3) = -I * d - 0.5 * G; A(3, 0) = I * r.xi; A(3, 1) = -I * r.xi;
  const Eigen::Vector4cd x = A.fullPivLu().solve(-b);
  return {x(0).real(), x(1).real(), x(2), x(3)};
}

inline double geometric(double mean, int n) {
  return std::pow(mean, n) / std::pow(mean + 1.0, n + 1);
}

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace oracle
