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

// Two-mode open-system engine. The master equation is written in standard
// Lindblad form,
//
//   d rho/dt = -i[H, rho]
//              + sum_n g_n (nbar_n + 1) (b rho b^+ - {b^+ b, rho}/2)
//              + sum_n g_n nbar_n       (b^+ rho b - {b b^+, rho}/2),
//
// which is the same generator as D(o) rho = ({o^+ o, rho}/2 - o rho o^+)
// entered with an overall minus sign. Rates, shifts and the coupling are in
// one common rate unit chosen by the caller; H is in units of hbar.

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "vacheat/moments.hpp"
#include "vacheat/params.hpp"

namespace vacheat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CSparse = Eigen::SparseMatrix<cplx>;

inline constexpr int kDefaultDimensionCap = 4096;
inline constexpr double kDefaultLeakThreshold = 1e-6;

struct FockTruncation {
  int dim1 = 2;
  int dim2 = 2;

  int total() const { return dim1 * dim2; }
  void validate(int cap = kDefaultDimensionCap) const;
};

// Row/column index of |j, k> is j * dim2 + k.
class DensityMatrix {
 public:
  DensityMatrix(FockTruncation trunc, CMatrix elements);

  static DensityMatrix fock(FockTruncation trunc, int n1, int n2);
  // Product of two geometric distributions, renormalized inside the truncation.
  static DensityMatrix thermal_product(FockTruncation trunc, double nbar1, double nbar2);
  static DensityMatrix coherent_product(FockTruncation trunc, cplx alpha1, cplx alpha2);

  const FockTruncation& truncation() const { return trunc_; }
  const CMatrix& matrix() const { return rho_; }
  int index(int j, int k) const { return j * trunc_.dim2 + k; }
  cplx element(int j, int k, int n, int m) const { return rho_(index(j, k), index(n, m)); }

  double trace() const;
  double hermiticity_error() const;
  // Uses the excitation-number block structure when the matrix has it.
  double min_eigenvalue() const;
  double tail_population(int mirror) const;
  cplx expect(const CSparse& op) const;  // Tr(rho op)

 private:
  FockTruncation trunc_;
  CMatrix rho_;
};

struct SystemOperators {
  FockTruncation trunc;
  ExchangeRates rates;
  double omega_m = 0.0;  // bare frequency in the same rate unit
  CSparse b1, b2;
  CSparse H_eff;  // rotating frame: delta1 N1 + delta2 N2 + xi (b1^+ b2 + b2^+ b1)
  CSparse H_S;    // lab frame: (omega_m + delta_n) N_n + the same exchange term

  static SystemOperators build(const ExchangeRates& rates, FockTruncation trunc,
                               double omega_m = 0.0, int cap = kDefaultDimensionCap);
};

class Liouvillian {
 public:
  explicit Liouvillian(SystemOperators ops);

  const SystemOperators& operators() const { return ops_; }
  CMatrix apply(const CMatrix& rho) const;
  // Bath-n part of the generator alone.
  CMatrix dissipator(int mirror, const CMatrix& rho) const;
  // Upper bound on the induced norm of the generator.
  double norm_bound() const { return norm_bound_; }

 private:
  SystemOperators ops_;
  CSparse K_;  // -iH - (1/2) sum of jump-operator products
  double norm_bound_ = 0.0;
};

Liouvillian build_liouvillian(const ExchangeRates& rates, FockTruncation trunc,
                              double omega_m = 0.0, int cap = kDefaultDimensionCap);

struct EvolveOptions {
  double dt_max = 1e-2;
  int samples = 101;  // uniform in [0, t_final], endpoints included
  double trace_drift = 1e-12;
  double leak_threshold = kDefaultLeakThreshold;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  int steps = 0;
};

Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& L, double t_final,
                  const EvolveOptions& options = {});

struct SteadyStateOptions {
  std::optional<FockTruncation> truncation;  // chosen automatically when empty
  int cap = kDefaultDimensionCap;
  double residual_tol = 1e-10;
  double leak_threshold = kDefaultLeakThreshold;
  double tail_tolerance = 1e-8;  // auto truncation: bound on the n^2-weighted tail
  int dense_limit = 600;         // sector size handled by a direct LU solve
  int max_iterations = 3000;
  int restart = 160;  // GMRES fallback
};

struct SteadyStateResult {
  explicit SteadyStateResult(DensityMatrix r) : rho(std::move(r)) {}

  DensityMatrix rho;
  double residual = 0.0;  // |L rho|_F / (norm bound * |rho|_F)
  double min_eigenvalue = 0.0;
  double leak = 0.0;      // max over mirrors of p(dim - 1)
  int iterations = 0;
  std::string method;     // "dense", "bicgstab" or "bicgstab+gmres"
};

// Solves L rho = 0, Tr rho = 1 inside the zero-coherence sector, which holds
// the unique steady state for this excitation-conserving generator.
SteadyStateResult steady_state(const Liouvillian& L, const SteadyStateOptions& options = {});

// Picks the truncation from the occupations when options.truncation is empty.
SteadyStateResult solve_steady_state(const ExchangeRates& rates,
                                     const SteadyStateOptions& options = {},
                                     double omega_m = 0.0);

FockTruncation auto_truncation(double nu1, double nu2, double tail_tolerance, int cap);

std::vector<double> phonon_distribution(const DensityMatrix& rho, int mirror);
double g2_zero(const DensityMatrix& rho, int mirror);

SecondMoments second_moments(const DensityMatrix& rho);
FourthMoments fourth_moments(const DensityMatrix& rho);

// J_n = Tr(D_n(rho) H_S), scaled by hbar * unit^2 where unit is the rate unit
// in 1/s; the defaults return the flux in units of hbar * rate^2.
HeatFlux heat_flux_numeric(const DensityMatrix& rho, const SystemOperators& ops,
                           double hbar = 1.0, double rate_unit = 1.0);

}  // namespace vacheat
