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

#include "vacheat/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <Eigen/Eigenvalues>

#include "steady_sector.hpp"
#include "vacheat/errors.hpp"

namespace vacheat {
namespace {

using Triplet = Eigen::Triplet<cplx>;

void require_mirror(int mirror) {
  if (mirror != 1 && mirror != 2) throw Error(ErrorCode::InvalidArgument, "mirror must be 1 or 2");
}

CSparse lowering(FockTruncation t, int mirror) {
  std::vector<Triplet> entries;
  for (int j = 0; j < t.dim1; ++j) {
    for (int k = 0; k < t.dim2; ++k) {
      const int from = j * t.dim2 + k;
      if (mirror == 1 && j > 0) entries.emplace_back((j - 1) * t.dim2 + k, from, std::sqrt(double(j)));
      if (mirror == 2 && k > 0) entries.emplace_back(j * t.dim2 + k - 1, from, std::sqrt(double(k)));
    }
  }
  CSparse b(t.total(), t.total());
  b.setFromTriplets(entries.begin(), entries.end());
  return b;
}

CSparse adj(const CSparse& m) { return CSparse(m.adjoint()); }

double row_sum_norm(const CSparse& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int c = 0; c < m.outerSize(); ++c) {
    for (CSparse::InnerIterator it(m, c); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

// D_n^+(O) for bath n.
CSparse adjoint_dissipator(const SystemOperators& ops, int mirror, const CSparse& O) {
  const CSparse& b = (mirror == 1) ? ops.b1 : ops.b2;
  const CSparse bd = adj(b);
  const double g = (mirror == 1) ? ops.rates.gamma1 : ops.rates.gamma2;
  const double nbar = (mirror == 1) ? ops.rates.nbar1 : ops.rates.nbar2;
  const CSparse bdb = bd * b;
  const CSparse bbd = b * bd;
  const CSparse decay = CSparse(bd * O * b) - 0.5 * CSparse(bdb * O + O * bdb);
  const CSparse pump = CSparse(b * O * bd) - 0.5 * CSparse(bbd * O + O * bbd);
  return g * (nbar + 1.0) * decay + g * nbar * pump;
}

void check_state(const DensityMatrix& rho) {
  if (std::abs(rho.trace() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "initial state must have unit trace");
  }
  if (rho.hermiticity_error() > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "initial state must be Hermitian");
  }
}

void check_leak(const DensityMatrix& rho, double threshold) {
  const double leak = std::max(rho.tail_population(1), rho.tail_population(2));
  if (leak > threshold) {
    throw Error(ErrorCode::TruncationLeak,
                "population in the top Fock level exceeds the leak threshold");
  }
}

double geometric_tail_dimension(double nu, double tol) {
  if (!(nu > 0.0)) return 2;
  const double q = nu / (nu + 1.0);
  const double second = 2.0 * nu * nu + nu;
  // Sum n^2 p(n) from a level far enough out that the remainder is negligible.
  int far = 2;
  while (std::pow(q, far) * double(far) * far > 1e-30 * second) far *= 2;
  double tail = 0.0;
  int d = far;
  for (int n = far; n >= 1; --n) {
    tail += double(n) * n * (1.0 - q) * std::pow(q, n);
    if (tail > tol * second) break;
    d = n;
  }
  return std::max(d, 2);
}

}  // namespace

void FockTruncation::validate(int cap) const {
  if (dim1 < 2 || dim2 < 2) throw Error(ErrorCode::InvalidArgument, "Fock dimensions must be >= 2");
  if (std::int64_t(dim1) * dim2 > cap) {
    throw Error(ErrorCode::DimensionCap, "truncation exceeds the state-count cap");
  }
}

DensityMatrix::DensityMatrix(FockTruncation trunc, CMatrix elements)
    : trunc_(trunc), rho_(std::move(elements)) {
  trunc_.validate(std::numeric_limits<int>::max());
  if (rho_.rows() != trunc_.total() || rho_.cols() != trunc_.total()) {
    throw Error(ErrorCode::InvalidArgument, "density matrix shape does not match the truncation");
  }
}

DensityMatrix DensityMatrix::fock(FockTruncation t, int n1, int n2) {
  if (n1 < 0 || n2 < 0 || n1 >= t.dim1 || n2 >= t.dim2) {
    throw Error(ErrorCode::InvalidArgument, "Fock state outside the truncation");
  }
  CMatrix m = CMatrix::Zero(t.total(), t.total());
  m(n1 * t.dim2 + n2, n1 * t.dim2 + n2) = 1.0;
  return {t, std::move(m)};
}

DensityMatrix DensityMatrix::thermal_product(FockTruncation t, double nbar1, double nbar2) {
  if (!(nbar1 >= 0.0 && nbar2 >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "occupations must be non-negative");
  }
  const double q1 = nbar1 / (nbar1 + 1.0), q2 = nbar2 / (nbar2 + 1.0);
  CMatrix m = CMatrix::Zero(t.total(), t.total());
  double norm = 0.0;
  for (int j = 0; j < t.dim1; ++j) {
    for (int k = 0; k < t.dim2; ++k) {
      const double p = std::pow(q1, j) * std::pow(q2, k);
      m(j * t.dim2 + k, j * t.dim2 + k) = p;
      norm += p;
    }
  }
  m /= norm;
  return {t, std::move(m)};
}

DensityMatrix DensityMatrix::coherent_product(FockTruncation t, cplx alpha1, cplx alpha2) {
  const auto amplitudes = [](int dim, cplx alpha) {
    Eigen::VectorXcd a(dim);
    a(0) = 1.0;
    for (int n = 1; n < dim; ++n) a(n) = a(n - 1) * alpha / std::sqrt(double(n));
    return a;
  };
  const Eigen::VectorXcd a1 = amplitudes(t.dim1, alpha1);
  const Eigen::VectorXcd a2 = amplitudes(t.dim2, alpha2);
  Eigen::VectorXcd psi(t.total());
  for (int j = 0; j < t.dim1; ++j)
    for (int k = 0; k < t.dim2; ++k) psi(j * t.dim2 + k) = a1(j) * a2(k);
  psi.normalize();
  return {t, psi * psi.adjoint()};
}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const int d2 = trunc_.dim2;
  const int n_max = trunc_.dim1 + trunc_.dim2 - 2;
  std::vector<std::vector<int>> groups(n_max + 1);
  for (int a = 0; a < trunc_.total(); ++a) groups[a / d2 + a % d2].push_back(a);
  bool block_diagonal = true;
  for (int a = 0; a < trunc_.total() && block_diagonal; ++a) {
    for (int b = 0; b < trunc_.total(); ++b) {
      if ((a / d2 + a % d2) != (b / d2 + b % d2) && rho_(a, b) != cplx(0.0)) {
        block_diagonal = false;
        break;
      }
    }
  }
  const CMatrix herm = 0.5 * (rho_ + rho_.adjoint());
  if (!block_diagonal) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& g : groups) {
    const int c = int(g.size());
    CMatrix blk(c, c);
    for (int a = 0; a < c; ++a)
      for (int b = 0; b < c; ++b) blk(a, b) = herm(g[a], g[b]);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(blk, Eigen::EigenvaluesOnly);
    lowest = std::min(lowest, es.eigenvalues().minCoeff());
  }
  return lowest;
}

double DensityMatrix::tail_population(int mirror) const {
  return phonon_distribution(*this, mirror).back();
}

cplx DensityMatrix::expect(const CSparse& op) const {
  cplx acc = 0.0;
  for (int c = 0; c < op.outerSize(); ++c) {
    for (CSparse::InnerIterator it(op, c); it; ++it) acc += it.value() * rho_(it.col(), it.row());
  }
  return acc;
}

SystemOperators SystemOperators::build(const ExchangeRates& rates, FockTruncation trunc,
                                       double omega_m, int cap) {
  rates.validate();
  trunc.validate(cap);
  if (!std::isfinite(omega_m)) throw Error(ErrorCode::InvalidArgument, "omega_m must be finite");
  SystemOperators ops;
  ops.trunc = trunc;
  ops.rates = rates;
  ops.omega_m = omega_m;
  ops.b1 = lowering(trunc, 1);
  ops.b2 = lowering(trunc, 2);
  const CSparse n1 = adj(ops.b1) * ops.b1;
  const CSparse n2 = adj(ops.b2) * ops.b2;
  const CSparse hop = CSparse(adj(ops.b1) * ops.b2) + CSparse(adj(ops.b2) * ops.b1);
  ops.H_eff = rates.delta1 * n1 + rates.delta2 * n2 + rates.xi * hop;
  ops.H_S = (omega_m + rates.delta1) * n1 + (omega_m + rates.delta2) * n2 + rates.xi * hop;
  return ops;
}

Liouvillian::Liouvillian(SystemOperators ops) : ops_(std::move(ops)) {
  const ExchangeRates& r = ops_.rates;
  const CSparse b1d = adj(ops_.b1), b2d = adj(ops_.b2);
  const CSparse damping = r.gamma1 * (r.nbar1 + 1.0) * CSparse(b1d * ops_.b1) +
                          r.gamma1 * r.nbar1 * CSparse(ops_.b1 * b1d) +
                          r.gamma2 * (r.nbar2 + 1.0) * CSparse(b2d * ops_.b2) +
                          r.gamma2 * r.nbar2 * CSparse(ops_.b2 * b2d);
  K_ = cplx(0.0, -1.0) * ops_.H_eff - 0.5 * damping;
  norm_bound_ = 2.0 * row_sum_norm(K_) +
                r.gamma1 * (2.0 * r.nbar1 + 1.0) * (ops_.trunc.dim1 - 1) +
                r.gamma2 * (2.0 * r.nbar2 + 1.0) * (ops_.trunc.dim2 - 1);
}

CMatrix Liouvillian::apply(const CMatrix& rho) const {
  const ExchangeRates& r = ops_.rates;
  CMatrix out = K_ * rho;
  out += rho * CSparse(K_.adjoint());
  const auto jump = [&](const CSparse& a, double rate) {
    if (rate == 0.0) return;
    const CMatrix left = a * rho;
    out += rate * (left * CSparse(a.adjoint()));
  };
  jump(ops_.b1, r.gamma1 * (r.nbar1 + 1.0));
  jump(ops_.b2, r.gamma2 * (r.nbar2 + 1.0));
  jump(adj(ops_.b1), r.gamma1 * r.nbar1);
  jump(adj(ops_.b2), r.gamma2 * r.nbar2);
  return out;
}

CMatrix Liouvillian::dissipator(int mirror, const CMatrix& rho) const {
  require_mirror(mirror);
  const CSparse& b = (mirror == 1) ? ops_.b1 : ops_.b2;
  const CSparse bd = adj(b);
  const double g = (mirror == 1) ? ops_.rates.gamma1 : ops_.rates.gamma2;
  const double nbar = (mirror == 1) ? ops_.rates.nbar1 : ops_.rates.nbar2;
  const CSparse bdb = bd * b, bbd = b * bd;
  const CMatrix decay = CMatrix(b * rho) * bd - 0.5 * (bdb * rho + rho * bdb);
  const CMatrix pump = CMatrix(bd * rho) * b - 0.5 * (bbd * rho + rho * bbd);
  return g * (nbar + 1.0) * decay + g * nbar * pump;
}

Liouvillian build_liouvillian(const ExchangeRates& rates, FockTruncation trunc, double omega_m,
                              int cap) {
  return Liouvillian(SystemOperators::build(rates, trunc, omega_m, cap));
}

Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& L, double t_final,
                  const EvolveOptions& options) {
  const FockTruncation& t = L.operators().trunc;
  if (rho0.truncation().dim1 != t.dim1 || rho0.truncation().dim2 != t.dim2) {
    throw Error(ErrorCode::InvalidArgument, "state and generator use different truncations");
  }
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw Error(ErrorCode::InvalidArgument, "t_final must be finite and non-negative");
  }
  if (options.samples < 1 || (t_final > 0.0 && options.samples < 2)) {
    throw Error(ErrorCode::InvalidArgument, "need at least two samples for t_final > 0");
  }
  check_state(rho0);

  const double nb = L.norm_bound();
  const double dt = (nb > 0.0) ? std::min(options.dt_max, 1.0 / nb) : options.dt_max;

  Trajectory out;
  CMatrix rho = rho0.matrix();
  out.times.push_back(0.0);
  out.states.push_back(rho0);
  check_leak(rho0, options.leak_threshold);

  // One RK4 step; halves itself when the trace moves more than allowed.
  const auto step = [&](auto&& self, const CMatrix& x, double h, int depth) -> CMatrix {
    const CMatrix k1 = L.apply(x);
    const CMatrix k2 = L.apply(x + 0.5 * h * k1);
    const CMatrix k3 = L.apply(x + 0.5 * h * k2);
    const CMatrix k4 = L.apply(x + h * k3);
    CMatrix next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ++out.steps;
    const double drift = std::abs(next.trace() - x.trace());
    if (drift > options.trace_drift && depth < 30) {
      return self(self, self(self, x, 0.5 * h, depth + 1), 0.5 * h, depth + 1);
    }
    return next;
  };

  for (int s = 1; s < options.samples; ++s) {
    const double t0 = t_final * (s - 1) / (options.samples - 1);
    const double t1 = t_final * s / (options.samples - 1);
    const int sub = std::max(1, int(std::ceil((t1 - t0) / dt)));
    const double h = (t1 - t0) / sub;
    for (int i = 0; i < sub; ++i) rho = step(step, rho, h, 0);
    DensityMatrix state(t, rho);
    check_leak(state, options.leak_threshold);
    out.times.push_back(t1);
    out.states.push_back(std::move(state));
  }
  return out;
}

SteadyStateResult steady_state(const Liouvillian& L, const SteadyStateOptions& options) {
  const SystemOperators& ops = L.operators();
  const ExchangeRates& r = ops.rates;
  ops.trunc.validate(options.cap);
  const bool g1 = r.gamma1 > 0.0, g2 = r.gamma2 > 0.0;
  if ((!g1 && !g2) || (r.xi == 0.0 && !(g1 && g2))) {
    throw Error(ErrorCode::NonUniqueSteadyState, "an undamped, uncoupled mode has no unique steady state");
  }

  const detail::SectorSolve sector = detail::solve_zero_coherence_sector(r, ops.trunc, options);
  const FockTruncation& t = ops.trunc;
  CMatrix rho = CMatrix::Zero(t.total(), t.total());
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t N = 0; N < sector.blocks.size(); ++N) {
    const CMatrix& X = sector.blocks[N];
    const int c = int(X.rows());
    for (int a = 0; a < c; ++a) {
      const int ja = sector.j_low[N] + a;
      const int ra = ja * t.dim2 + (int(N) - ja);
      for (int b = 0; b < c; ++b) {
        const int jb = sector.j_low[N] + b;
        rho(ra, jb * t.dim2 + (int(N) - jb)) = X(a, b);
      }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(X, Eigen::EigenvaluesOnly);
    lowest = std::min(lowest, es.eigenvalues().minCoeff());
  }

  SteadyStateResult out{DensityMatrix(t, std::move(rho))};
  const double scale = L.norm_bound() * out.rho.matrix().norm();
  out.residual = (scale > 0.0) ? L.apply(out.rho.matrix()).norm() / scale : 0.0;
  out.min_eigenvalue = lowest;
  out.leak = std::max(out.rho.tail_population(1), out.rho.tail_population(2));
  out.iterations = sector.iterations;
  out.method = sector.method;
  if (!(out.residual < options.residual_tol)) {
    throw Error(ErrorCode::NonConvergence, "steady-state residual above tolerance");
  }
  if (out.leak > options.leak_threshold) {
    throw Error(ErrorCode::TruncationLeak, "steady state populates the top Fock level");
  }
  return out;
}

FockTruncation auto_truncation(double nu1, double nu2, double tail_tolerance, int cap) {
  int d1 = int(geometric_tail_dimension(nu1, tail_tolerance));
  int d2 = int(geometric_tail_dimension(nu2, tail_tolerance));
  if (std::int64_t(d1) * d2 > cap) {
    const double shrink = std::sqrt(double(cap) / (double(d1) * d2));
    d1 = std::max(2, int(std::floor(d1 * shrink)));
    d2 = std::max(2, int(std::floor(d2 * shrink)));
  }
  return {d1, d2};
}

SteadyStateResult solve_steady_state(const ExchangeRates& rates,
                                     const SteadyStateOptions& options, double omega_m) {
  if (options.truncation) {
    return steady_state(build_liouvillian(rates, *options.truncation, omega_m, options.cap),
                        options);
  }
  // First pass on a coarse box sized from the bath occupations.
  const double nbar_max = std::max(rates.nbar1, rates.nbar2);
  const int side_cap = std::max(2, int(std::floor(std::sqrt(double(options.cap)))));
  const int d0 = std::clamp(int(std::ceil(8.0 * nbar_max + 6.0)), 2, side_cap);
  SteadyStateOptions coarse = options;
  coarse.leak_threshold = std::numeric_limits<double>::infinity();
  const FockTruncation first{d0, d0};
  const SteadyStateResult pass1 =
      steady_state(build_liouvillian(rates, first, omega_m, options.cap), coarse);

  const auto mean = [](const std::vector<double>& p) {
    double m = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) m += double(n) * p[n];
    return m;
  };
  const double margin = 1.02;
  const double nu1 = margin * mean(phonon_distribution(pass1.rho, 1));
  const double nu2 = margin * mean(phonon_distribution(pass1.rho, 2));
  const FockTruncation second = auto_truncation(nu1, nu2, options.tail_tolerance, options.cap);
  if (second.dim1 == first.dim1 && second.dim2 == first.dim2) {
    if (pass1.leak > options.leak_threshold) {
      throw Error(ErrorCode::TruncationLeak, "steady state populates the top Fock level");
    }
    return pass1;
  }
  return steady_state(build_liouvillian(rates, second, omega_m, options.cap), options);
}

std::vector<double> phonon_distribution(const DensityMatrix& rho, int mirror) {
  require_mirror(mirror);
  const FockTruncation& t = rho.truncation();
  std::vector<double> p((mirror == 1) ? t.dim1 : t.dim2, 0.0);
  for (int j = 0; j < t.dim1; ++j) {
    for (int k = 0; k < t.dim2; ++k) {
      const double w = rho.matrix()(j * t.dim2 + k, j * t.dim2 + k).real();
      p[(mirror == 1) ? j : k] += w;
    }
  }
  return p;
}

double g2_zero(const DensityMatrix& rho, int mirror) {
  const std::vector<double> p = phonon_distribution(rho, mirror);
  double n = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    n += double(i) * p[i];
    nn += double(i) * (double(i) - 1.0) * p[i];
  }
  if (!(n > 0.0)) throw Error(ErrorCode::ZeroPopulation, "g2 is undefined for an empty mode");
  return nn / (n * n);
}

SecondMoments second_moments(const DensityMatrix& rho) {
  const FockTruncation& t = rho.truncation();
  const CSparse b1 = lowering(t, 1), b2 = lowering(t, 2);
  const CSparse b1d = adj(b1), b2d = adj(b2);
  SecondMoments s;
  s.n1 = rho.expect(b1d * b1).real();
  s.n2 = rho.expect(b2d * b2).real();
  s.c12 = rho.expect(b1d * b2);
  s.c21 = rho.expect(b2d * b1);
  return s;
}

FourthMoments fourth_moments(const DensityMatrix& rho) {
  const FockTruncation& t = rho.truncation();
  const CSparse b1 = lowering(t, 1), b2 = lowering(t, 2);
  const CSparse b1d = adj(b1), b2d = adj(b2);
  // Normal-ordered forms; operators of different modes commute.
  const CSparse ops[9] = {
      b1d * b1d * b1 * b1, b1d * b1d * b1 * b2, b2d * b1d * b1 * b1,
      b1d * b1d * b2 * b2, b1d * b2d * b2 * b1, b2d * b2d * b1 * b1,
      b1d * b2d * b2 * b2, b2d * b2d * b2 * b1, b2d * b2d * b2 * b2};
  FourthMoments f;
  for (int i = 0; i < 9; ++i) f.v[i] = rho.expect(ops[i]);
  return f;
}

HeatFlux heat_flux_numeric(const DensityMatrix& rho, const SystemOperators& ops, double hbar,
                           double rate_unit) {
  const double unit = hbar * rate_unit * rate_unit;
  HeatFlux j;
  j.J1 = unit * rho.expect(adjoint_dissipator(ops, 1, ops.H_S)).real();
  j.J2 = unit * rho.expect(adjoint_dissipator(ops, 2, ops.H_S)).real();
  return j;
}

}  // namespace vacheat
