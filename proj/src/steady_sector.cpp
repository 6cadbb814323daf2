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

#include "steady_sector.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/IterativeSolvers>

#include "vacheat/errors.hpp"

namespace vacheat::detail {
namespace {

using Vector = Eigen::VectorXcd;

// Block N of the sector copied from a sub-block of block N +/- 1:
// Y_N[t.., t..] += rate * W X_src[s.., s..] W, with W = diag(weight).
struct Transfer {
  int target = 0;
  int source = 0;
  double rate = 0.0;
  Eigen::VectorXd weight;
  Eigen::MatrixXd scaled;  // rate * weight weight^T
};

struct Block {
  int N = 0;
  int j_low = 0;
  int size = 0;
  Eigen::Index offset = 0;  // into the unknown vector; block 0 is fixed
  Eigen::VectorXcd k_diag;  // diagonal of K_N = -i H_N - M_N / 2
  Eigen::VectorXcd k_off;   // K_N(a, a+1) = K_N(a+1, a)
  std::vector<Transfer> up;    // from block N - 1
  std::vector<Transfer> down;  // from block N + 1
  // K = V diag(lambda) V^-1 when V is well conditioned, else K = U T U^+.
  bool diagonal = false;
  Eigen::MatrixXcd v, v_inv, inv_denominator;
  Eigen::MatrixXcd schur_u;
  Eigen::MatrixXcd schur_t;
};

class SectorModel {
 public:
  SectorModel(const ExchangeRates& r, FockTruncation t) : trunc_(t) {
    const int d1 = t.dim1, d2 = t.dim2;
    const int n_max = d1 + d2 - 2;
    blocks_.resize(n_max + 1);
    Eigen::Index offset = 0;
    for (int N = 0; N <= n_max; ++N) {
      Block& b = blocks_[N];
      b.N = N;
      b.j_low = std::max(0, N - d2 + 1);
      const int j_high = std::min(N, d1 - 1);
      b.size = j_high - b.j_low + 1;
      if (N > 0) {
        b.offset = offset;
        offset += Eigen::Index(b.size) * b.size;
      }
      b.k_diag.resize(b.size);
      b.k_off = Eigen::VectorXcd::Zero(std::max(0, b.size - 1));
      for (int a = 0; a < b.size; ++a) {
        const int j = b.j_low + a, k = N - j;
        const double bbd1 = (j < d1 - 1) ? j + 1.0 : 0.0;
        const double bbd2 = (k < d2 - 1) ? k + 1.0 : 0.0;
        const double m = r.gamma1 * (r.nbar1 + 1.0) * j + r.gamma1 * r.nbar1 * bbd1 +
                         r.gamma2 * (r.nbar2 + 1.0) * k + r.gamma2 * r.nbar2 * bbd2;
        const double h = r.delta1 * j + r.delta2 * k;
        b.k_diag(a) = cplx(-0.5 * m, -h);
        // <j+1, k-1| xi b1^+ b2 |j, k> = xi sqrt((j+1) k)
        if (a + 1 < b.size) b.k_off(a) = cplx(0.0, -r.xi * std::sqrt((j + 1.0) * k));
      }
    }
    unknowns_ = offset;

    for (int N = 0; N <= n_max; ++N) {
      Block& b = blocks_[N];
      const int j_high = b.j_low + b.size - 1;
      if (N > 0) {
        const Block& s = blocks_[N - 1];
        // mode 1 raised: (j - 1, k) -> (j, k)
        add_transfer(b.up, std::max(1, b.j_low), j_high, -1, s, r.gamma1 * r.nbar1, b,
                     [](int j, int) { return std::sqrt(double(j)); });
        // mode 2 raised: (j, k - 1) -> (j, k)
        add_transfer(b.up, b.j_low, std::min(j_high, N - 1), 0, s, r.gamma2 * r.nbar2, b,
                     [](int j, int n) { return std::sqrt(double(n - j)); });
      }
      if (N < n_max) {
        const Block& s = blocks_[N + 1];
        add_transfer(b.down, b.j_low, std::min(j_high, d1 - 2), +1, s,
                     r.gamma1 * (r.nbar1 + 1.0), b,
                     [](int j, int) { return std::sqrt(j + 1.0); });
        add_transfer(b.down, std::max(b.j_low, N - d2 + 2), j_high, 0, s,
                     r.gamma2 * (r.nbar2 + 1.0), b,
                     [](int j, int n) { return std::sqrt(n - j + 1.0); });
      }
    }
  }

  Eigen::Index unknowns() const { return unknowns_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  int n_max() const { return int(blocks_.size()) - 1; }

  Eigen::Map<const Eigen::MatrixXcd> view(const Vector& x, int N) const {
    const Block& b = blocks_[N];
    return {x.data() + b.offset, b.size, b.size};
  }
  Eigen::Map<Eigen::MatrixXcd> view(Vector& x, int N) const {
    const Block& b = blocks_[N];
    return {x.data() + b.offset, b.size, b.size};
  }

  // K_N X + X K_N^+ with tridiagonal K_N.
  void intra(int N, const Eigen::Ref<const Eigen::MatrixXcd>& X,
             Eigen::Ref<Eigen::MatrixXcd> Y) const {
    const Block& b = blocks_[N];
    const int c = b.size;
    for (int col = 0; col < c; ++col) {
      for (int row = 0; row < c; ++row) {
        cplx acc = (b.k_diag(row) + std::conj(b.k_diag(col))) * X(row, col);
        if (row > 0) acc += b.k_off(row - 1) * X(row - 1, col);
        if (row + 1 < c) acc += b.k_off(row) * X(row + 1, col);
        if (col > 0) acc += X(row, col - 1) * std::conj(b.k_off(col - 1));
        if (col + 1 < c) acc += X(row, col + 1) * std::conj(b.k_off(col));
        Y(row, col) += acc;
      }
    }
  }

  static void transfer(const std::vector<Transfer>& ts,
                       const Eigen::Ref<const Eigen::MatrixXcd>& X,
                       Eigen::Ref<Eigen::MatrixXcd> Y, double sign = 1.0) {
    for (const Transfer& t : ts) {
      const Eigen::Index len = t.weight.size();
      if (len == 0 || t.rate == 0.0) continue;
      if (sign > 0.0) {
        Y.block(t.target, t.target, len, len) +=
            X.block(t.source, t.source, len, len).cwiseProduct(t.scaled.cast<cplx>());
      } else {
        Y.block(t.target, t.target, len, len) -=
            X.block(t.source, t.source, len, len).cwiseProduct(t.scaled.cast<cplx>());
      }
    }
  }

  Vector apply(const Vector& x) const {
    Vector y = Vector::Zero(unknowns_);
    for (int N = 1; N <= n_max(); ++N) {
      auto Y = view(y, N);
      intra(N, view(x, N), Y);
      if (N > 1) transfer(blocks_[N].up, view(x, N - 1), Y);
      if (N < n_max()) transfer(blocks_[N].down, view(x, N + 1), Y);
    }
    return y;
  }

  // Contribution of the fixed vacuum block X_0 = 1, moved to the right side.
  Vector rhs() const {
    Vector b = Vector::Zero(unknowns_);
    if (n_max() >= 1) {
      const Eigen::MatrixXcd one = Eigen::MatrixXcd::Ones(1, 1);
      transfer(blocks_[1].up, one, view(b, 1), -1.0);
    }
    return b;
  }

  void factor_blocks() {
    for (int N = 1; N <= n_max(); ++N) {
      Block& b = blocks_[N];
      Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(b.size, b.size);
      K.diagonal() = b.k_diag;
      for (int a = 0; a + 1 < b.size; ++a) {
        K(a, a + 1) = b.k_off(a);
        K(a + 1, a) = b.k_off(a);
      }
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(K);
      if (eig.info() == Eigen::Success) {
        const Eigen::MatrixXcd& V = eig.eigenvectors();
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(V);
        Eigen::MatrixXcd V_inv = lu.inverse();
        const double cond = V.cwiseAbs().rowwise().sum().maxCoeff() *
                            V_inv.cwiseAbs().rowwise().sum().maxCoeff();
        if (std::isfinite(cond) && cond < 1e6) {
          const Eigen::VectorXcd& lam = eig.eigenvalues();
          b.diagonal = true;
          b.v = V;
          b.v_inv = std::move(V_inv);
          b.inv_denominator.resize(b.size, b.size);
          for (int q = 0; q < b.size; ++q)
            for (int p = 0; p < b.size; ++p)
              b.inv_denominator(p, q) = 1.0 / (lam(p) + std::conj(lam(q)));
          continue;
        }
      }
      Eigen::ComplexSchur<Eigen::MatrixXcd> schur(K);
      b.schur_u = schur.matrixU();
      b.schur_t = schur.matrixT();
    }
  }

  // Solves K_N X + X K_N^+ = C via K = U T U^+.
  Eigen::MatrixXcd sylvester(int N, const Eigen::Ref<const Eigen::MatrixXcd>& C) const {
    const Block& b = blocks_[N];
    if (b.diagonal) {
      const Eigen::MatrixXcd Z =
          (b.v_inv * C * b.v_inv.adjoint()).cwiseProduct(b.inv_denominator);
      return b.v * Z * b.v.adjoint();
    }
    const Eigen::MatrixXcd& U = b.schur_u;
    const Eigen::MatrixXcd& T = b.schur_t;
    const int c = b.size;
    const Eigen::MatrixXcd Cp = U.adjoint() * C * U;
    Eigen::MatrixXcd Y(c, c);
    Eigen::VectorXcd r(c);
    for (int col = c - 1; col >= 0; --col) {
      r = Cp.col(col);
      if (col + 1 < c) {
        r.noalias() -= Y.rightCols(c - col - 1) * T.row(col).tail(c - col - 1).adjoint();
      }
      const cplx shift = std::conj(T(col, col));
      for (int i = c - 1; i >= 0; --i) {
        cplx acc = r(i);
        for (int p = i + 1; p < c; ++p) acc -= T(i, p) * Y(p, col);
        Y(i, col) = acc / (T(i, i) + shift);
      }
    }
    return U * Y * U.adjoint();
  }

 private:
  template <typename Weight>
  void add_transfer(std::vector<Transfer>& out, int j_from, int j_to, int source_shift,
                    const Block& src, double rate, const Block& dst, Weight weight) {
    if (j_to < j_from) return;
    Transfer t;
    t.target = j_from - dst.j_low;
    t.source = j_from + source_shift - src.j_low;
    t.rate = rate;
    t.weight.resize(j_to - j_from + 1);
    for (int j = j_from; j <= j_to; ++j) t.weight(j - j_from) = weight(j, dst.N);
    t.scaled = rate * t.weight * t.weight.transpose();
    out.push_back(std::move(t));
  }

  FockTruncation trunc_;
  std::vector<Block> blocks_;
  Eigen::Index unknowns_ = 0;
};

struct SectorOperator {
  const SectorModel* model;
  Eigen::Index rows() const { return model->unknowns(); }
  Eigen::Index cols() const { return model->unknowns(); }
  Vector operator*(const Vector& x) const { return model->apply(x); }
};

// Symmetric block Gauss-Seidel over the excitation blocks.
struct SectorPreconditioner {
  const SectorModel* model;

  Vector solve(const Vector& r) const {
    const SectorModel& m = *model;
    const int n_max = m.n_max();
    Vector y = Vector::Zero(m.unknowns());
    for (int N = 1; N <= n_max; ++N) {
      Eigen::MatrixXcd rhs = m.view(r, N);
      if (N > 1) SectorModel::transfer(m.blocks()[N].up, m.view(y, N - 1), rhs, -1.0);
      m.view(y, N) = m.sylvester(N, rhs);
    }
    for (int N = n_max - 1; N >= 1; --N) {
      const Block& b = m.blocks()[N];
      Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(b.size, b.size);
      SectorModel::transfer(b.down, m.view(y, N + 1), c);
      m.view(y, N) -= m.sylvester(N, c);
    }
    return y;
  }
};

Vector thermal_guess(const SectorModel& m, const ExchangeRates& r) {
  Vector x = Vector::Zero(m.unknowns());
  const double q1 = r.nbar1 / (r.nbar1 + 1.0);
  const double q2 = r.nbar2 / (r.nbar2 + 1.0);
  for (int N = 1; N <= m.n_max(); ++N) {
    const Block& b = m.blocks()[N];
    auto X = m.view(x, N);
    for (int a = 0; a < b.size; ++a) {
      const int j = b.j_low + a;
      X(a, a) = std::pow(q1, j) * std::pow(q2, N - j);
    }
  }
  return x;
}

}  // namespace

SectorSolve solve_zero_coherence_sector(const ExchangeRates& rates, FockTruncation trunc,
                                        const SteadyStateOptions& options) {
  SectorModel model(rates, trunc);
  const Eigen::Index n = model.unknowns();
  const Vector b = model.rhs();
  Vector x;
  SectorSolve out;

  if (n <= options.dense_limit) {
    Eigen::MatrixXcd A(n, n);
    Vector e = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      e(i) = 1.0;
      A.col(i) = model.apply(e);
      e(i) = 0.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) {
      throw Error(ErrorCode::NonUniqueSteadyState, "the steady state is not unique");
    }
    x = lu.solve(b);
    out.method = "dense";
  } else {
    model.factor_blocks();
    const SectorOperator op{&model};
    const SectorPreconditioner pre{&model};
    x = thermal_guess(model, rates);
    const double b_norm = b.norm();
    const auto converged = [&] { return (b - model.apply(x)).norm() <= 1e-13 * b_norm; };
    int used = 0;
    // BiCGSTAB first; restarted GMRES picks up if it stalls or breaks down.
    {
      Eigen::Index iters = options.max_iterations;
      double tol = 1e-14;
      Eigen::internal::bicgstab(op, b, x, pre, iters, tol);
      used += int(iters);
    }
    if (!x.allFinite()) x = thermal_guess(model, rates);
    bool done = converged();
    const bool fallback = !done;
    while (!done && used < 2 * options.max_iterations) {
      Eigen::Index iters = 2 * options.max_iterations - used;
      double tol = 1e-13;
      Eigen::internal::gmres(op, b, x, pre, iters, Eigen::Index(options.restart), tol);
      used += int(iters);
      done = converged();
      if (iters == 0) break;
    }
    if (!done) {
      throw Error(ErrorCode::NonConvergence, "sector solve did not reach its tolerance");
    }
    out.method = fallback ? "bicgstab+gmres" : "bicgstab";
    out.iterations = used;
  }

  const int n_max = model.n_max();
  out.blocks.resize(n_max + 1);
  out.j_low.resize(n_max + 1);
  out.blocks[0] = Eigen::MatrixXcd::Ones(1, 1);
  double trace = 1.0;
  for (int N = 1; N <= n_max; ++N) {
    Eigen::MatrixXcd X = model.view(x, N);
    out.blocks[N] = 0.5 * (X + X.adjoint());
    trace += out.blocks[N].trace().real();
  }
  for (int N = 0; N <= n_max; ++N) {
    out.blocks[N] /= trace;
    out.j_low[N] = model.blocks()[N].j_low;
  }
  return out;
}

}  // namespace vacheat::detail
