// Copyright 2026 The cfgreen Authors
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

#include "cf_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "errors.hpp"

namespace cfgreen {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kMinRcond = 1e-14;

void check_upper(Complex w) {
  if (!(w.imag() > 0)) throw DomainError("continued fraction needs Im(w) > 0");
}

void check_level(const MatrixCFData& d, int n) {
  if (n < 0) throw DomainError("level must be >= 0");
  if (n >= d.computed_levels() && !d.terminated_at)
    throw DomainError("level " + std::to_string(n) + " exceeds the " +
                      std::to_string(d.computed_levels()) + " computed levels");
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Descending eigenpairs with the largest-magnitude entry of every eigenvector
// made real and positive.
void gauge_fixed_eigen(const CMatrix& R, RVector& evals, CMatrix& vecs) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
  if (es.info() != Eigen::Success) throw NumericError("overlap-matrix eigensolver failed");
  const auto n = R.rows();
  evals.resize(n);
  vecs.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    evals(k) = es.eigenvalues()(n - 1 - k);
    CVector v = es.eigenvectors().col(n - 1 - k);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v(imax)) / std::abs(v(imax));
    vecs.col(k) = v;
  }
}

CMatrix invert_checked(const CMatrix& m, const char* what) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double rc = lu.rcond();
  if (!(rc > kMinRcond)) {
    std::ostringstream msg;
    msg << what << " is singular to working precision (rcond " << rc << ")";
    throw NumericError(msg.str());
  }
  return lu.inverse();
}

}  // namespace

int MatrixCFData::effective_level(int n) const {
  int top = computed_levels() - 1;
  if (terminated_at) top = *terminated_at - 1;
  return std::min(n, top);
}

bool MatrixCFData::full_rank(int from, int to) const {
  for (int j = from; j <= to; ++j)
    if (j >= computed_levels() || levels[static_cast<std::size_t>(j)].rank != n_ops) return false;
  return true;
}

MatrixCFData matrix_recursion(const OperatorSum& H, std::span<const OperatorSum> ops, int n,
                              const ExpectationBackend& backend, const MatrixOptions& opts) {
  if (ops.empty()) throw ConfigError("operator pool is empty");
  if (n < 0) throw DomainError("level must be >= 0");
  for (const auto& a : ops)
    if (a.n_qubits() != H.n_qubits()) throw DimensionError("pool operator and H differ in qubit count");
  if (!(opts.threshold >= 0)) throw DomainError("threshold must be >= 0");

  MatrixCFData d;
  d.n_ops = static_cast<int>(ops.size());
  d.threshold = opts.threshold;
  d.backend_fingerprint = backend.fingerprint();
  d.hermitized = opts.hermitize.value_or(backend.commutes_with_H());
  const bool real_input =
      is_real_matrix(H) && std::all_of(ops.begin(), ops.end(), [](const OperatorSum& a) { return is_real_matrix(a); });
  d.real_coefficients = opts.real_coefficients.value_or(d.hermitized && backend.enforce_reality() && real_input);
  const auto N = static_cast<Eigen::Index>(ops.size());
  const bool exact = backend.kind() != BackendKind::sampled;

  std::vector<OperatorSum> current(ops.begin(), ops.end());
  std::vector<OperatorSum> ledger;  // normalized operators of all finished levels
  double scale0 = 0.0;

  for (int p = 0; p <= n; ++p) {
    MatrixCFLevel lv;
    lv.R.resize(N, N);
    for (Eigen::Index a = 0; a < N; ++a)
      for (Eigen::Index b = a; b < N; ++b) {
        lv.R(a, b) = backend.inner(current[static_cast<std::size_t>(a)], current[static_cast<std::size_t>(b)]);
        lv.R(b, a) = std::conj(lv.R(a, b));
      }
    lv.R = hermitian_part(lv.R);

    CMatrix V;
    gauge_fixed_eigen(lv.R, lv.D, V);
    lv.U = V.adjoint();
    if (p == 0) scale0 = std::max(lv.D(0), 0.0);
    const double cut = opts.threshold * std::max(lv.D(0), scale0);
    const double lowest = lv.D(N - 1);
    if (lowest < -cut && lowest < -1e-10 * scale0) {
      std::ostringstream msg;
      msg << "overlap matrix at level " << p << " has eigenvalue " << lowest;
      if (exact) throw NumericError(msg.str() + " (must be positive semidefinite)");
      d.warnings.push_back(msg.str() + "; clamped to zero");
    }

    lv.M = CMatrix::Zero(N, N);
    lv.retained.assign(static_cast<std::size_t>(N), false);
    lv.normalized_ops.assign(static_cast<std::size_t>(N), OperatorSum(H.n_qubits()));
    for (Eigen::Index k = 0; k < N; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (!(lv.D(k) > cut) || lv.D(k) <= 0) {
        lv.D(k) = 0.0;
        continue;
      }
      lv.retained[uk] = true;
      ++lv.rank;
      lv.M.row(k) = std::sqrt(lv.D(k)) * lv.U.row(k);
      TermAccumulator acc(H.n_qubits());
      for (Eigen::Index m = 0; m < N; ++m)
        acc.add(current[static_cast<std::size_t>(m)], lv.U(k, m) / std::sqrt(lv.D(k)));
      lv.normalized_ops[uk] = acc.finish(opts.canonical_tol);
    }

    if (lv.rank == 0) {
      if (p == 0) throw DegeneracyError("every pool direction lies in the null space of the state");
      lv.Delta = CMatrix::Zero(N, N);
      d.levels.push_back(std::move(lv));
      d.terminated_at = p;
      break;
    }

    // P_k = [H, A^_k] projected off every earlier level
    std::vector<OperatorSum> P(static_cast<std::size_t>(N), OperatorSum(H.n_qubits()));
    for (Eigen::Index k = 0; k < N; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (!lv.retained[uk]) continue;
      const OperatorSum L = commutator(H, lv.normalized_ops[uk], opts.canonical_tol);
      TermAccumulator acc(H.n_qubits());
      acc.add(L);
      for (const auto& old : ledger) acc.add(old, -backend.inner(L, old));
      P[uk] = acc.finish(opts.canonical_tol);
    }

    CMatrix raw_delta = CMatrix::Zero(N, N);
    for (Eigen::Index k = 0; k < N; ++k)
      for (Eigen::Index m = 0; m < N; ++m) {
        if (!lv.retained[static_cast<std::size_t>(k)] || !lv.retained[static_cast<std::size_t>(m)]) continue;
        raw_delta(k, m) = backend.inner(P[static_cast<std::size_t>(k)], lv.normalized_ops[static_cast<std::size_t>(m)]);
      }
    lv.Delta = raw_delta;
    if (d.hermitized) {
      lv.Delta = hermitian_part(lv.Delta);
      if (d.real_coefficients) lv.Delta = lv.Delta.real().cast<Complex>();
    }

    for (Eigen::Index k = 0; k < N; ++k)
      if (lv.retained[static_cast<std::size_t>(k)]) ledger.push_back(lv.normalized_ops[static_cast<std::size_t>(k)]);

    if (p < n) {
      std::vector<OperatorSum> next(static_cast<std::size_t>(N), OperatorSum(H.n_qubits()));
      for (Eigen::Index k = 0; k < N; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        if (!lv.retained[uk]) continue;
        TermAccumulator acc(H.n_qubits());
        acc.add(P[uk]);
        for (Eigen::Index m = 0; m < N; ++m)
          if (lv.retained[static_cast<std::size_t>(m)])
            acc.add(lv.normalized_ops[static_cast<std::size_t>(m)], -raw_delta(k, m));
        next[uk] = acc.finish(opts.canonical_tol);
      }
      current = std::move(next);
    }
    d.levels.push_back(std::move(lv));
  }
  return d;
}

CMatrix eval_matrix_cf(const MatrixCFData& data, Complex omega, int n, MatrixForm form) {
  check_upper(omega);
  check_level(data, n);
  const int top = data.effective_level(n);
  const auto N = static_cast<Eigen::Index>(data.n_ops);
  CMatrix X = CMatrix::Zero(N, N);
  for (int j = top; j >= 0; --j) {
    const auto& lv = data.levels[static_cast<std::size_t>(j)];
    CMatrix Y = lv.Delta;
    Y.diagonal().array() += omega;
    if (j < top) {
      const auto& M = data.levels[static_cast<std::size_t>(j + 1)].M;
      Y += M.adjoint() * X * M;
    }
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < N; ++k)
      if (lv.retained[static_cast<std::size_t>(k)]) idx.push_back(k);
    const auto r = static_cast<Eigen::Index>(idx.size());
    CMatrix block(r, r);
    for (Eigen::Index a = 0; a < r; ++a)
      for (Eigen::Index b = 0; b < r; ++b) block(a, b) = Y(idx[a], idx[b]);
    const CMatrix inv = invert_checked(block, "continued-fraction resolvent");
    X.setZero();
    for (Eigen::Index a = 0; a < r; ++a)
      for (Eigen::Index b = 0; b < r; ++b) X(idx[a], idx[b]) = -inv(a, b);
  }
  if (form == MatrixForm::normalized) return -kI * X;
  const auto& M0 = data.levels[0].M;
  return -kI * (M0.adjoint() * X * M0);
}

namespace {

// Coefficient lists (lowest degree first) of matrix polynomials in w.
using MatPoly = std::vector<CMatrix>;

MatPoly poly_mul_right(const MatPoly& a, const CMatrix& delta) {
  // a(w) * (w + delta)
  MatPoly out(a.size() + 1, CMatrix::Zero(a[0].rows(), a[0].cols()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] += a[i] * delta;
    out[i + 1] += a[i];
  }
  return out;
}

MatPoly poly_sub(MatPoly a, const MatPoly& b) {
  if (b.size() > a.size()) a.resize(b.size(), CMatrix::Zero(b[0].rows(), b[0].cols()));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

MatPoly poly_times(MatPoly a, const CMatrix& m) {
  for (auto& c : a) c = c * m;
  return a;
}

void check_full_rank(const MatrixCFData& data, int n) {
  if (data.terminated_at && n >= *data.terminated_at)
    throw DomainError("matrix recurrence requested past the closing level");
  check_level(data, n);
  if (!data.full_rank(1, n))
    throw DegeneracyError("matrix recurrence needs full-rank levels 1.." + std::to_string(n));
}

}  // namespace

PQResult pq_recursion(const MatrixCFData& data, Complex omega, int n) {
  check_upper(omega);
  check_full_rank(data, n);
  const auto N = static_cast<Eigen::Index>(data.n_ops);
  const CMatrix I = CMatrix::Identity(N, N);
  auto lin = [&](int k) {
    CMatrix m = data.levels[static_cast<std::size_t>(k)].Delta;
    m.diagonal().array() += omega;
    return m;
  };
  auto M = [&](int k) -> const CMatrix& { return data.levels[static_cast<std::size_t>(k)].M; };

  PQResult res;
  if (n == 0) {
    res.P = -I;
    res.Q = lin(0);
  } else {
    CMatrix Pm2 = CMatrix::Zero(N, N), Qm2 = I;  // index -1
    const CMatrix Minv1 = invert_checked(M(1), "M_1");
    CMatrix Pm1 = -Minv1, Qm1 = lin(0) * Minv1;  // index 0
    for (int k = 1; k < n; ++k) {
      const CMatrix Minv = invert_checked(M(k + 1), "M_{k+1}");
      CMatrix Pk = (Pm1 * lin(k) - Pm2 * M(k).adjoint()) * Minv;
      CMatrix Qk = (Qm1 * lin(k) - Qm2 * M(k).adjoint()) * Minv;
      Pm2 = std::move(Pm1);
      Qm2 = std::move(Qm1);
      Pm1 = std::move(Pk);
      Qm1 = std::move(Qk);
    }
    res.P = Pm1 * lin(n) - Pm2 * M(n).adjoint();
    res.Q = Qm1 * lin(n) - Qm2 * M(n).adjoint();
  }
  res.G = -kI * res.P * invert_checked(res.Q, "Q_n");
  return res;
}

std::vector<Complex> det_q_roots(const MatrixCFData& data, int n) {
  check_full_rank(data, n);
  const auto N = static_cast<Eigen::Index>(data.n_ops);
  const CMatrix I = CMatrix::Identity(N, N);
  auto delta = [&](int k) -> const CMatrix& { return data.levels[static_cast<std::size_t>(k)].Delta; };
  auto M = [&](int k) -> const CMatrix& { return data.levels[static_cast<std::size_t>(k)].M; };

  MatPoly Q;
  if (n == 0) {
    Q = {delta(0), I};
  } else {
    MatPoly Qm2{I};
    MatPoly Qm1 = poly_times(MatPoly{delta(0), I}, invert_checked(M(1), "M_1"));
    for (int k = 1; k < n; ++k) {
      MatPoly Qk = poly_times(poly_sub(poly_mul_right(Qm1, delta(k)), poly_times(Qm2, M(k).adjoint())),
                              invert_checked(M(k + 1), "M_{k+1}"));
      Qm2 = std::move(Qm1);
      Qm1 = std::move(Qk);
    }
    Q = poly_sub(poly_mul_right(Qm1, delta(n)), poly_times(Qm2, M(n).adjoint()));
  }

  // left-monic form C^{-1} Q(w) has the same zeros; block companion
  const auto deg = static_cast<Eigen::Index>(Q.size() - 1);
  const CMatrix lead_inv = invert_checked(Q.back(), "leading coefficient of Q_n");
  const Eigen::Index dim = deg * N;
  CMatrix comp = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b + 1 < deg; ++b) comp.block(b * N, (b + 1) * N, N, N) = I;
  for (Eigen::Index b = 0; b < deg; ++b)
    comp.block((deg - 1) * N, b * N, N, N) = -(lead_inv * Q[static_cast<std::size_t>(b)]);
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("block companion eigen solve failed");
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + dim);
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return roots;
}

MatrixCFData hermitize(const MatrixCFData& data, bool real) {
  MatrixCFData out = data;
  for (auto& lv : out.levels) {
    lv.R = hermitian_part(lv.R);
    lv.Delta = hermitian_part(lv.Delta);
    if (real) {
      lv.R = lv.R.real().cast<Complex>();
      lv.Delta = lv.Delta.real().cast<Complex>();
    }
  }
  out.hermitized = true;
  out.real_coefficients = out.real_coefficients || real;
  return out;
}

std::string to_string(MatrixForm f) {
  return f == MatrixForm::normalized ? "normalized" : "unnormalized";
}

MatrixForm parse_matrix_form(const std::string& s) {
  if (s == "normalized") return MatrixForm::normalized;
  if (s == "unnormalized") return MatrixForm::unnormalized;
  throw ConfigError("unknown form '" + s + "' (normalized|unnormalized)");
}

}  // namespace cfgreen
