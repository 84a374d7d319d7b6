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

#include "cf_scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace cfgreen {
namespace {

constexpr Complex kI{0.0, 1.0};

void check_upper(Complex w) {
  if (!(w.imag() > 0)) throw DomainError("continued fraction needs Im(w) > 0");
}

void check_level(const ScalarCFData& d, int n) {
  if (n < 0) throw DomainError("level must be >= 0");
  if (n >= d.computed_levels() && !d.terminated_at)
    throw DomainError("level " + std::to_string(n) + " exceeds the " +
                      std::to_string(d.computed_levels()) + " computed levels");
}

}  // namespace

int ScalarCFData::effective_level(int n) const {
  int top = computed_levels() - 1;
  if (terminated_at) top = *terminated_at - 1;
  return std::min(n, top);
}

ScalarCFData scalar_recursion(const OperatorSum& H, const OperatorSum& A, int n,
                              const ExpectationBackend& backend, const ScalarOptions& opts) {
  if (n < 0) throw DomainError("level must be >= 0");
  if (H.n_qubits() != A.n_qubits()) throw DimensionError("H and A act on different qubit counts");

  ScalarCFData d;
  d.backend_fingerprint = backend.fingerprint();
  const bool real_delta = backend.commutes_with_H();

  d.chain.push_back(A);
  d.gammas.push_back(backend.inner(A, A).real());
  if (!(d.gammas[0] > 0))
    throw DegeneracyError("initial operator has zero norm in the state inner product");
  const double g0 = d.gammas[0];

  for (int j = 0;; ++j) {
    const OperatorSum L = commutator(H, d.chain[j], opts.canonical_tol);
    Complex delta = backend.inner(L, d.chain[j]);
    if (real_delta) delta = delta.real();
    d.deltas.push_back(delta);
    if (j == n) break;

    // project [H, A_j] against every earlier chain member
    auto project = [&](const OperatorSum& v) {
      TermAccumulator acc(v.n_qubits());
      acc.add(v);
      for (int k = 0; k <= j; ++k) acc.add(d.chain[k], -backend.inner(v, d.chain[k]) / d.gammas[k]);
      return acc.finish(opts.canonical_tol);
    };
    OperatorSum next = project(L);
    double g = backend.inner(next, next).real();
    const double gL = backend.inner(L, L).real();
    if (g > 0 && gL > 0 && std::sqrt(gL / g) > opts.reorth_ratio) {
      next = project(next);
      g = backend.inner(next, next).real();
    }

    d.chain.push_back(next);
    if (g <= opts.termination_tol * g0) {
      d.gammas.push_back(std::max(g, 0.0));
      d.deltas.push_back(0.0);
      d.terminated_at = j + 1;
      break;
    }
    d.gammas.push_back(g);
  }
  return d;
}

Complex compose_scalar_maps(std::span<const double> gammas, std::span<const Complex> deltas,
                            Complex omega) {
  Complex z = 0.0;
  for (std::size_t k = gammas.size(); k-- > 0;)
    z = -gammas[k] * gammas[k] / (gammas[k] * omega + deltas[k] + z);
  return z;
}

Complex eval_scalar_cf(const ScalarCFData& data, Complex omega, int n) {
  check_upper(omega);
  check_level(data, n);
  const auto L = static_cast<std::size_t>(data.effective_level(n)) + 1;
  return -kI * compose_scalar_maps(std::span(data.gammas).first(L), std::span(data.deltas).first(L),
                                   omega);
}

Complex eval_scalar_recurrence(const ScalarCFData& data, Complex omega, int n) {
  check_upper(omega);
  check_level(data, n);
  const int L = data.effective_level(n);
  const auto& G = data.gammas;
  const auto& D = data.deltas;
  Complex a_prev = 0.0, b_prev = 1.0;
  Complex a = -G[0] * G[0], b = G[0] * omega + D[0];
  for (int k = 1; k <= L; ++k) {
    const Complex lin = G[k] * omega + D[k];
    const double sq = G[k] * G[k];
    Complex a_next = lin * a - sq * a_prev;
    Complex b_next = lin * b - sq * b_prev;
    // rescale to keep the sequences finite; the ratio is unchanged
    const double s = std::abs(b_next);
    if (s > 0 && std::isfinite(s)) {
      a_prev = a / s;
      b_prev = b / s;
      a = a_next / s;
      b = b_next / s;
    } else {
      a_prev = a;
      b_prev = b;
      a = a_next;
      b = b_next;
    }
  }
  if (!(std::abs(b) > std::numeric_limits<double>::min() * 1e4))
    throw NumericError("continued-fraction denominator vanished at w = (" +
                       std::to_string(omega.real()) + ", " + std::to_string(omega.imag()) + ")");
  return -kI * (a / b);
}

std::vector<Complex> denominator_polynomial(const ScalarCFData& data, int n) {
  check_level(data, n);
  const int L = data.effective_level(n);
  const auto& G = data.gammas;
  const auto& D = data.deltas;
  std::vector<Complex> prev{1.0};
  std::vector<Complex> cur{D[0], G[0]};
  for (int k = 1; k <= L; ++k) {
    std::vector<Complex> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i] += D[k] * cur[i];
      next[i + 1] += G[k] * cur[i];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= G[k] * G[k] * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == Complex(0.0)) --deg;
  if (deg <= 1) return {};
  const auto n = static_cast<Eigen::Index>(deg - 1);
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  const Complex lead = coeffs[deg - 1];
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericError("companion eigenvalue solve failed");
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  return out;
}

BoundResult a_priori_bound(const ScalarCFData& data, int n, double r) {
  if (!(r > 0.0 && r < 0.5)) throw DomainError("r must lie in (0, 1/2)");
  if (n < 1) throw DomainError("the truncation bound needs n >= 1");
  if (data.terminated_at && n >= *data.terminated_at) return {0.0, 0.0};
  if (n >= data.computed_levels())
    throw DomainError("bound at level " + std::to_string(n) + " needs Gamma_" + std::to_string(n));
  const double gn = data.gammas[static_cast<std::size_t>(n)];
  const double gp = data.gammas[static_cast<std::size_t>(n - 1)];
  if (!(gp > 0)) throw DomainError("Gamma_{n-1} must be positive");
  if (gn <= 0) return {0.0, 0.0};
  const double rr = r * (1 - r);
  BoundResult b;
  b.lambda = std::sqrt(gn / (gp * rr));
  b.bound = r / (1 - 2 * r) * gn * std::pow(std::abs(rr * gp / gn), n + 0.5);
  return b;
}

BoundScan a_priori_bound_scan(const ScalarCFData& data, int n) {
  BoundScan best;
  bool first = true;
  for (int k = 1; k <= 9; ++k) {
    const double r = 0.05 * k;
    const auto b = a_priori_bound(data, n, r);
    if (first || b.bound < best.result.bound) {
      best = {r, b};
      first = false;
    }
  }
  return best;
}

std::vector<Complex> jones_thron_factors(const ScalarCFData& data, int n, Complex omega) {
  check_upper(omega);
  check_level(data, n);
  const int L = data.effective_level(n);
  std::vector<Complex> tail(static_cast<std::size_t>(L) + 2, 0.0);
  for (int j = L; j >= 0; --j) {
    const auto u = static_cast<std::size_t>(j);
    tail[u] = -data.gammas[u] * data.gammas[u] /
              (data.gammas[u] * omega + data.deltas[u] + tail[u + 1]);
  }
  std::vector<Complex> g(static_cast<std::size_t>(L) + 1);
  for (int j = 0; j <= L; ++j) {
    const auto u = static_cast<std::size_t>(j);
    g[u] = tail[u + 1] / (data.gammas[u] * omega + data.deltas[u] + tail[u + 1]);
  }
  return g;
}

bool StabilityReport::all_within_bound() const {
  return std::all_of(points.begin(), points.end(), [](const StabilityPoint& p) {
    return !p.applicable || p.max_rel_error <= p.bound;
  });
}

StabilityReport jones_thron_experiment(const ScalarCFData& data, int n, double s,
                                       std::span<const Complex> omegas, int trials,
                                       std::uint64_t seed) {
  if (!(s >= 0.0 && s < 1.0)) throw DomainError("noise level s must lie in [0, 1)");
  if (trials < 1) throw DomainError("need at least one trial");
  if (data.terminated_at && *data.terminated_at < 1)
    throw DomainError("chain terminated before level 1");
  check_level(data, n);
  const int L = data.effective_level(n);
  const auto nl = static_cast<std::size_t>(L) + 1;

  StabilityReport rep;
  rep.s = s;
  rep.trials = trials;
  rep.level = L;
  std::vector<Complex> exact(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    StabilityPoint p;
    p.omega = omegas[i];
    for (Complex g : jones_thron_factors(data, L, omegas[i])) p.q = std::max(p.q, std::abs(g));
    p.applicable = p.q < 1.0;
    p.bound = p.applicable ? 6.0 * s / (1.0 - p.q) : std::numeric_limits<double>::infinity();
    rep.points.push_back(p);
    exact[i] = compose_scalar_maps(std::span(data.gammas).first(nl), std::span(data.deltas).first(nl),
                                   omegas[i]);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-s, s);
  std::vector<double> gt(nl);
  std::vector<Complex> dt(nl);
  for (int t = 0; t < trials; ++t) {
    for (std::size_t j = 0; j < nl; ++j) gt[j] = data.gammas[j] * (1.0 + u(rng));
    for (std::size_t j = 0; j < nl; ++j) dt[j] = data.deltas[j] * (1.0 + u(rng));
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const Complex pert = compose_scalar_maps(gt, dt, omegas[i]);
      const double rel = std::abs(pert - exact[i]) / std::abs(exact[i]);
      rep.points[i].max_rel_error = std::max(rep.points[i].max_rel_error, rel);
    }
  }
  return rep;
}

}  // namespace cfgreen
