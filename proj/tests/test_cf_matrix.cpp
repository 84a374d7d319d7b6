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


#include <doctest.h>

#include <cmath>

#include "analysis.hpp"
#include "cf_matrix.hpp"
#include "errors.hpp"

using namespace cfgreen;

namespace {

const Complex I1{0.0, 1.0};

Experiment hubbard(int sites, double U, const std::string& pool) {
  RunConfig c;
  c.model.sites = sites;
  c.model.U = U;
  c.pool = parse_pool(pool);
  return build_experiment(c);
}

CMatrix lehmann_matrix(const Experiment& ex, Complex w) {
  const auto N = static_cast<Eigen::Index>(ex.ops.size());
  CMatrix G(N, N);
  const std::vector<Complex> one{w};
  for (Eigen::Index a = 0; a < N; ++a)
    for (Eigen::Index b = 0; b < N; ++b)
      G(a, b) = lehmann_green(ex.spectrum, *ex.rho, ex.ops[a], dagger(ex.ops[b]), one)[0];
  return G;
}

}  // namespace

TEST_CASE("one operator reduces to the scalar fraction") {
  const auto ex = hubbard(3, 2.0, "a_up:1");
  const ExactBackend b(*ex.rho, true);
  const auto m = matrix_recursion(ex.H, ex.ops, 4, b);
  const auto s = scalar_recursion(ex.H, ex.ops[0], 4, b);
  for (int n = 0; n <= 4; ++n)
    for (Complex w : {Complex(-1.0, 0.1), Complex(0.4, 0.5), Complex(3.0, 0.05)})
      CHECK(std::abs(eval_matrix_cf(m, w, n)(0, 0) - eval_scalar_cf(s, w, n)) < 1e-10);
}

TEST_CASE("complete pool is exact at level 0") {
  const auto ex = hubbard(3, 2.0, "a_up:0-2");
  const ExactBackend b(*ex.rho, true);
  const auto m = matrix_recursion(ex.H, ex.ops, 2, b);
  REQUIRE(m.terminated_at.has_value());
  CHECK(*m.terminated_at == 1);
  CHECK(m.levels[0].rank == 3);
  for (Complex w : {Complex(-2.0, 0.1), Complex(0.5, 0.1), Complex(4.0, 1.0)})
    CHECK((eval_matrix_cf(m, w, 0) - lehmann_matrix(ex, w)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("large-frequency tail") {
  const auto ex = hubbard(3, 4.0, "a_up:0,2");
  const ExactBackend b(*ex.rho, true);
  const auto m = matrix_recursion(ex.H, ex.ops, 1, b);
  const Complex w(0.0, 1e6);
  const CMatrix G = eval_matrix_cf(m, w, 1);
  CHECK((I1 * G * w + m.levels[0].R).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("recurrence and composition agree") {
  const auto ex = hubbard(4, 4.0, "a_up:0,3");
  const ExactBackend b(*ex.rho, true);
  const auto m = matrix_recursion(ex.H, ex.ops, 3, b);
  REQUIRE(m.full_rank(0, 3));
  for (int n = 0; n <= 3; ++n)
    for (Complex w : {Complex(-1.0, 0.5), Complex(2.0, 0.5)}) {
      const CMatrix a = eval_matrix_cf(m, w, n, MatrixForm::normalized);
      const CMatrix p = pq_recursion(m, w, n).G;
      CHECK((a - p).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + a.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("det Q zeros are real") {
  const auto ex = hubbard(4, 4.0, "a_up:0,3");
  const ExactBackend b(*ex.rho, true);
  const auto m = matrix_recursion(ex.H, ex.ops, 3, b);
  for (int n = 0; n <= 3; ++n) {
    const auto roots = det_q_roots(m, n);
    CHECK(roots.size() == static_cast<std::size_t>(2 * (n + 1)));
    for (Complex r : roots) CHECK(std::abs(r.imag()) < 1e-6);
  }
}

TEST_CASE("hermitize") {
  const auto ex = hubbard(3, 2.0, "a_up:0,2");
  const ExactBackend b(*ex.rho, true);
  MatrixOptions raw;
  raw.hermitize = false;
  raw.real_coefficients = false;
  const auto m = matrix_recursion(ex.H, ex.ops, 1, b, raw);
  const auto h = hermitize(m, false);
  CHECK((h.levels[0].R - m.levels[0].R).norm() < 1e-12);
  CHECK(h.hermitized);

  auto bent = m;
  CMatrix skew = CMatrix::Zero(2, 2);
  skew(0, 1) = 0.01;
  skew(1, 0) = -0.01;
  bent.levels[0].Delta += skew;
  const auto fixed = hermitize(bent, false);
  CHECK((fixed.levels[0].Delta - m.levels[0].Delta).norm() < 1e-12);
  CHECK((fixed.levels[0].Delta - fixed.levels[0].Delta.adjoint()).norm() < 1e-15);
}

TEST_CASE("threshold changes do not move a well-conditioned result") {
  const auto ex = hubbard(4, 4.0, "a_up:0,3");
  const ExactBackend b(*ex.rho, true);
  MatrixOptions lo, hi;
  lo.threshold = 1e-12;
  hi.threshold = 1e-6;
  const auto a = matrix_recursion(ex.H, ex.ops, 3, b, lo);
  const auto c = matrix_recursion(ex.H, ex.ops, 3, b, hi);
  for (Complex w : {Complex(-1.0, 0.1), Complex(1.5, 0.1)})
    CHECK((eval_matrix_cf(a, w, 3) - eval_matrix_cf(c, w, 3)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("rephasing and reordering the pool") {
  const auto ex = hubbard(4, 2.0, "n_up:0-1");
  // complex pool: the backend must keep imaginary parts
  const ExactBackend b(*ex.rho, false);
  const auto m = matrix_recursion(ex.H, ex.ops, 2, b);
  // the recursion fixes eigenvector phases itself, so the input phases must drop out
  const Complex ph = std::polar(1.0, 0.7);
  const std::vector<OperatorSum> moved{ph * ex.ops[1], -1.0 * ex.ops[0]};
  const auto g = matrix_recursion(ex.H, moved, 2, b);
  for (Complex w : {Complex(0.3, 0.2), Complex(-4.0, 0.1)}) {
    const CMatrix a = eval_matrix_cf(m, w, 2), c = eval_matrix_cf(g, w, 2);
    CHECK(std::abs(c(0, 0) - a(1, 1)) < 1e-12);
    CHECK(std::abs(c(1, 1) - a(0, 0)) < 1e-12);
    CHECK(std::abs(c(0, 1) + ph * a(1, 0)) < 1e-12);
  }
}

TEST_CASE("perturbed backend still yields finite values") {
  const auto ex = hubbard(3, 2.0, "a_up:0,2");
  const auto sigma = make_sigma(SigmaKind::random_pure, ex.H.n_qubits(), 4, "", ex.H);
  const PerturbedBackend b(*ex.rho, sigma, 0.05, false, ex.H);
  const auto m = matrix_recursion(ex.H, ex.ops, 2, b);
  for (Complex w : {Complex(0.0, 0.1), Complex(2.0, 0.1)})
    CHECK(eval_matrix_cf(m, w, 2).allFinite());
}

TEST_CASE("degenerate input") {
  const auto ex = hubbard(2, 2.0, "a_up:0");
  const ExactBackend b(*ex.rho, true);
  const std::vector<OperatorSum> zero{OperatorSum(ex.H.n_qubits())};
  CHECK_THROWS_AS(matrix_recursion(ex.H, zero, 1, b), DegeneracyError);
  CHECK_THROWS_AS(eval_matrix_cf(matrix_recursion(ex.H, ex.ops, 1, b), {0.0, -1.0}, 0), DomainError);
  CHECK(parse_matrix_form("normalized") == MatrixForm::normalized);
  CHECK_THROWS_AS(parse_matrix_form("sideways"), ConfigError);
}
