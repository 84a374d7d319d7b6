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

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "exact_reference.hpp"
#include "lattice_models.hpp"

using namespace cfgreen;

namespace {

const Complex I1{0.0, 1.0};

OperatorSum op(int n, std::initializer_list<std::pair<std::string, Complex>> terms) {
  std::vector<std::pair<std::string, Complex>> v(terms);
  return OperatorSum::from_terms(n, v);
}

std::vector<double> sorted_eigs(const OperatorSum& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(to_dense(H));
  std::vector<double> e(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("Jordan-Wigner annihilators") {
  const HubbardSpec one{1, 1.0, 0.0};
  CHECK(jordan_wigner_annihilation(0, Spin::up, one) == op(2, {{"XI", 0.5}, {"YI", 0.5 * I1}}));
  const HubbardSpec two{2, 1.0, 0.0};
  CHECK(jordan_wigner_annihilation(1, Spin::up, two) == op(4, {{"ZXII", 0.5}, {"ZYII", 0.5 * I1}}));
  CHECK(spin_orbital_qubit(1, Spin::down, two) == 3);
}

TEST_CASE("canonical anticommutation relations") {
  const HubbardSpec spec{3, 1.0, 2.0};
  std::vector<OperatorSum> a;
  for (Spin s : {Spin::up, Spin::down})
    for (int j = 0; j < 3; ++j) a.push_back(jordan_wigner_annihilation(j, s, spec));
  const auto id = OperatorSum::identity(spec.n_qubits());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(anticommutator(a[i], dagger(a[j])) == (i == j ? id : OperatorSum(spec.n_qubits())));
      CHECK(anticommutator(a[i], a[j]).empty());
    }
}

TEST_CASE("number operator is a^dag a = (I - Z)/2") {
  const HubbardSpec spec{1, 1.0, 0.0};
  const auto n = jordan_wigner_number(0, Spin::up, spec);
  const auto a = jordan_wigner_annihilation(0, Spin::up, spec);
  CHECK(n == multiply(dagger(a), a));
  CHECK(n == op(2, {{"II", 0.5}, {"ZI", -0.5}}));
  const auto pool = build_pool({PoolKind::number, {0}, {Spin::up}}, spec);
  REQUIRE(pool.size() == 1);
  CHECK(pool[0] == n);
}

TEST_CASE("Hubbard Hamiltonian") {
  SUBCASE("single site has only the on-site term") {
    const HubbardSpec spec{1, 3.0, 2.5};
    const auto H = build_hubbard(spec);
    const auto expect = 2.5 * multiply(jordan_wigner_number(0, Spin::up, spec), jordan_wigner_number(0, Spin::down, spec));
    CHECK((H - expect).max_abs_coefficient() < 1e-14);
  }
  SUBCASE("two free sites: single-particle levels +-t per spin") {
    const HubbardSpec spec{2, 1.5, 0.0};
    const auto e = sorted_eigs(build_hubbard(spec));
    // many-body levels are sums over occupied +-t orbitals of both spins
    CHECK(e.front() == doctest::Approx(-3.0));
    CHECK(e.back() == doctest::Approx(3.0));
    CHECK(std::count_if(e.begin(), e.end(), [](double x) { return std::abs(x + 1.5) < 1e-10; }) == 4);
  }
  SUBCASE("Hermitian and number conserving") {
    const HubbardSpec spec{4, 1.0, 4.0};
    const auto H = build_hubbard(spec);
    CHECK(dagger(H) == H);
    const Spin up = Spin::up, dn = Spin::down;
    CHECK(commutator(H, total_number(spec, &up)).empty());
    CHECK(commutator(H, total_number(spec, &dn)).empty());
    CHECK(commutator(H, total_number(spec, nullptr)).empty());
  }
}

TEST_CASE("compact dimer") {
  const auto e0 = sorted_eigs(build_dimer_compact(0.0, 1.0));
  CHECK(e0[0] == doctest::Approx(-2.0));
  CHECK(e0[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e0[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e0[3] == doctest::Approx(2.0));

  const auto diag = build_dimer_compact(3.0, 0.0);
  const CMatrix d = to_dense(diag);
  CHECK((d - CMatrix(CVector(Eigen::Vector4cd(3.0, 0.0, 0.0, 3.0)).asDiagonal())).norm() < 1e-14);

  CHECK(dimer_ground_energy(4.0, 1.0) == doctest::Approx(2.0 - std::sqrt(8.0)));
  CHECK(sorted_eigs(build_dimer_compact(4.0, 1.0))[0] == doctest::Approx(2.0 - std::sqrt(8.0)));
}

TEST_CASE("dimer ground state") {
  const CVector v0 = dimer_ground_state(0.0, 1.0);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(v0(k) - 0.5) < 1e-14);
  for (double U : {0.0, 0.5, 2.0, 4.0, 8.0})
    for (double t : {0.5, 1.0, 2.0}) {
      const CVector v = dimer_ground_state(U, t);
      CHECK(std::abs(v.norm() - 1.0) < 1e-14);
      const CVector r = to_dense(build_dimer_compact(U, t)) * v - dimer_ground_energy(U, t) * v;
      CHECK(r.norm() < 1e-12);
    }
  CHECK_THROWS_AS(dimer_ground_state(1.0, 0.0), DegeneracyError);
}

TEST_CASE("dimer number operators") {
  CHECK(dimer_number(0, Spin::up) == op(2, {{"II", 0.5}, {"ZI", 0.5}}));
  CHECK(dimer_number(1, Spin::up) == op(2, {{"II", 0.5}, {"ZI", -0.5}}));
  CHECK(dimer_number(0, Spin::down) == op(2, {{"II", 0.5}, {"IZ", 0.5}}));
  // one electron per spin species
  CHECK(dimer_number(0, Spin::up) + dimer_number(1, Spin::up) == OperatorSum::identity(2));
  CHECK_THROWS(build_dimer_pool({PoolKind::annihilation, {0}, {Spin::up}}));
}

TEST_CASE("operator pools") {
  const HubbardSpec spec{4, 1.0, 4.0};
  const auto pool = build_pool({PoolKind::annihilation, {0, 1, 2, 3}, {Spin::up}}, spec);
  REQUIRE(pool.size() == 4);
  for (int j = 0; j < 4; ++j) CHECK(max_weight(pool[j]) == j + 1);
  CHECK_THROWS_AS(build_pool({PoolKind::annihilation, {}, {Spin::up}}, spec), ConfigError);
  CHECK_THROWS(build_pool({PoolKind::annihilation, {4}, {Spin::up}}, spec));
}

TEST_CASE("pool descriptors") {
  const auto p = parse_pool("a_up:0-3");
  CHECK(p.kind == PoolKind::annihilation);
  CHECK(p.sites == std::vector<int>{0, 1, 2, 3});
  const auto q = parse_pool("n_dn:0,2");
  CHECK(q.kind == PoolKind::number);
  CHECK(q.sites == std::vector<int>{0, 2});
  CHECK(q.spins == std::vector<Spin>{Spin::down});
  const auto r = parse_pool("a_updn:1");
  CHECK(r.spins.size() == 2);
  for (const auto* s : {"a_up:0-3", "n_dn:0,2", "a_updn:1"}) CHECK(parse_pool(format_pool(parse_pool(s))).sites == parse_pool(s).sites);
  CHECK_THROWS_AS(parse_pool("b_up:0"), ConfigError);
  CHECK_THROWS_AS(parse_pool("a_up:"), ConfigError);
}
