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

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "operator_algebra.hpp"

namespace cfgreen {

enum class Spin { up, down };

/// Open-boundary 1D Fermi-Hubbard chain. Qubit layout is blocked: qubits
/// 0..N-1 hold the spin-up orbitals in site order, N..2N-1 the spin-down ones.
struct HubbardSpec {
  int sites = 1;
  double t = 1.0;
  double U = 0.0;

  int n_qubits() const { return 2 * sites; }
};

enum class PoolKind { annihilation, number };

struct OperatorPoolSpec {
  PoolKind kind = PoolKind::annihilation;
  std::vector<int> sites;
  std::vector<Spin> spins{Spin::up};
};

int spin_orbital_qubit(int site, Spin spin, const HubbardSpec& spec);

/// a_{site,spin} = Z...Z (X + iY)/2 with the Z string on all lower qubits.
/// Under this encoding a|1> = |0>, so a^dag a = (I - Z)/2.
OperatorSum jordan_wigner_annihilation(int site, Spin spin, const HubbardSpec& spec);
OperatorSum jordan_wigner_number(int site, Spin spin, const HubbardSpec& spec);

/// H = -t sum_{j,s} (a^dag_{j s} a_{j+1 s} + h.c.) + U sum_j n_{j up} n_{j down}
OperatorSum build_hubbard(const HubbardSpec& spec);

/// Total number operator for one spin species (or both when `spin` is null).
OperatorSum total_number(const HubbardSpec& spec, const Spin* spin);

/// Two-qubit symmetry-reduced dimer: (U/2)(II + ZZ) - t(IX + XI).
OperatorSum build_dimer_compact(double U, double t);

/// (alpha, beta, beta, alpha)/sqrt(2 N), alpha = 4, beta = U/t + sqrt(U^2/t^2 + 16),
/// N = alpha^2 + beta^2. The ground state for t > 0.
Eigen::VectorXcd dimer_ground_state(double U, double t);

/// Closed form U/2 - sqrt(U^2/4 + 4 t^2).
double dimer_ground_energy(double U, double t);

/// Number operators of the dimer's compact encoding, indexed by (site, spin).
/// Sites are 0 or 1.
OperatorSum dimer_number(int site, Spin spin);

std::vector<OperatorSum> build_pool(const OperatorPoolSpec& pool, const HubbardSpec& spec);
std::vector<OperatorSum> build_dimer_pool(const OperatorPoolSpec& pool);

/// Parse "a_up:0-3", "n_dn:0,2", "a_updn:1" style pool descriptors.
OperatorPoolSpec parse_pool(const std::string& text);
std::string format_pool(const OperatorPoolSpec& pool);

}  // namespace cfgreen
