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
#include <optional>
#include <span>
#include <vector>

#include "operator_algebra.hpp"

namespace cfgreen {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr int kDefaultEdLimit = 12;

// Basis ordering: qubit 0 is the most significant bit of the basis index, so
// |b0 b1 ... b_{n-1}> reads left to right like the Pauli word.

CMatrix to_dense(const OperatorSum& a, int max_qubits = kDefaultEdLimit);

/// a|psi> without forming the dense matrix. Works column-wise on matrices.
CMatrix apply_operator(const OperatorSum& a, const CMatrix& psi);

struct Spectrum {
  RVector energies;  // ascending
  CMatrix vectors;   // columns
  OperatorSum hamiltonian{1};
  int n_qubits = 0;

  Eigen::Index dimension() const { return energies.size(); }
  double norm() const;  // max |E|
};

Spectrum diagonalize(const OperatorSum& H, int max_qubits = kDefaultEdLimit);

/// rho = sum_k p_k |phi_k><phi_k|; a pure state keeps a single component.
class DensityState {
 public:
  /// Normalizes nothing: |psi| must be 1 to 1e-10.
  static DensityState pure(const CVector& psi, const OperatorSum& H);
  static DensityState mixed(const CMatrix& rho, const OperatorSum& H);
  /// Escape hatch for callers that already know the commutation status.
  static DensityState pure_with_flag(const CVector& psi, bool commutes_with_H);
  static DensityState mixed_with_flag(const CMatrix& rho, bool commutes_with_H);

  bool is_pure() const { return pure_; }
  bool commutes_with_H() const { return commutes_; }
  Eigen::Index dimension() const { return components_.rows(); }
  int n_qubits() const;

  const RVector& weights() const { return weights_; }
  const CMatrix& components() const { return components_; }
  CMatrix matrix() const;

 private:
  DensityState() = default;
  bool pure_ = true;
  bool commutes_ = false;
  RVector weights_;
  CMatrix components_;
};

/// ||[rho, H]|| <= tol * max(1, ||H||) computed on the dense matrices.
bool state_commutes(const CMatrix& rho, const OperatorSum& H, double tol = 1e-10);

/// Lowest eigenstate whose number-operator expectations sit within `tol` of
/// `targets`. Degenerate clusters are rotated to diagonalize the number
/// operators first. An empty `number_ops` selects the global ground state.
DensityState ground_state_in_sector(const Spectrum& spectrum,
                                    std::span<const OperatorSum> number_ops,
                                    std::span<const double> targets, double tol = 1e-6,
                                    double degeneracy_tol = 1e-8);

/// Pole expansion G(w) = sum_k weights[k] * i / (w - poles[k]).
struct PoleExpansion {
  std::vector<double> poles;
  std::vector<Complex> weights;

  Complex operator()(Complex omega) const;
  Complex static_weight() const;  // Tr(rho A B)
};

/// Green's function G_AB(w) = int_0^inf e^{iwt} Tr(rho A(t) B) dt in
/// Lehmann form: sum_{m,n} <m|A|n><n|B rho|m> * i/(w + E_m - E_n).
PoleExpansion lehmann_poles(const Spectrum& spectrum, const DensityState& rho,
                            const OperatorSum& A, const OperatorSum& B);

std::vector<Complex> lehmann_green(const Spectrum& spectrum, const DensityState& rho,
                                   const OperatorSum& A, const OperatorSum& B,
                                   std::span<const Complex> omegas);

/// Re G_{A A^dag}(w0 + i eta) as an explicit sum of nonnegative Lorentzians.
/// Requires every state component to be an energy eigenvector.
std::vector<double> lorentzian_spectral(const Spectrum& spectrum, const DensityState& rho,
                                        const OperatorSum& A, std::span<const double> omega0,
                                        double eta);

/// Composite Simpson quadrature of int_0^T e^{iwt} Tr(rho A(t) B) dt. `steps`
/// <= 0 picks 20 * T * (spectral width + max |Re w| + 1), at least 200; odd
/// counts are rounded up.
Complex time_quadrature_green(const Spectrum& spectrum, const DensityState& rho,
                              const OperatorSum& A, const OperatorSum& B, Complex omega,
                              double t_max, long steps = 0);

/// Same as above for a whole grid, sharing the time samples of Tr(rho A(t) B).
std::vector<Complex> time_quadrature_green(const Spectrum& spectrum, const DensityState& rho,
                                           const OperatorSum& A, const OperatorSum& B,
                                           std::span<const Complex> omegas, double t_max,
                                           long steps = 0);

/// Smallest T with e^{-eta T} |c| / eta <= target.
double quadrature_horizon(double eta, double abs_static, double target = 1e-10);

}  // namespace cfgreen
