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

#include "exact_reference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "errors.hpp"

namespace cfgreen {
namespace {

constexpr Complex kI{0.0, 1.0};

std::uint64_t to_basis_mask(std::uint64_t m, int n) {
  std::uint64_t out = 0;
  for (int q = 0; q < n; ++q)
    if ((m >> q) & 1U) out |= 1ULL << (n - 1 - q);
  return out;
}

void check_ed_limit(int n, int max_qubits) {
  if (n > max_qubits)
    throw DimensionError("operator on " + std::to_string(n) +
                         " qubits exceeds the dense limit of " + std::to_string(max_qubits));
}

void check_upper(Complex w) {
  if (!(w.imag() > 0))
    throw DomainError("frequency must have Im(w) > 0, got Im(w) = " + std::to_string(w.imag()));
}

}  // namespace

CMatrix to_dense(const OperatorSum& a, int max_qubits) {
  const int n = a.n_qubits();
  check_ed_limit(n, max_qubits);
  const Eigen::Index dim = Eigen::Index(1) << n;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& t : a.terms()) {
    const auto bx = to_basis_mask(t.word.x, n), bz = to_basis_mask(t.word.z, n);
    static constexpr Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex c = t.coefficient * ipow[std::popcount(t.word.x & t.word.z) % 4];
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const double sign = (std::popcount(bz & b) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ bx), static_cast<Eigen::Index>(b)) += sign * c;
    }
  }
  return m;
}

CMatrix apply_operator(const OperatorSum& a, const CMatrix& psi) {
  const int n = a.n_qubits();
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (psi.rows() != dim)
    throw DimensionError("vector length " + std::to_string(psi.rows()) +
                         " does not match operator dimension " + std::to_string(dim));
  CMatrix out = CMatrix::Zero(dim, psi.cols());
  static constexpr Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : a.terms()) {
    const auto bx = to_basis_mask(t.word.x, n), bz = to_basis_mask(t.word.z, n);
    const Complex c = t.coefficient * ipow[std::popcount(t.word.x & t.word.z) % 4];
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const Complex f = (std::popcount(bz & b) & 1) ? -c : c;
      out.row(static_cast<Eigen::Index>(b ^ bx)) += f * psi.row(static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

double Spectrum::norm() const {
  if (energies.size() == 0) return 0.0;
  return std::max(std::abs(energies(0)), std::abs(energies(energies.size() - 1)));
}

Spectrum diagonalize(const OperatorSum& H, int max_qubits) {
  if (!is_hermitian(H)) throw DomainError("Hamiltonian is not Hermitian");
  Spectrum s;
  const CMatrix h = to_dense(H, max_qubits);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
  s.energies = es.eigenvalues();
  s.vectors = es.eigenvectors();
  s.hamiltonian = H;
  s.n_qubits = H.n_qubits();
  return s;
}

// ---------------------------------------------------------------------------

bool state_commutes(const CMatrix& rho, const OperatorSum& H, double tol) {
  const CMatrix h = to_dense(H);
  if (h.rows() != rho.rows()) throw DimensionError("state and Hamiltonian dimensions differ");
  const double hn = h.cwiseAbs().rowwise().sum().maxCoeff();
  return (rho * h - h * rho).norm() <= tol * std::max(1.0, hn);
}

DensityState DensityState::pure_with_flag(const CVector& psi, bool commutes) {
  const double nrm = psi.norm();
  if (std::abs(nrm - 1.0) > 1e-10)
    throw DomainError("pure state must have unit norm (got " + std::to_string(nrm) + ")");
  DensityState s;
  s.pure_ = true;
  s.commutes_ = commutes;
  s.weights_ = RVector::Ones(1);
  s.components_ = psi;
  return s;
}

DensityState DensityState::mixed_with_flag(const CMatrix& rho, bool commutes) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  if ((rho - rho.adjoint()).norm() > 1e-10 * std::max(1.0, rho.norm()))
    throw DomainError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) throw DomainError("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()));
  const RVector& p = es.eigenvalues();
  if (p.minCoeff() < -1e-12) throw DomainError("density matrix is not positive semidefinite");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = p.size() - 1; k >= 0; --k)
    if (p(k) > 1e-15) keep.push_back(k);
  DensityState s;
  s.pure_ = false;
  s.commutes_ = commutes;
  s.weights_.resize(static_cast<Eigen::Index>(keep.size()));
  s.components_.resize(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    s.weights_(static_cast<Eigen::Index>(i)) = p(keep[i]);
    s.components_.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
  }
  return s;
}

DensityState DensityState::pure(const CVector& psi, const OperatorSum& H) {
  return pure_with_flag(psi, state_commutes(psi * psi.adjoint(), H));
}

DensityState DensityState::mixed(const CMatrix& rho, const OperatorSum& H) {
  return mixed_with_flag(rho, state_commutes(rho, H));
}

int DensityState::n_qubits() const {
  return std::countr_zero(static_cast<std::uint64_t>(dimension()));
}

CMatrix DensityState::matrix() const {
  return components_ * weights_.cast<Complex>().asDiagonal() * components_.adjoint();
}

// ---------------------------------------------------------------------------

DensityState ground_state_in_sector(const Spectrum& spectrum, std::span<const OperatorSum> number_ops,
                                    std::span<const double> targets, double tol,
                                    double degeneracy_tol) {
  if (number_ops.size() != targets.size())
    throw ConfigError("sector targets and number operators differ in length");
  for (const auto& N : number_ops)
    if (!commutator(spectrum.hamiltonian, N).empty())
      throw DomainError("sector operator does not commute with the Hamiltonian");

  const auto dim = spectrum.dimension();
  const double etol = degeneracy_tol * std::max(1.0, spectrum.norm());

  struct Candidate {
    double energy;
    CVector vec;
  };
  std::vector<Candidate> in_sector;

  Eigen::Index start = 0;
  while (start < dim) {
    Eigen::Index stop = start + 1;
    while (stop < dim && spectrum.energies(stop) - spectrum.energies(stop - 1) <= etol) ++stop;
    CMatrix block = spectrum.vectors.middleCols(start, stop - start);

    if (!number_ops.empty()) {
      // weights 1, sqrt2, sqrt3... keep integer quantum-number tuples distinct
      CMatrix mix = CMatrix::Zero(block.cols(), block.cols());
      std::vector<CMatrix> applied;
      for (std::size_t k = 0; k < number_ops.size(); ++k) {
        applied.push_back(apply_operator(number_ops[k], block));
        mix += std::sqrt(static_cast<double>(k + 1)) * (block.adjoint() * applied.back());
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (mix + mix.adjoint()));
      block = block * es.eigenvectors();
    }

    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      bool ok = true;
      for (std::size_t k = 0; k < number_ops.size() && ok; ++k) {
        const CVector v = block.col(c);
        const double q = v.dot(apply_operator(number_ops[k], v).col(0)).real();
        ok = std::abs(q - targets[k]) <= tol;
      }
      if (ok) {
        const CVector v = block.col(c);
        const double e = v.dot(apply_operator(spectrum.hamiltonian, v).col(0)).real();
        in_sector.push_back({e, v});
      }
    }
    start = stop;
  }

  if (in_sector.empty()) {
    std::ostringstream msg;
    msg << "no eigenstate in the requested sector (targets";
    for (double t : targets) msg << ' ' << t;
    msg << ')';
    throw DegeneracyError(msg.str());
  }
  std::stable_sort(in_sector.begin(), in_sector.end(),
                   [](const Candidate& a, const Candidate& b) { return a.energy < b.energy; });
  if (in_sector.size() > 1) {
    const double gap = in_sector[1].energy - in_sector[0].energy;
    if (gap <= etol) {
      std::ostringstream msg;
      msg << "sector ground state is degenerate (gap " << gap << " <= " << etol << ")";
      throw DegeneracyError(msg.str());
    }
  }
  CVector psi = in_sector[0].vec;
  psi /= psi.norm();
  return DensityState::pure_with_flag(psi, true);
}

// ---------------------------------------------------------------------------

Complex PoleExpansion::operator()(Complex omega) const {
  check_upper(omega);
  Complex acc = 0.0;
  for (std::size_t k = 0; k < poles.size(); ++k) acc += weights[k] / (omega - poles[k]);
  return kI * acc;
}

Complex PoleExpansion::static_weight() const {
  return std::accumulate(weights.begin(), weights.end(), Complex(0.0));
}

PoleExpansion lehmann_poles(const Spectrum& spectrum, const DensityState& rho, const OperatorSum& A,
                            const OperatorSum& B) {
  const auto dim = spectrum.dimension();
  if (rho.dimension() != dim || A.n_qubits() != spectrum.n_qubits ||
      B.n_qubits() != spectrum.n_qubits)
    throw DimensionError("operator, state and spectrum dimensions differ");
  const CMatrix& V = spectrum.vectors;
  const CMatrix At = V.adjoint() * apply_operator(A, V);
  // (B rho)~ = V^dag B sum_k p_k |phi_k><phi_k| V
  const CMatrix phit = V.adjoint() * rho.components();
  const CMatrix Bphit = V.adjoint() * apply_operator(B, rho.components());
  const CMatrix Brho = Bphit * rho.weights().cast<Complex>().asDiagonal() * phit.adjoint();

  PoleExpansion out;
  double total = 0;
  CMatrix W(dim, dim);
  for (Eigen::Index m = 0; m < dim; ++m)
    for (Eigen::Index n = 0; n < dim; ++n) {
      W(m, n) = At(m, n) * Brho(n, m);
      total += std::abs(W(m, n));
    }
  const double cut = 1e-16 * total;
  for (Eigen::Index m = 0; m < dim; ++m)
    for (Eigen::Index n = 0; n < dim; ++n) {
      if (std::abs(W(m, n)) <= cut) continue;
      out.poles.push_back(spectrum.energies(n) - spectrum.energies(m));
      out.weights.push_back(W(m, n));
    }
  return out;
}

std::vector<Complex> lehmann_green(const Spectrum& spectrum, const DensityState& rho,
                                   const OperatorSum& A, const OperatorSum& B,
                                   std::span<const Complex> omegas) {
  for (Complex w : omegas) check_upper(w);
  const PoleExpansion pe = lehmann_poles(spectrum, rho, A, B);
  std::vector<Complex> out;
  out.reserve(omegas.size());
  for (Complex w : omegas) out.push_back(pe(w));
  return out;
}

std::vector<double> lorentzian_spectral(const Spectrum& spectrum, const DensityState& rho,
                                        const OperatorSum& A, std::span<const double> omega0,
                                        double eta) {
  if (!(eta > 0)) throw DomainError("eta must be positive");
  if (!rho.commutes_with_H()) throw DomainError("Lorentzian form needs a state commuting with H");
  const CMatrix& V = spectrum.vectors;
  const CMatrix& phi = rho.components();
  const CMatrix Hphi = apply_operator(spectrum.hamiltonian, phi);
  const CMatrix Adphi = V.adjoint() * apply_operator(dagger(A), phi);

  std::vector<double> poles, weights;
  for (Eigen::Index k = 0; k < phi.cols(); ++k) {
    const double ek = phi.col(k).dot(Hphi.col(k)).real();
    if ((Hphi.col(k) - ek * phi.col(k)).norm() > 1e-8 * std::max(1.0, spectrum.norm()))
      throw DomainError("state component is not an energy eigenvector");
    for (Eigen::Index n = 0; n < V.cols(); ++n) {
      const double w = rho.weights()(k) * std::norm(Adphi(n, k));
      if (w == 0.0) continue;
      poles.push_back(spectrum.energies(n) - ek);
      weights.push_back(w);
    }
  }
  std::vector<double> out;
  out.reserve(omega0.size());
  for (double w0 : omega0) {
    double acc = 0;
    for (std::size_t p = 0; p < poles.size(); ++p) {
      const double d = w0 - poles[p];
      acc += weights[p] * eta / (d * d + eta * eta);
    }
    out.push_back(acc);
  }
  return out;
}

double quadrature_horizon(double eta, double abs_static, double target) {
  if (!(eta > 0)) throw DomainError("eta must be positive");
  if (abs_static <= 0) return 0.0;
  return std::max(0.0, std::log(abs_static / (eta * target)) / eta);
}

std::vector<Complex> time_quadrature_green(const Spectrum& spectrum, const DensityState& rho,
                                           const OperatorSum& A, const OperatorSum& B,
                                           std::span<const Complex> omegas, double t_max,
                                           long steps) {
  for (Complex w : omegas) check_upper(w);
  if (t_max < 0) throw DomainError("T_max must be nonnegative");
  std::vector<Complex> out(omegas.size(), Complex(0.0));
  if (t_max == 0) return out;
  if (steps <= 0) {
    // h * (fastest phase rate) <= 0.05 keeps the Simpson error near 1e-8 relative
    double wmax = 0.0;
    for (Complex w : omegas) wmax = std::max(wmax, std::abs(w.real()));
    const double span = spectrum.energies.size() ? spectrum.energies.maxCoeff() - spectrum.energies.minCoeff() : 0.0;
    steps = std::max(200L, static_cast<long>(std::ceil(20.0 * t_max * (span + wmax + 1.0))));
  }
  if (steps % 2) ++steps;

  // Tr(rho A(t) B) = sum_k p_k <e^{-iHt} phi_k| A |e^{-iHt} B phi_k>
  const CMatrix& V = spectrum.vectors;
  const CMatrix At = V.adjoint() * apply_operator(A, V);
  const CMatrix u0 = V.adjoint() * rho.components();
  const CMatrix v0 = V.adjoint() * apply_operator(B, rho.components());
  const RVector& p = rho.weights();
  const RVector& E = spectrum.energies;

  const double h = t_max / static_cast<double>(steps);
  CVector phase(E.size());
  for (long s = 0; s <= steps; ++s) {
    const double t = h * static_cast<double>(s);
    for (Eigen::Index m = 0; m < E.size(); ++m) phase(m) = std::exp(-kI * E(m) * t);
    Complex g = 0.0;
    for (Eigen::Index k = 0; k < u0.cols(); ++k) {
      const CVector u = phase.cwiseProduct(u0.col(k));
      const CVector v = phase.cwiseProduct(v0.col(k));
      g += p(k) * u.dot(At * v);
    }
    const double wgt = (s == 0 || s == steps) ? h / 3.0 : (s % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    for (std::size_t i = 0; i < omegas.size(); ++i)
      out[i] += wgt * std::exp(kI * omegas[i] * t) * g;
  }
  return out;
}

Complex time_quadrature_green(const Spectrum& spectrum, const DensityState& rho, const OperatorSum& A,
                              const OperatorSum& B, Complex omega, double t_max, long steps) {
  const Complex w[1] = {omega};
  return time_quadrature_green(spectrum, rho, A, B, std::span<const Complex>(w, 1), t_max, steps)[0];
}

}  // namespace cfgreen
