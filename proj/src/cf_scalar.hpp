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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expectation_backends.hpp"
#include "operator_algebra.hpp"

namespace cfgreen {

struct ScalarOptions {
  double termination_tol = 1e-12;  // Gamma_j / Gamma_0 at or below this closes the chain
  double reorth_ratio = 1e4;       // second projection pass when the norm drops by more
  double canonical_tol = kDefaultCanonicalTolerance;
};

/// Orthogonal operator chain A^(0..) with Gamma_j = (A_j, A_j) and
/// Delta_j = ([H, A_j], A_j). When the chain closes at level k, entry k holds
/// the vanishing Gamma and a zero Delta, and terminated_at = k.
struct ScalarCFData {
  std::vector<OperatorSum> chain;
  std::vector<double> gammas;
  std::vector<Complex> deltas;
  std::optional<int> terminated_at;
  std::string backend_fingerprint;

  int computed_levels() const { return static_cast<int>(gammas.size()); }
  /// Highest level that contributes to G_n.
  int effective_level(int n) const;
};

ScalarCFData scalar_recursion(const OperatorSum& H, const OperatorSum& A, int n,
                              const ExpectationBackend& backend, const ScalarOptions& opts = {});

/// G_n(w) = -i * (s_0 o s_1 o ... o s_n)(0), s_j(z) = -Gamma_j^2 / (Gamma_j w + Delta_j + z).
Complex eval_scalar_cf(const ScalarCFData& data, Complex omega, int n);

/// Same value from the numerator/denominator three-term recurrence.
Complex eval_scalar_recurrence(const ScalarCFData& data, Complex omega, int n);

/// Same maps, arbitrary coefficients (used by the stability experiment).
Complex compose_scalar_maps(std::span<const double> gammas, std::span<const Complex> deltas,
                            Complex omega);

/// Coefficients (lowest degree first) of the denominator polynomial B_n(w).
std::vector<Complex> denominator_polynomial(const ScalarCFData& data, int n);
/// Roots via the companion matrix.
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs);

struct BoundResult {
  double lambda = 0.0;
  double bound = 0.0;
};

/// Lambda = sqrt(Gamma_n / (Gamma_{n-1} r (1-r))),
/// bound = r/(1-2r) Gamma_n |r(1-r) Gamma_{n-1}/Gamma_n|^{n+1/2}; valid for Im(w) >= Lambda.
BoundResult a_priori_bound(const ScalarCFData& data, int n, double r);

struct BoundScan {
  double r = 0.25;
  BoundResult result;
};
/// Minimum bound over r in {0.05, 0.10, ..., 0.45}.
BoundScan a_priori_bound_scan(const ScalarCFData& data, int n);

struct StabilityPoint {
  Complex omega;
  double q = 0.0;             // max_j |g_j(w)|
  double max_rel_error = 0.0;  // max over trials of |eps0(w)|
  bool applicable = false;    // q < 1
  double bound = 0.0;         // 6 s / (1 - q) when applicable
};

struct StabilityReport {
  double s = 0.0;
  int trials = 0;
  int level = 0;
  std::vector<StabilityPoint> points;
  bool all_within_bound() const;
};

/// Relative noise of magnitude <= s on every Gamma_j and Delta_j (one draw per
/// trial, shared across the grid); compares the perturbed fraction with the
/// exact one at level n.
StabilityReport jones_thron_experiment(const ScalarCFData& data, int n, double s,
                                       std::span<const Complex> omegas, int trials,
                                       std::uint64_t seed);

/// g_j(w) for the exact coefficients, j = 0..n.
std::vector<Complex> jones_thron_factors(const ScalarCFData& data, int n, Complex omega);

}  // namespace cfgreen
