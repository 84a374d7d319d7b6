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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exact_reference.hpp"
#include "expectation_backends.hpp"
#include "operator_algebra.hpp"

namespace cfgreen {

struct MatrixOptions {
  /// Eigenvalues of R at or below threshold * max(lambda_max(level), lambda_max(level 0))
  /// are dropped. The level-0 scale lets a closed Krylov space register as rank 0.
  double threshold = 1e-10;
  /// Unset: on when the measured state commutes with H.
  std::optional<bool> hermitize;
  /// Unset: on when hermitizing with a reality-enforcing backend, a real H and a real pool.
  std::optional<bool> real_coefficients;
  double canonical_tol = kDefaultCanonicalTolerance;
};

struct MatrixCFLevel {
  CMatrix R;      // R_ab = (A_a, A_b)
  RVector D;      // eigenvalues, descending, dropped ones set to 0
  CMatrix U;      // rows are eigenvectors (U = V^dag)
  CMatrix M;      // sqrt(D) U; zero rows where dropped
  CMatrix Delta;  // Delta_km = (P_k, A^_m)
  std::vector<OperatorSum> normalized_ops;  // zero operator where dropped
  std::vector<bool> retained;
  int rank = 0;
};

struct MatrixCFData {
  std::vector<MatrixCFLevel> levels;
  int n_ops = 0;
  double threshold = 0.0;
  bool hermitized = false;
  bool real_coefficients = false;
  std::optional<int> terminated_at;  // first level with rank 0
  std::string backend_fingerprint;
  std::vector<std::string> warnings;

  int computed_levels() const { return static_cast<int>(levels.size()); }
  int effective_level(int n) const;
  bool full_rank(int from, int to) const;
};

MatrixCFData matrix_recursion(const OperatorSum& H, std::span<const OperatorSum> ops, int n,
                              const ExpectationBackend& backend, const MatrixOptions& opts = {});

enum class MatrixForm { normalized, unnormalized };

/// Composes s_j(X) = -[w + Delta_j + M_{j+1}^dag X M_{j+1}]^{-1} from the zero
/// matrix at level n down to 0 (inverse taken on the retained block of each
/// level). Returns -i X for the normalized form and -i M_0^dag X M_0 otherwise.
CMatrix eval_matrix_cf(const MatrixCFData& data, Complex omega, int n,
                       MatrixForm form = MatrixForm::unnormalized);

struct PQResult {
  CMatrix P;  // P_n M_{n+1}
  CMatrix Q;  // Q_n M_{n+1}
  CMatrix G;  // -i P Q^{-1}, equals the normalized form
};

/// Matrix three-term recurrence; every M_1..M_n must be invertible.
PQResult pq_recursion(const MatrixCFData& data, Complex omega, int n);

/// Zeros of det Q_n(w) from the block companion matrix of the matrix polynomial.
std::vector<Complex> det_q_roots(const MatrixCFData& data, int n);

/// (R + R^dag)/2 and the Hermitian part of Delta (real part too when `real`).
MatrixCFData hermitize(const MatrixCFData& data, bool real);

std::string to_string(MatrixForm f);
MatrixForm parse_matrix_form(const std::string& s);

}  // namespace cfgreen
