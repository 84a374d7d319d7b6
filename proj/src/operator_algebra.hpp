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

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cfgreen {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 32;

/// Coefficients with |c| <= tol * max(1, max|c|) are dropped on every
/// construction of an OperatorSum.
inline constexpr double kDefaultCanonicalTolerance = 1e-12;

/// Phase-free Pauli word. Bit q of `x` / `z` refers to qubit q; qubit 0 is the
/// leftmost letter of the textual form. Y sets both bits.
struct PauliWord {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  static PauliWord from_string(std::string_view letters);
  std::string to_string(int n_qubits) const;
  char letter(int qubit) const;
  int weight() const;
  /// Lexicographic key over letters (qubit 0 most significant, I < X < Y < Z).
  std::uint64_t sort_key(int n_qubits) const;

  friend bool operator==(const PauliWord&, const PauliWord&) = default;
};

struct PauliTerm {
  Complex coefficient{1.0, 0.0};
  PauliWord word;
  int n_qubits = 0;

  static PauliTerm parse(Complex coefficient, std::string_view letters);
  std::string letters() const { return word.to_string(n_qubits); }
};

/// Product of two words: returns (i^phase, word) with phase in {0,1,2,3}.
std::pair<int, PauliWord> multiply_words(const PauliWord& a, const PauliWord& b);

/// Single-term operator product a*b including the accumulated phase.
PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b);

/// Linear combination of Pauli words on a fixed number of qubits. Always
/// canonical: unique words, sorted lexicographically, no negligible terms.
/// Immutable apart from the compound-assignment operators.
class OperatorSum {
 public:
  struct Term {
    PauliWord word;
    Complex coefficient;
  };

  explicit OperatorSum(int n_qubits);  // the zero operator

  static OperatorSum identity(int n_qubits, Complex scale = 1.0);
  static OperatorSum from_term(const PauliTerm& term);
  static OperatorSum from_terms(int n_qubits,
                                std::span<const std::pair<std::string, Complex>> terms,
                                double tol = kDefaultCanonicalTolerance);

  int n_qubits() const { return n_qubits_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Complex coefficient(const PauliWord& word) const;
  double max_abs_coefficient() const;

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum& operator-=(const OperatorSum& other);
  OperatorSum& operator*=(Complex scale);

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator*(OperatorSum a, Complex s) { return a *= s; }
  friend OperatorSum operator*(Complex s, OperatorSum a) { return a *= s; }
  friend OperatorSum operator-(OperatorSum a) { return a *= -1.0; }
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);
  friend bool operator==(const OperatorSum& a, const OperatorSum& b);

 private:
  friend class TermAccumulator;
  OperatorSum(int n_qubits, std::vector<Term> canonical_terms);

  int n_qubits_;
  std::vector<Term> terms_;
};

/// Collects raw (word, coefficient) contributions and produces a canonical
/// OperatorSum. Used by every arithmetic routine.
class TermAccumulator {
 public:
  explicit TermAccumulator(int n_qubits, std::size_t reserve = 0);
  void add(const PauliWord& word, Complex c);
  void add(const OperatorSum& op, Complex scale = 1.0);
  OperatorSum finish(double tol = kDefaultCanonicalTolerance);

 private:
  int n_qubits_;
  std::vector<std::pair<std::uint64_t, Complex>> raw_;
};

OperatorSum multiply(const OperatorSum& a, const OperatorSum& b,
                     double tol = kDefaultCanonicalTolerance);
OperatorSum add(const OperatorSum& a, const OperatorSum& b,
                double tol = kDefaultCanonicalTolerance);
/// a*b - b*a.
OperatorSum commutator(const OperatorSum& a, const OperatorSum& b,
                       double tol = kDefaultCanonicalTolerance);
OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b,
                           double tol = kDefaultCanonicalTolerance);
OperatorSum dagger(const OperatorSum& a);

OperatorSum canonicalize(const OperatorSum& a, double tol);
OperatorSum canonicalize(int n_qubits, std::span<const PauliTerm> raw, double tol);

/// Largest number of non-identity letters over all terms; 0 for empty/identity.
int max_weight(const OperatorSum& a);

bool is_hermitian(const OperatorSum& a, double tol = 1e-12);
/// True when the dense matrix of `a` is real (coefficient phase matches the
/// parity of Y letters in every term).
bool is_real_matrix(const OperatorSum& a, double tol = 1e-12);

/// Lines `<coeff_re> <coeff_im> <word>` in canonical order, 17 significant digits.
std::string to_text(const OperatorSum& a);
OperatorSum from_text(std::string_view text, int n_qubits);

}  // namespace cfgreen
