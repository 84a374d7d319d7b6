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

#include "operator_algebra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"

namespace cfgreen {
namespace {

constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_qubits(int n) {
  if (n < 1 || n > kMaxQubits)
    throw DimensionError("qubit count " + std::to_string(n) + " outside [1, 32]");
}

void check_same(int a, int b) {
  if (a != b)
    throw DimensionError("qubit count mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b));
}

// x in the high half, z in the low half; unique for n <= 32.
inline std::uint64_t pack(const PauliWord& w) { return (w.x << 32) | w.z; }
inline PauliWord unpack(std::uint64_t k) { return {k >> 32, k & 0xffffffffULL}; }

}  // namespace

PauliWord PauliWord::from_string(std::string_view letters) {
  if (letters.empty() || letters.size() > kMaxQubits)
    throw DimensionError("Pauli word length must be in [1, 32]");
  PauliWord w;
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const std::uint64_t bit = 1ULL << q;
    switch (letters[q]) {
      case 'I': break;
      case 'X': w.x |= bit; break;
      case 'Y': w.x |= bit; w.z |= bit; break;
      case 'Z': w.z |= bit; break;
      default:
        throw DomainError(std::string("invalid Pauli letter '") + letters[q] + "'");
    }
  }
  return w;
}

char PauliWord::letter(int q) const {
  const bool bx = (x >> q) & 1U, bz = (z >> q) & 1U;
  return bx ? (bz ? 'Y' : 'X') : (bz ? 'Z' : 'I');
}

std::string PauliWord::to_string(int n) const {
  std::string s(static_cast<std::size_t>(n), 'I');
  for (int q = 0; q < n; ++q) s[q] = letter(q);
  return s;
}

int PauliWord::weight() const { return std::popcount(x | z); }

std::uint64_t PauliWord::sort_key(int n) const {
  std::uint64_t key = 0;
  for (int q = 0; q < n; ++q) {
    const unsigned bx = (x >> q) & 1U, bz = (z >> q) & 1U;
    const unsigned code = bx ? (bz ? 2U : 1U) : (bz ? 3U : 0U);
    key = (key << 2) | code;
  }
  return key;
}

PauliTerm PauliTerm::parse(Complex c, std::string_view letters) {
  PauliTerm t;
  t.coefficient = c;
  t.word = PauliWord::from_string(letters);
  t.n_qubits = static_cast<int>(letters.size());
  return t;
}

// With P(x,z) = i^{|x&z|} X^x Z^z, moving Z^{z1} past X^{x2} costs (-1)^{|z1&x2|}.
std::pair<int, PauliWord> multiply_words(const PauliWord& a, const PauliWord& b) {
  PauliWord r{a.x ^ b.x, a.z ^ b.z};
  int e = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) +
          2 * std::popcount(a.z & b.x) - std::popcount(r.x & r.z);
  return {((e % 4) + 4) % 4, r};
}

PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b) {
  check_same(a.n_qubits, b.n_qubits);
  auto [phase, w] = multiply_words(a.word, b.word);
  return {a.coefficient * b.coefficient * kIPow[phase], w, a.n_qubits};
}

// ---------------------------------------------------------------------------

OperatorSum::OperatorSum(int n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

OperatorSum::OperatorSum(int n_qubits, std::vector<Term> t)
    : n_qubits_(n_qubits), terms_(std::move(t)) {}

OperatorSum OperatorSum::identity(int n, Complex scale) {
  TermAccumulator acc(n, 1);
  acc.add(PauliWord{}, scale);
  return acc.finish();
}

OperatorSum OperatorSum::from_term(const PauliTerm& term) {
  TermAccumulator acc(term.n_qubits, 1);
  acc.add(term.word, term.coefficient);
  return acc.finish();
}

OperatorSum OperatorSum::from_terms(int n, std::span<const std::pair<std::string, Complex>> terms,
                                    double tol) {
  TermAccumulator acc(n, terms.size());
  for (const auto& [letters, c] : terms) {
    check_same(n, static_cast<int>(letters.size()));
    acc.add(PauliWord::from_string(letters), c);
  }
  return acc.finish(tol);
}

Complex OperatorSum::coefficient(const PauliWord& w) const {
  const auto key = w.sort_key(n_qubits_);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key, [&](const Term& t, std::uint64_t k) {
    return t.word.sort_key(n_qubits_) < k;
  });
  if (it != terms_.end() && it->word == w) return it->coefficient;
  return 0.0;
}

double OperatorSum::max_abs_coefficient() const {
  double m = 0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coefficient));
  return m;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  return *this = add(*this, other);
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& other) {
  check_same(n_qubits_, other.n_qubits_);
  TermAccumulator acc(n_qubits_, size() + other.size());
  acc.add(*this);
  acc.add(other, -1.0);
  return *this = acc.finish();
}

OperatorSum& OperatorSum::operator*=(Complex s) {
  TermAccumulator acc(n_qubits_, size());
  acc.add(*this, s);
  return *this = acc.finish();
}

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) { return multiply(a, b); }

bool operator==(const OperatorSum& a, const OperatorSum& b) {
  if (a.n_qubits_ != b.n_qubits_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (!(a.terms_[k].word == b.terms_[k].word) ||
        a.terms_[k].coefficient != b.terms_[k].coefficient)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

TermAccumulator::TermAccumulator(int n_qubits, std::size_t reserve) : n_qubits_(n_qubits) {
  check_qubits(n_qubits);
  raw_.reserve(reserve);
}

void TermAccumulator::add(const PauliWord& w, Complex c) { raw_.emplace_back(pack(w), c); }

void TermAccumulator::add(const OperatorSum& op, Complex scale) {
  check_same(n_qubits_, op.n_qubits());
  for (const auto& t : op.terms()) raw_.emplace_back(pack(t.word), t.coefficient * scale);
}

OperatorSum TermAccumulator::finish(double tol) {
  if (tol < 0) throw DomainError("canonicalization tolerance must be >= 0");
  std::unordered_map<std::uint64_t, Complex> merged;
  merged.reserve(raw_.size());
  for (const auto& [k, c] : raw_) merged[k] += c;
  raw_.clear();

  double cmax = 0;
  for (const auto& [k, c] : merged) cmax = std::max(cmax, std::abs(c));
  // absolute floor of 1 so that isolated round-off residues are dropped too
  const double cut = tol * std::max(1.0, cmax);

  std::vector<std::pair<std::uint64_t, OperatorSum::Term>> keyed;
  keyed.reserve(merged.size());
  for (const auto& [k, c] : merged) {
    if (std::abs(c) <= cut) continue;
    PauliWord w = unpack(k);
    keyed.push_back({w.sort_key(n_qubits_), {w, c}});
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<OperatorSum::Term> out;
  out.reserve(keyed.size());
  for (auto& kt : keyed) out.push_back(kt.second);
  return OperatorSum(n_qubits_, std::move(out));
}

// ---------------------------------------------------------------------------

OperatorSum multiply(const OperatorSum& a, const OperatorSum& b, double tol) {
  check_same(a.n_qubits(), b.n_qubits());
  TermAccumulator acc(a.n_qubits(), a.size() * b.size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      auto [ph, w] = multiply_words(ta.word, tb.word);
      acc.add(w, ta.coefficient * tb.coefficient * kIPow[ph]);
    }
  return acc.finish(tol);
}

OperatorSum add(const OperatorSum& a, const OperatorSum& b, double tol) {
  check_same(a.n_qubits(), b.n_qubits());
  TermAccumulator acc(a.n_qubits(), a.size() + b.size());
  acc.add(a);
  acc.add(b);
  return acc.finish(tol);
}

namespace {
// ab - sign*ba without forming both products: Pauli words either commute or
// anticommute, so each pair contributes (1 - sign*(+-1)) * ab.
OperatorSum graded_product(const OperatorSum& a, const OperatorSum& b, int sign, double tol) {
  check_same(a.n_qubits(), b.n_qubits());
  TermAccumulator acc(a.n_qubits(), a.size() * b.size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) {
      const bool anti = (std::popcount(ta.word.x & tb.word.z) +
                         std::popcount(ta.word.z & tb.word.x)) & 1;
      const int factor = 1 - sign * (anti ? -1 : 1);
      if (factor == 0) continue;
      auto [ph, w] = multiply_words(ta.word, tb.word);
      acc.add(w, static_cast<double>(factor) * ta.coefficient * tb.coefficient * kIPow[ph]);
    }
  return acc.finish(tol);
}
}  // namespace

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b, double tol) {
  return graded_product(a, b, +1, tol);
}

OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b, double tol) {
  return graded_product(a, b, -1, tol);
}

OperatorSum dagger(const OperatorSum& a) {
  TermAccumulator acc(a.n_qubits(), a.size());
  for (const auto& t : a.terms()) acc.add(t.word, std::conj(t.coefficient));
  return acc.finish();
}

OperatorSum canonicalize(const OperatorSum& a, double tol) {
  TermAccumulator acc(a.n_qubits(), a.size());
  acc.add(a);
  return acc.finish(tol);
}

OperatorSum canonicalize(int n_qubits, std::span<const PauliTerm> raw, double tol) {
  TermAccumulator acc(n_qubits, raw.size());
  for (const auto& t : raw) {
    check_same(n_qubits, t.n_qubits);
    acc.add(t.word, t.coefficient);
  }
  return acc.finish(tol);
}

int max_weight(const OperatorSum& a) {
  int w = 0;
  for (const auto& t : a.terms()) w = std::max(w, t.word.weight());
  return w;
}

bool is_hermitian(const OperatorSum& a, double tol) {
  for (const auto& t : a.terms())
    if (std::abs(t.coefficient.imag()) > tol * std::max(1.0, std::abs(t.coefficient)))
      return false;
  return true;
}

bool is_real_matrix(const OperatorSum& a, double tol) {
  // Y carries a factor i; the dense matrix of c*P is real iff c*i^{#Y} is real
  for (const auto& t : a.terms()) {
    const int ny = std::popcount(t.word.x & t.word.z);
    const Complex c = t.coefficient * kIPow[ny % 4];
    if (std::abs(c.imag()) > tol * std::max(1.0, std::abs(c))) return false;
  }
  return true;
}

std::string to_text(const OperatorSum& a) {
  std::string out;
  char buf[96];
  for (const auto& t : a.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g ", t.coefficient.real(), t.coefficient.imag());
    out += buf;
    out += t.word.to_string(a.n_qubits());
    out += '\n';
  }
  return out;
}

OperatorSum from_text(std::string_view text, int n_qubits) {
  TermAccumulator acc(n_qubits);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double re, im;
    std::string word;
    if (!(ls >> re >> im >> word))
      throw ConfigError("operator text line " + std::to_string(lineno) + ": expected '<re> <im> <word>'");
    check_same(n_qubits, static_cast<int>(word.size()));
    acc.add(PauliWord::from_string(word), {re, im});
  }
  return acc.finish(0.0);
}

}  // namespace cfgreen
