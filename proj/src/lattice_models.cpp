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

#include "lattice_models.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace cfgreen {
namespace {

void check_spec(const HubbardSpec& spec) {
  if (spec.sites < 1) throw ConfigError("Hubbard chain needs at least one site");
  if (spec.n_qubits() > kMaxQubits) throw DimensionError("Hubbard chain too long for 32 qubits");
}

void check_site(int site, int n_sites) {
  if (site < 0 || site >= n_sites)
    throw DomainError("site index " + std::to_string(site) + " outside [0, " +
                      std::to_string(n_sites) + ")");
}

}  // namespace

int spin_orbital_qubit(int site, Spin spin, const HubbardSpec& spec) {
  check_spec(spec);
  check_site(site, spec.sites);
  return site + (spin == Spin::down ? spec.sites : 0);
}

OperatorSum jordan_wigner_annihilation(int site, Spin spin, const HubbardSpec& spec) {
  const int q = spin_orbital_qubit(site, spin, spec);
  const std::uint64_t zstring = (1ULL << q) - 1;
  const std::uint64_t bit = 1ULL << q;
  TermAccumulator acc(spec.n_qubits(), 2);
  acc.add(PauliWord{bit, zstring}, 0.5);                      // X part
  acc.add(PauliWord{bit, zstring | bit}, Complex(0.0, 0.5));  // iY part
  return acc.finish();
}

OperatorSum jordan_wigner_number(int site, Spin spin, const HubbardSpec& spec) {
  const int q = spin_orbital_qubit(site, spin, spec);
  TermAccumulator acc(spec.n_qubits(), 2);
  acc.add(PauliWord{}, 0.5);
  acc.add(PauliWord{0, 1ULL << q}, -0.5);
  return acc.finish();
}

OperatorSum build_hubbard(const HubbardSpec& spec) {
  check_spec(spec);
  TermAccumulator acc(spec.n_qubits());
  for (Spin s : {Spin::up, Spin::down}) {
    for (int j = 0; j + 1 < spec.sites; ++j) {
      const auto a0 = jordan_wigner_annihilation(j, s, spec);
      const auto a1 = jordan_wigner_annihilation(j + 1, s, spec);
      const auto hop = dagger(a0) * a1;
      acc.add(hop, -spec.t);
      acc.add(dagger(hop), -spec.t);
    }
  }
  for (int j = 0; j < spec.sites; ++j)
    acc.add(jordan_wigner_number(j, Spin::up, spec) * jordan_wigner_number(j, Spin::down, spec),
            spec.U);
  return acc.finish();
}

OperatorSum total_number(const HubbardSpec& spec, const Spin* spin) {
  check_spec(spec);
  TermAccumulator acc(spec.n_qubits());
  for (Spin s : {Spin::up, Spin::down}) {
    if (spin && *spin != s) continue;
    for (int j = 0; j < spec.sites; ++j) acc.add(jordan_wigner_number(j, s, spec));
  }
  return acc.finish();
}

OperatorSum build_dimer_compact(double U, double t) {
  const std::pair<std::string, Complex> terms[] = {
      {"II", U / 2}, {"ZZ", U / 2}, {"IX", -t}, {"XI", -t}};
  return OperatorSum::from_terms(2, terms);
}

Eigen::VectorXcd dimer_ground_state(double U, double t) {
  if (t == 0.0)
    throw DegeneracyError("dimer closed form is singular at t = 0; use exact diagonalization");
  const double alpha = 4.0;
  const double ut = U / t;
  const double beta = ut + std::sqrt(ut * ut + 16.0);
  const double norm = std::sqrt(2.0 * (alpha * alpha + beta * beta));
  Eigen::VectorXcd v(4);
  v << alpha, beta, beta, alpha;
  return v / norm;
}

double dimer_ground_energy(double U, double t) {
  return U / 2 - std::sqrt(U * U / 4 + 4 * t * t);
}

// qubit 0 carries the up-spin occupation pattern, qubit 1 the down-spin one;
// site 0 reads |0>, site 1 reads |1>.
OperatorSum dimer_number(int site, Spin spin) {
  check_site(site, 2);
  const std::string word = spin == Spin::up ? "ZI" : "IZ";
  const double sign = site == 0 ? 0.5 : -0.5;
  const std::pair<std::string, Complex> terms[] = {{"II", 0.5}, {word, sign}};
  return OperatorSum::from_terms(2, terms);
}

std::vector<OperatorSum> build_pool(const OperatorPoolSpec& pool, const HubbardSpec& spec) {
  check_spec(spec);
  if (pool.sites.empty() || pool.spins.empty()) throw ConfigError("operator pool is empty");
  std::vector<OperatorSum> out;
  for (Spin s : pool.spins)
    for (int j : pool.sites) {
      check_site(j, spec.sites);
      out.push_back(pool.kind == PoolKind::annihilation ? jordan_wigner_annihilation(j, s, spec)
                                                        : jordan_wigner_number(j, s, spec));
    }
  return out;
}

std::vector<OperatorSum> build_dimer_pool(const OperatorPoolSpec& pool) {
  if (pool.sites.empty() || pool.spins.empty()) throw ConfigError("operator pool is empty");
  if (pool.kind != PoolKind::number)
    throw ConfigError("the compact dimer encoding only supports number-operator pools");
  std::vector<OperatorSum> out;
  for (Spin s : pool.spins)
    for (int j : pool.sites) out.push_back(dimer_number(j, s));
  return out;
}

OperatorPoolSpec parse_pool(const std::string& text) {
  OperatorPoolSpec p;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const auto us = head.find('_');
  if (us == std::string::npos) throw ConfigError("pool '" + text + "': expected <a|n>_<up|dn|updn>[:sites]");
  const std::string kind = head.substr(0, us), spin = head.substr(us + 1);
  if (kind == "a")
    p.kind = PoolKind::annihilation;
  else if (kind == "n")
    p.kind = PoolKind::number;
  else
    throw ConfigError("pool '" + text + "': unknown kind '" + kind + "'");
  if (spin == "up")
    p.spins = {Spin::up};
  else if (spin == "dn" || spin == "down")
    p.spins = {Spin::down};
  else if (spin == "updn")
    p.spins = {Spin::up, Spin::down};
  else
    throw ConfigError("pool '" + text + "': unknown spin '" + spin + "'");
  if (colon == std::string::npos) throw ConfigError("pool '" + text + "': missing site list");

  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        p.sites.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw ConfigError("pool '" + text + "': empty range " + item);
        for (int j = lo; j <= hi; ++j) p.sites.push_back(j);
      }
    }
  } catch (const std::logic_error&) {
    throw ConfigError("pool '" + text + "': bad site list");
  }
  if (p.sites.empty()) throw ConfigError("pool '" + text + "': empty site list");
  return p;
}

std::string format_pool(const OperatorPoolSpec& pool) {
  std::string s = pool.kind == PoolKind::annihilation ? "a_" : "n_";
  if (pool.spins.size() == 2)
    s += "updn";
  else
    s += pool.spins.at(0) == Spin::up ? "up" : "dn";
  s += ':';
  for (std::size_t k = 0; k < pool.sites.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(pool.sites[k]);
  }
  return s;
}

}  // namespace cfgreen
