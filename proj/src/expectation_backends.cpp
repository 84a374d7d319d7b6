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

#include "expectation_backends.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "errors.hpp"

namespace cfgreen {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_word(const PauliWord& w) { return splitmix64(w.x ^ splitmix64(w.z)); }

void ExpectationBackend::check_dims(const OperatorSum& O) const {
  if (O.n_qubits() != n_qubits_)
    throw DimensionError("observable on " + std::to_string(O.n_qubits()) +
                         " qubits, backend state on " + std::to_string(n_qubits_));
}

Complex ExpectationBackend::inner(const OperatorSum& X, const OperatorSum& Y) const {
  check_dims(X);
  check_dims(Y);
  return finish(expect(multiply(X, dagger(Y))));
}

// ---------------------------------------------------------------------------

ExactBackend::ExactBackend(DensityState rho, bool enforce_reality)
    : ExpectationBackend(rho.n_qubits(), rho.commutes_with_H(), enforce_reality),
      rho_(std::move(rho)) {}

Complex ExactBackend::expect(const OperatorSum& O) const {
  check_dims(O);
  const CMatrix& phi = rho_.components();
  const CMatrix Ophi = apply_operator(O, phi);
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < phi.cols(); ++k)
    acc += rho_.weights()(k) * phi.col(k).dot(Ophi.col(k));
  return acc;
}

// sum_k p_k <X^dag phi_k | Y^dag phi_k>: two applications instead of a product
Complex ExactBackend::inner(const OperatorSum& X, const OperatorSum& Y) const {
  check_dims(X);
  check_dims(Y);
  const CMatrix& phi = rho_.components();
  const CMatrix xp = apply_operator(dagger(X), phi);
  const CMatrix yp = apply_operator(dagger(Y), phi);
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < phi.cols(); ++k)
    acc += rho_.weights()(k) * xp.col(k).dot(yp.col(k));
  return finish(acc);
}

std::string ExactBackend::fingerprint() const {
  return std::string("exact") + (enforce_reality() ? ";real" : "");
}

// ---------------------------------------------------------------------------

namespace {

double exact_pauli_expectation(const PauliWord& w, const DensityState& rho) {
  const OperatorSum P = OperatorSum::from_term({1.0, w, rho.n_qubits()});
  const CMatrix& phi = rho.components();
  const CMatrix Pphi = apply_operator(P, phi);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < phi.cols(); ++k)
    acc += rho.weights()(k) * phi.col(k).dot(Pphi.col(k)).real();
  return acc;
}

}  // namespace

SampledBackend::SampledBackend(DensityState rho, std::uint64_t shots, std::uint64_t seed,
                               bool enforce_reality)
    : ExpectationBackend(rho.n_qubits(), rho.commutes_with_H(), enforce_reality),
      rho_(std::move(rho)),
      shots_(shots),
      seed_(seed) {
  if (shots_ == 0) throw ConfigError("sampled backend needs at least one shot");
  if (shots_ > (1ULL << 53)) throw ConfigError("shot count overflows double precision counts");
}

double SampledBackend::estimate(const PauliWord& w) const {
  if (w.x == 0 && w.z == 0) return 1.0;
  const std::uint64_t key = hash_word(w);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double exact = exact_pauli_expectation(w, rho_);
  const double p = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
  std::mt19937_64 rng(splitmix64(seed_ ^ key));
  std::binomial_distribution<std::uint64_t> bin(shots_, p);
  const double k = static_cast<double>(bin(rng));
  const double est = 2.0 * k / static_cast<double>(shots_) - 1.0;
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, est).first->second;
}

std::size_t SampledBackend::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

Complex SampledBackend::expect(const OperatorSum& O) const {
  check_dims(O);
  Complex acc = 0.0;
  for (const auto& t : O.terms()) acc += t.coefficient * estimate(t.word);
  return acc;
}

std::string SampledBackend::fingerprint() const {
  return "sampled;shots=" + std::to_string(shots_) + ";seed=" + std::to_string(seed_) +
         (enforce_reality() ? ";real" : "");
}

// ---------------------------------------------------------------------------

DensityState make_perturbed(const DensityState& rho, const DensityState& sigma, double eps,
                            const OperatorSum& H) {
  if (rho.dimension() != sigma.dimension())
    throw DimensionError("state and spurious state dimensions differ");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  if (eps == 0.0) return rho;
  if (eps == 1.0) return sigma;
  const CMatrix mixed = (1.0 - eps) * rho.matrix() + eps * sigma.matrix();
  return DensityState::mixed(mixed, H);
}

PerturbedBackend::PerturbedBackend(const DensityState& rho, const DensityState& sigma,
                                   double epsilon, bool enforce_reality, const OperatorSum& H)
    : ExactBackend(make_perturbed(rho, sigma, epsilon, H), enforce_reality), epsilon_(epsilon) {}

std::string PerturbedBackend::fingerprint() const {
  std::ostringstream s;
  s.precision(17);
  s << "perturbed;epsilon=" << epsilon_ << (enforce_reality() ? ";real" : "");
  return s.str();
}

DensityState make_sigma(SigmaKind kind, int n_qubits, std::uint64_t seed, const std::string& path,
                        const OperatorSum& H) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  switch (kind) {
    case SigmaKind::maximally_mixed:
      return DensityState::mixed(CMatrix::Identity(dim, dim) / static_cast<double>(dim), H);
    case SigmaKind::random_pure: {
      std::mt19937_64 rng(splitmix64(seed ^ 0x5157a7eULL));
      std::normal_distribution<double> g;
      CVector v(dim);
      for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
      return DensityState::pure(v / v.norm(), H);
    }
    case SigmaKind::file: {
      std::ifstream in(path);
      if (!in) throw IoError("cannot open spurious-state file '" + path + "'");
      std::vector<double> vals;
      double x;
      while (in >> x) vals.push_back(x);
      if (!in.eof()) throw IoError("non-numeric content in '" + path + "'");
      CVector v(dim);
      if (vals.size() == static_cast<std::size_t>(dim)) {
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = vals[static_cast<std::size_t>(i)];
      } else if (vals.size() == 2 * static_cast<std::size_t>(dim)) {
        for (Eigen::Index i = 0; i < dim; ++i)
          v(i) = Complex(vals[2 * static_cast<std::size_t>(i)], vals[2 * static_cast<std::size_t>(i) + 1]);
      } else {
        throw DimensionError("spurious-state file '" + path + "' holds " + std::to_string(vals.size()) +
                             " numbers, expected " + std::to_string(dim) + " or " +
                             std::to_string(2 * dim));
      }
      if (v.norm() == 0.0) throw DomainError("spurious state in '" + path + "' is zero");
      return DensityState::pure(v / v.norm(), H);
    }
  }
  throw ConfigError("unknown spurious-state kind");
}

std::unique_ptr<ExpectationBackend> make_backend(const BackendConfig& cfg, const DensityState& rho,
                                                 const OperatorSum& H) {
  const bool reality = cfg.enforce_reality.value_or(rho.commutes_with_H());
  switch (cfg.kind) {
    case BackendKind::exact:
      return std::make_unique<ExactBackend>(rho, reality);
    case BackendKind::sampled:
      return std::make_unique<SampledBackend>(rho, cfg.shots, cfg.seed, reality);
    case BackendKind::perturbed: {
      const auto sigma = make_sigma(cfg.sigma, rho.n_qubits(), cfg.seed, cfg.sigma_path, H);
      return std::make_unique<PerturbedBackend>(rho, sigma, cfg.epsilon, reality, H);
    }
  }
  throw ConfigError("unknown backend kind");
}

std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::exact: return "exact";
    case BackendKind::sampled: return "sampled";
    case BackendKind::perturbed: return "perturbed";
  }
  return "?";
}

BackendKind parse_backend_kind(const std::string& s) {
  if (s == "exact") return BackendKind::exact;
  if (s == "sampled") return BackendKind::sampled;
  if (s == "perturbed") return BackendKind::perturbed;
  throw ConfigError("unknown backend kind '" + s + "'");
}

std::string to_string(SigmaKind k) {
  switch (k) {
    case SigmaKind::maximally_mixed: return "mixed";
    case SigmaKind::random_pure: return "random";
    case SigmaKind::file: return "file";
  }
  return "?";
}

SigmaKind parse_sigma_kind(const std::string& s) {
  if (s == "mixed" || s == "maximally_mixed") return SigmaKind::maximally_mixed;
  if (s == "random" || s == "random_pure") return SigmaKind::random_pure;
  if (s == "file") return SigmaKind::file;
  throw ConfigError("unknown sigma source '" + s + "'");
}

}  // namespace cfgreen
