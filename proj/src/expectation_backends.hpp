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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "exact_reference.hpp"
#include "operator_algebra.hpp"

namespace cfgreen {

enum class BackendKind { exact, sampled, perturbed };
enum class SigmaKind { maximally_mixed, random_pure, file };

struct BackendConfig {
  BackendKind kind = BackendKind::exact;
  std::uint64_t shots = 1000;  // per Pauli word
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  SigmaKind sigma = SigmaKind::random_pure;
  std::string sigma_path;
  /// Unset: follow the target state's commutation flag.
  std::optional<bool> enforce_reality;
};

std::uint64_t splitmix64(std::uint64_t x);
/// Stable across runs and platforms.
std::uint64_t hash_word(const PauliWord& w);

/// Tr(rho O) behind one interface. Instances are bound to a state and, for
/// the sampled kind, own the per-word estimate cache of one recursion session.
class ExpectationBackend {
 public:
  virtual ~ExpectationBackend() = default;

  virtual Complex expect(const OperatorSum& O) const = 0;
  /// (X, Y) = Tr(rho X Y^dag); real part only when enforce_reality is set, which
  /// is only sound for real operators and a real, H-commuting state.
  virtual Complex inner(const OperatorSum& X, const OperatorSum& Y) const;

  virtual BackendKind kind() const = 0;
  virtual std::string fingerprint() const = 0;

  bool enforce_reality() const { return enforce_reality_; }
  /// Commutation flag of the state actually measured.
  bool commutes_with_H() const { return commutes_; }
  int n_qubits() const { return n_qubits_; }

 protected:
  ExpectationBackend(int n_qubits, bool commutes, bool enforce_reality)
      : n_qubits_(n_qubits), commutes_(commutes), enforce_reality_(enforce_reality) {}
  void check_dims(const OperatorSum& O) const;
  Complex finish(Complex v) const { return enforce_reality_ ? Complex(v.real(), 0.0) : v; }

 private:
  int n_qubits_;
  bool commutes_;
  bool enforce_reality_;
};

class ExactBackend : public ExpectationBackend {
 public:
  ExactBackend(DensityState rho, bool enforce_reality);

  Complex expect(const OperatorSum& O) const override;
  Complex inner(const OperatorSum& X, const OperatorSum& Y) const override;
  BackendKind kind() const override { return BackendKind::exact; }
  std::string fingerprint() const override;
  const DensityState& state() const { return rho_; }

 private:
  DensityState rho_;
};

/// Each Pauli word gets one binomial estimate 2k/M - 1 drawn from its own
/// RNG stream (seed derived from the word), cached for the backend's lifetime.
class SampledBackend : public ExpectationBackend {
 public:
  SampledBackend(DensityState rho, std::uint64_t shots, std::uint64_t seed, bool enforce_reality);

  Complex expect(const OperatorSum& O) const override;
  BackendKind kind() const override { return BackendKind::sampled; }
  std::string fingerprint() const override;

  double estimate(const PauliWord& w) const;
  std::size_t cache_size() const;

 private:
  DensityState rho_;
  std::uint64_t shots_;
  std::uint64_t seed_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
};

class PerturbedBackend : public ExactBackend {
 public:
  PerturbedBackend(const DensityState& rho, const DensityState& sigma, double epsilon,
                   bool enforce_reality, const OperatorSum& H);
  BackendKind kind() const override { return BackendKind::perturbed; }
  std::string fingerprint() const override;
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

/// (1 - eps) rho + eps sigma; the commutation flag is recomputed against H.
DensityState make_perturbed(const DensityState& rho, const DensityState& sigma, double eps,
                            const OperatorSum& H);

DensityState make_sigma(SigmaKind kind, int n_qubits, std::uint64_t seed, const std::string& path,
                        const OperatorSum& H);

std::unique_ptr<ExpectationBackend> make_backend(const BackendConfig& cfg, const DensityState& rho,
                                                 const OperatorSum& H);

std::string to_string(BackendKind k);
BackendKind parse_backend_kind(const std::string& s);
std::string to_string(SigmaKind k);
SigmaKind parse_sigma_kind(const std::string& s);

}  // namespace cfgreen
