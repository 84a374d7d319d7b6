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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "errors.hpp"

using namespace cfgreen;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s  %-28s %s  (%.1f s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(name, ok, detail, s);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

RunConfig dimer_config(double U) {
  RunConfig c;
  c.subcommand = "scalar";
  c.model.kind = ModelKind::dimer;
  c.model.U = U;
  c.model.t = 1.0;
  c.pool = parse_pool("n_up:0");
  return c;
}

RunConfig hubbard_config(int sites, double U, const std::string& pool) {
  RunConfig c;
  c.subcommand = "matrix";
  c.model.sites = sites;
  c.model.U = U;
  c.pool = parse_pool(pool);
  return c;
}

double max_err(const Table& t, int level = -2, int i = -1, int j = -1) {
  const auto cl = t.column_index("level"), ci = t.column_index("i"), cj = t.column_index("j"),
             ce = t.column_index("abs_err");
  double m = 0;
  for (const auto& r : t.rows) {
    if (level != -2 && r[cl] != level) continue;
    if (i >= 0 && (r[ci] != i || r[cj] != j)) continue;
    m = std::max(m, r[ce]);
  }
  return m;
}

// ---------------------------------------------------------------------------

bool dimer_exactness(std::string& detail) {
  double worst = 0;
  for (double U : {0.0, 1.0, 2.0, 4.0, 6.0, 8.0}) {
    RunConfig c = dimer_config(U);
    c.levels = {4};
    c.grid = {-2.0, 12.0, 500, 0.1};
    worst = std::max(worst, max_err(run_sweep(c)));
  }
  detail = fmt("max err %.3g (< 1e-8)", worst);
  return worst < 1e-8;
}

bool small_pool_exactness(std::string& detail) {
  RunConfig a = hubbard_config(3, 2.0, "a_up:0-2");
  a.levels = {0};
  RunConfig b = hubbard_config(3, 2.0, "a_up:0-1");
  b.levels = {1};
  const double ea = max_err(run_sweep(a)), eb = max_err(run_sweep(b));
  detail = fmt("3 ops n=0: %.3g", ea) + fmt(", 2 ops n=1: %.3g (< 1e-6)", eb);
  return ea < 1e-6 && eb < 1e-6;
}

bool exponential_trend(std::string& detail) {
  RunConfig c = hubbard_config(4, 4.0, "a_up:0-3");
  c.levels = {0, 1, 2, 3};
  // particle-addition poles reach 12.6 at U = 4
  c.grid = {-4.0, 16.0, 500, 0.1};
  const Table t = run_sweep(c);
  bool ok = true;
  double worst_factor = 1e300;
  const std::vector<std::pair<int, int>> pairs{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}};
  for (auto [i, j] : pairs) {
    std::vector<double> e;
    for (int n = 0; n <= 3; ++n) e.push_back(max_err(t, n, i, j));
    for (int n = 1; n <= 3; ++n) ok = ok && e[n] < e[n - 1];
    const double factor = std::pow(e[0] / e[3], 1.0 / 3.0);
    worst_factor = std::min(worst_factor, factor);
    ok = ok && factor >= 2.0;
  }
  detail = fmt("strictly decreasing on 6 pairs, smallest mean reduction x%.3g (>= 2)", worst_factor);
  return ok;
}

bool truncation_bound(std::string& detail) {
  RunConfig c = dimer_config(4.0);
  c.levels = {3};
  const Experiment ex = build_experiment(c);
  const ExactBackend be(*ex.rho, true);
  const ScalarCFData data = scalar_recursion(ex.H, ex.ops[0], 3, be);
  const PoleExpansion oracle = lehmann_poles(ex.spectrum, *ex.rho, ex.ops[0], dagger(ex.ops[0]));
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst_ratio = 0;
  int checked = 0;
  bool ok = true;
  for (int n : {1, 2, 3})
    for (double r : {0.1, 0.25, 0.4}) {
      const BoundResult b = a_priori_bound(data, n, r);
      // a closed chain gives Lambda = 0 and bound 0; sample just above the axis then
      const double lo = b.lambda > 0 ? b.lambda : 0.1;
      for (int k = 0; k < 20; ++k) {
        const Complex w(-2.0 + 14.0 * u01(rng), lo * (1.0 + u01(rng)));
        const double err = std::abs(oracle(w) - eval_scalar_cf(data, w, n));
        ++checked;
        if (b.bound > 0) worst_ratio = std::max(worst_ratio, err / b.bound);
        if (err > b.bound + 1e-12) ok = false;
      }
    }
  detail = std::to_string(checked) + " points" + fmt(", worst err/bound %.3g", worst_ratio);
  return ok;
}

bool evaluator_equivalence(std::string& detail) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto random_omega = [&] { return Complex(-8.0 + 16.0 * u01(rng), 0.05 + 2.0 * u01(rng)); };
  double worst_scalar = 0, worst_matrix = 0;
  int samples = 0;

  // scalar: dimer at several U and a 4-site chain with a single annihilator
  for (double U : {0.5, 2.0, 4.0, 7.0}) {
    const Experiment ex = build_experiment(dimer_config(U));
    const ExactBackend be(*ex.rho, true);
    const ScalarCFData d = scalar_recursion(ex.H, ex.ops[0], 2, be);
    for (int k = 0; k < 10; ++k, ++samples) {
      const int n = k % 3;
      const Complex w = random_omega();
      const Complex a = eval_scalar_cf(d, w, n), b = eval_scalar_recurrence(d, w, n);
      worst_scalar = std::max(worst_scalar, std::abs(a - b) / std::abs(a));
    }
  }
  {
    RunConfig c = hubbard_config(4, 4.0, "a_up:0");
    const Experiment ex = build_experiment(c);
    const ExactBackend be(*ex.rho, true);
    const ScalarCFData d = scalar_recursion(ex.H, ex.ops[0], 6, be);
    for (int k = 0; k < 20; ++k, ++samples) {
      const int n = k % 7;
      const Complex w = random_omega();
      const Complex a = eval_scalar_cf(d, w, n), b = eval_scalar_recurrence(d, w, n);
      worst_scalar = std::max(worst_scalar, std::abs(a - b) / std::abs(a));
    }
  }
  // matrix: Moebius composition (normalized) vs P/Q recursion on full-rank levels
  struct Case {
    int sites;
    double U;
    std::string pool;
    int n;
  };
  for (const Case& cs : {Case{3, 2.0, "a_up:0-2", 0}, Case{4, 4.0, "a_up:0-3", 3}, Case{4, 1.0, "a_up:0-1", 4},
                         Case{3, 6.0, "a_updn:0", 2}, Case{4, 2.0, "n_up:0-1", 3}}) {
    const Experiment ex = build_experiment(hubbard_config(cs.sites, cs.U, cs.pool));
    const ExactBackend be(*ex.rho, true);
    const MatrixCFData d = matrix_recursion(ex.H, ex.ops, cs.n, be);
    for (int n = 0; n <= cs.n; ++n) {
      if (!d.full_rank(0, n)) throw NumericError("case " + cs.pool + " is not full rank up to " + std::to_string(n));
      for (int k = 0; k < 4; ++k, ++samples) {
        const Complex w = random_omega();
        const CMatrix a = eval_matrix_cf(d, w, n, MatrixForm::normalized);
        const CMatrix b = pq_recursion(d, w, n).G;
        worst_matrix = std::max(worst_matrix, (a - b).norm() / a.norm());
      }
    }
  }
  detail = std::to_string(samples) + " samples" + fmt(", scalar rel %.3g", worst_scalar) +
           fmt(", matrix rel %.3g (< 1e-8)", worst_matrix);
  return samples >= 100 && worst_scalar < 1e-8 && worst_matrix < 1e-8;
}

bool structural_invariants(std::string& detail) {
  bool ok = true;
  std::vector<std::string> failed;
  auto check = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failed.push_back(what);
    }
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // scalar chains: orthogonality, real Gamma/Delta, Nevanlinna
  std::vector<RunConfig> scalar_cases{dimer_config(1.0), dimer_config(4.0)};
  scalar_cases.push_back(hubbard_config(3, 2.0, "a_up:0"));
  scalar_cases.back().subcommand = "scalar";
  for (const RunConfig& c : scalar_cases) {
    const Experiment ex = build_experiment(c);
    const ExactBackend raw(*ex.rho, false);
    const ScalarCFData d = scalar_recursion(ex.H, ex.ops[0], 6, raw);
    const std::string tag = c.model.kind == ModelKind::dimer ? "dimer " : "3-site ";
    const int top = d.effective_level(6);
    for (int j = 0; j <= top; ++j) {
      check(std::abs(d.deltas[j].imag()) <= 1e-10 * std::max(1.0, std::abs(d.deltas[j])), tag + "Delta real");
      check(d.gammas[j] > 0, tag + "Gamma positive");
      for (int k = 0; k < j; ++k)
        check(std::abs(raw.inner(d.chain[j], d.chain[k])) <= 1e-9 * std::sqrt(d.gammas[j] * d.gammas[k]),
              tag + "chain orthogonality");
    }
    for (int s = 0; s < 200; ++s) {
      const Complex w(-10 + 20 * u01(rng), 0.01 + 2 * u01(rng));
      check(eval_scalar_cf(d, w, s % (top + 1)).real() >= -1e-9, tag + "Nevanlinna");
    }
  }

  // matrix chains on 3 and 4 sites
  for (auto [sites, pool, n] : std::vector<std::tuple<int, std::string, int>>{{3, "a_up:0-2", 1}, {4, "a_up:0-3", 3}}) {
    const Experiment ex = build_experiment(hubbard_config(sites, sites == 3 ? 2.0 : 4.0, pool));
    const ExactBackend raw(*ex.rho, false);
    MatrixOptions o;
    o.hermitize = false;
    o.real_coefficients = false;
    const MatrixCFData d = matrix_recursion(ex.H, ex.ops, n, raw, o);
    const std::string tag = std::to_string(sites) + "-site ";
    std::vector<OperatorSum> basis;
    for (const auto& lv : d.levels) {
      const double scale = std::max(1.0, lv.R.norm()), dscale = std::max(1.0, lv.Delta.norm());
      check((lv.R - lv.R.adjoint()).norm() <= 1e-8 * scale, tag + "R Hermitian");
      check(lv.R.imag().norm() <= 1e-8 * scale, tag + "R real");
      check(lv.Delta.imag().norm() <= 1e-8 * dscale, tag + "Delta real");
      check((lv.Delta - lv.Delta.adjoint()).norm() <= 1e-8 * dscale, tag + "Delta Hermitian");
      for (std::size_t k = 0; k < lv.normalized_ops.size(); ++k)
        if (lv.retained[k]) basis.push_back(lv.normalized_ops[k]);
    }
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b)
        check(std::abs(raw.inner(basis[a], basis[b]) - (a == b ? 1.0 : 0.0)) <= 1e-8, tag + "chain orthonormality");

    const int N = static_cast<int>(ex.ops.size());
    for (int s = 0; s < 100; ++s) {
      const Complex w(-10 + 20 * u01(rng), 0.01 + 2 * u01(rng));
      const int level = d.effective_level(s % (n + 1));
      const CMatrix G = eval_matrix_cf(d, w, level);
      const double scale = std::max(1.0, G.norm());
      for (int i = 0; i < N; ++i) {
        check(G(i, i).real() >= -1e-8 * scale, tag + "Nevanlinna");
        for (int j = 0; j < N; ++j) {
          check(std::abs(G(i, j).real() - G(j, i).real()) <= 1e-8 * scale, tag + "Re symmetry");
          check(std::abs(G(i, j) - G(N - 1 - i, N - 1 - j)) <= 1e-8 * scale, tag + "reflection symmetry");
        }
      }
    }
  }
  std::sort(failed.begin(), failed.end());
  failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  if (ok) {
    detail = "orthogonality, reality, Nevanlinna, Re and reflection symmetry on dimer, 3 and 4 sites";
  } else {
    detail = "violated:";
    for (const auto& f : failed) detail += " [" + f + "]";
  }
  return ok;
}

bool shot_noise(std::string& detail) {
  auto study = [](const std::string& pool, int level) {
    RunConfig c = hubbard_config(3, 2.0, pool);
    c.subcommand = "shots";
    c.levels = {level};
    c.repeats = 20;
    c.seed = 1;
    c.backend.kind = BackendKind::sampled;
    return shot_noise_study(c);
  };
  const ShotNoiseResult three = study("a_up:0-2", 0);
  const ShotNoiseResult two = study("a_up:0-1", 1);
  bool monotone = true, ordered = true;
  for (std::size_t k = 0; k < three.summary.size(); ++k) {
    if (k > 0) monotone = monotone && three.summary[k].median < three.summary[k - 1].median;
    ordered = ordered && two.summary[k].median >= three.summary[k].median;
  }
  const bool slope_ok = std::abs(three.slope + 0.5) <= 0.2;
  detail = fmt("3 ops n=0 slope %.3f", three.slope) + (monotone ? " monotone" : " NOT monotone") +
           fmt("; 2 ops n=1 slope %.3f", two.slope) + (ordered ? ", 2-op n=1 >= 3-op n=0" : ", ordering violated");
  return monotone && slope_ok && ordered;
}

bool jones_thron(std::string& detail) {
  RunConfig c = dimer_config(4.0);
  c.subcommand = "stability";
  c.levels = {2};
  c.noise_s = 1e-3;
  c.trials = 100;
  c.seed = 3;
  StabilityReport rep;
  stability_study(c, &rep);
  int applicable = 0;
  double worst = 0;
  for (const auto& p : rep.points)
    if (p.applicable) {
      ++applicable;
      worst = std::max(worst, p.max_rel_error / p.bound);
    }
  detail = std::to_string(applicable) + " points with q < 1" + fmt(", worst err/bound %.3g", worst);
  return applicable > 0 && rep.all_within_bound();
}

// On the eta = 0.1 plotting grid the O(eps) prefactor is ~1/eta^2 times larger and
// eps = 1e-2..1e-1 already saturates; eta = 2 keeps the whole range in linear response.
bool perturbed_linearity(std::string& detail) {
  const std::vector<double> eps{1e-3, 1e-2, 1e-1};
  bool ok = true;
  std::string slopes, fine;
  for (std::uint64_t seed : {11, 12, 13}) {
    RunConfig c = dimer_config(4.0);
    c.levels = {4};
    c.backend.seed = seed;
    c.backend.sigma = SigmaKind::random_pure;
    c.grid.eta = 2.0;
    const double s = perturbation_study(c, eps).slope;
    ok = ok && std::abs(s - 1.0) <= 0.15;
    slopes += fmt(" %.3f", s);
    c.grid.eta = 0.1;
    fine += fmt(" %.2f", perturbation_study(c, eps).slope);
  }
  detail = "slopes" + slopes + " at eta=2 (1 +- 0.15); eta=0.1:" + fine;
  return ok;
}

}  // namespace

int main() {
  criterion("dimer_exactness", dimer_exactness);
  criterion("small_pool_exactness", small_pool_exactness);
  criterion("exponential_trend", exponential_trend);
  criterion("truncation_bound", truncation_bound);
  criterion("evaluator_equivalence", evaluator_equivalence);
  criterion("structural_invariants", structural_invariants);
  criterion("shot_noise_scaling", shot_noise);
  criterion("jones_thron_stability", jones_thron);
  criterion("perturbed_linearity", perturbed_linearity);
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
