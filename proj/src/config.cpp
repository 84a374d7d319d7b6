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

// JSON run configuration. Schema in docs/config.md.

#include <set>
#include <sstream>

#include <json.hpp>

#include "analysis.hpp"
#include "errors.hpp"

namespace cfgreen {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown config key '" + where + it.key() + "'");
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + where + key + "' has the wrong type");
  }
}

std::vector<int> parse_int_list(const json& v, const std::string& key) {
  std::vector<int> out;
  try {
    if (v.is_number_integer()) return {v.get<int>()};
    if (v.is_array()) return v.get<std::vector<int>>();
    if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
          out.push_back(std::stoi(item));
        } else {
          const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
          for (int k = lo; k <= hi; ++k) out.push_back(k);
        }
      }
      return out;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "' must be an integer, list or \"a,b,c-d\" string");
}

Spin parse_spin(const std::string& s) {
  if (s == "up") return Spin::up;
  if (s == "down" || s == "dn") return Spin::down;
  throw ConfigError("unknown spin '" + s + "'");
}

OperatorPoolSpec parse_pool_json(const json& v) {
  if (v.is_string()) return parse_pool(v.get<std::string>());
  if (!v.is_object()) throw ConfigError("config key 'pool' must be a string or object");
  reject_unknown(v, {"kind", "sites", "spins"}, "pool.");
  OperatorPoolSpec p;
  if (v.contains("kind")) {
    const auto k = get<std::string>(v, "kind", "pool.");
    if (k == "annihilation" || k == "a")
      p.kind = PoolKind::annihilation;
    else if (k == "number" || k == "n")
      p.kind = PoolKind::number;
    else
      throw ConfigError("unknown pool.kind '" + k + "'");
  }
  if (v.contains("sites")) p.sites = parse_int_list(v.at("sites"), "pool.sites");
  if (v.contains("spins")) {
    p.spins.clear();
    const auto& s = v.at("spins");
    if (s.is_string()) {
      p.spins.push_back(parse_spin(s.get<std::string>()));
    } else {
      for (const auto& x : s) {
        if (!x.is_string()) throw ConfigError("pool.spins entries must be strings");
        p.spins.push_back(parse_spin(x.get<std::string>()));
      }
    }
  }
  if (p.sites.empty() || p.spins.empty()) throw ConfigError("operator pool is empty");
  return p;
}

}  // namespace

RunConfig parse_config_json(const std::string& text, const std::string& subcommand) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"subcommand", "model", "sites", "t", "U", "filling", "pool", "op", "backend", "levels", "grid",
                  "oracle", "threshold", "form", "r", "seed", "threads", "dump_operators", "shots", "stability",
                  "cost", "out", "format"},
                 "");

  RunConfig c;
  if (j.contains("subcommand")) c.subcommand = get<std::string>(j, "subcommand", "");
  if (!subcommand.empty()) c.subcommand = subcommand;

  if (j.contains("model")) {
    const auto m = get<std::string>(j, "model", "");
    if (m == "hubbard1d")
      c.model.kind = ModelKind::hubbard1d;
    else if (m == "dimer")
      c.model.kind = ModelKind::dimer;
    else
      throw ConfigError("unknown model '" + m + "' (hubbard1d|dimer)");
  }
  if (c.model.kind == ModelKind::dimer) c.pool = {PoolKind::number, {0}, {Spin::up}};
  if (j.contains("sites")) c.model.sites = get<int>(j, "sites", "");
  if (j.contains("t")) c.model.t = get<double>(j, "t", "");
  if (j.contains("U")) c.model.U = get<double>(j, "U", "");
  if (j.contains("filling")) {
    const auto& f = j.at("filling");
    if (!f.is_object()) throw ConfigError("config key 'filling' must be an object");
    reject_unknown(f, {"up", "down"}, "filling.");
    c.model.filling = std::make_pair(get<int>(f, "up", "filling."), get<int>(f, "down", "filling."));
  }
  if (j.contains("pool")) c.pool = parse_pool_json(j.at("pool"));
  if (j.contains("op")) {
    c.pool = parse_pool_json(j.at("op"));
    if (c.pool.sites.size() * c.pool.spins.size() != 1)
      throw ConfigError("config key 'op' must select exactly one operator");
  }

  if (j.contains("seed")) {
    c.seed = get<std::uint64_t>(j, "seed", "");
    c.backend.seed = c.seed;
  }
  if (j.contains("backend")) {
    const auto& b = j.at("backend");
    if (!b.is_object()) throw ConfigError("config key 'backend' must be an object");
    reject_unknown(b, {"kind", "shots", "seed", "epsilon", "sigma", "sigma_path", "enforce_reality"}, "backend.");
    if (b.contains("kind")) c.backend.kind = parse_backend_kind(get<std::string>(b, "kind", "backend."));
    if (b.contains("shots")) c.backend.shots = get<std::uint64_t>(b, "shots", "backend.");
    if (b.contains("seed")) c.backend.seed = get<std::uint64_t>(b, "seed", "backend.");
    if (b.contains("epsilon")) c.backend.epsilon = get<double>(b, "epsilon", "backend.");
    if (b.contains("sigma")) c.backend.sigma = parse_sigma_kind(get<std::string>(b, "sigma", "backend."));
    if (b.contains("sigma_path")) c.backend.sigma_path = get<std::string>(b, "sigma_path", "backend.");
    if (b.contains("enforce_reality")) c.backend.enforce_reality = get<bool>(b, "enforce_reality", "backend.");
  }

  if (j.contains("levels")) c.levels = parse_int_list(j.at("levels"), "levels");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) throw ConfigError("config key 'grid' must be an object");
    reject_unknown(g, {"omega_min", "omega_max", "points", "eta"}, "grid.");
    if (g.contains("omega_min")) c.grid.omega_min = get<double>(g, "omega_min", "grid.");
    if (g.contains("omega_max")) c.grid.omega_max = get<double>(g, "omega_max", "grid.");
    if (g.contains("points")) c.grid.points = get<int>(g, "points", "grid.");
    if (g.contains("eta")) c.grid.eta = get<double>(g, "eta", "grid.");
  }
  if (j.contains("oracle")) {
    const auto o = get<std::string>(j, "oracle", "");
    if (o == "lehmann")
      c.oracle = OracleKind::lehmann;
    else if (o == "quadrature")
      c.oracle = OracleKind::quadrature;
    else
      throw ConfigError("unknown oracle '" + o + "' (lehmann|quadrature)");
  }
  if (j.contains("threshold")) c.threshold = get<double>(j, "threshold", "");
  if (j.contains("form")) c.form = parse_matrix_form(get<std::string>(j, "form", ""));
  if (j.contains("r")) c.r = get<double>(j, "r", "");
  if (j.contains("threads")) c.threads = get<int>(j, "threads", "");
  if (j.contains("dump_operators")) c.dump_operators = get<bool>(j, "dump_operators", "");

  if (j.contains("shots")) {
    const auto& s = j.at("shots");
    if (!s.is_object()) throw ConfigError("config key 'shots' must be an object");
    reject_unknown(s, {"list", "repeats"}, "shots.");
    if (s.contains("list")) c.shots_list = get<std::vector<std::uint64_t>>(s, "list", "shots.");
    if (s.contains("repeats")) c.repeats = get<int>(s, "repeats", "shots.");
  }
  if (j.contains("stability")) {
    const auto& s = j.at("stability");
    if (!s.is_object()) throw ConfigError("config key 'stability' must be an object");
    reject_unknown(s, {"s", "trials"}, "stability.");
    if (s.contains("s")) c.noise_s = get<double>(s, "s", "stability.");
    if (s.contains("trials")) c.trials = get<int>(s, "trials", "stability.");
  }
  if (j.contains("cost")) {
    const auto& s = j.at("cost");
    if (!s.is_object()) throw ConfigError("config key 'cost' must be an object");
    reject_unknown(s, {"n_modes", "k0", "d", "n", "eps"}, "cost.");
    if (s.contains("n_modes")) c.n_modes = get<int>(s, "n_modes", "cost.");
    if (s.contains("k0")) c.k0 = get<int>(s, "k0", "cost.");
    if (s.contains("d")) c.d = get<int>(s, "d", "cost.");
    if (s.contains("n")) c.cost_level = get<int>(s, "n", "cost.");
    if (s.contains("eps")) c.cost_eps = get<double>(s, "eps", "cost.");
  }
  if (j.contains("out")) c.out = get<std::string>(j, "out", "");
  if (j.contains("format")) c.format = get<std::string>(j, "format", "");
  if (c.subcommand != "cost") c.validate();
  return c;
}

}  // namespace cfgreen
