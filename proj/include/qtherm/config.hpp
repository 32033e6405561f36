// Configuration loading: flat JSON files select a scenario and override its
// defaults. Validation is strict -- unknown keys, wrong types, out-of-range
// values, and over-cap problem sizes are all rejected before any work runs.
//
// Order of application: config file, then --set key=value overrides, then
// --seed. Dotted keys reach one level into nested objects.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qtherm/errors.hpp"
#include "qtherm/scenarios.hpp"

namespace qtherm {

// Largest composite dimension handled anywhere, and the smaller limit for
// paths that need a dense eigendecomposition.
inline constexpr std::int64_t max_state_dim = 16384;
inline constexpr std::int64_t max_dense_eig_dim = 4096;
inline constexpr std::int64_t max_bounce_dim = 64;
inline constexpr std::int64_t max_sample_count = 1000000;

inline nlohmann::json scenario_defaults(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::typicality:
      return {{"sys_dim", 2},
              {"env_dims", {8, 32, 128}},
              {"n_samples", 200},
              {"seed", 42},
              {"energy_window", nullptr}};
    case ScenarioKind::bounce:
      return {{"momentum_dim", 16},
              {"input_state", "equal_superposition(2)"},
              {"seed", 42}};
    case ScenarioKind::expansion_unitary:
      return {{"n_sites", 12},
              {"hopping", 1.0},
              {"barrier", 1000.0},
              {"beta", 1.0},
              {"times", {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}},
              {"seed", 42}};
    case ScenarioKind::expansion_entangling:
      return {{"n_gas", 3},
              {"n_env", 10},
              {"coupling", {{"kind", "block_haar"}}},
              {"n_realizations", 50},
              {"seed", 42}};
    case ScenarioKind::relaxation_scan:
      return {{"n_gas", 2},
              {"n_env", 8},
              {"coupling_strength", 1.0},
              {"n_realizations", 4},
              {"times",
               {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 11.0, 16.0,
                22.0, 32.0, 45.0}},
              {"seed", 42}};
  }
  throw ConfigError("unknown scenario kind");
}

namespace detail {

inline std::int64_t cfg_int(const nlohmann::json& p, const std::string& ctx,
                            const char* key, std::int64_t lo, std::int64_t hi) {
  const auto& v = p.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError(ctx + ": '" + key + "' must be an integer");
  }
  const auto n = v.get<std::int64_t>();
  if (n < lo || n > hi) {
    throw ConfigError(ctx + ": '" + key + "' must be in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "], got " + std::to_string(n));
  }
  return n;
}

inline double cfg_num(const nlohmann::json& p, const std::string& ctx, const char* key,
                      bool positive, bool nonnegative) {
  const auto& v = p.at(key);
  if (!v.is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(ctx + ": '" + key + "' must be finite");
  if (positive && !(x > 0.0)) throw ConfigError(ctx + ": '" + key + "' must be positive");
  if (nonnegative && x < 0.0) {
    throw ConfigError(ctx + ": '" + key + "' must be nonnegative");
  }
  return x;
}

inline void cfg_seed(const nlohmann::json& p, const std::string& ctx) {
  const auto& v = p.at("seed");
  const bool ok = v.is_number_unsigned() ||
                  (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (!ok) throw ConfigError(ctx + ": 'seed' must be a nonnegative integer");
}

inline void cfg_times(const nlohmann::json& p, const std::string& ctx,
                      std::size_t min_count, bool increasing) {
  const auto& v = p.at("times");
  if (!v.is_array() || v.size() < min_count) {
    throw ConfigError(ctx + ": 'times' must be an array with at least " +
                      std::to_string(min_count) + " entries");
  }
  double prev = -1.0;
  for (const auto& t : v) {
    if (!t.is_number()) throw ConfigError(ctx + ": 'times' entries must be numbers");
    const double x = t.get<double>();
    if (!std::isfinite(x) || x < 0.0) {
      throw ConfigError(ctx + ": 'times' entries must be finite and nonnegative");
    }
    if (increasing && !(x > prev)) {
      throw ConfigError(ctx + ": 'times' must be strictly increasing");
    }
    prev = x;
  }
}

inline void reject_unknown_keys(const nlohmann::json& object, const std::string& ctx,
                                const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(ctx + ": unknown key '" + key + "'");
    }
  }
}

inline void validate_typicality(const nlohmann::json& p) {
  const std::string ctx = "typicality";
  const auto sys_dim = cfg_int(p, ctx, "sys_dim", 2, max_state_dim);
  cfg_int(p, ctx, "n_samples", 1, max_sample_count);
  cfg_seed(p, ctx);

  const auto& env = p.at("env_dims");
  if (!env.is_array() || env.empty()) {
    throw ConfigError(ctx + ": 'env_dims' must be a nonempty array of integers");
  }
  const bool windowed = !p.at("energy_window").is_null();
  const std::int64_t dim_cap = windowed ? max_dense_eig_dim : max_state_dim;
  for (const auto& e : env) {
    if (!e.is_number_integer() && !e.is_number_unsigned()) {
      throw ConfigError(ctx + ": 'env_dims' entries must be integers");
    }
    const auto d = e.get<std::int64_t>();
    if (d < 2) throw ConfigError(ctx + ": 'env_dims' entries must be >= 2");
    if (sys_dim > dim_cap / d) {
      throw CapError(ctx + ": composite dimension " + std::to_string(sys_dim) + "*" +
                     std::to_string(d) + " exceeds the limit of " +
                     std::to_string(dim_cap));
    }
  }
  if (windowed) {
    const auto& w = p.at("energy_window");
    if (!w.is_object()) {
      throw ConfigError(ctx + ": 'energy_window' must be an object or null");
    }
    reject_unknown_keys(w, ctx + ".energy_window",
                        {"center", "width", "interaction_strength"});
    cfg_num(w, ctx + ".energy_window", "center", false, false);
    cfg_num(w, ctx + ".energy_window", "width", true, false);
    cfg_num(w, ctx + ".energy_window", "interaction_strength", false, true);
  }
}

inline void validate_bounce(const nlohmann::json& p) {
  const std::string ctx = "bounce";
  const auto d = cfg_int(p, ctx, "momentum_dim", 1,
                         std::numeric_limits<std::int64_t>::max());
  if (d > max_bounce_dim) {
    throw CapError(ctx + ": 'momentum_dim' " + std::to_string(d) +
                   " exceeds the limit of " + std::to_string(max_bounce_dim));
  }
  cfg_seed(p, ctx);
  const auto& v = p.at("input_state");
  if (!v.is_string()) throw ConfigError(ctx + ": 'input_state' must be a string");
  try {
    bounce_input_state(v.get<std::string>(), d, SeedSpec{0, 0});
  } catch (const ValidationError& e) {
    throw ConfigError(ctx + ": " + e.what());
  }
}

inline void validate_expansion_unitary(const nlohmann::json& p) {
  const std::string ctx = "expansion_unitary";
  const auto n = cfg_int(p, ctx, "n_sites", 4, max_dense_eig_dim);
  if (n % 2 != 0) throw ConfigError(ctx + ": 'n_sites' must be even");
  cfg_num(p, ctx, "hopping", true, false);
  cfg_num(p, ctx, "barrier", false, true);
  cfg_num(p, ctx, "beta", false, true);
  cfg_times(p, ctx, 1, false);
  cfg_seed(p, ctx);
}

inline void validate_expansion_entangling(const nlohmann::json& p) {
  const std::string ctx = "expansion_entangling";
  const auto n_gas = cfg_int(p, ctx, "n_gas", 1, 62);
  const auto n_env = cfg_int(p, ctx, "n_env", 1, 62);
  cfg_int(p, ctx, "n_realizations", 1, 10000);
  cfg_seed(p, ctx);

  const auto& c = p.at("coupling");
  if (!c.is_object() || !c.contains("kind") || !c.at("kind").is_string()) {
    throw ConfigError(ctx + ": 'coupling' must be an object with a string 'kind'");
  }
  const std::string kind = c.at("kind").get<std::string>();
  std::int64_t qubit_cap = 0;
  if (kind == "block_haar") {
    reject_unknown_keys(c, ctx + ".coupling", {"kind"});
    qubit_cap = 14;  // log2(max_state_dim)
  } else if (kind == "gue_evolution") {
    reject_unknown_keys(c, ctx + ".coupling", {"kind", "strength", "time"});
    cfg_num(c, ctx + ".coupling", "strength", true, false);
    cfg_num(c, ctx + ".coupling", "time", true, false);
    qubit_cap = 12;  // log2(max_dense_eig_dim)
  } else {
    throw ConfigError(ctx + ": coupling kind '" + kind +
                      "' must be block_haar or gue_evolution");
  }
  if (n_gas + n_env > qubit_cap) {
    throw CapError(ctx + ": " + std::to_string(n_gas) + " gas + " +
                   std::to_string(n_env) + " environment qubits exceed the limit of " +
                   std::to_string(qubit_cap) + " for coupling '" + kind + "'");
  }
}

inline void validate_relaxation_scan(const nlohmann::json& p) {
  const std::string ctx = "relaxation_scan";
  const auto n_gas = cfg_int(p, ctx, "n_gas", 1, 62);
  const auto n_env = cfg_int(p, ctx, "n_env", 1, 62);
  if (n_env < n_gas) {
    throw ConfigError(ctx + ": 'n_env' must be at least 'n_gas'");
  }
  if (n_gas + n_env > 12) {
    throw CapError(ctx + ": " + std::to_string(n_gas) + " gas + " +
                   std::to_string(n_env) +
                   " environment qubits exceed the limit of 12");
  }
  cfg_int(p, ctx, "n_realizations", 1, 10000);
  cfg_num(p, ctx, "coupling_strength", true, false);
  cfg_times(p, ctx, 8, true);
  cfg_seed(p, ctx);
}

}  // namespace detail

// Parses "key=value" (dotted keys reach one level deep); the value is parsed
// as JSON when possible and kept as a string otherwise.
inline void apply_override(nlohmann::json& params, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + spec + "' must look like key=value");
  }
  const std::string key = spec.substr(0, eq);
  const std::string text = spec.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  const auto dot = key.find('.');
  if (dot == std::string::npos) {
    params[key] = std::move(value);
    return;
  }
  const std::string outer = key.substr(0, dot);
  const std::string inner = key.substr(dot + 1);
  if (outer.empty() || inner.empty() || inner.find('.') != std::string::npos) {
    throw ConfigError("override key '" + key + "' may use at most one dot");
  }
  if (!params.contains(outer) || !params[outer].is_object()) {
    params[outer] = nlohmann::json::object();
  }
  params[outer][inner] = std::move(value);
}

// Builds a fully validated ScenarioConfig from user JSON of the shape
// {"scenario": name, <parameters...>, "output_path": optional}.
inline ScenarioConfig parse_config(nlohmann::json user,
                                   const std::vector<std::string>& overrides = {},
                                   std::optional<std::uint64_t> seed_override = {}) {
  if (!user.is_object()) throw ConfigError("config must be a JSON object");
  if (!user.contains("scenario") || !user.at("scenario").is_string()) {
    throw ConfigError("config needs a string 'scenario' key");
  }

  ScenarioConfig config;
  try {
    config.scenario = scenario_from_string(user.at("scenario").get<std::string>());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  user.erase("scenario");

  if (user.contains("output_path")) {
    if (!user.at("output_path").is_string()) {
      throw ConfigError("'output_path' must be a string");
    }
    config.output_path = user.at("output_path").get<std::string>();
    user.erase("output_path");
  }

  for (const auto& spec : overrides) apply_override(user, spec);
  if (seed_override) user["seed"] = *seed_override;

  nlohmann::json params = scenario_defaults(config.scenario);
  std::vector<std::string> allowed;
  for (const auto& [key, value] : params.items()) allowed.push_back(key);
  detail::reject_unknown_keys(user, to_string(config.scenario), allowed);
  params.update(user);

  // Fill nested defaults the shallow merge cannot reach.
  if (config.scenario == ScenarioKind::expansion_entangling &&
      params.at("coupling").is_object() &&
      params.at("coupling").value("kind", "") == "gue_evolution") {
    auto& c = params.at("coupling");
    if (!c.contains("strength")) c["strength"] = 1.0;
    if (!c.contains("time")) c["time"] = 1.0;
  }
  if (config.scenario == ScenarioKind::typicality &&
      params.at("energy_window").is_object()) {
    auto& w = params.at("energy_window");
    if (!w.contains("interaction_strength")) w["interaction_strength"] = 0.1;
  }

  switch (config.scenario) {
    case ScenarioKind::typicality:
      detail::validate_typicality(params);
      break;
    case ScenarioKind::bounce:
      detail::validate_bounce(params);
      break;
    case ScenarioKind::expansion_unitary:
      detail::validate_expansion_unitary(params);
      break;
    case ScenarioKind::expansion_entangling:
      detail::validate_expansion_entangling(params);
      break;
    case ScenarioKind::relaxation_scan:
      detail::validate_relaxation_scan(params);
      break;
  }

  config.parameters = std::move(params);
  return config;
}

inline ScenarioConfig load_config_file(const std::filesystem::path& path,
                                       const std::vector<std::string>& overrides = {},
                                       std::optional<std::uint64_t> seed_override = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  nlohmann::json user = nlohmann::json::parse(in, nullptr, false);
  if (user.is_discarded()) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON");
  }
  return parse_config(std::move(user), overrides, seed_override);
}

}  // namespace qtherm
