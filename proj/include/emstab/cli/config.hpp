#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emstab/core/error.hpp"

namespace emstab::cli {

using nlohmann::json;

enum class Kind { number, integer, string, boolean, numbers, vec3, cases };

struct KeySpec {
  std::string name;
  Kind kind;
  json fallback;
  std::string alias;  // Greek spelling, if any
  std::function<std::optional<std::string>(const json&)> check;  // returns "must be ..." on failure
};

struct Section {
  std::string name;
  std::vector<KeySpec> keys;

  const KeySpec* find(const std::string& key) const {
    for (const auto& k : keys)
      if (k.name == key || (!k.alias.empty() && k.alias == key)) return &k;
    return nullptr;
  }
};

namespace checks {

using Check = std::function<std::optional<std::string>(const json&)>;

inline Check positive() {
  return [](const json& v) -> std::optional<std::string> {
    if (v.get<double>() > 0.0) return std::nullopt;
    return "must be > 0";
  };
}
inline Check nonnegative() {
  return [](const json& v) -> std::optional<std::string> {
    if (v.get<double>() >= 0.0) return std::nullopt;
    return "must be >= 0";
  };
}
inline Check at_least(long lo) {
  return [lo](const json& v) -> std::optional<std::string> {
    if (v.get<long>() >= lo) return std::nullopt;
    return "must be >= " + std::to_string(lo);
  };
}
inline Check one_of(std::vector<std::string> options) {
  return [options](const json& v) -> std::optional<std::string> {
    const auto s = v.get<std::string>();
    if (std::find(options.begin(), options.end(), s) != options.end()) return std::nullopt;
    std::string list;
    for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
    return "must be one of " + list;
  };
}
inline Check all_positive() {
  return [](const json& v) -> std::optional<std::string> {
    for (const auto& x : v)
      if (!(x.get<double>() > 0.0)) return "entries must be > 0";
    return std::nullopt;
  };
}
inline Check all_nonnegative() {
  return [](const json& v) -> std::optional<std::string> {
    for (const auto& x : v)
      if (!(x.get<double>() >= 0.0)) return "entries must be >= 0";
    return std::nullopt;
  };
}
inline Check even_at_least(long lo) {
  return [lo](const json& v) -> std::optional<std::string> {
    const long n = v.get<long>();
    if (n >= lo && n % 2 == 0) return std::nullopt;
    return "must be even and >= " + std::to_string(lo);
  };
}

}  // namespace checks

/// The configuration schema. Every key has a default.
inline const std::vector<Section>& schema() {
  using namespace checks;
  static const std::vector<Section> s = {
      {"planewave",
       {{"beta", Kind::number, 1.0, "β", positive()},
        {"lambda", Kind::number, -1.0, "λ", {}},
        {"L", Kind::number, 2.0 * std::numbers::pi, "", positive()},
        {"alpha", Kind::number, 1.0, "α", {}},
        {"k", Kind::number, 0.0, "", {}},
        {"cases", Kind::cases, json::array(), "", {}}}},
      {"spherical",
       {{"potential", Kind::string, "kepler", "", one_of({"kepler", "harmonic", "power", "table"})},
        {"s", Kind::number, -1.0, "", {}},
        {"p", Kind::number, -1.0, "", {}},
        {"table_r", Kind::numbers, json::array(), "", all_positive()},
        {"table_V", Kind::numbers, json::array(), "", {}},
        {"rho", Kind::number, 1.0, "ρ", positive()},
        {"axis", Kind::vec3, json::array({0.0, 0.0, 1.0}), "", {}},
        {"K", Kind::number, 0.0, "", nonnegative()}}},
      {"soliton",
       {{"alpha", Kind::number, 1.0, "α", positive()},
        {"c", Kind::number, 0.0, "", {}},
        {"lambda", Kind::number, 1.0, "λ", positive()},
        {"L", Kind::number, 16.0 * std::numbers::pi, "", positive()},
        {"v", Kind::number, 1.0, "", {}},
        {"theta", Kind::number, std::numbers::pi / 4.0, "θ", {}},
        {"gamma1", Kind::number, 0.0, "γ1", {}},
        {"gamma2", Kind::number, 0.0, "γ2", {}}}},
      {"standing",
       {{"kind", Kind::string, "PT", "", one_of({"PT", "AL"})},
        {"sigma", Kind::number, 3.0, "σ", {}},
        {"b", Kind::number, 0.0, "", nonnegative()},
        {"xi", Kind::number, 1.0, "ξ", positive()},
        {"xi_lo", Kind::number, 0.05, "ξ_lo", positive()},
        {"xi_hi", Kind::number, 1.0, "ξ_hi", nonnegative()},
        {"steps", Kind::integer, 20, "", at_least(3)},
        {"xi_list", Kind::numbers, json::array({0.1, 0.05, 0.01}), "", all_positive()},
        {"R", Kind::number, 40.0, "", positive()},
        {"h", Kind::number, 5e-3, "", positive()},
        {"tol", Kind::number, 1e-8, "", positive()},
        {"residual_tol", Kind::number, 1e-8, "", positive()},
        {"w_max", Kind::number, 1e6, "", positive()}}},
      {"numerics",
       {{"N", Kind::integer, 256, "", even_at_least(8)},
        {"dt", Kind::number, 1e-3, "", positive()},
        {"T", Kind::number, 10.0, "", positive()},
        {"stride", Kind::integer, 100, "", at_least(1)},
        {"n_max", Kind::integer, 8, "", at_least(0)},
        {"eta", Kind::number, 1e-2, "η", positive()},
        {"samples", Kind::integer, 1000, "", at_least(0)},
        {"delta", Kind::number, 1e-6, "δ", nonnegative()},
        {"deltas", Kind::numbers, json::array({1e-4, 1e-3, 1e-2}), "δs", all_nonnegative()},
        {"mode_min", Kind::integer, 0, "", at_least(0)},
        {"mode_max", Kind::integer, 8, "", at_least(0)},
        {"exceed_factor", Kind::number, 100.0, "", positive()},
        {"t", Kind::number, 0.5, "", nonnegative()}}},
      {"harness", {{"system", Kind::string, "planewave", "", one_of({"planewave", "spherical"})}}},
  };
  return s;
}

inline const Section& section(const std::string& name) {
  for (const auto& s : schema())
    if (s.name == name) return s;
  throw InvalidArgument("config: no section " + name);
}

inline const std::vector<std::pair<std::string, std::vector<std::string>>>& commands() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> c = {
      {"spherical", {"verdict", "hessian", "simulate", "probe"}},
      {"planewave", {"verdict", "spectrum", "rates", "simulate", "probe"}},
      {"soliton", {"simulate", "boost-check"}},
      {"manakov", {"simulate"}},
      {"standing", {"shoot", "continue", "slope", "spectral", "limit"}},
      {"harness", {"stability", "coercivity"}},
  };
  return c;
}

inline void check_command(const std::string& family, const std::string& action) {
  for (const auto& [f, actions] : commands())
    if (f == family) {
      if (std::find(actions.begin(), actions.end(), action) != actions.end()) return;
      std::string list;
      for (const auto& a : actions) list += (list.empty() ? "" : "|") + a;
      throw InvalidArgument("unknown action '" + action + "' for " + family + " (expected " + list + ")");
    }
  throw InvalidArgument("unknown command family '" + family + "'");
}

/// Sections a shorthand (unsectioned) key is looked up in, in order.
inline std::vector<std::string> shorthand_sections(const std::string& family, const std::string& harness_system) {
  std::vector<std::string> out;
  if (family == "manakov")
    out.push_back("soliton");
  else if (family == "harness")
    out.push_back(harness_system);
  else
    out.push_back(family);
  out.push_back("numerics");
  out.push_back("harness");
  return out;
}

inline std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

/// Closest known key among the given sections, spelled "alias/name" when it has a Greek alias.
inline std::optional<std::string> suggest(const std::string& key, const std::vector<std::string>& sections) {
  std::optional<std::string> best;
  std::size_t best_d = std::max<std::size_t>(2, key.size() / 3) + 1;
  for (const auto& sn : sections)
    for (const auto& k : section(sn).keys) {
      std::size_t d = edit_distance(key, k.name);
      if (!k.alias.empty()) d = std::min(d, edit_distance(key, k.alias));
      if (d < best_d) {
        best_d = d;
        best = k.alias.empty() ? k.name : k.alias + "/" + k.name;
      }
    }
  return best;
}

struct RunConfig {
  std::string family, action;
  json values;  // section -> key -> value, defaults applied
  std::uint64_t seed = 0;
  std::string output_dir;  // empty: derived from the output root

  std::string command() const { return family + " " + action; }

  const json& at(const std::string& path) const {
    const auto dot = path.find('.');
    return values.at(path.substr(0, dot)).at(path.substr(dot + 1));
  }
  double num(const std::string& path) const { return at(path).get<double>(); }
  long integer(const std::string& path) const { return at(path).get<long>(); }
  std::string str(const std::string& path) const { return at(path).get<std::string>(); }
  std::vector<double> nums(const std::string& path) const { return at(path).get<std::vector<double>>(); }

  /// Canonical snapshot hashed into every output (output location excluded).
  json canonical() const { return {{"command", command()}, {"seed", seed}, {"config", values}}; }
};

namespace detail {

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::number: return "a number";
    case Kind::integer: return "an integer";
    case Kind::string: return "a string";
    case Kind::boolean: return "a boolean";
    case Kind::numbers: return "an array of numbers";
    case Kind::vec3: return "an array of 3 numbers";
    case Kind::cases: return "an array of {lambda, alpha} objects";
  }
  return "a value";
}

inline bool is_number(const json& v) { return v.is_number() && std::isfinite(v.get<double>()); }

inline bool matches(Kind k, const json& v) {
  switch (k) {
    case Kind::number: return is_number(v);
    case Kind::integer: return v.is_number_integer() || (is_number(v) && std::floor(v.get<double>()) == v.get<double>());
    case Kind::string: return v.is_string();
    case Kind::boolean: return v.is_boolean();
    case Kind::numbers: return v.is_array() && std::all_of(v.begin(), v.end(), is_number);
    case Kind::vec3: return v.is_array() && v.size() == 3 && std::all_of(v.begin(), v.end(), is_number);
    case Kind::cases:
      if (!v.is_array()) return false;
      for (const auto& c : v) {
        if (!c.is_object() || c.size() != 2) return false;
        for (auto it = c.begin(); it != c.end(); ++it) {
          const bool known = it.key() == "lambda" || it.key() == "λ" || it.key() == "alpha" || it.key() == "α";
          if (!known || !is_number(it.value())) return false;
        }
      }
      return true;
  }
  return false;
}

inline json normalize(Kind k, const json& v) {
  if (k == Kind::integer) return static_cast<long>(v.get<double>());
  if (k == Kind::cases) {
    json out = json::array();
    for (const auto& c : v) {
      json e;
      for (auto it = c.begin(); it != c.end(); ++it) e[(it.key() == "λ" || it.key() == "lambda") ? "lambda" : "alpha"] = it.value();
      if (e.size() != 2) throw InvalidArgument("planewave.cases entries need lambda and alpha");
      out.push_back(e);
    }
    return out;
  }
  return v;
}

inline void set_key(json& values, const Section& s, const std::string& key, const json& v) {
  const KeySpec* spec = s.find(key);
  if (!spec) {
    std::string msg = "config: unknown key \"" + key + "\" in section " + s.name;
    if (auto hint = suggest(key, {s.name})) msg += " (did you mean \"" + *hint + "\"?)";
    throw InvalidArgument(msg);
  }
  const std::string path = s.name + "." + spec->name;
  if (!matches(spec->kind, v)) throw InvalidArgument(path + " must be " + kind_name(spec->kind));
  const json n = normalize(spec->kind, v);
  if (spec->check)
    if (auto err = spec->check(n)) throw InvalidArgument(path + " " + *err);
  values[s.name][spec->name] = n;
}

inline const Section* route(const std::string& key, const std::vector<std::string>& order) {
  for (const auto& sn : order) {
    const Section& s = section(sn);
    if (s.find(key)) return &s;
  }
  return nullptr;
}

inline void unknown(const std::string& key, const std::vector<std::string>& order) {
  std::string msg = "config: unknown key \"" + key + "\"";
  if (auto hint = suggest(key, order)) msg += " (did you mean \"" + *hint + "\"?)";
  throw InvalidArgument(msg);
}

}  // namespace detail

/// Parses a command-line value: JSON when it parses, a bare string otherwise.
inline json parse_flag_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

/// Builds a validated RunConfig from a JSON document (comments allowed) plus `key=value` overrides.
/// Keys may be nested by section or given flat; flat keys resolve against the command's own
/// section, then numerics, then harness.
inline RunConfig parse_config(const json& doc, std::string family, std::string action,
                              const std::vector<std::pair<std::string, json>>& overrides = {}) {
  if (!doc.is_object()) throw InvalidArgument("config: top level must be an object");
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) throw InvalidArgument("command must be a string like \"planewave verdict\"");
    std::istringstream is(doc["command"].get<std::string>());
    std::string f, a;
    is >> f >> a;
    if (family.empty()) family = f, action = a;
  }
  if (family.empty() || action.empty()) throw InvalidArgument("no command given (e.g. `emstab planewave verdict`)");
  check_command(family, action);

  RunConfig cfg;
  cfg.family = family;
  cfg.action = action;
  for (const auto& s : schema())
    for (const auto& k : s.keys) cfg.values[s.name][k.name] = k.fallback;

  // The harness system decides where flat keys land, so resolve it first.
  std::string system = "planewave";
  auto peek_system = [&](const json& v) {
    if (v.is_string()) system = v.get<std::string>();
  };
  if (doc.contains("harness") && doc["harness"].is_object() && doc["harness"].contains("system"))
    peek_system(doc["harness"]["system"]);
  if (doc.contains("system")) peek_system(doc["system"]);
  for (const auto& [k, v] : overrides)
    if (k == "system" || k == "harness.system") peek_system(v);
  const auto order = shorthand_sections(family, system);

  auto apply = [&](const std::string& key, const json& v) {
    if (key == "command") return;
    if (key == "seed") {
      if (!v.is_number_integer() || v.get<long long>() < 0) throw InvalidArgument("seed must be a non-negative integer");
      cfg.seed = v.get<std::uint64_t>();
      return;
    }
    if (key == "output_dir") {
      if (!v.is_string()) throw InvalidArgument("output_dir must be a string");
      cfg.output_dir = v.get<std::string>();
      return;
    }
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
      const std::string sec = key.substr(0, dot);
      const auto it = std::find_if(schema().begin(), schema().end(), [&](const Section& s) { return s.name == sec; });
      if (it == schema().end()) detail::unknown(sec, order);
      detail::set_key(cfg.values, *it, key.substr(dot + 1), v);
      return;
    }
    const auto it = std::find_if(schema().begin(), schema().end(), [&](const Section& s) { return s.name == key; });
    if (it != schema().end()) {
      if (!v.is_object()) throw InvalidArgument("config: section " + key + " must be an object");
      for (auto kv = v.begin(); kv != v.end(); ++kv) detail::set_key(cfg.values, *it, kv.key(), kv.value());
      return;
    }
    const Section* s = detail::route(key, order);
    if (!s) detail::unknown(key, order);
    detail::set_key(cfg.values, *s, key, v);
  };
  for (auto it = doc.begin(); it != doc.end(); ++it) apply(it.key(), it.value());
  for (const auto& [k, v] : overrides) apply(k, v);

  if (cfg.integer("numerics.mode_max") < cfg.integer("numerics.mode_min"))
    throw InvalidArgument("numerics.mode_max must be >= numerics.mode_min");
  if (cfg.values["spherical"]["table_r"].size() != cfg.values["spherical"]["table_V"].size())
    throw InvalidArgument("spherical.table_r and spherical.table_V must have the same length");
  return cfg;
}

/// Reads a JSON config file; `//` and `/* */` comments are accepted.
inline json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config file " + path + ": " + e.what());
  }
}

}  // namespace emstab::cli
