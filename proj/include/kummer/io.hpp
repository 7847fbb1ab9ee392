#pragma once

// Run configuration, CSV emission and manifests for the command-line front
// end. Links against OpenSSL (libcrypto) for SHA-256.

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kummer/arith.hpp"
#include "kummer/errors.hpp"
#include "kummer/parallel.hpp"

namespace kummer {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

enum class ParamKind { kInt, kUInt, kDouble, kBool, kPrime, kList };

struct ParamSpec {
  std::string name;
  ParamKind kind;
  json fallback;
  double lo = -1e300;  // inclusive bounds for numeric kinds
  double hi = 1e300;
  std::string help;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"bh-run",        "singular-series", "sieve-lab", "class-list",
                                              "variety-solve", "density",         "selftest"};
  return names;
}

inline std::vector<ParamSpec> param_schema(const std::string& sub) {
  using K = ParamKind;
  const double big = 9.2e18;
  if (sub == "bh-run") {
    return {{"r", K::kPrime, 3, 2, 61, "degree of n^r + k"},
            {"x", K::kUInt, 1000, 2, big, "range of n"},
            {"y", K::kUInt, 10000, 1, big, "range of k"},
            {"n0", K::kInt, 0, -big, big, "residue of n"},
            {"m0", K::kUInt, 1, 1, big, "modulus of n"},
            {"trunc-p", K::kUInt, 10000, 2, 1e9, "singular series truncation"},
            {"threshold", K::kDouble, 1.0, 0.0, 100.0, "B' in the cutoff x/(log x)^B'"}};
  }
  if (sub == "singular-series") {
    return {{"r", K::kPrime, 3, 2, 61, "degree"},
            {"k-lo", K::kUInt, 1, 1, big, "first k"},
            {"k-hi", K::kUInt, 100, 1, big, "last k"},
            {"n0", K::kInt, 0, -big, big, "residue of n"},
            {"m0", K::kUInt, 1, 1, big, "modulus of n"},
            {"trunc-p", K::kUInt, 10000, 2, 1e9, "truncation P (compared with 2P)"}};
  }
  if (sub == "sieve-lab") {
    return {{"r", K::kPrime, 3, 2, 61, "character order"},
            {"q-list", K::kList, json::array({5, 10, 20, 40}), 1, 1e5, "values of Q"},
            {"m-list", K::kList, json::array({25, 50, 100, 200, 400}), 1, 1e6, "values of M"},
            {"trials", K::kUInt, 100, 1, 1e7, "random vectors per cell"},
            {"primitive-only", K::kBool, false, 0, 1, "restrict to primitive characters"}};
  }
  if (sub == "class-list") return {{"bound", K::kUInt, 427, 3, 1e7, "largest d"}};
  if (sub == "variety-solve") {
    return {{"a", K::kInt, -3, -big, big, "squarefree a"},
            {"r", K::kPrime, 3, 2, 61, "exponent r"},
            {"k", K::kUInt, 1, 1, 4.6e18, "constant k"},
            {"budget", K::kUInt, 20000, 1, 1e9, "largest fiber n"},
            {"fallback-t", K::kUInt, 100, 0, 1e6, "largest |t| in the direct search"}};
  }
  if (sub == "density") {
    return {{"d", K::kUInt, 3, 3, 1e7, "form n1^2 + d n2^2"},
            {"r", K::kPrime, 5, 3, 61, "exponent of n3"},
            {"K", K::kUInt, 10000, 1, 1e8, "largest k"},
            {"b", K::kDouble, 2.0, 1e-9, 1e6, "negative range factor B"}};
  }
  if (sub == "selftest") return {};
  throw UsageError("unknown subcommand '" + sub + "'");
}

struct RunConfig {
  std::string subcommand;
  json params = json::object();
  u64 seed = 0;
  std::vector<std::string> outputs;
  unsigned workers = 1;

  i64 get_int(const std::string& key) const { return params.at(key).get<i64>(); }
  u64 get_uint(const std::string& key) const { return params.at(key).get<u64>(); }
  double get_double(const std::string& key) const { return params.at(key).get<double>(); }
  bool get_bool(const std::string& key) const { return params.at(key).get<bool>(); }
  std::vector<u64> get_list(const std::string& key) const { return params.at(key).get<std::vector<u64>>(); }
};

// Canonical form; parse_config of this reproduces the same RunConfig.
inline json serialize(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["out"] = c.outputs.empty() ? json(nullptr) : json(c.outputs.front());
  for (const auto& [k, v] : c.params.items()) j[k] = v;
  return j;
}

namespace detail {

[[noreturn]] inline void bad_value(const std::string& key, const std::string& why) {
  throw UsageError("--" + key + ": " + why);
}

inline double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    bad_value(key, "'" + text + "' is not a number");
  }
  if (used != text.size()) bad_value(key, "'" + text + "' is not a number");
  return v;
}

inline json coerce_scalar(const ParamSpec& s, const json& v) {
  double x = 0;
  if (v.is_string()) {
    const std::string t = v.get<std::string>();
    if (s.kind == ParamKind::kBool) {
      if (t == "true" || t == "1") return true;
      if (t == "false" || t == "0") return false;
      bad_value(s.name, "expected true or false, got '" + t + "'");
    }
    x = parse_number(s.name, t);
  } else if (v.is_boolean() && s.kind == ParamKind::kBool) {
    return v;
  } else if (v.is_number()) {
    if (s.kind == ParamKind::kBool) bad_value(s.name, "expected a boolean");
    x = v.get<double>();
  } else {
    bad_value(s.name, "unsupported value " + v.dump());
  }
  if (x < s.lo || x > s.hi) {
    std::ostringstream os;
    os << "value " << (v.is_string() ? v.get<std::string>() : v.dump()) << " is outside [" << s.lo << ", " << s.hi << "]";
    bad_value(s.name, os.str());
  }
  switch (s.kind) {
    case ParamKind::kDouble: return x;
    case ParamKind::kInt: {
      if (v.is_number_integer()) return v.get<i64>();
      if (x != std::floor(x)) bad_value(s.name, "expected an integer");
      return v.is_string() ? std::stoll(v.get<std::string>()) : static_cast<i64>(x);
    }
    case ParamKind::kUInt:
    case ParamKind::kPrime: {
      if (x != std::floor(x) || x < 0) bad_value(s.name, "expected a nonnegative integer");
      const u64 u = v.is_number_unsigned() ? v.get<u64>()
                    : v.is_string()       ? std::stoull(v.get<std::string>())
                                          : static_cast<u64>(x);
      if (s.kind == ParamKind::kPrime && !is_prime(u)) bad_value(s.name, std::to_string(u) + " is not prime");
      return u;
    }
    default: break;
  }
  return v;
}

inline json coerce(const ParamSpec& s, const json& v) {
  if (s.kind != ParamKind::kList) return coerce_scalar(s, v);
  json items = json::array();
  std::vector<json> raw;
  if (v.is_array()) {
    for (const auto& e : v) raw.push_back(e);
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) bad_value(s.name, "empty list entry");
      raw.emplace_back(tok);
    }
  } else {
    raw.push_back(v);
  }
  if (raw.empty()) bad_value(s.name, "list must not be empty");
  ParamSpec elem = s;
  elem.kind = ParamKind::kUInt;
  for (const auto& e : raw) items.push_back(coerce_scalar(elem, e));
  return items;
}

inline void cross_check(const RunConfig& c) {
  if (c.subcommand == "singular-series" && c.get_uint("k-lo") > c.get_uint("k-hi")) {
    bad_value("k-lo", "must not exceed --k-hi");
  }
}

}  // namespace detail

inline json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
}

// Merge defaults < file < flags for `sub`. `flags` holds the raw flag text
// keyed by name (without dashes); reserved keys: seed, workers, out.
inline RunConfig build_config(const std::string& sub, const json& file, const std::map<std::string, std::string>& flags) {
  const auto schema = param_schema(sub);
  RunConfig c;
  c.subcommand = sub;
  c.workers = default_workers();
  json merged = json::object();
  if (!file.is_null()) {
    if (!file.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [k, v] : file.items()) merged[k] = v;
  }
  for (const auto& [k, v] : flags) merged[k] = v;

  if (merged.contains("subcommand")) {
    if (!merged["subcommand"].is_string() || merged["subcommand"].get<std::string>() != sub) {
      detail::bad_value("subcommand", "config file is for " + merged["subcommand"].dump());
    }
    merged.erase("subcommand");
  }
  if (merged.contains("seed")) {
    ParamSpec s{"seed", ParamKind::kUInt, 0, 0, 1.8e19, "RNG seed"};
    c.seed = detail::coerce(s, merged["seed"]).get<u64>();
    merged.erase("seed");
  }
  if (merged.contains("workers")) {
    ParamSpec s{"workers", ParamKind::kUInt, 1, 1, 1024, "worker threads"};
    c.workers = static_cast<unsigned>(detail::coerce(s, merged["workers"]).get<u64>());
    merged.erase("workers");
  }
  if (merged.contains("out")) {
    if (!merged["out"].is_null()) {
      if (!merged["out"].is_string()) detail::bad_value("out", "expected a path");
      c.outputs.push_back(merged["out"].get<std::string>());
    }
    merged.erase("out");
  }
  for (const auto& s : schema) {
    if (merged.contains(s.name)) {
      c.params[s.name] = detail::coerce(s, merged[s.name]);
      merged.erase(s.name);
    } else {
      c.params[s.name] = s.fallback;
    }
  }
  if (!merged.empty()) throw UsageError("unknown key '" + merged.begin().key() + "' for " + sub);
  detail::cross_check(c);
  return c;
}

// args excludes the program name and the subcommand.
inline RunConfig parse_config(const std::string& sub, const std::vector<std::string>& args,
                              const std::optional<std::string>& config_path = std::nullopt) {
  const auto schema = param_schema(sub);
  CLI::App app{"kummer " + sub};
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& s : schema) {
    if (s.kind == ParamKind::kBool) {
      opts[s.name] = app.add_flag("--" + s.name, s.help);
    } else {
      opts[s.name] = app.add_option("--" + s.name, raw[s.name], s.help);
    }
  }
  std::string seed, workers, out, config;
  opts["seed"] = app.add_option("--seed", seed, "RNG seed");
  opts["workers"] = app.add_option("--workers", workers, "worker threads");
  opts["out"] = app.add_option("--out", out, "CSV output path");
  app.add_option("--config", config, "JSON config file");
  raw["seed"];
  raw["workers"];
  raw["out"];
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()));
  }
  raw["seed"] = seed;
  raw["workers"] = workers;
  raw["out"] = out;

  std::map<std::string, std::string> flags;
  for (const auto& [name, opt] : opts) {
    if (opt->count() == 0) continue;
    const auto spec = std::find_if(schema.begin(), schema.end(), [&](const ParamSpec& s) { return s.name == name; });
    flags[name] = (spec != schema.end() && spec->kind == ParamKind::kBool) ? "true" : raw[name];
  }
  std::optional<std::string> path = config_path;
  if (!config.empty()) path = config;
  const json file = path ? load_config_file(*path) : json(nullptr);
  return build_config(sub, file, flags);
}

// Rebuild a config from its serialized form.
inline RunConfig parse_serialized(const json& j) {
  if (!j.is_object() || !j.contains("subcommand") || !j["subcommand"].is_string()) {
    throw UsageError("serialized config lacks a subcommand");
  }
  return build_config(j["subcommand"].get<std::string>(), j, {});
}

inline json normalize(const json& j) { return serialize(parse_serialized(j)); }

// 12 significant digits, locale-independent.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) {
      if (r.size() != header.size()) throw InvariantViolation("CsvTable: row width differs from header");
      line(r);
    }
    return out;
  }
};

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw ResourceError("sha256: OpenSSL digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

struct ResultManifest {
  json config;
  std::string version = kVersion;
  double wall_time = 0.0;
  std::map<std::string, std::string> checksums;  // path -> sha256
  json summary = json::object();

  json to_json() const {
    json j;
    j["config"] = config;
    j["version"] = version;
    j["wall_time"] = wall_time;
    j["checksums"] = json::object();
    for (const auto& [p, c] : checksums) j["checksums"][p] = c;
    j["summary"] = summary;
    return j;
  }
};

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ResourceError("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ResourceError("write to '" + path + "' failed");
}

// CSV to `csv_path` and the manifest to `csv_path`.manifest.json.
inline void emit(const CsvTable& table, ResultManifest& manifest, const std::string& csv_path) {
  const std::string bytes = table.str();
  write_file(csv_path, bytes);
  manifest.checksums[csv_path] = sha256_hex(bytes);
  write_file(csv_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
}

}  // namespace kummer
