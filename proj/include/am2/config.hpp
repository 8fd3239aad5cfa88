#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "am2/model.hpp"

namespace am2 {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc{} || r.ptr != end) return std::nullopt;
  return v;
}

}  // namespace detail

/// Flat `key = value` settings. Values are kept as the exact input strings so
/// that a dump reproduces them byte for byte.
class Config {
 public:
  static constexpr std::string_view kNumericKeys[] = {
      "kinetics.m1", "kinetics.K1", "kinetics.m2", "kinetics.K2", "kinetics.KI",
      "model.alpha", "model.k1",    "model.k2",    "model.k3",    "model.k4"};
  static constexpr std::string_view kOtherKeys[] = {"preset", "output.dir", "output.csv",
                                                    "output.svg", "grid.resolution", "seed"};

  static bool known_key(std::string_view k) {
    for (auto n : kNumericKeys) {
      if (n == k) return true;
    }
    for (auto n : kOtherKeys) {
      if (n == k) return true;
    }
    return false;
  }

  void set(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw ConfigError("unknown key '" + key + "'");
    validate_value(key, value);
    raw_[key] = value;
  }

  std::optional<std::string> get(const std::string& key) const {
    const auto it = raw_.find(key);
    if (it == raw_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, std::string>& entries() const { return raw_; }

  Preset preset() const {
    const auto s = get("preset");
    return s ? *preset_from_name(*s) : Preset::CaseA;
  }

  /// Preset values overridden by any explicit numeric keys.
  NominalValues values() const {
    NominalValues v = nominal_values(preset());
    const std::pair<std::string_view, double*> slots[] = {
        {"kinetics.m1", &v.m1}, {"kinetics.K1", &v.K1}, {"kinetics.m2", &v.m2},
        {"kinetics.K2", &v.K2}, {"kinetics.KI", &v.KI}, {"model.alpha", &v.alpha},
        {"model.k1", &v.k1},    {"model.k2", &v.k2},    {"model.k3", &v.k3},
        {"model.k4", &v.k4}};
    for (const auto& [key, dst] : slots) {
      if (const auto s = get(std::string(key))) *dst = *detail::parse_double(*s);
    }
    return v;
  }

  ModelParams params() const { return make_params(values()); }

  std::uint64_t seed(std::uint64_t fallback = 0) const {
    const auto s = get("seed");
    return s ? *detail::parse_uint(*s) : fallback;
  }

  std::string dump() const {
    std::string out;
    for (const auto& [k, v] : raw_) out += k + " = " + v + "\n";
    return out;
  }

 private:
  static void validate_value(const std::string& key, const std::string& value) {
    if (key == "preset") {
      if (!preset_from_name(value)) throw ConfigError("unknown preset '" + value + "'");
      return;
    }
    if (key == "output.csv" || key == "output.svg") {
      if (value != "true" && value != "false") {
        throw ConfigError(key + " must be true or false");
      }
      return;
    }
    if (key == "seed" || key == "grid.resolution") {
      if (!detail::parse_uint(value)) throw ConfigError(key + " must be a non-negative integer");
      return;
    }
    if (key == "output.dir") return;
    const auto v = detail::parse_double(value);
    if (!v || !std::isfinite(*v)) throw ConfigError(key + " must be a finite number");
  }

  std::map<std::string, std::string> raw_;
};

inline Config parse_config(std::istream& in, const std::string& source = "<config>") {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto h = s.find('#'); h != std::string_view::npos) s = s.substr(0, h);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = detail::trim(s.substr(0, eq));
    const auto value = detail::trim(s.substr(eq + 1));
    try {
      c.set(std::string(key), std::string(value));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  // Building the parameters validates the combination (alpha range, signs).
  try {
    (void)c.params();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

inline Config parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace am2
