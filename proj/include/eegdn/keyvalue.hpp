#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eegdn/error.hpp"

namespace eegdn {

/// Ordered key=value record: manifests, checkpoint metadata, config files.
/// Text form is one `key=value` per line; blank lines and `#` comments are ignored.
class KeyValues {
 public:
  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries_.emplace_back(std::move(key), std::move(value));
  }

  void set(std::string key, double value) { set(std::move(key), format_double(value)); }
  void set(std::string key, long long value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, unsigned long long value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, int value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, unsigned long value) { set(std::move(key), std::to_string(value)); }
  void set(std::string key, const char* value) { set(std::move(key), std::string(value)); }

  std::optional<std::string> get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  bool contains(std::string_view key) const { return get(key).has_value(); }

  std::string require(std::string_view key) const {
    auto v = get(key);
    if (!v) throw ConfigError("missing key '" + std::string(key) + "'");
    return *v;
  }

  double require_double(std::string_view key) const {
    const std::string v = require(key);
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("key '" + std::string(key) + "': not a number: '" + v + "'");
    }
  }

  unsigned long long require_uint(std::string_view key) const {
    const std::string v = require(key);
    try {
      std::size_t pos = 0;
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      const unsigned long long u = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return u;
    } catch (const std::exception&) {
      throw ConfigError("key '" + std::string(key) + "': not a non-negative integer: '" + v + "'");
    }
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_text() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
  }

  static KeyValues parse(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" + t + "'");
      }
      std::string key = trim(t.substr(0, eq));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      kv.set(std::move(key), trim(t.substr(eq + 1)));
    }
    return kv;
  }

  /// Shortest round-trippable decimal form.
  static std::string format_double(double v) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
      std::snprintf(buf, sizeof buf, "%.*g", prec, v);
      if (std::stod(buf) == v) break;
    }
    return buf;
  }

 private:
  static std::string trim(std::string_view s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return std::string(b, e);
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

/// 64-bit FNV-1a, used for config hashes.
inline unsigned long long fnv1a64(std::string_view s) {
  unsigned long long h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(unsigned long long v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", v);
  return buf;
}

}  // namespace eegdn
