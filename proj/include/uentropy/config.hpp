#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "uentropy/errors.hpp"

namespace uent {

// Flat key-value configuration: one `dotted.key = value` per line, `#`
// comments. Values are parsed as JSON where possible (numbers, lists,
// quoted strings); bare tokens fall back to strings, so
//   system.kind = toral
//   system.matrix = [[2,1],[1,1]]
// both work.
class KVConfig {
 public:
  KVConfig() = default;

  static KVConfig parse_file(const std::string& path);
  static KVConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const nlohmann::json& raw(const std::string& key) const;

  template <typename T>
  T get(const std::string& key) const {
    const auto& v = raw(key);
    try {
      return v.get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError("config key '" + key + "' has unexpected type: " + v.dump());
    }
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) const {
    if (!has(key)) return fallback;
    return get<T>(key);
  }

  void set(const std::string& key, nlohmann::json value) { values_[key] = std::move(value); }

  // Full contents as a JSON object, for echo-back in summaries.
  nlohmann::json echo() const;

 private:
  std::map<std::string, nlohmann::json> values_;
};

}  // namespace uent
