#pragma once

#include <map>
#include <string>
#include <vector>

namespace ipse {

/// Flat key/value config file: one `key = value` per line, '#' comments.
/// Unknown keys are collected by the consumer and reported as errors.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Marks a key as recognized; `unknown_keys` lists the rest.
  std::vector<std::string> unknown_keys() const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> touched_;
};

}  // namespace ipse
