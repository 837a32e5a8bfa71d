#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace orbitflow {

/// Flat key-value run configuration with dotted keys (grid.L = 20).
/// Lines are `key = value`; # starts a comment.
class RunConfig {
 public:
  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  /// KEY=VALUE, overwrites.
  void apply_override(const std::string& keyval);

  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  std::string get_str(const std::string& key, const std::string& fallback = "") const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  /// "auto" (or absence) maps to fallback.
  double get_double_or_auto(const std::string& key, double fallback) const;

  /// Required variants throw ConfigError when missing.
  std::string require_str(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

  /// FNV-1a over the sorted key=value pairs; stamped into every output file.
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> kv_;
};

/// Comma-separated list of doubles ("1,2.5,-3e-2").
std::vector<double> parse_double_list(const std::string& text);

}  // namespace orbitflow
