#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>

namespace pgrad {

/// Flat key=value configuration with dotted section names
/// (problem.n, family.kind, grid.per_decade, ...).  '#' starts a comment.
/// Unknown keys are rejected against the caller's allow-list.
struct RunConfig {
  std::map<std::string, std::string> values;

  static RunConfig parse(std::istream& is);
  static RunConfig parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;

  /// Throws std::invalid_argument naming the first key outside the allow-list.
  void require_known_keys(std::span<const std::string> allowed) const;
};

}  // namespace pgrad
