#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace sigmalab {

/// Parsed form of "name:key=value,key=value". One bare item without '='
/// is accepted as the variant ("harmonic:re-z2").
struct Descriptor {
  std::string name;
  std::string variant;
  std::map<std::string, std::string> params;

  static Descriptor parse(std::string_view text);

  bool has(const std::string& key) const { return params.count(key) != 0; }
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  /// Throws ConfigError if a parameter outside `allowed` (comma separated) is
  /// present, or a variant when none is allowed.
  void expect_only(std::string_view allowed, bool allow_variant = false) const;

  std::string str() const;
};

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

/// Strict full-string parse; throws ConfigError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

}  // namespace sigmalab
