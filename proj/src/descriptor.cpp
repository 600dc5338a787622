#include "sigmalab/descriptor.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "sigmalab/geometry.hpp"

namespace sigmalab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Descriptor Descriptor::parse(std::string_view text) {
  text = trim(text);
  Descriptor d;
  const auto colon = text.find(':');
  d.name = std::string(trim(text.substr(0, colon)));
  if (d.name.empty()) throw ConfigError("empty descriptor");
  if (colon == std::string_view::npos) return d;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      if (!d.variant.empty()) {
        throw ConfigError("descriptor parameter without value: '" + std::string(item) + "'");
      }
      d.variant = std::string(item);
      continue;
    }
    const std::string key(trim(item.substr(0, eq)));
    const std::string value(trim(item.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ConfigError("malformed descriptor parameter: '" + std::string(item) + "'");
    }
    if (!d.params.emplace(key, value).second) {
      throw ConfigError("duplicate descriptor parameter '" + key + "'");
    }
  }
  return d;
}

double Descriptor::number(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw ConfigError("descriptor '" + name + "' requires '" + key + "'");
  return parse_double(it->second, name + "." + key);
}

double Descriptor::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::string Descriptor::text_or(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void Descriptor::expect_only(std::string_view allowed, bool allow_variant) const {
  if (!allow_variant && !variant.empty()) {
    throw ConfigError("unexpected item '" + variant + "' in '" + name + "' descriptor");
  }
  std::set<std::string> keys;
  std::string_view rest = allowed;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    keys.emplace(trim(rest.substr(0, comma)));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  for (const auto& [key, value] : params) {
    if (!keys.count(key)) throw ConfigError("unknown parameter '" + key + "' for '" + name + "'");
  }
}

std::string Descriptor::str() const {
  std::string out = name;
  char sep = ':';
  if (!variant.empty()) {
    out += sep + variant;
    sep = ',';
  }
  for (const auto& [key, value] : params) {
    out += sep;
    out += key + "=" + value;
    sep = ',';
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
  text = trim(text);
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string to_string(Point2 p) {
  return "(" + format_double(p.x1) + ", " + format_double(p.x2) + ")";
}

}  // namespace sigmalab
