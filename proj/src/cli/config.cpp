#include <algorithm>
#include <cmath>

#include "sigmalab/cli.hpp"
#include "sigmalab/descriptor.hpp"

namespace sigmalab::cli {

namespace {

Point2 point_from(const Json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("config key '" + key + "' must be a pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T get(const Json& j, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!j.is_number()) throw ConfigError("");
    } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
      if (!j.is_number_integer()) throw ConfigError("");
      if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0) throw ConfigError("");
      }
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw ConfigError("");
    } else {
      if (!j.is_string()) throw ConfigError("");
    }
    return j.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

DomainConfig merge_domain(DomainConfig d, const Json& j) {
  if (!j.is_object()) throw ConfigError("config key 'domain' must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string name = "domain." + key;
    if (key == "kind") d.kind = get<std::string>(value, name);
    else if (key == "center") d.center = point_from(value, name);
    else if (key == "radius") d.radius = get<double>(value, name);
    else if (key == "r_in") d.r_in = get<double>(value, name);
    else if (key == "r_out") d.r_out = get<double>(value, name);
    else if (key == "corner") d.corner = point_from(value, name);
    else if (key == "width") d.width = get<double>(value, name);
    else if (key == "height") d.height = get<double>(value, name);
    else throw ConfigError("unknown config key '" + name + "'");
  }
  return d;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"mesh", "solve", "solve-nd", "map",
                                              "verify", "meyers", "beltrami", "unimodal"};
  return names;
}

RunConfig defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  if (command == "meyers") {
    c.domain.kind = "annulus";
    c.h = 0.04;
    c.refinements = 2;
  }
  if (command == "map" || command == "verify") c.g = "identity";
  if (command == "unimodal") c.g = "cos-theta";
  return c;
}

RunConfig merge_json(RunConfig c, const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "command") c.command = get<std::string>(value, key);
    else if (key == "domain") c.domain = merge_domain(c.domain, value);
    else if (key == "h") c.h = get<double>(value, key);
    else if (key == "spacing") c.spacing = get<double>(value, key);
    else if (key == "refinements") c.refinements = get<int>(value, key);
    else if (key == "sigma") c.sigma = get<std::string>(value, key);
    else if (key == "g") c.g = get<std::string>(value, key);
    else if (key == "solver") c.solver = get<std::string>(value, key);
    else if (key == "drift") c.drift = get<std::string>(value, key);
    else if (key == "alpha") c.alpha = get<double>(value, key);
    else if (key == "margin") c.margin = get<double>(value, key);
    else if (key == "directions") c.directions = get<int>(value, key);
    else if (key == "probes") {
      if (!value.is_array()) throw ConfigError("config key 'probes' must be a list of points");
      c.probes.clear();
      for (const auto& p : value) c.probes.push_back(point_from(p, "probes"));
    }
    else if (key == "probe_count") c.probe_count = get<int>(value, key);
    else if (key == "probe_radius_fraction") c.probe_radius_fraction = get<double>(value, key);
    else if (key == "tie_tolerance") c.tie_tolerance = get<double>(value, key);
    else if (key == "rel_tol") c.rel_tol = get<double>(value, key);
    else if (key == "allow_multiply_connected") c.allow_multiply_connected = get<bool>(value, key);
    else if (key == "values") c.values = get<std::string>(value, key);
    else if (key == "out") c.out = get<std::string>(value, key);
    else if (key == "seed") c.seed = get<std::uint64_t>(value, key);
    else if (key == "svg") c.svg = get<bool>(value, key);
    else if (key == "levels") c.levels = get<int>(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

Json to_json(const RunConfig& c) {
  Json probes = Json::array();
  for (const auto& p : c.probes) probes.push_back(sigmalab::to_json(p));
  Json domain{{"kind", c.domain.kind}};
  if (c.domain.kind == "disk") {
    domain["center"] = sigmalab::to_json(c.domain.center);
    domain["radius"] = c.domain.radius;
  } else if (c.domain.kind == "annulus") {
    domain["center"] = sigmalab::to_json(c.domain.center);
    domain["r_in"] = c.domain.r_in;
    domain["r_out"] = c.domain.r_out;
  } else {
    domain["corner"] = sigmalab::to_json(c.domain.corner);
    domain["width"] = c.domain.width;
    domain["height"] = c.domain.height;
  }
  return {{"command", c.command},
          {"domain", domain},
          {"h", c.h},
          {"spacing", c.spacing},
          {"refinements", c.refinements},
          {"sigma", c.sigma},
          {"g", c.g},
          {"solver", c.solver},
          {"drift", c.drift},
          {"alpha", c.alpha},
          {"margin", c.margin},
          {"directions", c.directions},
          {"probes", probes},
          {"probe_count", c.probe_count},
          {"probe_radius_fraction", c.probe_radius_fraction},
          {"tie_tolerance", c.tie_tolerance},
          {"rel_tol", c.rel_tol},
          {"allow_multiply_connected", c.allow_multiply_connected},
          {"values", c.values},
          {"seed", c.seed},
          {"svg", c.svg},
          {"levels", c.levels}};
}

void validate(const RunConfig& c) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), c.command) == names.end()) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
  };
  const auto& d = c.domain;
  if (d.kind == "disk") {
    positive(d.radius, "domain radius");
  } else if (d.kind == "annulus") {
    positive(d.r_in, "annulus r_in");
    if (!(d.r_out > d.r_in)) throw ConfigError("annulus needs r_out > r_in");
  } else if (d.kind == "rectangle") {
    positive(d.width, "rectangle width");
    positive(d.height, "rectangle height");
  } else {
    throw ConfigError("unknown domain kind '" + d.kind + "' (disk, annulus, rectangle)");
  }
  positive(c.h, "h");
  positive(c.spacing, "spacing");
  positive(c.alpha, "alpha");
  positive(c.probe_radius_fraction, "probe_radius_fraction");
  if (c.probe_radius_fraction >= 1.0) throw ConfigError("probe_radius_fraction must be below 1");
  if (c.refinements < 0 || c.refinements > 6) throw ConfigError("refinements must lie in [0, 6]");
  if (!(c.margin >= 0.0)) throw ConfigError("margin must be nonnegative");
  if (c.directions < 1) throw ConfigError("directions must be positive");
  if (c.probe_count < 0) throw ConfigError("probe_count must be nonnegative");
  if (!(c.tie_tolerance >= 0.0)) throw ConfigError("tie_tolerance must be nonnegative");
  if (!(c.rel_tol > 0.0 && c.rel_tol < 1.0)) throw ConfigError("rel_tol must lie in (0, 1)");
  if (c.solver != "fem" && c.solver != "fd") throw ConfigError("solver must be fem or fd");
  if (c.drift != "div" && c.drift != "zero") throw ConfigError("drift must be div or zero");
  if (c.levels < 1 || c.levels > 200) throw ConfigError("levels must lie in [1, 200]");
  if (c.out.empty()) throw ConfigError("output directory must not be empty");
}

}  // namespace sigmalab::cli
