#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "sigmalab/cli.hpp"
#include "sigmalab/descriptor.hpp"

namespace sigmalab::cli {

namespace {

Point2 parse_point(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError(what + " must be written as x,y");
  return {parse_double(text.substr(0, comma), what), parse_double(text.substr(comma + 1), what)};
}

template <typename T>
void apply(std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"sigmalab: solvers and mapping checks for div(sigma grad u) = 0"};
  app.set_help_flag("--help", "print this help and exit");
  std::string command;
  app.add_option("command", command, "mesh | solve | solve-nd | map | verify | meyers | beltrami | unimodal")
      ->required()
      ->check(CLI::IsMember(command_names()));
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration; flags override it");
  std::optional<std::string> out_dir, sigma, g, solver, drift, domain, center, corner, values;
  std::optional<double> h, spacing, alpha, margin, radius, r_in, r_out, width, height, tie_tolerance,
      rel_tol, probe_radius_fraction;
  std::optional<int> directions, refinements, probe_count, levels;
  std::optional<std::uint64_t> seed;
  std::optional<bool> svg;
  std::vector<std::string> probes;
  bool allow_multiply_connected = false;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--h", h, "mesh size");
  app.add_option("--spacing", spacing, "finite-difference grid spacing");
  app.add_option("--alpha", alpha, "Meyers exponent (meyers command)");
  app.add_option("--sigma", sigma, "coefficient descriptor, e.g. aniso:l1=2,l2=0.5,theta=0");
  app.add_option("--g", g, "boundary data descriptor, or 'oracle'");
  app.add_option("--margin", margin, "interior inset distance");
  app.add_option("--directions", directions, "number of directions on the half circle");
  app.add_option("--seed", seed, "seed for random-smooth / random-nonsym coefficients");
  app.add_flag("--svg,!--no-svg", svg, "write SVG plots");
  app.add_option("--domain", domain, "disk | annulus | rectangle");
  app.add_option("--center", center, "domain centre x,y");
  app.add_option("--radius", radius, "disk radius");
  app.add_option("--r-in", r_in, "annulus inner radius");
  app.add_option("--r-out", r_out, "annulus outer radius");
  app.add_option("--corner", corner, "rectangle lower-left corner x,y");
  app.add_option("--width", width, "rectangle width");
  app.add_option("--height", height, "rectangle height");
  app.add_option("--refinements", refinements, "uniform refinements after meshing");
  app.add_option("--solver", solver, "fem | fd");
  app.add_option("--drift", drift, "fd drift: div | zero");
  app.add_option("--probe", probes, "pullback probe point x,y (repeatable)");
  app.add_option("--probe-count", probe_count, "default probe count");
  app.add_option("--probe-radius-fraction", probe_radius_fraction, "pullback radius fraction");
  app.add_option("--tie-tolerance", tie_tolerance, "unimodality tie tolerance");
  app.add_option("--rel-tol", rel_tol, "critical point threshold");
  app.add_option("--levels", levels, "contour levels");
  app.add_option("--values", values, "unimodal: file with a cyclic sequence of numbers");
  app.add_flag("--allow-multiply-connected", allow_multiply_connected,
               "beltrami: accept domains with holes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  RunConfig config;
  try {
    config = defaults_for(command);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot read config file " + config_path);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw ConfigError("config file " + config_path + ": " + e.what());
      }
      config = merge_json(config, j);
      config.command = command;
    }
    apply(out_dir, config.out);
    apply(h, config.h);
    apply(spacing, config.spacing);
    apply(alpha, config.alpha);
    apply(sigma, config.sigma);
    apply(g, config.g);
    apply(margin, config.margin);
    apply(directions, config.directions);
    apply(seed, config.seed);
    apply(svg, config.svg);
    apply(domain, config.domain.kind);
    apply(radius, config.domain.radius);
    apply(r_in, config.domain.r_in);
    apply(r_out, config.domain.r_out);
    apply(width, config.domain.width);
    apply(height, config.domain.height);
    apply(refinements, config.refinements);
    apply(solver, config.solver);
    apply(drift, config.drift);
    apply(probe_count, config.probe_count);
    apply(probe_radius_fraction, config.probe_radius_fraction);
    apply(tie_tolerance, config.tie_tolerance);
    apply(rel_tol, config.rel_tol);
    apply(levels, config.levels);
    apply(values, config.values);
    if (center) config.domain.center = parse_point(*center, "--center");
    if (corner) config.domain.corner = parse_point(*corner, "--corner");
    if (!probes.empty()) {
      config.probes.clear();
      for (const auto& p : probes) config.probes.push_back(parse_point(p, "--probe"));
    }
    if (allow_multiply_connected) config.allow_multiply_connected = true;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return run(config, out, err);
}

}  // namespace sigmalab::cli
