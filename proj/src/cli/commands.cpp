#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <unistd.h>

#include "sigmalab/analysis.hpp"
#include "sigmalab/cli.hpp"
#include "sigmalab/descriptor.hpp"
#include "sigmalab/fd.hpp"
#include "sigmalab/kernels.hpp"
#include "sigmalab/oracles.hpp"
#include "sigmalab/svg.hpp"

namespace sigmalab::cli {

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = kSuccess;
  std::string line;
};

// Files go to a private directory under `out` and are moved into place only
// when the command completes.
class Staging {
 public:
  explicit Staging(const fs::path& out) : out_(out) {
    created_out_ = !fs::exists(out_);
    fs::create_directories(out_);
    dir_ = out_ / (".staging-" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directory(dir_);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
    if (!committed_ && created_out_ && fs::is_empty(out_, ec)) fs::remove(out_, ec);
  }

  void write(const std::string& name, const std::string& text) {
    write_text(dir_ / name, text);
    names_.push_back(name);
  }

  void commit() {
    for (const auto& name : names_) fs::rename(dir_ / name, out_ / name);
    committed_ = true;
  }

 private:
  fs::path out_;
  fs::path dir_;
  std::vector<std::string> names_;
  bool created_out_ = false;
  bool committed_ = false;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

MeshPtr build_mesh(const RunConfig& c, double h) {
  const auto& d = c.domain;
  Mesh mesh = d.kind == "disk"      ? generate_disk(d.center, d.radius, h)
              : d.kind == "annulus" ? generate_annulus(d.center, d.r_in, d.r_out, h)
                                    : generate_rectangle(d.corner, d.width, d.height, h);
  for (int k = 0; k < c.refinements; ++k) mesh = refine(mesh);
  return std::make_shared<const Mesh>(std::move(mesh));
}

MeshPtr build_mesh(const RunConfig& c) { return build_mesh(c, c.h); }

GridPtr build_grid(const RunConfig& c) {
  const auto& d = c.domain;
  const double s = c.spacing;
  if (d.kind == "annulus") return std::make_shared<const GridDomain>(GridDomain::annulus(d.center, d.r_in, d.r_out, s));
  if (d.kind == "rectangle") return std::make_shared<const GridDomain>(GridDomain::rectangle(d.corner, d.width, d.height, s));
  const int half = static_cast<int>(std::ceil(d.radius / s)) + 1;
  const Point2 origin{d.center.x1 - half * s, d.center.x2 - half * s};
  const double r2 = d.radius * d.radius * (1.0 + 1e-12);
  return std::make_shared<const GridDomain>(GridDomain::from_predicate(
      origin, s, 2 * half + 1, 2 * half + 1, [&](Point2 p) {
        const Point2 q = p - d.center;
        return q.x1 * q.x1 + q.x2 * q.x2 <= r2;
      }));
}

CoefficientField resolve_sigma(const RunConfig& c) {
  if (c.sigma == "random-smooth") return random_smooth_field(c.seed);
  if (c.sigma == "random-nonsym") return random_nonsymmetric_field(c.seed);
  return make_coefficient_field(c.sigma);
}

std::string oracle_for_sigma(const RunConfig& c) {
  const auto d = Descriptor::parse(c.sigma);
  if (d.name != "meyers") {
    throw ConfigError("g=oracle needs a sigma with a closed-form solution (meyers:alpha=..)");
  }
  return "meyers:alpha=" + format_double(d.number("alpha"));
}

std::string resolve_scalar_g(const RunConfig& c) {
  return c.g == "oracle" ? oracle_for_sigma(c) + ",component=1" : c.g;
}

std::string resolve_mapping_g(const RunConfig& c) { return c.g == "oracle" ? oracle_for_sigma(c) : c.g; }

// True when the boundary data is itself a solution of div(sigma grad u) = 0.
bool exact_for(const std::string& sigma, const std::string& g) {
  if (sigma == "random-smooth" || sigma == "random-nonsym") return false;
  const auto s = Descriptor::parse(sigma);
  const auto d = Descriptor::parse(g);
  const bool constant = s.name == "identity" || s.name == "const" || s.name == "aniso";
  if (d.name == "x1" || d.name == "x2" || d.name == "affine" || d.name == "identity") return constant;
  if (d.name == "harmonic" || d.name == "holo" || d.name == "bilinear") return s.name == "identity";
  if (d.name == "meyers") return s.name == "meyers" && s.number("alpha") == d.number("alpha");
  return false;
}

bool constant_sigma(const std::string& sigma) {
  if (sigma == "random-smooth" || sigma == "random-nonsym") return false;
  const auto name = Descriptor::parse(sigma).name;
  return name == "identity" || name == "const" || name == "aniso";
}

std::vector<Point2> centroids(const Mesh& mesh) {
  std::vector<Point2> out(mesh.triangle_count());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = mesh.centroid(t);
  return out;
}

Json gradient_stats(const ScalarField& u) {
  const auto grads = kernels::triangle_gradients(u.mesh(), u.values());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  std::vector<double> weighted(grads.size());
  for (std::size_t t = 0; t < grads.size(); ++t) {
    const double g = norm(grads[t]);
    lo = std::min(lo, g);
    hi = std::max(hi, g);
    weighted[t] = g * u.mesh().area(t);
  }
  return {{"min", number(lo)},
          {"max", number(hi)},
          {"mean", number(kernels::ordered_sum(weighted) / u.mesh().total_area())}};
}

Json reference_errors(const ScalarField& u, const AnalyticSolution& exact) {
  return {{"descriptor", exact.descriptor},
          {"max_nodal_error", number(max_nodal_error(u, exact.value))},
          {"relative_l2_error", number(relative_l2_error(u, exact.value))},
          {"relative_h1_error", number(relative_h1_seminorm_error(u, exact.gradient))}};
}

Json mesh_summary(const Mesh& mesh) {
  return {{"vertices", mesh.vertex_count()},
          {"triangles", mesh.triangle_count()},
          {"boundary_loops", mesh.loop_count()},
          {"euler_characteristic", mesh.euler_characteristic()},
          {"h", number(mesh.h())},
          {"area", number(mesh.total_area())}};
}

std::string mesh_text(const Mesh& mesh) {
  std::ostringstream s;
  write_mesh(s, mesh);
  return s.str();
}

std::string field_text(const ScalarField& u) {
  std::ostringstream s;
  write_field(s, u);
  return s.str();
}

SvgOptions svg_options(const RunConfig& c) {
  SvgOptions o;
  o.levels = c.levels;
  return o;
}

// ---- commands ------------------------------------------------------------------

Outcome cmd_mesh(const RunConfig& c, Staging& st) {
  const auto mesh = build_mesh(c);
  st.write("mesh.txt", mesh_text(*mesh));
  st.write("summary.json", dump(mesh_summary(*mesh)));
  return {kSuccess, "mesh: vertices=" + std::to_string(mesh->vertex_count()) +
                        " triangles=" + std::to_string(mesh->triangle_count()) +
                        " loops=" + std::to_string(mesh->loop_count()) +
                        " euler=" + std::to_string(mesh->euler_characteristic())};
}

Outcome cmd_solve_nd(const RunConfig& c, Staging& st) {
  const auto sigma = resolve_sigma(c);
  const std::string gdesc = resolve_scalar_g(c);
  const auto g = make_scalar_oracle(gdesc);
  const auto grid = build_grid(c);
  const auto [nd_sigma, drift] = c.drift == "div" ? to_nondivergence(sigma, 1e-5)
                                                  : std::make_pair(sigma, VectorField2::zero());
  const auto sol = solve_nondivergence(grid, nd_sigma, drift, g.value);
  const auto [lo, hi] = std::minmax_element(sol.u.values.begin(), sol.u.values.end());
  Json summary{{"interior_nodes", grid->count(NodeKind::interior)},
               {"boundary_nodes", grid->count(NodeKind::boundary)},
               {"spacing", number(grid->spacing())},
               {"residual", number(sol.residual)},
               {"u_min", number(*lo)},
               {"u_max", number(*hi)},
               {"sigma", sigma.descriptor()},
               {"drift", drift.descriptor()},
               {"g", gdesc}};
  std::string line = "solve-nd: nodes=" + std::to_string(grid->count(NodeKind::interior)) +
                     " residual=" + fmt("%.3e", sol.residual);
  if (exact_for(c.sigma, gdesc) && (c.drift == "div" || constant_sigma(c.sigma))) {
    const double err = grid_relative_l2_error(sol.u, g.value);
    summary["reference"] = {{"descriptor", g.descriptor}, {"relative_l2_error", number(err)}};
    line += " rel_l2=" + fmt("%.3e", err);
  }
  std::ostringstream grid_text;
  write_grid(grid_text, sol.u);
  st.write("u.grid", grid_text.str());
  st.write("summary.json", dump(summary));
  return {kSuccess, line};
}

Outcome cmd_solve(const RunConfig& c, Staging& st) {
  if (c.solver == "fd") return cmd_solve_nd(c, st);
  const auto sigma = resolve_sigma(c);
  const std::string gdesc = resolve_scalar_g(c);
  const auto g = make_scalar_oracle(gdesc);
  const auto mesh = build_mesh(c);
  const auto sol = solve_dirichlet({mesh, sigma, g.value});
  const auto [lo, hi] = std::minmax_element(sol.u.values().begin(), sol.u.values().end());
  Json summary = mesh_summary(*mesh);
  summary["residual"] = number(sol.residual);
  summary["u_min"] = number(*lo);
  summary["u_max"] = number(*hi);
  summary["gradient_norm"] = gradient_stats(sol.u);
  summary["ellipticity"] = to_json(sol.ellipticity);
  summary["sigma"] = sigma.descriptor();
  summary["g"] = gdesc;
  std::string line = "solve: vertices=" + std::to_string(mesh->vertex_count()) +
                     " residual=" + fmt("%.3e", sol.residual) + " u_min=" + fmt("%.6g", *lo) +
                     " u_max=" + fmt("%.6g", *hi);
  if (exact_for(c.sigma, gdesc)) {
    summary["reference"] = reference_errors(sol.u, g);
    line += " max_error=" + fmt("%.3e", max_nodal_error(sol.u, g.value)) +
            " rel_l2=" + fmt("%.3e", relative_l2_error(sol.u, g.value));
  }
  st.write("mesh.txt", mesh_text(*mesh));
  st.write("u.field", field_text(sol.u));
  st.write("summary.json", dump(summary));
  if (c.svg) {
    st.write("contour.svg", contour_svg(sol.u, svg_options(c)));
    st.write("quiver.svg", quiver_svg(gradient_field(sol.u), svg_options(c)));
  }
  return {kSuccess, line};
}

struct SolvedMap {
  MeshPtr mesh;
  AnalyticMapping g;
  MappingField map;
  double residual;
};

SolvedMap solve_map(const RunConfig& c, const CoefficientField& sigma) {
  const auto mesh = build_mesh(c);
  auto g = make_mapping_oracle(resolve_mapping_g(c));
  const auto a = solve_dirichlet({mesh, sigma, g.component(0).value});
  const auto b = solve_dirichlet({mesh, sigma, g.component(1).value});
  return {mesh, g, MappingField(a.u, b.u), std::max(a.residual, b.residual)};
}

void write_map_files(const SolvedMap& s, const RunConfig& c, Staging& st, const std::vector<double>& jac) {
  st.write("mesh.txt", mesh_text(*s.mesh));
  st.write("u1.field", field_text(s.map.u1));
  st.write("u2.field", field_text(s.map.u2));
  if (c.svg) st.write("jacobian.svg", heatmap_svg(*s.mesh, jac, svg_options(c)));
}

Outcome cmd_map(const RunConfig& c, Staging& st) {
  const auto sigma = resolve_sigma(c);
  const auto s = solve_map(c, sigma);
  const auto jac = jacobian_field(s.map);
  const auto [lo, hi] = std::minmax_element(jac.begin(), jac.end());
  const auto inj = injectivity_check(s.map);
  Json summary = mesh_summary(*s.mesh);
  summary["residual"] = number(s.residual);
  summary["jacobian"] = {{"min", number(*lo)}, {"max", number(*hi)}};
  summary["injectivity"] = to_json(inj);
  summary["sigma"] = sigma.descriptor();
  summary["g"] = s.g.descriptor;
  if (exact_for(c.sigma, resolve_mapping_g(c))) {
    summary["reference"] = {{"u1", reference_errors(s.map.u1, s.g.component(0))},
                            {"u2", reference_errors(s.map.u2, s.g.component(1))}};
  }
  write_map_files(s, c, st, jac);
  st.write("summary.json", dump(summary));
  return {kSuccess, "map: vertices=" + std::to_string(s.mesh->vertex_count()) + " jacobian_min=" +
                        fmt("%.6g", *lo) + " jacobian_max=" + fmt("%.6g", *hi) +
                        " injective=" + (inj.injective ? "yes" : "no")};
}

Outcome cmd_verify(const RunConfig& c, Staging& st) {
  const auto sigma = resolve_sigma(c);
  const auto s = solve_map(c, sigma);
  LewyOptions options;
  options.directions = c.directions;
  options.margin = c.margin;
  options.probes = c.probes;
  options.probe_count = c.probe_count;
  options.probe_radius_fraction = c.probe_radius_fraction;
  options.tie_tolerance = c.tie_tolerance;
  const auto report = lewy_verify(s.map, sigma, options);
  const auto jac = jacobian_field(s.map);
  Json j = to_json(report);
  j["sigma"] = sigma.descriptor();
  j["g"] = s.g.descriptor;
  if (exact_for(c.sigma, resolve_mapping_g(c))) {
    const auto dist = kernels::centroid_boundary_distances(*s.mesh);
    double ref = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < dist.size(); ++t) {
      if (dist[t] >= c.margin) ref = std::min(ref, std::abs(s.g.jacobian(s.mesh->centroid(t)).det()));
    }
    j["reference_min_abs_det"] = number(ref);
  }
  write_map_files(s, c, st, jac);
  st.write("lewy.json", dump(j));
  std::string line = std::string("verify: ") + (report.passed ? "pass" : "FAIL") +
                     " min_abs_det=" + fmt("%.6g", report.min_abs_det) +
                     " min_abs_grad=" +
                     fmt("%.6g", *std::min_element(report.min_abs_grad.begin(), report.min_abs_grad.end())) +
                     " unimodal=" + (report.all_unimodal ? "yes" : "no");
  return {report.passed ? kSuccess : kVerificationFailure, line};
}

Outcome cmd_meyers(const RunConfig& c, Staging& st) {
  const auto& d = c.domain;
  if (d.kind != "annulus" || d.center.x1 != 0.0 || d.center.x2 != 0.0) {
    throw ConfigError("meyers needs an annulus centred at the origin");
  }
  const double alpha = c.alpha;
  const auto sigma = meyers_sigma(alpha);
  const auto g = meyers_solution(alpha);
  const auto u1 = g.component(0);
  const auto u2 = g.component(1);

  Mesh current = generate_annulus(d.center, d.r_in, d.r_out, c.h);
  Json rows = Json::array();
  std::ostringstream table;
  table << "# meyers alpha=" << format_double(alpha) << " annulus(" << format_double(d.r_in) << ", "
        << format_double(d.r_out) << ")\n";
  table << "level  h          vertices  rel_l2_u1    rel_l2_u2    rel_h1_u1    rel_h1_u2    "
           "l2_ratio  jac_max_rel_err\n";
  double previous = 0.0;
  std::optional<MappingField> finest;
  for (int level = 0; level <= c.refinements; ++level) {
    if (level > 0) current = refine(current);
    const auto mesh = std::make_shared<const Mesh>(current);
    const auto a = solve_dirichlet({mesh, sigma, u1.value});
    const auto b = solve_dirichlet({mesh, sigma, u2.value});
    const MappingField map(a.u, b.u);
    const double e1 = relative_l2_error(a.u, u1.value);
    const double e2 = relative_l2_error(b.u, u2.value);
    const double h1 = relative_h1_seminorm_error(a.u, u1.gradient);
    const double h2 = relative_h1_seminorm_error(b.u, u2.gradient);
    const auto jac = jacobian_field(map);
    double jac_err = 0.0;
    for (std::size_t t = 0; t < jac.size(); ++t) {
      const Point2 p = mesh->centroid(t);
      if (norm(p - Point2{0, 0}) < 0.3) continue;
      const double exact = meyers_jacobian(alpha, p);
      jac_err = std::max(jac_err, std::abs(jac[t] - exact) / exact);
    }
    const double err = std::max(e1, e2);
    const double ratio = level == 0 ? 0.0 : previous / err;
    previous = err;
    char line[200];
    std::snprintf(line, sizeof line, "%-6d %-10.5g %-9zu %-12.4e %-12.4e %-12.4e %-12.4e %-9s %.4e\n", level,
                  mesh->h(), mesh->vertex_count(), e1, e2, h1, h2,
                  level == 0 ? "-" : fmt("%.3f", ratio).c_str(), jac_err);
    table << line;
    Json row{{"level", level},
             {"h", number(mesh->h())},
             {"vertices", mesh->vertex_count()},
             {"rel_l2_u1", number(e1)},
             {"rel_l2_u2", number(e2)},
             {"rel_h1_u1", number(h1)},
             {"rel_h1_u2", number(h2)},
             {"jacobian_max_rel_error_r_ge_0.3", number(jac_err)},
             {"residual", number(std::max(a.residual, b.residual))}};
    if (level > 0) row["l2_ratio"] = number(ratio);
    rows.push_back(row);
    finest.emplace(map);
  }

  // Ring-averaged Jacobian on the finest mesh.
  constexpr int kRings = 8;
  const Mesh& mesh = finest->mesh();
  const auto jac = jacobian_field(*finest);
  std::vector<std::vector<double>> computed(kRings), exact(kRings), weights(kRings);
  for (std::size_t t = 0; t < jac.size(); ++t) {
    const Point2 p = mesh.centroid(t);
    const double r = norm(p - Point2{0, 0});
    const int k = std::clamp(static_cast<int>((r - d.r_in) / (d.r_out - d.r_in) * kRings), 0, kRings - 1);
    computed[k].push_back(jac[t] * mesh.area(t));
    exact[k].push_back(meyers_jacobian(alpha, p) * mesh.area(t));
    weights[k].push_back(mesh.area(t));
  }
  Json rings = Json::array();
  table << "\nring  r_lo      r_hi      jacobian_mean  analytic_mean\n";
  for (int k = 0; k < kRings; ++k) {
    const double lo = d.r_in + (d.r_out - d.r_in) * k / kRings;
    const double hi = d.r_in + (d.r_out - d.r_in) * (k + 1) / kRings;
    const double w = kernels::ordered_sum(weights[k]);
    const double mean = w > 0 ? kernels::ordered_sum(computed[k]) / w : 0.0;
    const double ref = w > 0 ? kernels::ordered_sum(exact[k]) / w : 0.0;
    char line[160];
    std::snprintf(line, sizeof line, "%-5d %-9.4f %-9.4f %-14.6e %.6e\n", k, lo, hi, mean, ref);
    table << line;
    rings.push_back({{"r_lo", number(lo)}, {"r_hi", number(hi)}, {"jacobian_mean", number(mean)},
                     {"analytic_mean", number(ref)}});
  }

  Json report{{"alpha", number(alpha)},
              {"r_in", number(d.r_in)},
              {"r_out", number(d.r_out)},
              {"levels", rows},
              {"jacobian_rings", rings}};
  st.write("convergence.txt", table.str());
  st.write("convergence.json", dump(report));
  if (c.svg) st.write("jacobian.svg", heatmap_svg(mesh, jac, svg_options(c)));
  std::string line = "meyers: alpha=" + format_double(alpha) + " levels=" +
                     std::to_string(c.refinements + 1) + " finest_rel_l2=" + fmt("%.3e", previous);
  return {kSuccess, line};
}

Outcome cmd_beltrami(const RunConfig& c, Staging& st) {
  const auto sigma = resolve_sigma(c);
  const std::string gdesc = resolve_scalar_g(c);
  const auto g = make_scalar_oracle(gdesc);
  const auto mesh = build_mesh(c);
  const auto sol = solve_dirichlet({mesh, sigma, g.value});
  const auto stream = stream_function(sol.u, sigma, {c.allow_multiply_connected});
  const auto cd = complex_derivatives(sol.u, stream.v);
  const double residual = beltrami_residual(cd, sigma);
  const auto defect = quasiconformal_defect(cd, c.margin);
  const auto points = centroids(*mesh);
  const double bound = dilatation_bound(sigma, points);
  Json j = mesh_summary(*mesh);
  j["sigma"] = sigma.descriptor();
  j["g"] = gdesc;
  j["solve_residual"] = number(sol.residual);
  j["stream_residual"] = number(stream.residual);
  j["beltrami_residual"] = number(residual);
  j["dilatation_bound"] = number(bound);
  j["quasiconformal_defect"] = to_json(defect);
  j["margin"] = number(c.margin);
  j["ellipticity"] = to_json(sol.ellipticity);
  st.write("mesh.txt", mesh_text(*mesh));
  st.write("u.field", field_text(sol.u));
  st.write("v.field", field_text(stream.v));
  st.write("beltrami.json", dump(j));
  if (c.svg) st.write("stream.svg", contour_svg(stream.v, svg_options(c)));
  return {kSuccess, "beltrami: residual=" + fmt("%.4e", residual) + " stream_residual=" +
                        fmt("%.4e", stream.residual) + " dilatation_bound=" + fmt("%.6g", bound) +
                        " sup_ratio=" + fmt("%.6g", defect.sup_ratio)};
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read values file " + path);
  std::vector<double> values;
  std::string token;
  while (in >> token) values.push_back(parse_double(token, "value in " + path));
  return values;
}

Outcome cmd_unimodal(const RunConfig& c, Staging& st) {
  std::vector<double> values;
  Json j;
  if (!c.values.empty()) {
    values = read_values(c.values);
    j["source"] = "file";
  } else {
    const auto g = make_scalar_oracle(c.g);
    const auto mesh = build_mesh(c);
    for (const auto& bv : boundary_trace(*mesh, 0)) values.push_back(g.value(bv.position));
    j["source"] = "boundary trace of " + g.descriptor;
  }
  const auto verdict = unimodality_check(values, c.tie_tolerance);
  j["count"] = values.size();
  j["tie_tolerance"] = number(c.tie_tolerance);
  j["verdict"] = to_json(verdict);
  st.write("unimodal.json", dump(j));
  return {verdict.unimodal ? kSuccess : kVerificationFailure,
          std::string("unimodal: ") + (verdict.unimodal ? "yes" : "no") +
              " direction_changes=" + std::to_string(verdict.direction_changes) +
              " samples=" + std::to_string(values.size())};
}

Outcome dispatch(const RunConfig& c, Staging& st) {
  if (c.command == "mesh") return cmd_mesh(c, st);
  if (c.command == "solve") return cmd_solve(c, st);
  if (c.command == "solve-nd") return cmd_solve_nd(c, st);
  if (c.command == "map") return cmd_map(c, st);
  if (c.command == "verify") return cmd_verify(c, st);
  if (c.command == "meyers") return cmd_meyers(c, st);
  if (c.command == "beltrami") return cmd_beltrami(c, st);
  return cmd_unimodal(c, st);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    Staging staging(config.out);
    const Outcome outcome = dispatch(config, staging);
    staging.write("config.json", dump(to_json(config)));
    staging.commit();
    out << outcome.line << "\n";
    return outcome.status;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const HypothesisError& e) {
    err << "hypothesis failure: " << e.what() << "\n";
    return kHypothesisFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace sigmalab::cli
