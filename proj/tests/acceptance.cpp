// Acceptance run: one PASS/FAIL line per criterion, reports written twice and compared.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sigmalab/analysis.hpp"
#include "sigmalab/fd.hpp"
#include "sigmalab/kernels.hpp"
#include "sigmalab/oracles.hpp"
#include "sigmalab/report.hpp"

namespace fs = std::filesystem;
using namespace sigmalab;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Verdict {
  bool pass = true;
  Json report = Json::object();
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Verdict()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

MeshPtr disk(double h) { return std::make_shared<const Mesh>(generate_disk({0, 0}, 1.0, h)); }
MeshPtr annulus(double h) { return std::make_shared<const Mesh>(generate_annulus({0, 0}, 0.2, 1.0, h)); }
MeshPtr refined(const MeshPtr& m) { return std::make_shared<const Mesh>(refine(*m)); }

MappingField solved(const MeshPtr& mesh, const CoefficientField& sigma, const AnalyticMapping& g) {
  return MappingField(solve_dirichlet({mesh, sigma, g.component(0).value}).u,
                      solve_dirichlet({mesh, sigma, g.component(1).value}).u);
}

MappingField nodal(const MeshPtr& mesh, const AnalyticMapping& m) {
  return MappingField(interpolate(mesh, m.component(0).value), interpolate(mesh, m.component(1).value));
}

double inset_min_gradient(const ScalarField& u, double margin) {
  const auto grads = gradient_field(u).gradients;
  const auto dist = kernels::centroid_boundary_distances(u.mesh());
  double lo = INFINITY;
  for (std::size_t t = 0; t < grads.size(); ++t) {
    if (dist[t] >= margin) lo = std::min(lo, norm(grads[t]));
  }
  return lo;
}

Verdict meyers_reproduction() {
  Verdict v;
  const auto coarse = annulus(0.02);
  const auto fine = refined(coarse);
  const auto sigma = meyers_sigma(2.0);
  const auto exact = meyers_solution(2.0);
  Json comps = Json::array();
  for (int k = 0; k < 2; ++k) {
    const auto g = exact.component(k).value;
    const double e0 = relative_l2_error(solve_dirichlet({coarse, sigma, g}).u, g);
    const double e1 = relative_l2_error(solve_dirichlet({fine, sigma, g}).u, g);
    comps.push_back({{"component", k + 1}, {"rel_l2_h", number(e0)}, {"rel_l2_h_over_2", number(e1)},
                     {"ratio", number(e0 / e1)}});
    v.require(e0 <= 0.02, "u" + std::to_string(k + 1) + " error " + fmt(e0) + " > 0.02");
    v.require(e0 / e1 >= 3.0, "u" + std::to_string(k + 1) + " ratio " + fmt(e0 / e1) + " < 3");
  }
  v.report = {{"h", coarse->h()}, {"vertices", coarse->vertex_count()}, {"components", comps}};
  if (v.pass) {
    v.detail = "rel L2 " + fmt(comps[0]["rel_l2_h"].get<double>()) + "/" + fmt(comps[1]["rel_l2_h"].get<double>()) +
               ", ratios " + fmt(comps[0]["ratio"].get<double>()) + "/" + fmt(comps[1]["ratio"].get<double>());
  }
  return v;
}

Verdict jacobian_law() {
  Verdict v;
  const auto mesh = annulus(0.02);
  const auto jac = jacobian_field(solved(mesh, meyers_sigma(2.0), meyers_solution(2.0)));
  double worst = 0.0;
  for (std::size_t t = 0; t < jac.size(); ++t) {
    const Point2 c = mesh->centroid(t);
    if (std::hypot(c.x1, c.x2) < 0.3) continue;
    const double ref = meyers_jacobian(2.0, c);
    worst = std::max(worst, std::abs(jac[t] - ref) / ref);
  }
  v.require(worst <= 0.1, "alpha=2 max relative Jacobian error " + fmt(worst) + " > 0.1");

  const auto half = jacobian_field(solved(mesh, meyers_sigma(0.5), meyers_solution(0.5)));
  constexpr int rings = 8;
  std::vector<double> area(rings, 0.0), weighted(rings, 0.0);
  for (std::size_t t = 0; t < half.size(); ++t) {
    const Point2 c = mesh->centroid(t);
    const int k = std::clamp(static_cast<int>((std::hypot(c.x1, c.x2) - 0.2) / 0.8 * rings), 0, rings - 1);
    area[k] += mesh->area(t);
    weighted[k] += mesh->area(t) * half[t];
  }
  Json means = Json::array();
  bool monotone = true;
  for (int k = 0; k < rings; ++k) {
    means.push_back(number(weighted[k] / area[k]));
    if (k > 0 && !(weighted[k] / area[k] < weighted[k - 1] / area[k - 1])) monotone = false;
  }
  v.require(monotone, "alpha=0.5 ring means not increasing toward the inner radius");
  v.report = {{"alpha2_max_rel_error_r_ge_0.3", number(worst)}, {"alpha05_ring_means", means}};
  if (v.pass) {
    v.detail = "max rel error " + fmt(worst) + ", alpha=0.5 rings " + fmt(means.front().get<double>()) + " -> " +
               fmt(means.back().get<double>());
  }
  return v;
}

Verdict dilatation_bounds() {
  Verdict v;
  std::vector<Point2> samples;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double r = 0.05 + 0.95 * i / 39.0;
      const double t = 2.0 * M_PI * (j + 0.5) / 40.0;
      samples.push_back({r * std::cos(t), r * std::sin(t)});
    }
  }
  const double meyers = dilatation_bound(meyers_sigma(2.0), samples);
  v.require(std::abs(meyers - 1.0 / 3.0) <= 1e-6, "meyers bound " + fmt(meyers) + " != 1/3");

  const auto mesh = disk(0.05);
  std::vector<Point2> quadrature;
  for (std::size_t t = 0; t < mesh->triangle_count(); ++t) quadrature.push_back(mesh->centroid(t));
  Json library = Json::object();
  double worst = 0.0;
  for (const auto& entry : builtin_library()) {
    const double b = dilatation_bound(make_coefficient_field(entry.descriptor), quadrature);
    library[entry.descriptor] = number(b);
    worst = std::max(worst, b);
    v.require(b < 1.0, entry.descriptor + " bound " + fmt(b) + " >= 1");
  }
  v.report = {{"meyers_alpha2", number(meyers)}, {"meyers_samples", samples.size()},
              {"quadrature_points", quadrature.size()}, {"library", library}};
  if (v.pass) v.detail = "meyers " + fmt(meyers) + " over " + std::to_string(samples.size()) +
                         " points, library max " + fmt(worst);
  return v;
}

Verdict beltrami_convergence() {
  Verdict v;
  const auto id = make_coefficient_field("identity");
  const auto saddle = make_scalar_oracle("harmonic:re-z2").value;
  std::vector<double> sq, my;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto u = solve_dirichlet({disk(h), id, saddle}).u;
    sq.push_back(beltrami_residual(complex_derivatives(u, stream_function(u, id).v), id));
  }
  const auto sigma = meyers_sigma(2.0);
  const auto u1 = meyers_solution(2.0).component(0).value;
  for (double h : {0.04, 0.02, 0.01}) {
    const auto u = solve_dirichlet({annulus(h), sigma, u1}).u;
    my.push_back(beltrami_residual(complex_derivatives(u, stream_function(u, sigma, {true}).v), sigma));
  }
  Json report = Json::object();
  for (const auto& [name, seq] : {std::pair{"z2_identity", sq}, std::pair{"meyers_alpha2", my}}) {
    Json list = Json::array();
    for (double r : seq) list.push_back(number(r));
    report[name] = list;
    v.require(seq.back() <= 0.05, std::string(name) + " finest residual " + fmt(seq.back()) + " > 0.05");
    for (std::size_t k = 1; k < seq.size(); ++k) {
      v.require(seq[k - 1] / seq[k] >= 1.8, std::string(name) + " ratio " + fmt(seq[k - 1] / seq[k]) + " < 1.8");
    }
  }
  v.report = report;
  if (v.pass) v.detail = "finest z2 " + fmt(sq.back()) + ", meyers " + fmt(my.back());
  return v;
}

Verdict random_field_suite() {
  Verdict v;
  const auto coarse = disk(0.03);
  const auto fine = refined(coarse);
  Json fields = Json::array();
  double lowest = INFINITY;
  for (int k = 0; k < 10; ++k) {
    const std::uint64_t seed = kSeed + static_cast<std::uint64_t>(k);
    const auto sigma = k < 5 ? random_smooth_field(seed) : random_nonsymmetric_field(seed, 0.3);
    const auto map = solved(coarse, sigma, identity_mapping());
    const bool injective = injectivity_check(map).injective;
    Json entry{{"descriptor", sigma.descriptor()}, {"injective", injective}};
    if (!injective) {
      v.require(false, "field " + std::to_string(k) + " not injective");
      fields.push_back(entry);
      continue;
    }
    const auto report = lewy_verify(map, sigma);
    const double det_fine = lewy_verify(solved(fine, sigma, identity_mapping()), sigma).min_abs_det;
    entry["lewy"] = to_json(report);
    entry["min_abs_det_refined"] = number(det_fine);
    fields.push_back(entry);
    lowest = std::min(lowest, report.min_abs_det);
    v.require(report.passed && report.min_abs_det > 0.0, "field " + std::to_string(k) + " lewy check failed");
    v.require(det_fine >= 0.9 * report.min_abs_det,
              "field " + std::to_string(k) + " det drops " + fmt(report.min_abs_det) + " -> " + fmt(det_fine));
  }
  v.report = {{"h", 0.03}, {"seed", kSeed}, {"fields", fields}};
  if (v.pass) v.detail = "10 fields injective and verified, lowest min_abs_det " + fmt(lowest);
  return v;
}

Verdict critical_points() {
  Verdict v;
  const auto mesh = disk(0.05);
  const auto cos_theta = make_scalar_oracle("cos-theta").value;
  Json library = Json::object();
  for (const auto& entry : builtin_library()) {
    if (!entry.continuous) continue;
    const auto u = solve_dirichlet({mesh, make_coefficient_field(entry.descriptor), cos_theta}).u;
    const auto cands = critical_point_candidates(u, 0.05);
    const double g = inset_min_gradient(u, 0.1);
    library[entry.descriptor] = {{"candidates", cands.size()}, {"min_inset_grad", number(g)}};
    v.require(cands.empty() && g > 0.0, entry.descriptor + " has candidates or a vanishing gradient");
  }
  const auto u = solve_dirichlet({mesh, make_coefficient_field("identity"),
                                  make_scalar_oracle("harmonic:re-z2").value}).u;
  const auto cands = critical_point_candidates(u, 0.05);
  double farthest = 0.0;
  for (const auto& c : cands) {
    const Point2 p = mesh->centroid(c.triangle);
    farthest = std::max(farthest, std::hypot(p.x1, p.x2));
  }
  v.require(!cands.empty(), "Re z2 produced no candidates");
  v.require(farthest <= 2.0 * mesh->h(), "Re z2 candidate at distance " + fmt(farthest) + " > 2h");
  v.report = {{"h", mesh->h()}, {"cos_theta", library},
              {"re_z2", {{"candidates", cands.size()}, {"max_distance_to_origin", number(farthest)}}}};
  if (v.pass) v.detail = "cos-theta clean for all continuous entries, Re z2 " + std::to_string(cands.size()) +
                         " candidates within " + fmt(farthest);
  return v;
}

Verdict cross_form() {
  Verdict v;
  const auto grid = std::make_shared<const GridDomain>(GridDomain::annulus({0, 0}, 0.2, 1.0, 0.02));
  const auto [s, b] = to_nondivergence(meyers_sigma(2.0), 1e-5);
  const auto mesh = annulus(0.02);
  const PointLocator locator(mesh);
  const auto exact = meyers_solution(2.0);
  Json comps = Json::array();
  for (int k = 0; k < 2; ++k) {
    const auto g = exact.component(k).value;
    const auto fd = solve_nondivergence(grid, s, b, g).u;
    const auto fem = solve_dirichlet({mesh, meyers_sigma(2.0), g}).u;
    const double e = grid_relative_l2_error(fd, g);
    double diff = 0.0, scale = 0.0;
    std::size_t common = 0;
    for (std::size_t n = 0; n < grid->node_count(); ++n) {
      if (grid->kind(n) == NodeKind::exterior) continue;
      const auto w = fem.evaluate(locator, grid->node(n));
      if (!w) continue;
      ++common;
      diff += (fd.values[n] - *w) * (fd.values[n] - *w);
      scale += *w * *w;
    }
    const double agree = std::sqrt(diff / scale);
    comps.push_back({{"component", k + 1}, {"fd_rel_l2", number(e)}, {"fd_vs_fem", number(agree)},
                     {"common_points", common}});
    v.require(e <= 0.05, "fd error " + fmt(e) + " > 0.05");
    v.require(agree <= 0.07, "fd vs fem " + fmt(agree) + " > 0.07");
  }
  const auto id = make_coefficient_field("identity");
  double exactness = 0.0;
  for (const ScalarFunction& f : {ScalarFunction([](Point2 p) { return 0.3 - 2.0 * p.x1 + 0.7 * p.x2; }),
                                  ScalarFunction([](Point2 p) { return p.x1 * p.x2; })}) {
    const auto u = solve_nondivergence(grid, id, VectorField2::zero(), f).u;
    for (std::size_t n = 0; n < grid->node_count(); ++n) {
      if (grid->kind(n) != NodeKind::exterior) exactness = std::max(exactness, std::abs(u.values[n] - f(grid->node(n))));
    }
  }
  v.require(exactness <= 1e-9, "affine/bilinear error " + fmt(exactness));
  v.report = {{"spacing", 0.02}, {"components", comps}, {"affine_bilinear_max_error", number(exactness)}};
  if (v.pass) {
    v.detail = "fd rel L2 " + fmt(comps[0]["fd_rel_l2"].get<double>()) + ", fd vs fem " +
               fmt(std::max(comps[0]["fd_vs_fem"].get<double>(), comps[1]["fd_vs_fem"].get<double>())) +
               ", exactness " + fmt(exactness);
  }
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  const auto d = disk(0.05);
  const auto ring = annulus(0.04);
  std::vector<std::pair<std::string, MappingField>> maps{
      {"identity", nodal(d, identity_mapping())},
      {"z2", nodal(d, holomorphic_oracle(2))},
  };
  for (double alpha : {0.5, 1.0, 2.0}) maps.push_back({"meyers:alpha=" + fmt(alpha), nodal(ring, meyers_solution(alpha))});
  Json report = Json::object();
  for (const auto& [name, map] : maps) {
    const bool surrogate = injectivity_check(map).injective;
    const bool brute = brute_force_injectivity(map, 0.02);
    report[name] = {{"surrogate", surrogate}, {"brute_force", brute}};
    v.require(surrogate == brute, name + " disagrees");
  }
  v.require(report["z2"]["brute_force"] == false, "z2 not detected as non-injective");
  v.report = report;
  if (v.pass) v.detail = "agree on 5 oracle maps, z2 rejected by both";
  return v;
}

std::vector<Criterion> criteria() {
  return {
      {1, "meyers reproduction", 60, meyers_reproduction},
      {2, "jacobian law", 60, jacobian_law},
      {3, "dilatation bound", 5, dilatation_bounds},
      {4, "beltrami residual convergence", 60, beltrami_convergence},
      {5, "random-field property suite", 300, random_field_suite},
      {6, "critical points", 60, critical_points},
      {7, "cross-form agreement", 60, cross_form},
      {8, "oracle vs surrogate", 30, oracle_equivalence},
  };
}

struct Outcome {
  bool pass;
  double seconds;
  std::string detail;
};

std::vector<Outcome> run_all(const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<Outcome> out;
  for (const auto& c : criteria()) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("threw: ") + e.what();
      v.report = {{"error", e.what()}};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json report{{"criterion", c.id}, {"name", c.name}, {"pass", v.pass}, {"metrics", v.report}};
    write_text(dir / ("criterion_" + std::to_string(c.id) + ".json"), dump(report));
    const bool in_time = seconds <= c.limit_seconds;
    std::string detail = v.detail;
    if (!in_time) detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
    out.push_back({v.pass && in_time, seconds, detail});
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_reports");
  fs::remove_all(root);
  const int threads = omp_get_max_threads();
  const auto first = run_all(root / "run1");
  // Second pass with a different thread count.
  omp_set_num_threads(threads > 1 ? 1 : 2);
  const auto second = run_all(root / "run2");
  omp_set_num_threads(threads);

  bool all = true;
  const auto list = criteria();
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto& o = first[k];
    all = all && o.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s, limit %.0f s]\n", o.pass ? "PASS" : "FAIL", list[k].id,
                list[k].name.c_str(), o.detail.c_str(), o.seconds, list[k].limit_seconds);
  }
  std::vector<std::string> differing;
  for (const auto& c : list) {
    const std::string name = "criterion_" + std::to_string(c.id) + ".json";
    if (slurp(root / "run1" / name) != slurp(root / "run2" / name)) differing.push_back(name);
  }
  const bool deterministic = differing.empty();
  all = all && deterministic;
  std::string detail = deterministic ? "8 report files byte-identical across two runs" : "differing:";
  for (const auto& d : differing) detail += " " + d;
  std::printf("%s criterion 9 (determinism): %s (threads %d then %d)\n", deterministic ? "PASS" : "FAIL",
              detail.c_str(), threads, threads > 1 ? 1 : 2);
  std::fflush(stdout);
  return all ? 0 : 1;
}
