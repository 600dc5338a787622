#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "doctest.h"
#include "sigmalab/analysis.hpp"
#include "sigmalab/kernels.hpp"
#include "sigmalab/oracles.hpp"

using namespace sigmalab;

namespace {

MeshPtr disk(double h) { return std::make_shared<const Mesh>(generate_disk({0, 0}, 1.0, h)); }
MeshPtr annulus(double h) { return std::make_shared<const Mesh>(generate_annulus({0, 0}, 0.2, 1.0, h)); }

MappingField nodal(const MeshPtr& mesh, const AnalyticMapping& m) {
  return MappingField(interpolate(mesh, m.component(0).value), interpolate(mesh, m.component(1).value));
}

MappingField solved(const MeshPtr& mesh, const CoefficientField& sigma, const AnalyticMapping& g) {
  return MappingField(solve_dirichlet({mesh, sigma, g.component(0).value}).u,
                      solve_dirichlet({mesh, sigma, g.component(1).value}).u);
}

std::vector<double> samples(int n, double (*f)(double)) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(f(2.0 * M_PI * k / n));
  return out;
}

double cos2(double t) { return std::cos(2.0 * t); }
double cos1(double t) { return std::cos(t); }

}  // namespace

TEST_CASE("stream function of affine fields") {
  const auto m = disk(0.1);
  const auto id = make_coefficient_field("identity");
  const auto v = stream_function(interpolate(m, [](Point2 p) { return p.x1; }), id);
  CHECK(v.residual <= 1e-10);
  const double anchor = m->vertex(0).x2;
  for (std::size_t i = 0; i < m->vertex_count(); ++i) {
    CHECK(v.v[i] == doctest::Approx(m->vertex(static_cast<int>(i)).x2 - anchor).epsilon(1e-9));
  }
  CHECK(v.v[0] == 0.0);

  const auto diag = stream_function(interpolate(m, [](Point2 p) { return p.x1; }),
                                    make_coefficient_field("const:a11=2,a12=0,a21=0,a22=0.5"));
  CHECK(diag.residual <= 1e-10);
  for (std::size_t i = 0; i < m->vertex_count(); ++i) {
    CHECK(diag.v[i] == doctest::Approx(2.0 * (m->vertex(static_cast<int>(i)).x2 - anchor)).epsilon(1e-9));
  }

  const auto zero = stream_function(interpolate(m, [](Point2) { return 0.0; }), id);
  CHECK(zero.residual == 0.0);
  CHECK(std::all_of(zero.v.values().begin(), zero.v.values().end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("stream function of the saddle is the harmonic conjugate") {
  const auto id = make_coefficient_field("identity");
  auto error = [&](double h) {
    const auto m = disk(h);
    const auto u = solve_dirichlet({m, id, [](Point2 p) { return p.x1 * p.x1 - p.x2 * p.x2; }}).u;
    const auto v = stream_function(u, id);
    const double shift = 2.0 * m->vertex(0).x1 * m->vertex(0).x2;
    return relative_l2_error(v.v, [&](Point2 p) { return 2.0 * p.x1 * p.x2 - shift; });
  };
  const double e1 = error(0.1);
  const double e2 = error(0.05);
  CHECK(e2 < 0.01);
  CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("stream function invariances and preconditions") {
  const auto m = disk(0.1);
  const auto sigma = make_coefficient_field("smooth:eps=0.8,cx=0.2,cy=-0.1,width=0.5,phi=0.7");
  const auto u = solve_dirichlet({m, sigma, [](Point2 p) { return std::cos(std::atan2(p.x2, p.x1)); }}).u;
  const double r = stream_function(u, sigma).residual;
  const auto shifted = combine(1.0, u, 5.0, interpolate(m, [](Point2) { return 1.0; }));
  CHECK(stream_function(shifted, sigma).residual == doctest::Approx(r).epsilon(1e-9));
  const auto scaled = combine(3.0, u, 0.0, u);
  const auto s3 = stream_function(scaled, sigma);
  CHECK(s3.residual == doctest::Approx(r).epsilon(1e-9));
  const auto s1 = stream_function(u, sigma);
  CHECK(s3.v[10] == doctest::Approx(3.0 * s1.v[10]).epsilon(1e-9));

  const auto ring = annulus(0.1);
  CHECK_THROWS_AS(stream_function(interpolate(ring, [](Point2 p) { return p.x1; }), sigma), ConfigError);
  CHECK_NOTHROW(stream_function(interpolate(ring, [](Point2 p) { return p.x1; }), sigma, {true}));
}

TEST_CASE("complex derivatives") {
  const auto m = disk(0.1);
  const auto x = interpolate(m, [](Point2 p) { return p.x1; });
  const auto y = interpolate(m, [](Point2 p) { return p.x2; });
  const auto z = complex_derivatives(x, y);
  for (std::size_t t = 0; t < z.fz.size(); ++t) {
    CHECK(std::abs(z.fz[t] - 1.0) < 1e-12);
    CHECK(std::abs(z.fzbar[t]) < 1e-12);
  }
  const auto zbar = complex_derivatives(x, combine(-1.0, y, 0.0, y));
  for (std::size_t t = 0; t < zbar.fz.size(); ++t) {
    CHECK(std::abs(zbar.fz[t]) < 1e-12);
    CHECK(std::abs(zbar.fzbar[t] - 1.0) < 1e-12);
  }
  const auto sq = nodal(m, holomorphic_oracle(2));
  const auto cd = complex_derivatives(sq.u1, sq.u2);
  double worst = 0.0;
  for (std::size_t t = 0; t < cd.fz.size(); ++t) {
    const Point2 c = m->centroid(t);
    worst = std::max(worst, std::abs(cd.fz[t] - 2.0 * std::complex<double>(c.x1, c.x2)));
    worst = std::max(worst, std::abs(cd.fzbar[t]));
  }
  CHECK(worst < 0.2);
  CHECK_THROWS_AS(complex_derivatives(x, interpolate(disk(0.2), [](Point2) { return 0.0; })), ConfigError);
}

TEST_CASE("jacobian equals |fz|^2 - |fzbar|^2 for a conjugate pair") {
  const auto m = disk(0.1);
  const auto id = make_coefficient_field("identity");
  const auto u = solve_dirichlet({m, id, [](Point2 p) { return std::exp(p.x1) * std::cos(p.x2); }}).u;
  const auto v = stream_function(u, id).v;
  const auto jac = jacobian_field(MappingField(u, v));
  const auto cd = complex_derivatives(u, v);
  for (std::size_t t = 0; t < jac.size(); ++t) {
    CHECK(std::abs(jac[t] - (std::norm(cd.fz[t]) - std::norm(cd.fzbar[t]))) <= 1e-10);
  }
}

TEST_CASE("beltrami residual") {
  const auto id = make_coefficient_field("identity");
  const auto m = disk(0.1);
  const auto z = complex_derivatives(interpolate(m, [](Point2 p) { return p.x1; }),
                                     interpolate(m, [](Point2 p) { return p.x2; }));
  CHECK(beltrami_residual(z, id) <= 1e-14);
  const auto flat = complex_derivatives(interpolate(m, [](Point2) { return 1.0; }),
                                        interpolate(m, [](Point2) { return 2.0; }));
  CHECK_THROWS_AS(beltrami_residual(flat, id), NumericalError);

  auto saddle = [&](double h) {
    const auto mesh = disk(h);
    const auto u = solve_dirichlet({mesh, id, [](Point2 p) { return p.x1 * p.x1 - p.x2 * p.x2; }}).u;
    return beltrami_residual(complex_derivatives(u, stream_function(u, id).v), id);
  };
  const double r1 = saddle(0.05);
  const double r2 = saddle(0.025);
  CHECK(r1 <= 0.05);
  CHECK(r1 / r2 >= 1.8);

  const auto sigma = meyers_sigma(2.0);
  const auto ring = annulus(0.02);
  const auto u = solve_dirichlet({ring, sigma, meyers_solution(2.0).component(0).value}).u;
  const auto cd = complex_derivatives(u, stream_function(u, sigma, {true}).v);
  CHECK(beltrami_residual(cd, sigma) <= 0.05);

  // Against the analytic value of sigma grad u . grad u, the Jacobian of f = u + iv.
  const auto defect = quasiconformal_defect(cd, 0.1);
  const auto grad = meyers_solution(2.0).component(0).gradient;
  const auto dist = kernels::centroid_boundary_distances(*ring);
  double analytic = INFINITY;
  for (std::size_t t = 0; t < dist.size(); ++t) {
    if (dist[t] < 0.1) continue;
    const Point2 c = ring->centroid(t);
    const Vec2 g = grad(c);
    analytic = std::min(analytic, dot(sigma(c) * g, g));
  }
  CHECK(defect.min_jacobian_f >= 0.8 * analytic);
  CHECK(defect.sup_ratio < 1.0);
}

TEST_CASE("quasiconformal defect") {
  const auto m = disk(0.05);
  const auto z = complex_derivatives(interpolate(m, [](Point2 p) { return p.x1; }),
                                     interpolate(m, [](Point2 p) { return p.x2; }));
  const auto d = quasiconformal_defect(z, 0.1);
  CHECK(d.sup_ratio <= 1e-12);
  CHECK(d.min_jacobian_f == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(d.near_degenerate);

  for (double h : {0.05, 0.02}) {
    const auto mesh = disk(h);
    const auto sq = nodal(mesh, holomorphic_oracle(2));
    const auto q = quasiconformal_defect(complex_derivatives(sq.u1, sq.u2), 0.1);
    double nearest = INFINITY;
    for (std::size_t t = 0; t < mesh->triangle_count(); ++t) {
      const Point2 c = mesh->centroid(t);
      nearest = std::min(nearest, c.x1 * c.x1 + c.x2 * c.x2);
    }
    CHECK(q.min_jacobian_f > 0.0);
    CHECK(q.min_jacobian_f == doctest::Approx(4.0 * nearest).epsilon(0.5));
    CHECK(q.near_degenerate == (q.min_jacobian_f < 1e-3));
    if (h == 0.02) CHECK(q.near_degenerate);
  }
  CHECK_THROWS_AS(quasiconformal_defect(z, 5.0), ConfigError);
}

TEST_CASE("jacobian fields") {
  const auto m = annulus(0.02);
  for (double v : jacobian_field(nodal(m, identity_mapping()))) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const auto u = interpolate(m, [](Point2 p) { return p.x1 * p.x2; });
  for (double v : jacobian_field(MappingField(u, u))) CHECK(std::abs(v) <= 1e-14);
  const auto meyers = nodal(m, meyers_solution(2.0));
  const auto jac = jacobian_field(meyers);
  for (std::size_t t = 0; t < jac.size(); ++t) {
    const Point2 c = m->centroid(t);
    CHECK(jac[t] == doctest::Approx(2.0 * (c.x1 * c.x1 + c.x2 * c.x2)).epsilon(0.1));
  }
}

TEST_CASE("injectivity surrogate") {
  const auto m = disk(0.05);
  CHECK(injectivity_check(nodal(m, identity_mapping())).injective);
  const auto sq = injectivity_check(nodal(m, holomorphic_oracle(2)));
  CHECK_FALSE(sq.injective);
  CHECK(std::any_of(sq.violations.begin(), sq.violations.end(), [](const auto& v) {
    return v.kind == InjectivityViolation::Kind::boundary_crossing;
  }));
  CHECK(injectivity_check(nodal(annulus(0.04), meyers_solution(2.0))).injective);

  // A reflection is injective with uniform negative orientation.
  const auto flip = MappingField(interpolate(m, [](Point2 p) { return p.x1; }),
                                 interpolate(m, [](Point2 p) { return -p.x2; }));
  CHECK(injectivity_check(flip).injective);
  // A fold along x1 = 0 keeps the boundary image simple but flips orientation.
  const auto fold = MappingField(interpolate(m, [](Point2 p) { return p.x1 * p.x1 + 0.1 * p.x1; }),
                                 interpolate(m, [](Point2 p) { return p.x2; }));
  const auto f = injectivity_check(fold);
  CHECK_FALSE(f.injective);
}

TEST_CASE("unimodality") {
  const auto c1 = samples(64, cos1);
  const auto v1 = unimodality_check(c1);
  CHECK(v1.unimodal);
  CHECK(v1.direction_changes == 2);
  CHECK(v1.rise_arc.begin == 32);
  CHECK(v1.rise_arc.end == 0);
  const auto v2 = unimodality_check(samples(64, cos2));
  CHECK_FALSE(v2.unimodal);
  CHECK(v2.direction_changes == 4);
  const std::vector<double> plateau{0, 1, 1, 0};
  CHECK(unimodality_check(plateau).unimodal);
  CHECK_THROWS_AS(unimodality_check(std::vector<double>{1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(unimodality_check(std::vector<double>{1, 2}), ConfigError);

  // Rotation and constant shifts do not change the verdict.
  for (const auto& base : {samples(40, cos1), samples(40, cos2)}) {
    const auto ref = unimodality_check(base);
    for (std::size_t shift = 0; shift < base.size(); shift += 7) {
      std::vector<double> rotated(base.size());
      std::rotate_copy(base.begin(), base.begin() + static_cast<long>(shift), base.end(), rotated.begin());
      for (auto& x : rotated) x += 3.5;
      const auto v = unimodality_check(rotated);
      CHECK(v.unimodal == ref.unimodal);
      CHECK(v.direction_changes == ref.direction_changes);
    }
  }
  // Noise below the tie tolerance is ignored.
  std::vector<double> noisy{0, 1, 1 - 1e-14, 1, 0, 0};
  CHECK(unimodality_check(noisy).unimodal);
  CHECK_FALSE(unimodality_check(noisy, 0.0).unimodal);
}

TEST_CASE("pullback subdomains") {
  const auto m = disk(0.05);
  const auto id = nodal(m, identity_mapping());
  const auto p = pullback_subdomain(id, {0, 0}, 0.5);
  CHECK(p.mesh->total_area() == doctest::Approx(M_PI / 4).epsilon(0.05));
  CHECK(p.mesh->loop_count() == 1);
  for (std::size_t i = 0; i < p.parent_vertex.size(); ++i) {
    CHECK(p.mesh->vertex(static_cast<int>(i)) == m->vertex(p.parent_vertex[i]));
  }
  for (const auto& c : p.level_trace) {
    CHECK(std::hypot(c.image.x1 - p.w0.x1, c.image.x2 - p.w0.x2) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::hypot(c.position.x1, c.position.x2) == doctest::Approx(0.5).epsilon(1e-9));
  }
  CHECK_THROWS_AS(pullback_subdomain(id, {0, 0}, 2.0), ConfigError);
  CHECK_THROWS_AS(pullback_subdomain(id, {3, 0}, 0.1), ConfigError);

  const auto ring = annulus(0.02);
  const auto meyers = solved(ring, meyers_sigma(2.0), meyers_solution(2.0));
  const auto q = pullback_subdomain(meyers, {0.6, 0.0}, 0.1);
  CHECK(q.mesh->triangle_count() > 0);
  CHECK(PointLocator(q.mesh).locate({0.6, 0.0}).has_value());
  const auto exact = meyers_solution(2.0);
  for (int v : q.parent_vertex) {
    const Vec2 w = exact.value(ring->vertex(v));
    CHECK(std::hypot(w[0] - q.w0.x1, w[1] - q.w0.x2) <= 0.1 + 1e-3);
  }
}

TEST_CASE("lewy verification") {
  const auto m = disk(0.05);
  const auto id = make_coefficient_field("identity");
  const auto map = nodal(m, identity_mapping());
  const auto r = lewy_verify(map, id);
  CHECK(r.passed);
  CHECK(r.injective);
  CHECK(r.all_unimodal);
  CHECK(r.min_abs_det == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(r.min_abs_grad.size() == 8);
  for (double g : r.min_abs_grad) CHECK(g == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.probes.size() == 5);

  // xi and -xi give the same minima.
  const auto sigma = make_coefficient_field("smooth:eps=0.8,cx=0.2,cy=-0.1,width=0.5,phi=0.7");
  const auto s = solved(m, sigma, identity_mapping());
  for (const Vec2& xi : half_circle_directions(6)) {
    CHECK(directional_gradient_minimum(s, xi, 0.1) == directional_gradient_minimum(s, {-xi[0], -xi[1]}, 0.1));
  }

  const auto ring = annulus(0.02);
  const auto meyers = solved(ring, meyers_sigma(2.0), meyers_solution(2.0));
  LewyOptions opts;
  opts.margin = 0.05;
  const auto mr = lewy_verify(meyers, meyers_sigma(2.0), opts);
  CHECK(mr.passed);
  CHECK(mr.min_abs_det >= 2.0 * 0.25 * 0.25 * 0.9);

  const auto sq = solved(m, id, holomorphic_oracle(2));
  CHECK_THROWS_AS(lewy_verify(sq, id), HypothesisError);
}

TEST_CASE("critical point candidates") {
  const auto m = disk(0.05);
  CHECK(critical_point_candidates(interpolate(m, [](Point2 p) { return p.x1; }), 0.9).empty());
  const auto id = make_coefficient_field("identity");
  const auto saddle = solve_dirichlet({m, id, [](Point2 p) { return p.x1 * p.x1 - p.x2 * p.x2; }}).u;
  const auto c = critical_point_candidates(saddle, 0.05);
  REQUIRE_FALSE(c.empty());
  for (const auto& cand : c) {
    const Point2 p = m->centroid(cand.triangle);
    CHECK(std::hypot(p.x1, p.x2) <= 2.0 * m->h());
  }
  CHECK(std::is_sorted(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.grad_norm < b.grad_norm; }));

  const auto sigma = make_coefficient_field("smooth:eps=0.8,cx=0.2,cy=-0.1,width=0.5,phi=0.7");
  const auto u = solve_dirichlet({m, sigma, [](Point2 p) { return std::cos(std::atan2(p.x2, p.x1)); }}).u;
  CHECK(critical_point_candidates(u, 0.05).empty());
  CHECK_THROWS_AS(critical_point_candidates(u, 1.5), ConfigError);
}
