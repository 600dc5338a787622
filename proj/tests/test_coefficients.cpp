#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sigmalab/coefficients.hpp"
#include "sigmalab/descriptor.hpp"

using namespace sigmalab;

namespace {

CoefficientField constant(Matrix2 m) {
  return CoefficientField([m](Point2) { return m; }, m.a12 == m.a21, "test-constant");
}

std::vector<Point2> circle(double r, int n) {
  std::vector<Point2> out;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * (k + 0.25) / n;
    out.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return out;
}

// mu and nu written out from the entries, independently of dilatations().
std::pair<std::complex<double>, std::complex<double>> hand_dilatations(const Matrix2& s) {
  const double den = 1.0 + s.a11 + s.a22 + s.a11 * s.a22 - s.a12 * s.a21;
  return {std::complex<double>(s.a22 - s.a11, -(s.a12 + s.a21)) / den,
          std::complex<double>(1.0 - (s.a11 * s.a22 - s.a12 * s.a21), s.a12 - s.a21) / den};
}

}  // namespace

TEST_CASE("descriptors") {
  const auto d = Descriptor::parse("aniso:l1=2,l2=0.5,theta=0.3");
  CHECK(d.name == "aniso");
  CHECK(d.number("l1") == 2.0);
  CHECK(d.number("theta") == 0.3);
  CHECK(Descriptor::parse("harmonic:re-z2").variant == "re-z2");
  CHECK_THROWS_AS(Descriptor::parse("aniso:l1=abc").number("l1"), ConfigError);
  CHECK_THROWS_AS(make_coefficient_field("nosuch"), ConfigError);
  CHECK_THROWS_AS(make_coefficient_field("aniso:l1=2,l2=1,bogus=1"), ConfigError);
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_double(format_double(M_PI), "pi") == M_PI);
}

TEST_CASE("ellipticity reports") {
  const auto samples = circle(0.5, 64);
  const auto id = ellipticity_report(make_coefficient_field("identity"), samples);
  CHECK(id.K_estimate == doctest::Approx(1.0));
  CHECK(id.passed());
  CHECK(id.sample_count == 64);

  const auto meyers = ellipticity_report(meyers_sigma(2.0), samples);
  CHECK(meyers.K_estimate == doctest::Approx(2.0).epsilon(1e-12));

  const auto bad = ellipticity_report(constant(Matrix2::diagonal(1.0, -1.0)), samples);
  CHECK_FALSE(bad.passed());
  CHECK(bad.min_sym_eig == doctest::Approx(-1.0));
  CHECK_THROWS_AS(require_elliptic(bad, "diag(1,-1)"), ConfigError);

  CHECK_THROWS_AS(ellipticity_report(constant(Matrix2::diagonal(1.0, 0.0)), samples), ConfigError);
  CHECK_THROWS_AS(ellipticity_report(make_coefficient_field("identity"), {}), ConfigError);
}

TEST_CASE("dilatations of reference matrices") {
  const auto id = dilatations(Matrix2::identity());
  CHECK(std::abs(id.mu) == 0.0);
  CHECK(std::abs(id.nu) == 0.0);

  const auto d = dilatations(Matrix2::diagonal(2.0, 0.5));
  CHECK(d.mu.real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(d.mu.imag() == 0.0);
  CHECK(std::abs(d.nu) < 1e-16);

  const auto meyers = meyers_sigma(2.0);
  for (const Point2 p : circle(0.7, 13)) {
    const auto m = dilatations(meyers(p));
    CHECK(std::abs(m.mu) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(m.nu) < 1e-15);
  }
  CHECK_THROWS_AS(dilatations(Matrix2::diagonal(-1.0, 0.0)), NumericalError);
}

TEST_CASE("dilatation bounds") {
  const auto samples = circle(0.6, 40);
  CHECK(dilatation_bound(make_coefficient_field("identity"), samples) == 0.0);
  CHECK(dilatation_bound(meyers_sigma(2.0), samples) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(dilatation_bound(meyers_sigma(4.0), samples) == doctest::Approx(0.6).epsilon(1e-9));
  for (const auto& entry : builtin_library()) {
    CHECK(dilatation_bound(make_coefficient_field(entry.descriptor), samples) < 1.0);
  }
}

TEST_CASE("random elliptic matrices satisfy |mu| + |nu| < 1") {
  std::mt19937_64 rng(20261017);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> logk(0.0, std::log(5.0));
  int elliptic = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const double K = std::exp(logk(rng));
    std::uniform_real_distribution<double> lam(1.0 / K, K);
    const Matrix2 s = Matrix2::rotation(angle(rng)).transpose() * Matrix2::diagonal(lam(rng), lam(rng)) *
                      Matrix2::rotation(angle(rng));
    const auto report = ellipticity_report(constant(s), std::vector<Point2>{{0.0, 0.0}});
    if (!report.passed()) continue;
    ++elliptic;
    const auto d = dilatations(s);
    CHECK(std::abs(d.mu) + std::abs(d.nu) < 1.0);
    const auto [mu, nu] = hand_dilatations(s);
    CHECK(std::abs(d.mu - mu) < 1e-14);
    CHECK(std::abs(d.nu - nu) < 1e-14);

    Matrix2 p = s;
    p.a12 += 1e-9;
    p.a21 -= 1e-9;
    const auto q = dilatations(p);
    CHECK(std::abs(q.mu - d.mu) <= 1e-7);
    CHECK(std::abs(q.nu - d.nu) <= 1e-7);
  }
  CHECK(elliptic > 500);
}

TEST_CASE("meyers coefficient") {
  const auto s = meyers_sigma(2.0);
  const Matrix2 a = s({1.0, 0.0});
  CHECK(a.a11 == doctest::Approx(0.5));
  CHECK(a.a12 == doctest::Approx(0.0));
  CHECK(a.a22 == doctest::Approx(2.0));
  const Matrix2 b = s({0.0, 1.0});
  CHECK(b.a11 == doctest::Approx(2.0));
  CHECK(b.a22 == doctest::Approx(0.5));
  const Matrix2 one = meyers_sigma(1.0)({0.3, -0.8});
  CHECK(one.a11 == doctest::Approx(1.0));
  CHECK(one.a12 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(one.a22 == doctest::Approx(1.0));
  CHECK_THROWS_AS(s({0.0, 0.0}), NumericalError);
  CHECK_THROWS_AS(meyers_sigma(-1.0), ConfigError);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Point2 p{coord(rng), coord(rng)};
    const Matrix2 m = s(p);
    CHECK(m.det() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.a12 == m.a21);
    // Eigenvector x / |x| with eigenvalue 1/alpha.
    const double r = std::hypot(p.x1, p.x2);
    const Vec2 e{p.x1 / r, p.x2 / r};
    const Vec2 me = m * e;
    CHECK(me[0] == doctest::Approx(0.5 * e[0]).epsilon(1e-12));
    CHECK(me[1] == doctest::Approx(0.5 * e[1]).epsilon(1e-12));
  }
}

TEST_CASE("divergence of sigma") {
  const auto c = make_coefficient_field("aniso:l1=3,l2=0.6,theta=0.3");
  const Vec2 zero = divergence_of_sigma(c, {0.2, 0.4}, 1e-3);
  CHECK(std::abs(zero[0]) < 1e-12);
  CHECK(std::abs(zero[1]) < 1e-12);

  const CoefficientField linear([](Point2 p) { return Matrix2::diagonal(p.x1, p.x1); }, true, "x1 I");
  const Vec2 one = divergence_of_sigma(linear, {0.3, 0.1}, 1e-4);
  CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(one[1]) < 1e-6);

  // Column-wise convention: d1 s11 + d2 s21 and d1 s12 + d2 s22.
  const CoefficientField cols([](Point2 p) { return Matrix2{0.0, p.x1, p.x2, 0.0}; }, false, "cols");
  const Vec2 col = divergence_of_sigma(cols, {0.3, 0.1}, 1e-4);
  CHECK(col[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(col[1] == doctest::Approx(1.0).epsilon(1e-8));

  const auto m = meyers_sigma(2.0);
  const Vec2 a = divergence_of_sigma(m, {0.5, 0.0}, 1e-3);
  const Vec2 b = divergence_of_sigma(m, {0.5, 0.0}, 1e-4);
  CHECK(std::hypot(a[0] - b[0], a[1] - b[1]) <= 1e-4);

  // Second-order decay on a smooth field: error ratio about 4 under halving.
  const auto smooth = make_coefficient_field("smooth:eps=0.8,cx=0.2,cy=-0.1,width=0.5,phi=0.7");
  const Point2 p{0.1, 0.3};
  const Vec2 ref = divergence_of_sigma(smooth, p, 1e-4);
  const Vec2 e1 = divergence_of_sigma(smooth, p, 0.04);
  const Vec2 e2 = divergence_of_sigma(smooth, p, 0.02);
  const double err1 = std::hypot(e1[0] - ref[0], e1[1] - ref[1]);
  const double err2 = std::hypot(e2[0] - ref[0], e2[1] - ref[1]);
  CHECK(err1 / err2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("symmetry claims are checked") {
  const CoefficientField liar([](Point2) { return Matrix2{1.0, 0.2, 0.0, 1.0}; }, true, "liar");
  CHECK_THROWS_AS(liar({0.0, 0.0}), ConfigError);
  const CoefficientField nan([](Point2) { return Matrix2{NAN, 0.0, 0.0, 1.0}; }, false, "nan");
  CHECK_THROWS_AS(nan({0.0, 0.0}), ConfigError);
}

TEST_CASE("coefficient library and random families") {
  const auto samples = circle(0.5, 32);
  for (const auto& entry : builtin_library()) {
    const auto field = make_coefficient_field(entry.descriptor);
    CHECK(field.descriptor() == entry.descriptor);
    CHECK(ellipticity_report(field, samples).passed());
  }
  const auto nonsym = make_coefficient_field("nonsym:tau=0.2,tau_var=0,eps=0");
  const Matrix2 m = nonsym({0.1, 0.1});
  CHECK(m.a21 - m.a12 == doctest::Approx(0.4));
  CHECK(m.a11 == doctest::Approx(1.0));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = random_smooth_field(seed);
    const auto b = random_smooth_field(seed);
    CHECK(a.descriptor() == b.descriptor());
    CHECK(a.symmetric());
    const auto n = random_nonsymmetric_field(seed, 0.3);
    CHECK_FALSE(n.symmetric());
    for (const Point2 p : samples) {
      const Matrix2 s = n(p);
      CHECK(std::abs(0.5 * (s.a21 - s.a12)) <= 0.3);
    }
    CHECK(ellipticity_report(n, samples).passed());
  }
  CHECK(random_smooth_field(1).descriptor() != random_smooth_field(2).descriptor());
}
