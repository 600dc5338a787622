#include "sigmalab/oracles.hpp"

#include <cmath>
#include <complex>

#include "sigmalab/descriptor.hpp"

namespace sigmalab {

AnalyticSolution AnalyticMapping::component(int i) const {
  if (i != 0 && i != 1) throw ConfigError("mapping component must be 1 or 2");
  auto v = value;
  auto j = jacobian;
  return {[v, i](Point2 p) { return v(p)[static_cast<std::size_t>(i)]; },
          [j, i](Point2 p) {
            const Matrix2 m = j(p);
            return i == 0 ? Vec2{m.a11, m.a12} : Vec2{m.a21, m.a22};
          },
          descriptor + ",component=" + std::to_string(i + 1)};
}

AnalyticMapping meyers_solution(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("meyers alpha must be positive");
  auto radius = [](Point2 p) {
    const double r = norm(p);
    if (r == 0.0) throw NumericalError("meyers solution evaluated at the origin");
    return r;
  };
  return {[alpha, radius](Point2 p) {
            const double s = std::pow(radius(p), alpha - 1.0);
            return Vec2{s * p.x1, s * p.x2};
          },
          [alpha, radius](Point2 p) {
            const double r = radius(p);
            const double s = std::pow(r, alpha - 1.0);
            const double t = (alpha - 1.0) * std::pow(r, alpha - 3.0);
            return Matrix2{s + t * p.x1 * p.x1, t * p.x1 * p.x2, t * p.x1 * p.x2,
                           s + t * p.x2 * p.x2};
          },
          "meyers:alpha=" + format_double(alpha)};
}

double meyers_jacobian(double alpha, Point2 p) {
  if (!(alpha > 0.0)) throw ConfigError("meyers alpha must be positive");
  const double r = norm(p);
  if (r == 0.0) {
    if (alpha > 1.0) return 0.0;
    if (alpha == 1.0) return 1.0;
    throw NumericalError("meyers Jacobian diverges at the origin for alpha < 1");
  }
  return alpha * std::pow(r, 2.0 * (alpha - 1.0));
}

AnalyticMapping holomorphic_oracle(int m) {
  if (m < 1) throw ConfigError("holomorphic oracle needs m >= 1");
  auto power = [](std::complex<double> z, int n) {
    std::complex<double> out(1.0, 0.0);
    for (int k = 0; k < n; ++k) out *= z;
    return out;
  };
  return {[m, power](Point2 p) {
            const auto f = power(p.as_complex(), m);
            return Vec2{f.real(), f.imag()};
          },
          [m, power](Point2 p) {
            const auto d = static_cast<double>(m) * power(p.as_complex(), m - 1);
            return Matrix2{d.real(), -d.imag(), d.imag(), d.real()};
          },
          "holo:m=" + std::to_string(m)};
}

AnalyticMapping identity_mapping() {
  return {[](Point2 p) { return Vec2{p.x1, p.x2}; }, [](Point2) { return Matrix2::identity(); },
          "identity"};
}

AnalyticSolution make_scalar_oracle(std::string_view text) {
  const Descriptor d = Descriptor::parse(text);
  if (d.name == "x1") {
    return {[](Point2 p) { return p.x1; }, [](Point2) { return Vec2{1.0, 0.0}; }, "x1"};
  }
  if (d.name == "x2") {
    return {[](Point2 p) { return p.x2; }, [](Point2) { return Vec2{0.0, 1.0}; }, "x2"};
  }
  if (d.name == "bilinear") {
    return {[](Point2 p) { return p.x1 * p.x2; }, [](Point2 p) { return Vec2{p.x2, p.x1}; },
            "bilinear"};
  }
  if (d.name == "affine") {
    d.expect_only("a,b,c");
    const double a = d.number_or("a", 0.0);
    const double b = d.number_or("b", 0.0);
    const double c = d.number_or("c", 0.0);
    return {[a, b, c](Point2 p) { return a + b * p.x1 + c * p.x2; },
            [b, c](Point2) { return Vec2{b, c}; }, d.str()};
  }
  if (d.name == "harmonic") {
    d.expect_only("", true);
    if (d.variant == "re-z2") {
      return {[](Point2 p) { return p.x1 * p.x1 - p.x2 * p.x2; },
              [](Point2 p) { return Vec2{2.0 * p.x1, -2.0 * p.x2}; }, "harmonic:re-z2"};
    }
    if (d.variant == "im-z2") {
      return {[](Point2 p) { return 2.0 * p.x1 * p.x2; },
              [](Point2 p) { return Vec2{2.0 * p.x2, 2.0 * p.x1}; }, "harmonic:im-z2"};
    }
    throw ConfigError("harmonic oracle needs a variant: harmonic:re-z2 or harmonic:im-z2");
  }
  if (d.name == "cos-theta") {
    return {[](Point2 p) {
              const double r = norm(p);
              return r == 0.0 ? 0.0 : p.x1 / r;
            },
            [](Point2 p) {
              const double r = norm(p);
              if (r == 0.0) throw NumericalError("cos-theta gradient undefined at the origin");
              return Vec2{p.x2 * p.x2 / (r * r * r), -p.x1 * p.x2 / (r * r * r)};
            },
            "cos-theta"};
  }
  if (d.name == "meyers" || d.name == "holo") {
    d.expect_only(d.name == "meyers" ? "alpha,component" : "m,component");
    Descriptor base = d;
    base.params.erase("component");
    const auto component = parse_integer(d.text_or("component", "1"), "component");
    return make_mapping_oracle(base.str()).component(static_cast<int>(component) - 1);
  }
  throw ConfigError("unknown scalar oracle '" + std::string(text) + "'");
}

AnalyticMapping make_mapping_oracle(std::string_view text) {
  const Descriptor d = Descriptor::parse(text);
  if (d.name == "identity") return identity_mapping();
  if (d.name == "meyers") {
    d.expect_only("alpha");
    return meyers_solution(d.number("alpha"));
  }
  if (d.name == "holo") {
    d.expect_only("m");
    return holomorphic_oracle(static_cast<int>(parse_integer(d.text_or("m", "1"), "holo m")));
  }
  throw ConfigError("unknown mapping oracle '" + std::string(text) + "'");
}

bool brute_force_injectivity(const MappingField& map, double sample_step) {
  if (!(sample_step > 0.0)) throw ConfigError("sample step must be positive");
  const Mesh& mesh = map.mesh();
  Point2 lo = mesh.vertices().front();
  Point2 hi = lo;
  for (const auto& v : mesh.vertices()) {
    lo = {std::min(lo.x1, v.x1), std::min(lo.x2, v.x2)};
    hi = {std::max(hi.x1, v.x1), std::max(hi.x2, v.x2)};
  }
  // Lattice centred on the bounding box so symmetric domains get symmetric samples.
  const Point2 center{0.5 * (lo.x1 + hi.x1), 0.5 * (lo.x2 + hi.x2)};
  const long kx = static_cast<long>(std::floor(0.5 * (hi.x1 - lo.x1) / sample_step));
  const long ky = static_cast<long>(std::floor(0.5 * (hi.x2 - lo.x2) / sample_step));
  const double lattice_size = double(2 * kx + 1) * double(2 * ky + 1);
  if (lattice_size > 4.0 * 5e4) throw ResourceLimitError("brute-force injectivity sample budget exceeded");

  const PointLocator locator(map.mesh_ptr());
  std::vector<Point2> images;
  for (long j = -ky; j <= ky; ++j) {
    for (long i = -kx; i <= kx; ++i) {
      const Point2 p{center.x1 + static_cast<double>(i) * sample_step,
                     center.x2 + static_cast<double>(j) * sample_step};
      const auto a = map.u1.evaluate(locator, p);
      if (!a) continue;
      images.push_back({*a, *map.u2.evaluate(locator, p)});
    }
  }
  if (images.size() > 50000) throw ResourceLimitError("brute-force injectivity sample budget exceeded");

  constexpr double tol = 1e-9;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      if (std::abs(images[i].x1 - images[j].x1) <= tol &&
          std::abs(images[i].x2 - images[j].x2) <= tol) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace sigmalab
