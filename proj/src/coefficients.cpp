#include "sigmalab/coefficients.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sigmalab/descriptor.hpp"

namespace sigmalab {

CoefficientField::CoefficientField(Evaluator evaluator, bool symmetric, std::string descriptor)
    : evaluator_(std::move(evaluator)), symmetric_(symmetric), descriptor_(std::move(descriptor)) {}

Matrix2 CoefficientField::operator()(Point2 p) const {
  const Matrix2 m = evaluator_(p);
  if (!m.finite()) {
    throw ConfigError("coefficient '" + descriptor_ + "' is not finite at " + to_string(p));
  }
  if (symmetric_ && std::abs(m.a12 - m.a21) > 1e-12 * (1.0 + std::abs(m.a12))) {
    throw ConfigError("coefficient '" + descriptor_ + "' claims symmetry but is not symmetric at " +
                      to_string(p));
  }
  return m;
}

VectorField2::VectorField2(Evaluator evaluator, std::string descriptor)
    : evaluator_(std::move(evaluator)), descriptor_(std::move(descriptor)) {}

VectorField2 VectorField2::zero() {
  return VectorField2([](Point2) { return Vec2{0.0, 0.0}; }, "zero");
}

Vec2 VectorField2::operator()(Point2 p) const {
  const Vec2 v = evaluator_(p);
  if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
    throw ConfigError("vector field '" + descriptor_ + "' is not finite at " + to_string(p));
  }
  return v;
}

EllipticityReport ellipticity_report(const CoefficientField& field, std::span<const Point2> samples) {
  if (samples.empty()) throw ConfigError("ellipticity check needs at least one sample point");
  EllipticityReport report;
  report.min_sym_eig = std::numeric_limits<double>::infinity();
  report.min_inv_sym_eig = std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  for (const Point2& p : samples) {
    const Matrix2 m = field(p);
    if (!(std::abs(m.det()) > 1e-12)) {
      throw ConfigError("coefficient '" + field.descriptor() + "' is singular at " + to_string(p));
    }
    const double lam = symmetric_eigenvalues(m.sym())[0];
    const double lam_inv = symmetric_eigenvalues(m.inverse().sym())[0];
    report.min_sym_eig = std::min(report.min_sym_eig, lam);
    report.min_inv_sym_eig = std::min(report.min_inv_sym_eig, lam_inv);
    const double local = std::min(lam, lam_inv);
    if (local < worst) {
      worst = local;
      report.worst_point = p;
    }
  }
  report.sample_count = samples.size();
  report.K_estimate = 1.0 / std::min(report.min_sym_eig, report.min_inv_sym_eig);
  return report;
}

void require_elliptic(const EllipticityReport& report, const std::string& descriptor) {
  if (!report.passed()) {
    throw ConfigError("not elliptic: coefficient '" + descriptor + "' has min sym eigenvalue " +
                      format_double(std::min(report.min_sym_eig, report.min_inv_sym_eig)) +
                      " at " + to_string(report.worst_point));
  }
}

DilatationPair dilatations(const Matrix2& m) {
  const double denom = 1.0 + m.trace() + m.det();
  if (!(std::abs(denom) > 1e-14)) {
    throw NumericalError("dilatations: 1 + tr + det vanishes (non-elliptic coefficient)");
  }
  return {std::complex<double>(m.a22 - m.a11, -(m.a12 + m.a21)) / denom,
          std::complex<double>(1.0 - m.det(), m.a12 - m.a21) / denom};
}

double dilatation_bound(const CoefficientField& field, std::span<const Point2> samples) {
  require_elliptic(ellipticity_report(field, samples), field.descriptor());
  double k = 0.0;
  for (const Point2& p : samples) {
    const auto d = dilatations(field(p));
    k = std::max(k, std::abs(d.mu) + std::abs(d.nu));
  }
  return k;
}

CoefficientField meyers_sigma(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("meyers alpha must be positive");
  const double inv = 1.0 / alpha;
  return CoefficientField(
      [alpha, inv](Point2 p) {
        const double r2 = p.x1 * p.x1 + p.x2 * p.x2;
        if (r2 == 0.0) throw NumericalError("meyers coefficient is discontinuous at the origin");
        const double off = (inv - alpha) * p.x1 * p.x2 / r2;
        return Matrix2{(inv * p.x1 * p.x1 + alpha * p.x2 * p.x2) / r2, off, off,
                       (alpha * p.x1 * p.x1 + inv * p.x2 * p.x2) / r2};
      },
      true, "meyers:alpha=" + format_double(alpha));
}

Vec2 divergence_of_sigma(const CoefficientField& field, Point2 p, double step) {
  if (!(step > 0.0)) throw ConfigError("divergence step must be positive");
  const Matrix2 east = field({p.x1 + step, p.x2});
  const Matrix2 west = field({p.x1 - step, p.x2});
  const Matrix2 north = field({p.x1, p.x2 + step});
  const Matrix2 south = field({p.x1, p.x2 - step});
  const double two_h = 2.0 * step;
  return {(east.a11 - west.a11) / two_h + (north.a21 - south.a21) / two_h,
          (east.a12 - west.a12) / two_h + (north.a22 - south.a22) / two_h};
}

namespace {

struct Bump {
  double eps = 0.0;
  Point2 center{};
  double width = 0.5;
  double phi = 0.0;

  double weight(Point2 p) const {
    const Point2 d = p - center;
    return std::exp(-(d.x1 * d.x1 + d.x2 * d.x2) / (width * width));
  }
  Matrix2 matrix(Point2 p) const {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double w = eps * weight(p);
    return {1.0 + w * c * c, w * c * s, w * c * s, 1.0 + w * s * s};
  }
};

Bump read_bump(const Descriptor& d) {
  Bump b;
  b.eps = d.number_or("eps", d.name == "nonsym" ? 0.0 : 0.5);
  b.center = {d.number_or("cx", 0.0), d.number_or("cy", 0.0)};
  b.width = d.number_or("width", 0.5);
  b.phi = d.number_or("phi", 0.0);
  if (!(b.width > 0.0)) throw ConfigError("smooth field width must be positive");
  return b;
}

std::string bump_params(const Bump& b) {
  return "eps=" + format_double(b.eps) + ",cx=" + format_double(b.center.x1) +
         ",cy=" + format_double(b.center.x2) + ",width=" + format_double(b.width) +
         ",phi=" + format_double(b.phi);
}

CoefficientField smooth_field(const Bump& b) {
  return CoefficientField([b](Point2 p) { return b.matrix(p); }, true, "smooth:" + bump_params(b));
}

CoefficientField nonsymmetric_field(const Bump& b, double tau, double tau_var) {
  if (tau_var < 0.0 || tau_var > 1.0) throw ConfigError("nonsym tau_var must lie in [0, 1]");
  std::string desc = "nonsym:tau=" + format_double(tau) + ",tau_var=" + format_double(tau_var) +
                     "," + bump_params(b);
  return CoefficientField(
      [b, tau, tau_var](Point2 p) {
        const double t = tau * (1.0 - tau_var * b.weight(p));
        return b.matrix(p) + t * Matrix2::rotation_j();
      },
      false, std::move(desc));
}

}  // namespace

CoefficientField make_coefficient_field(std::string_view text) {
  const Descriptor d = Descriptor::parse(text);
  if (d.name == "identity") {
    d.expect_only("");
    return CoefficientField([](Point2) { return Matrix2::identity(); }, true, "identity");
  }
  if (d.name == "const") {
    d.expect_only("a11,a12,a21,a22");
    const Matrix2 m{d.number_or("a11", 1.0), d.number_or("a12", 0.0), d.number_or("a21", 0.0),
                    d.number_or("a22", 1.0)};
    return CoefficientField([m](Point2) { return m; }, m.a12 == m.a21, d.str());
  }
  if (d.name == "aniso") {
    d.expect_only("l1,l2,theta");
    const Matrix2 r = Matrix2::rotation(d.number_or("theta", 0.0));
    Matrix2 m = r * Matrix2::diagonal(d.number_or("l1", 1.0), d.number_or("l2", 1.0)) * r.transpose();
    m = m.sym();
    return CoefficientField([m](Point2) { return m; }, true, d.str());
  }
  if (d.name == "meyers") {
    d.expect_only("alpha");
    return meyers_sigma(d.number("alpha"));
  }
  if (d.name == "smooth" || d.name == "holder" || d.name == "smooth-holder") {
    d.expect_only("eps,cx,cy,width,phi");
    const Bump b = read_bump(d);
    if (!(b.eps > -1.0)) throw ConfigError("not elliptic: smooth field needs eps > -1");
    return smooth_field(b);
  }
  if (d.name == "nonsym") {
    d.expect_only("tau,tau_var,eps,cx,cy,width,phi");
    const Bump b = read_bump(d);
    return nonsymmetric_field(b, d.number_or("tau", 0.2), d.number_or("tau_var", 0.0));
  }
  throw ConfigError("unknown coefficient descriptor '" + d.name + "'");
}

std::vector<LibraryEntry> builtin_library() {
  return {
      {"identity", true},
      {"aniso:l1=2,l2=0.5,theta=0", true},
      {"aniso:l1=3,l2=0.6,theta=0.3", true},
      {"smooth:eps=0.8,cx=0.2,cy=-0.1,width=0.5,phi=0.7", true},
      {"nonsym:tau=0.2,tau_var=0.5,eps=0.5,cx=-0.2,cy=0.1,width=0.6,phi=1.1", true},
      {"meyers:alpha=2", false},
  };
}

namespace {

Bump random_bump(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> eps(0.3, 1.5);
  std::uniform_real_distribution<double> offset(-0.5, 0.5);
  std::uniform_real_distribution<double> width(0.3, 0.8);
  std::uniform_real_distribution<double> phi(0.0, std::numbers::pi);
  Bump b;
  b.eps = eps(rng);
  b.center = {offset(rng), offset(rng)};
  b.width = width(rng);
  b.phi = phi(rng);
  return b;
}

}  // namespace

CoefficientField random_smooth_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return smooth_field(random_bump(rng));
}

CoefficientField random_nonsymmetric_field(std::uint64_t seed, double max_tau) {
  std::mt19937_64 rng(seed);
  const Bump b = random_bump(rng);
  std::uniform_real_distribution<double> tau(-max_tau, max_tau);
  std::uniform_real_distribution<double> tau_var(0.0, 0.5);
  const double t = tau(rng);
  return nonsymmetric_field(b, t, tau_var(rng));
}

}  // namespace sigmalab
