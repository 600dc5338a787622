#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigmalab/geometry.hpp"

namespace sigmalab {

/// Matrix-valued coefficient x -> sigma(x). Evaluators must be pure: the
/// solvers call them concurrently.
class CoefficientField {
 public:
  using Evaluator = std::function<Matrix2(Point2)>;

  CoefficientField(Evaluator evaluator, bool symmetric, std::string descriptor);

  /// Evaluates and checks finiteness and, when claimed, symmetry.
  Matrix2 operator()(Point2 p) const;

  bool symmetric() const { return symmetric_; }
  const std::string& descriptor() const { return descriptor_; }

 private:
  Evaluator evaluator_;
  bool symmetric_;
  std::string descriptor_;
};

/// Lower-order drift b(x) of a non-divergence equation.
class VectorField2 {
 public:
  using Evaluator = std::function<Vec2(Point2)>;

  VectorField2(Evaluator evaluator, std::string descriptor);
  static VectorField2 zero();

  Vec2 operator()(Point2 p) const;
  const std::string& descriptor() const { return descriptor_; }

 private:
  Evaluator evaluator_;
  std::string descriptor_;
};

/// Sampled ellipticity constant. `K_estimate` = 1 / min(min_sym_eig, min_inv_sym_eig),
/// where the eigenvalues are those of the symmetric parts of sigma and its inverse.
struct EllipticityReport {
  double K_estimate = 1.0;
  double min_sym_eig = 0.0;
  double min_inv_sym_eig = 0.0;
  std::size_t sample_count = 0;
  Point2 worst_point{};

  bool passed() const { return min_sym_eig > 0.0 && min_inv_sym_eig > 0.0; }
};

EllipticityReport ellipticity_report(const CoefficientField& field, std::span<const Point2> samples);

/// Throws ConfigError ("not elliptic ...") unless the report passed.
void require_elliptic(const EllipticityReport& report, const std::string& descriptor);

struct DilatationPair {
  std::complex<double> mu;
  std::complex<double> nu;
};

/// Complex dilatations of the Beltrami system associated with sigma:
///   mu = (s22 - s11 - i (s12 + s21)) / (1 + tr s + det s)
///   nu = (1 - det s + i (s12 - s21)) / (1 + tr s + det s)
DilatationPair dilatations(const Matrix2& m);

/// max over samples of |mu| + |nu|. Requires the field to pass the ellipticity
/// check on the same samples.
double dilatation_bound(const CoefficientField& field, std::span<const Point2> samples);

/// Radial coefficient with eigenvalues alpha (tangential) and 1/alpha (radial).
/// Undefined at the origin.
CoefficientField meyers_sigma(double alpha);

/// Central differences of the column-wise divergence
/// (d1 s11 + d2 s21, d1 s12 + d2 s22).
Vec2 divergence_of_sigma(const CoefficientField& field, Point2 p, double step);

/// Builds a field from "name:key=value,..." descriptors:
///   identity
///   const:a11=..,a12=..,a21=..,a22=..
///   aniso:l1=..,l2=..,theta=..            R(theta) diag(l1, l2) R(theta)^T
///   meyers:alpha=..
///   smooth:eps=..,cx=..,cy=..,width=..,phi=..
///                                         I + eps exp(-|x-c|^2/width^2) a a^T,  a = (cos phi, sin phi)
///   nonsym:tau=..,tau_var=..,<smooth params>
///                                         smooth + tau (1 - tau_var bump) J, so |tau(x)| <= |tau|
/// "holder" and "smooth-holder" are aliases for "smooth".
CoefficientField make_coefficient_field(std::string_view descriptor);

struct LibraryEntry {
  std::string descriptor;
  /// Entries are Hoelder continuous everywhere (Meyers is not, at the origin).
  bool continuous;
};

/// The built-in elliptic coefficient library.
std::vector<LibraryEntry> builtin_library();

/// Seeded random members of the smooth symmetric and the non-symmetric families.
CoefficientField random_smooth_field(std::uint64_t seed);
CoefficientField random_nonsymmetric_field(std::uint64_t seed, double max_tau = 0.3);

}  // namespace sigmalab
