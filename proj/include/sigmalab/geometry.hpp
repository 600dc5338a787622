#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace sigmalab {

/// A point of the plane, identified with the complex number x1 + i x2.
struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point2 operator-(Point2 a) { return {-a.x1, -a.x2}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point2 a, Point2 b) = default;

  std::complex<double> as_complex() const { return {x1, x2}; }
  bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }
};

/// Plain 2-vector (gradients, fluxes, drift fields).
using Vec2 = std::array<double, 2>;

inline double dot(Vec2 a, Vec2 b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Vec2 a) { return std::hypot(a[0], a[1]); }
inline double norm(Point2 p) { return std::hypot(p.x1, p.x2); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// z-component of (b - a) x (c - a): twice the signed area of triangle abc.
inline double cross(Point2 a, Point2 b, Point2 c) {
  return (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1);
}

/// Row-major 2x2 real matrix [[a11, a12], [a21, a22]].
struct Matrix2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  static Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Matrix2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  /// Counterclockwise quarter rotation.
  static Matrix2 rotation_j() { return {0.0, -1.0, 1.0, 0.0}; }
  static Matrix2 rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c, -s, s, c};
  }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  Matrix2 transpose() const { return {a11, a21, a12, a22}; }
  Matrix2 sym() const {
    const double off = 0.5 * (a12 + a21);
    return {a11, off, off, a22};
  }
  bool finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
  }
  /// Caller guarantees det() != 0.
  Matrix2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  Vec2 operator*(Vec2 v) const { return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]}; }
  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
  friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
  }
  friend Matrix2 operator*(double s, const Matrix2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
  }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Eigenvalues of a symmetric matrix, ascending.
inline std::array<double, 2> symmetric_eigenvalues(const Matrix2& s) {
  const double mean = 0.5 * (s.a11 + s.a22);
  const double half_diff = 0.5 * (s.a11 - s.a22);
  const double radius = std::hypot(half_diff, s.a12);
  return {mean - radius, mean + radius};
}

// Error taxonomy. The CLI maps each category onto a stable exit status.

/// Invalid input or configuration (bad descriptor, violated precondition).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not be carried out (singular system, degenerate data).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hypothesis of the verified statement fails for the given input.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource limit would be exceeded.
class ResourceLimitError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

std::string to_string(Point2 p);

}  // namespace sigmalab
