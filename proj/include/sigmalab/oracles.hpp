#pragma once

#include <string>
#include <string_view>

#include "sigmalab/fem.hpp"

namespace sigmalab {

/// Closed-form scalar solution with its exact gradient.
struct AnalyticSolution {
  ScalarFunction value;
  GradientFunction gradient;
  std::string descriptor;
};

/// Closed-form planar map with its exact Jacobian matrix (rows grad u1, grad u2).
struct AnalyticMapping {
  std::function<Vec2(Point2)> value;
  std::function<Matrix2(Point2)> jacobian;
  std::string descriptor;

  /// i = 0 for u1, 1 for u2.
  AnalyticSolution component(int i) const;
};

/// u(x) = |x|^(alpha - 1) x. Undefined at the origin.
AnalyticMapping meyers_solution(double alpha);

/// det DU = alpha |x|^(2(alpha - 1)); 0 at the origin for alpha > 1, error for alpha < 1.
double meyers_jacobian(double alpha, Point2 p);

/// (Re z^m, Im z^m).
AnalyticMapping holomorphic_oracle(int m);
AnalyticMapping identity_mapping();

/// Scalar oracles and boundary data:
///   x1, x2, bilinear (x1 x2), affine:a=..,b=..,c=.. (a + b x1 + c x2),
///   harmonic:re-z2, harmonic:im-z2, cos-theta (cosine of the polar angle),
///   meyers:alpha=..[,component=1|2], holo:m=..[,component=1|2]
AnalyticSolution make_scalar_oracle(std::string_view descriptor);

/// Mapping oracles: identity, meyers:alpha=.., holo:m=..
AnalyticMapping make_mapping_oracle(std::string_view descriptor);

/// Pairwise image-coincidence scan over a lattice of points inside the mesh,
/// evaluated through the piecewise-linear interpolant. Quadratic in the
/// number of lattice points (at most 5e4).
bool brute_force_injectivity(const MappingField& map, double sample_step);

}  // namespace sigmalab
