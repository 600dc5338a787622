#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sigmalab/coefficients.hpp"
#include "sigmalab/mesh.hpp"

namespace sigmalab {

using ScalarFunction = std::function<double(Point2)>;
using GradientFunction = std::function<Vec2(Point2)>;

/// Piecewise-linear nodal field on a mesh.
class ScalarField {
 public:
  ScalarField(MeshPtr mesh, std::vector<double> values);

  const Mesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  /// Value of the interpolant at p, or nullopt outside the mesh.
  std::optional<double> evaluate(const PointLocator& locator, Point2 p) const;

 private:
  MeshPtr mesh_;
  std::vector<double> values_;
};

/// Nodal interpolation of a function.
ScalarField interpolate(MeshPtr mesh, const ScalarFunction& f);

/// Pointwise linear combination a*x + b*y on a shared mesh.
ScalarField combine(double a, const ScalarField& x, double b, const ScalarField& y);

/// Ordered pair of scalar fields on one mesh: a planar mapping U = (u1, u2).
struct MappingField {
  MappingField(ScalarField first, ScalarField second);

  const Mesh& mesh() const { return u1.mesh(); }
  const MeshPtr& mesh_ptr() const { return u1.mesh_ptr(); }
  Point2 at_vertex(std::size_t v) const { return {u1[v], u2[v]}; }
  /// Component along a direction: xi1 * u1 + xi2 * u2.
  ScalarField directional(Vec2 xi) const;

  ScalarField u1;
  ScalarField u2;
};

struct TriangleGradientField {
  MeshPtr mesh;
  std::vector<Vec2> gradients;
};

struct DirichletProblem {
  MeshPtr mesh;
  CoefficientField sigma;
  ScalarFunction boundary_data;  // applied on every boundary loop
};

struct DirichletSolution {
  ScalarField u;
  /// Relative max-norm residual of the interior linear system.
  double residual;
  EllipticityReport ellipticity;
};

/// P1 Galerkin solution of div(sigma grad u) = 0 with u = g at boundary
/// vertices. sigma is sampled at triangle centroids. Handles non-symmetric sigma.
DirichletSolution solve_dirichlet(const DirichletProblem& problem);

TriangleGradientField gradient_field(const ScalarField& u);

/// sum_T (sigma(c_T) grad u) . grad u |T|
double energy(const ScalarField& u, const CoefficientField& sigma);

/// Errors against an analytic solution, with the edge-midpoint rule on each triangle.
double l2_norm(const ScalarField& u);
double relative_l2_error(const ScalarField& u, const ScalarFunction& exact);
double relative_h1_seminorm_error(const ScalarField& u, const GradientFunction& exact_gradient);
double max_nodal_error(const ScalarField& u, const ScalarFunction& exact);

/// "field v1" text format.
void write_field(std::ostream& out, const ScalarField& u);
ScalarField read_field(std::istream& in, MeshPtr mesh);

}  // namespace sigmalab
