#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sigmalab/coefficients.hpp"
#include "sigmalab/fem.hpp"

namespace sigmalab {

// ---- stream function and complex derivatives -------------------------------

struct StreamOptions {
  /// The stream function is single valued only on simply connected domains
  /// (or when sigma grad u has zero flux around every hole). Off by default.
  bool allow_multiply_connected = false;
};

struct StreamFunction {
  ScalarField v;
  /// || grad v - J sigma grad u ||_L2 / || sigma grad u ||_L2
  double residual;
};

/// Least-squares P1 field v with grad v ~ J sigma(c_T) grad u on every
/// triangle, J the counterclockwise quarter rotation, anchored at v(vertex 0) = 0.
StreamFunction stream_function(const ScalarField& u, const CoefficientField& sigma,
                               StreamOptions options = {});

/// Per-triangle f_z and f_zbar of f = u + i v, with
/// f_z = (f_x1 - i f_x2) / 2 and f_zbar = (f_x1 + i f_x2) / 2.
struct ComplexDerivativeField {
  MeshPtr mesh;
  std::vector<std::complex<double>> fz;
  std::vector<std::complex<double>> fzbar;
};

ComplexDerivativeField complex_derivatives(const ScalarField& u, const ScalarField& v);

/// Area-weighted || f_zbar - mu f_z - nu conj(f_z) || / || f_z || with the
/// dilatations of sigma at the centroids.
double beltrami_residual(const ComplexDerivativeField& cd, const CoefficientField& sigma);

struct QuasiconformalDefect {
  double sup_ratio = 0.0;          // max |f_zbar| / |f_z|
  bool ratio_unbounded = false;    // some f_z vanished
  double min_jacobian_f = 0.0;     // min |f_z|^2 - |f_zbar|^2
  bool near_degenerate = false;    // min_jacobian_f below the tolerance
  std::size_t triangles_used = 0;
};

/// Statistics over triangles whose centroid lies at least `margin` from the boundary.
QuasiconformalDefect quasiconformal_defect(const ComplexDerivativeField& cd, double margin,
                                           double degeneracy_tolerance = 1e-3);

// ---- mappings ---------------------------------------------------------------

/// det DU per triangle (rows grad u1, grad u2).
std::vector<double> jacobian_field(const MappingField& map);

struct InjectivityViolation {
  enum class Kind { boundary_crossing, orientation };
  Kind kind;
  /// boundary_crossing: indices of the two boundary segments (loop-major
  /// numbering); orientation: triangle index and 0.
  std::size_t first;
  std::size_t second;
};

struct InjectivityResult {
  bool injective = true;
  std::vector<InjectivityViolation> violations;  // first 100 recorded
  std::size_t violation_count = 0;
};

/// Sufficient discrete surrogate for injectivity: the boundary loops map to
/// pairwise disjoint simple polygons and every image triangle has the same
/// strict orientation.
InjectivityResult injectivity_check(const MappingField& map);

// ---- unimodality --------------------------------------------------------------

/// Cyclic inclusive index range [begin, end].
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct UnimodalityVerdict {
  bool unimodal = false;
  IndexRange rise_arc;  // from a minimum to a maximum
  IndexRange fall_arc;  // from that maximum back to the minimum
  int direction_changes = 0;
};

/// Differences with |d| <= tie_tolerance count as ties and are skipped; the
/// sequence is unimodal iff the remaining signs change exactly twice cyclically.
UnimodalityVerdict unimodality_check(std::span<const double> values, double tie_tolerance = 1e-12);

// ---- pullbacks and the Lewy pipeline ------------------------------------------

/// Point where the level curve |U - w0| = r crosses a parent edge.
struct LevelCrossing {
  int inside_vertex;
  int outside_vertex;
  double t;        // along inside -> outside
  Point2 position;
  Point2 image;    // lies on the circle |w - w0| = r
};

struct PullbackSubdomain {
  MeshPtr mesh;                    // triangles with all vertex images in the closed disk
  std::vector<int> parent_vertex;  // submesh vertex -> parent vertex
  Point2 z0;
  Point2 w0;
  double r;
  /// Preimage of the circle, cyclic with the subdomain on its left.
  std::vector<LevelCrossing> level_trace;
};

/// G = U^{-1}(B_r(w0)) with w0 = U(z0), restricted to the component around z0.
PullbackSubdomain pullback_subdomain(const MappingField& map, Point2 z0, double r);

struct LewyOptions {
  int directions = 8;
  double margin = 0.1;
  std::vector<Point2> probes;         // empty: default_probe_points
  int probe_count = 5;
  double probe_radius_fraction = 0.5; // r = fraction * dist(w0, image of the boundary)
  double tie_tolerance = 1e-12;
};

struct ProbeResult {
  Point2 z0;
  Point2 w0;
  double r;
  std::size_t triangles;
  std::vector<int> unimodal;  // per direction, 1 or 0
};

struct LewyReport {
  int directions_tested = 0;
  double margin = 0.0;
  std::size_t inset_triangles = 0;
  double min_abs_det = 0.0;
  std::vector<double> min_abs_grad;  // per direction
  std::vector<ProbeResult> probes;
  bool injective = false;
  bool all_unimodal = false;
  bool passed = false;  // min_abs_det > 0 and every directional minimum > 0
};

/// Unit vectors at angles pi k / count, k = 0 .. count-1.
std::vector<Vec2> half_circle_directions(int count);

/// min |grad (xi . U)| over triangles inset by margin.
double directional_gradient_minimum(const MappingField& map, Vec2 xi, double margin);

/// Up to `count` lattice points at distance >= 2 margin from the boundary.
std::vector<Point2> default_probe_points(const MeshPtr& mesh, double margin, int count);

/// Throws HypothesisError if the map fails the injectivity check.
LewyReport lewy_verify(const MappingField& map, const CoefficientField& sigma,
                       const LewyOptions& options = {});

// ---- critical points ----------------------------------------------------------

struct CriticalCandidate {
  std::size_t triangle;
  double grad_norm;
};

/// Triangles with |grad u| < rel_tol * median |grad u|, ascending.
std::vector<CriticalCandidate> critical_point_candidates(const ScalarField& u, double rel_tol);

}  // namespace sigmalab
