#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "sigmalab/geometry.hpp"

namespace sigmalab {

using Triangle = std::array<int, 3>;
using Edge = std::array<int, 2>;

/// Analytic description of the domain a mesh was generated from. Refinement
/// uses it to push new boundary vertices back onto curved boundaries.
struct DomainShape {
  enum class Kind { none, disk, annulus, rectangle };
  Kind kind = Kind::none;
  Point2 center{};        // disk, annulus
  double r_in = 0.0;      // annulus
  double r_out = 0.0;     // disk radius or annulus outer radius
  Point2 corner{};        // rectangle lower-left
  double width = 0.0;
  double height = 0.0;
};

struct MeshLimits {
  std::size_t max_vertices = 1'000'000;
};

/// Conforming triangulation of a planar domain with ordered boundary loops.
///
/// Loops are oriented with the domain on their left: the outer loop runs
/// counterclockwise, hole loops clockwise. Every invariant is checked on
/// construction and a Mesh is immutable afterwards.
class Mesh {
 public:
  Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
       std::vector<std::vector<int>> boundary, double h, DomainShape shape = {},
       MeshLimits limits = {});

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<std::vector<int>>& boundary() const { return boundary_; }
  const DomainShape& shape() const { return shape_; }
  double h() const { return h_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }
  std::size_t loop_count() const { return boundary_.size(); }

  Point2 vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  double area(std::size_t t) const;
  Point2 centroid(std::size_t t) const;
  double total_area() const;
  bool on_boundary(int v) const { return on_boundary_[static_cast<std::size_t>(v)] != 0; }

  /// Unique undirected edges, each stored as (min, max), sorted.
  std::vector<Edge> edges() const;
  /// V - E + T.
  long euler_characteristic() const;
  /// Shoelace area of a boundary loop (positive for counterclockwise).
  double loop_signed_area(std::size_t loop) const;

 private:
  void validate(const MeshLimits& limits) const;

  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::vector<int>> boundary_;
  std::vector<unsigned char> on_boundary_;
  double h_;
  DomainShape shape_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

Mesh generate_disk(Point2 center, double radius, double h, MeshLimits limits = {});
Mesh generate_annulus(Point2 center, double r_in, double r_out, double h, MeshLimits limits = {});
Mesh generate_rectangle(Point2 corner, double width, double height, double h,
                        MeshLimits limits = {});

/// Red refinement: every triangle splits into four through its edge midpoints.
Mesh refine(const Mesh& mesh, MeshLimits limits = {});

struct BoundaryVertex {
  int index;
  Point2 position;
};

std::vector<BoundaryVertex> boundary_trace(const Mesh& mesh, int loop_index);

double point_segment_distance(Point2 p, Point2 a, Point2 b);
double distance_to_boundary(const Mesh& mesh, Point2 p);

/// Bucket-grid point location with barycentric coordinates.
class PointLocator {
 public:
  explicit PointLocator(MeshPtr mesh);

  struct Location {
    std::size_t triangle;
    std::array<double, 3> barycentric;
  };

  /// Lowest-index triangle containing p (closed triangles, tolerance 1e-12).
  std::optional<Location> locate(Point2 p) const;
  const Mesh& mesh() const { return *mesh_; }

 private:
  static std::size_t cell_of(double coord, double lo, double span, std::size_t n);

  MeshPtr mesh_;
  Point2 lo_{};
  Point2 hi_{};
  std::size_t nx_ = 1;
  std::size_t ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

std::array<double, 3> barycentric(Point2 p, Point2 a, Point2 b, Point2 c);

/// "mesh v1" text format; round-trips bit-exactly.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in, MeshLimits limits = {});

}  // namespace sigmalab
