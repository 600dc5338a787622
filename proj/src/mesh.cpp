#include "sigmalab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace sigmalab {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

void check_vertex_budget(std::size_t estimate, const MeshLimits& limits) {
  if (estimate > limits.max_vertices) {
    throw ResourceLimitError("mesh would have " + std::to_string(estimate) +
                             " vertices, above the cap of " +
                             std::to_string(limits.max_vertices));
  }
}

// Ring of n vertices (n even) at radius r. The second half is the exact
// negation of the first half so that meshes are centrally symmetric in
// floating point.
std::vector<int> add_ring(std::vector<Point2>& vertices, Point2 center, double r, int n) {
  std::vector<int> ring(static_cast<std::size_t>(n));
  std::vector<Point2> offsets(static_cast<std::size_t>(n));
  const int half = n / 2;
  for (int j = 0; j < n; ++j) {
    if (j < half) {
      const double angle = 2.0 * std::numbers::pi * j / n;
      offsets[j] = {r * std::cos(angle), r * std::sin(angle)};
    } else {
      offsets[j] = -offsets[j - half];
    }
    ring[j] = static_cast<int>(vertices.size());
    vertices.push_back(center + offsets[j]);
  }
  return ring;
}

// Fills the strip between two concentric rings whose vertex j sits at the
// angle j/n of a full turn. Decisions compare rational angles exactly.
void stitch_rings(const std::vector<int>& inner, const std::vector<int>& outer,
                  std::vector<Triangle>& triangles) {
  const long ni = static_cast<long>(inner.size());
  const long no = static_cast<long>(outer.size());
  long a = 0;
  long b = 0;
  while (a < ni || b < no) {
    const bool advance_outer = a == ni || (b < no && (b + 1) * ni <= (a + 1) * no);
    if (advance_outer) {
      triangles.push_back({inner[a % ni], outer[b % no], outer[(b + 1) % no]});
      ++b;
    } else {
      triangles.push_back({inner[a % ni], outer[b % no], inner[(a + 1) % ni]});
      ++a;
    }
  }
}

int ring_size(double radius, double h) {
  const int sixths = static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / (6.0 * h)));
  return 6 * std::max(1, sixths);
}

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
           std::vector<std::vector<int>> boundary, double h, DomainShape shape,
           MeshLimits limits)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_(std::move(boundary)),
      on_boundary_(vertices_.size(), 0),
      h_(h),
      shape_(shape) {
  validate(limits);
  for (const auto& loop : boundary_) {
    for (int v : loop) on_boundary_[static_cast<std::size_t>(v)] = 1;
  }
}

void Mesh::validate(const MeshLimits& limits) const {
  check_vertex_budget(vertices_.size(), limits);
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw ConfigError("mesh size h must be positive");
  if (triangles_.empty()) throw ConfigError("mesh has no triangles");
  for (const auto& p : vertices_) {
    if (!p.finite()) throw ConfigError("mesh vertex with non-finite coordinate");
  }

  const int nv = static_cast<int>(vertices_.size());
  const double min_area = 1e-14 * h_ * h_;
  // Directed edge -> number of occurrences; undirected multiplicity checked below.
  std::unordered_map<std::uint64_t, int> edge_count;
  std::unordered_map<std::uint64_t, int> directed;  // value: +1 if (lo,hi) direction seen
  edge_count.reserve(triangles_.size() * 2);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) {
        throw ConfigError("triangle " + std::to_string(t) + " has out-of-range vertex index");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw ConfigError("triangle " + std::to_string(t) + " repeats a vertex");
    }
    if (!(area(t) > min_area)) {
      throw ConfigError("triangle " + std::to_string(t) + " is degenerate or clockwise");
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      const auto key = edge_key(a, b);
      const int n = ++edge_count[key];
      if (n > 2) throw ConfigError("non-conforming mesh: edge shared by more than two triangles");
      const int dir = a < b ? 1 : 2;
      auto& seen = directed[key];
      if (seen & dir) throw ConfigError("inconsistently oriented triangles share an edge");
      seen |= dir;
    }
  }

  // Boundary loops must be exactly the directed edges used by one triangle.
  std::vector<unsigned char> in_loop(vertices_.size(), 0);
  std::size_t loop_edges = 0;
  double loop_area = 0.0;
  for (std::size_t l = 0; l < boundary_.size(); ++l) {
    const auto& loop = boundary_[l];
    if (loop.size() < 3) throw ConfigError("boundary loop with fewer than three vertices");
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % loop.size()];
      if (a < 0 || a >= nv) throw ConfigError("boundary loop vertex index out of range");
      if (in_loop[static_cast<std::size_t>(a)]++) {
        throw ConfigError("boundary vertex " + std::to_string(a) + " appears twice");
      }
      const auto it = edge_count.find(edge_key(a, b));
      if (it == edge_count.end() || it->second != 1) {
        throw ConfigError("boundary loop edge is not a boundary edge of the triangulation");
      }
      const int dir = a < b ? 1 : 2;
      if (directed[edge_key(a, b)] != dir) {
        throw ConfigError("boundary loop orientation disagrees with its triangles");
      }
      ++loop_edges;
    }
    loop_area += loop_signed_area(l);
  }
  std::size_t boundary_edges = 0;
  for (const auto& [key, n] : edge_count) boundary_edges += n == 1 ? 1 : 0;
  if (boundary_edges != loop_edges) {
    throw ConfigError("boundary loops do not cover every boundary edge");
  }

  // Folded or overlapping triangles make the covered area exceed the enclosed area.
  const double covered = total_area();
  if (std::abs(covered - loop_area) > 1e-9 * std::max(1.0, covered)) {
    throw ConfigError("triangles overlap: covered area differs from the area inside the loops");
  }
}

double Mesh::area(std::size_t t) const {
  const auto& tri = triangles_[t];
  return 0.5 * cross(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

Point2 Mesh::centroid(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point2 a = vertices_[tri[0]];
  const Point2 b = vertices_[tri[1]];
  const Point2 c = vertices_[tri[2]];
  return {(a.x1 + b.x1 + c.x1) / 3.0, (a.x2 + b.x2 + c.x2) / 3.0};
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += area(t);
  return sum;
}

std::vector<Edge> Mesh::edges() const {
  std::vector<Edge> out;
  out.reserve(triangles_.size() * 3);
  for (const auto& tri : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      out.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

long Mesh::euler_characteristic() const {
  return static_cast<long>(vertices_.size()) - static_cast<long>(edges().size()) +
         static_cast<long>(triangles_.size());
}

double Mesh::loop_signed_area(std::size_t loop) const {
  const auto& ids = boundary_.at(loop);
  double twice = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Point2 a = vertices_[ids[i]];
    const Point2 b = vertices_[ids[(i + 1) % ids.size()]];
    twice += a.x1 * b.x2 - b.x1 * a.x2;
  }
  return 0.5 * twice;
}

Mesh generate_disk(Point2 center, double radius, double h, MeshLimits limits) {
  if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");
  if (!(h > 0.0)) throw ConfigError("mesh size h must be positive");
  if (!(h < radius)) throw ConfigError("mesh size h must be smaller than the disk radius");
  const double rings_real = std::ceil(radius / h);
  check_vertex_budget(static_cast<std::size_t>(std::min(1.0 + 3.0 * rings_real * (rings_real + 1.0), 1e18)),
                      limits);
  const int rings = static_cast<int>(rings_real);
  const double dr = radius / rings;

  std::vector<Point2> vertices{center};
  std::vector<Triangle> triangles;
  std::vector<int> previous = add_ring(vertices, center, dr, 6);
  for (int j = 0; j < 6; ++j) triangles.push_back({0, previous[j], previous[(j + 1) % 6]});
  for (int k = 2; k <= rings; ++k) {
    const double r = k == rings ? radius : k * dr;
    auto ring = add_ring(vertices, center, r, 6 * k);
    stitch_rings(previous, ring, triangles);
    previous = std::move(ring);
  }
  DomainShape shape;
  shape.kind = DomainShape::Kind::disk;
  shape.center = center;
  shape.r_out = radius;
  return Mesh(std::move(vertices), std::move(triangles), {previous}, dr, shape, limits);
}

Mesh generate_annulus(Point2 center, double r_in, double r_out, double h, MeshLimits limits) {
  if (!(r_in > 0.0) || !(r_out > r_in)) {
    throw ConfigError("annulus radii must satisfy 0 < r_in < r_out");
  }
  if (!(h > 0.0) || !(h < r_out - r_in)) {
    throw ConfigError("mesh size h must satisfy 0 < h < r_out - r_in");
  }
  const double layers_real = std::ceil((r_out - r_in) / h);
  const double estimate = (layers_real + 1.0) * (2.0 * std::numbers::pi * r_out / h + 6.0);
  check_vertex_budget(static_cast<std::size_t>(std::min(estimate, 1e18)), limits);
  const int layers = static_cast<int>(layers_real);
  const double dr = (r_out - r_in) / layers;

  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;
  std::vector<int> innermost = add_ring(vertices, center, r_in, ring_size(r_in, h));
  std::vector<int> previous = innermost;
  for (int k = 1; k <= layers; ++k) {
    const double r = k == layers ? r_out : r_in + k * dr;
    auto ring = add_ring(vertices, center, r, ring_size(r, h));
    stitch_rings(previous, ring, triangles);
    previous = std::move(ring);
  }
  std::reverse(innermost.begin(), innermost.end());
  DomainShape shape;
  shape.kind = DomainShape::Kind::annulus;
  shape.center = center;
  shape.r_in = r_in;
  shape.r_out = r_out;
  return Mesh(std::move(vertices), std::move(triangles), {previous, innermost}, dr, shape,
              limits);
}

Mesh generate_rectangle(Point2 corner, double width, double height, double h,
                        MeshLimits limits) {
  if (!(width > 0.0) || !(height > 0.0)) throw ConfigError("rectangle sides must be positive");
  if (!(h > 0.0) || !(h < std::min(width, height))) {
    throw ConfigError("mesh size h must satisfy 0 < h < min(width, height)");
  }
  const double nx_real = std::ceil(width / h);
  const double ny_real = std::ceil(height / h);
  check_vertex_budget(static_cast<std::size_t>(std::min((nx_real + 1) * (ny_real + 1), 1e18)),
                      limits);
  const int nx = static_cast<int>(nx_real);
  const int ny = static_cast<int>(ny_real);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.push_back({i == nx ? corner.x1 + width : corner.x1 + width * i / nx,
                          j == ny ? corner.x2 + height : corner.x2 + height * j / ny});
    }
  }
  std::vector<Triangle> triangles;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  std::vector<int> loop;
  for (int i = 0; i < nx; ++i) loop.push_back(id(i, 0));
  for (int j = 0; j < ny; ++j) loop.push_back(id(nx, j));
  for (int i = nx; i > 0; --i) loop.push_back(id(i, ny));
  for (int j = ny; j > 0; --j) loop.push_back(id(0, j));

  DomainShape shape;
  shape.kind = DomainShape::Kind::rectangle;
  shape.corner = corner;
  shape.width = width;
  shape.height = height;
  return Mesh(std::move(vertices), std::move(triangles), {loop},
              std::max(width / nx, height / ny), shape, limits);
}

Mesh refine(const Mesh& mesh, MeshLimits limits) {
  const auto edge_total = mesh.edges().size();
  check_vertex_budget(mesh.vertex_count() + edge_total, limits);

  std::vector<Point2> vertices = mesh.vertices();
  vertices.reserve(mesh.vertex_count() + edge_total);
  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(edge_total);

  const DomainShape& shape = mesh.shape();
  auto project = [&shape](Point2 m) {
    if (shape.kind != DomainShape::Kind::disk && shape.kind != DomainShape::Kind::annulus) {
      return m;
    }
    const Point2 offset = m - shape.center;
    const double r = norm(offset);
    double target = shape.r_out;
    if (shape.kind == DomainShape::Kind::annulus &&
        std::abs(r - shape.r_in) < std::abs(r - shape.r_out)) {
      target = shape.r_in;
    }
    return shape.center + (target / r) * offset;
  };

  auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    const auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Point2 pa = mesh.vertex(a);
    const Point2 pb = mesh.vertex(b);
    Point2 m{(pa.x1 + pb.x1) / 2.0, (pa.x2 + pb.x2) / 2.0};
    if (mesh.on_boundary(a) && mesh.on_boundary(b)) m = project(m);
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(m);
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<Triangle> triangles;
  triangles.reserve(mesh.triangle_count() * 4);
  for (const auto& tri : mesh.triangles()) {
    const int a = tri[0];
    const int b = tri[1];
    const int c = tri[2];
    const int ab = mid(a, b);
    const int bc = mid(b, c);
    const int ca = mid(c, a);
    triangles.push_back({a, ab, ca});
    triangles.push_back({ab, b, bc});
    triangles.push_back({ca, bc, c});
    triangles.push_back({ab, bc, ca});
  }

  std::vector<std::vector<int>> boundary;
  for (const auto& loop : mesh.boundary()) {
    std::vector<int> refined;
    refined.reserve(loop.size() * 2);
    for (std::size_t i = 0; i < loop.size(); ++i) {
      refined.push_back(loop[i]);
      refined.push_back(midpoint.at(edge_key(loop[i], loop[(i + 1) % loop.size()])));
    }
    boundary.push_back(std::move(refined));
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(boundary), mesh.h() / 2.0,
              shape, limits);
}

std::vector<BoundaryVertex> boundary_trace(const Mesh& mesh, int loop_index) {
  if (loop_index < 0 || static_cast<std::size_t>(loop_index) >= mesh.loop_count()) {
    throw ConfigError("boundary loop index " + std::to_string(loop_index) + " out of range (mesh has " +
                      std::to_string(mesh.loop_count()) + " loops)");
  }
  std::vector<BoundaryVertex> out;
  for (int v : mesh.boundary()[static_cast<std::size_t>(loop_index)]) {
    out.push_back({v, mesh.vertex(v)});
  }
  return out;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = ab.x1 * ab.x1 + ab.x2 * ab.x2;
  double t = len2 > 0.0 ? ((p.x1 - a.x1) * ab.x1 + (p.x2 - a.x2) * ab.x2) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double distance_to_boundary(const Mesh& mesh, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& loop : mesh.boundary()) {
    for (std::size_t i = 0; i < loop.size(); ++i) {
      best = std::min(best, point_segment_distance(p, mesh.vertex(loop[i]),
                                                   mesh.vertex(loop[(i + 1) % loop.size()])));
    }
  }
  return best;
}

std::array<double, 3> barycentric(Point2 p, Point2 a, Point2 b, Point2 c) {
  const double twice = cross(a, b, c);
  const double la = cross(p, b, c) / twice;
  const double lb = cross(a, p, c) / twice;
  return {la, lb, 1.0 - la - lb};
}

PointLocator::PointLocator(MeshPtr mesh) : mesh_(std::move(mesh)) {
  const auto& verts = mesh_->vertices();
  lo_ = hi_ = verts.front();
  for (const auto& v : verts) {
    lo_ = {std::min(lo_.x1, v.x1), std::min(lo_.x2, v.x2)};
    hi_ = {std::max(hi_.x1, v.x1), std::max(hi_.x2, v.x2)};
  }
  const double cell = std::max(mesh_->h(), 1e-12);
  nx_ = std::clamp<std::size_t>(static_cast<std::size_t>((hi_.x1 - lo_.x1) / cell) + 1, 1, 4096);
  ny_ = std::clamp<std::size_t>(static_cast<std::size_t>((hi_.x2 - lo_.x2) / cell) + 1, 1, 4096);
  buckets_.assign(nx_ * ny_, {});
  const double span_x = hi_.x1 - lo_.x1;
  const double span_y = hi_.x2 - lo_.x2;
  for (std::size_t t = 0; t < mesh_->triangle_count(); ++t) {
    const auto& tri = mesh_->triangles()[t];
    double x0 = verts[tri[0]].x1, x1 = x0, y0 = verts[tri[0]].x2, y1 = y0;
    for (int k = 1; k < 3; ++k) {
      x0 = std::min(x0, verts[tri[k]].x1);
      x1 = std::max(x1, verts[tri[k]].x1);
      y0 = std::min(y0, verts[tri[k]].x2);
      y1 = std::max(y1, verts[tri[k]].x2);
    }
    const std::size_t j0 = cell_of(y0, lo_.x2, span_y, ny_);
    const std::size_t j1 = cell_of(y1, lo_.x2, span_y, ny_);
    const std::size_t i0 = cell_of(x0, lo_.x1, span_x, nx_);
    const std::size_t i1 = cell_of(x1, lo_.x1, span_x, nx_);
    for (std::size_t j = j0; j <= j1; ++j) {
      for (std::size_t i = i0; i <= i1; ++i) {
        buckets_[j * nx_ + i].push_back(t);
      }
    }
  }
}

std::size_t PointLocator::cell_of(double coord, double lo, double span, std::size_t n) {
  if (span <= 0.0) return 0;
  const double s = (coord - lo) / span * static_cast<double>(n);
  if (!(s > 0.0)) return 0;
  return std::min(n - 1, static_cast<std::size_t>(s));
}

std::optional<PointLocator::Location> PointLocator::locate(Point2 p) const {
  constexpr double tol = 1e-12;
  if (p.x1 < lo_.x1 - tol || p.x1 > hi_.x1 + tol || p.x2 < lo_.x2 - tol || p.x2 > hi_.x2 + tol) {
    return std::nullopt;
  }
  const auto& bucket = buckets_[cell_of(p.x2, lo_.x2, hi_.x2 - lo_.x2, ny_) * nx_ +
                                cell_of(p.x1, lo_.x1, hi_.x1 - lo_.x1, nx_)];
  for (std::size_t t : bucket) {
    const auto& tri = mesh_->triangles()[t];
    const auto bary = barycentric(p, mesh_->vertex(tri[0]), mesh_->vertex(tri[1]),
                                  mesh_->vertex(tri[2]));
    if (bary[0] >= -tol && bary[1] >= -tol && bary[2] >= -tol) return Location{t, bary};
  }
  return std::nullopt;
}

}  // namespace sigmalab
