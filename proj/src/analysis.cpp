#include "sigmalab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <unordered_map>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/kernels.hpp"
#include "sparse_solve.hpp"

namespace sigmalab {

namespace {

std::vector<char> inset_mask(const Mesh& mesh, double margin) {
  if (!(margin >= 0.0)) throw ConfigError("margin must be nonnegative");
  const auto dist = kernels::centroid_boundary_distances(mesh);
  std::vector<char> mask(dist.size());
  for (std::size_t t = 0; t < dist.size(); ++t) mask[t] = dist[t] >= margin ? 1 : 0;
  return mask;
}

std::size_t count_set(const std::vector<char>& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | static_cast<std::uint64_t>(std::max(a, b));
}

// neighbour[t][k]: triangle across edge (tri[k], tri[k+1]), or -1.
std::vector<std::array<long, 3>> triangle_neighbours(const Mesh& mesh) {
  std::unordered_map<std::uint64_t, std::pair<long, int>> first;
  first.reserve(mesh.triangle_count() * 2);
  std::vector<std::array<long, 3>> nb(mesh.triangle_count(), {-1, -1, -1});
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      const auto key = edge_key(tri[k], tri[(k + 1) % 3]);
      const auto [it, inserted] = first.emplace(key, std::make_pair(static_cast<long>(t), k));
      if (!inserted) {
        nb[t][k] = it->second.first;
        nb[static_cast<std::size_t>(it->second.first)][it->second.second] = static_cast<long>(t);
      }
    }
  }
  return nb;
}

}  // namespace

// ---- stream function -----------------------------------------------------------

StreamFunction stream_function(const ScalarField& u, const CoefficientField& sigma,
                               StreamOptions options) {
  const Mesh& mesh = u.mesh();
  if (mesh.loop_count() != 1 && !options.allow_multiply_connected) {
    throw ConfigError("stream function needs a simply connected domain (mesh has " +
                      std::to_string(mesh.loop_count()) + " boundary loops)");
  }
  const auto grads = kernels::triangle_gradients(mesh, u.values());
  const auto coeffs = kernels::centroid_coefficients(mesh, sigma);
  const Matrix2 j = Matrix2::rotation_j();

  std::vector<Vec2> target(grads.size());
  std::vector<double> flux_terms(grads.size());
  for (std::size_t t = 0; t < grads.size(); ++t) {
    target[t] = j * (coeffs[t] * grads[t]);
    flux_terms[t] = dot(target[t], target[t]) * mesh.area(t);
  }
  const double flux_norm2 = kernels::ordered_sum(flux_terms);
  const std::size_t nv = mesh.vertex_count();
  if (flux_norm2 == 0.0) return {ScalarField(u.mesh_ptr(), std::vector<double>(nv, 0.0)), 0.0};

  // Normal equations of min sum_T |T| |grad v - target_T|^2 with v(0) = 0.
  const auto identity = make_coefficient_field("identity");
  const auto local = kernels::local_stiffness(mesh, identity);
  std::vector<detail::Triplet> triplets;
  triplets.reserve(local.size() * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nv - 1));
  for (std::size_t t = 0; t < local.size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto basis = kernels::basis_gradients(mesh, t);
    for (int i = 0; i < 3; ++i) {
      if (tri[i] == 0) continue;
      const long row = tri[i] - 1;
      rhs[row] += mesh.area(t) * dot(target[t], basis[i]);
      for (int k = 0; k < 3; ++k) {
        if (tri[k] == 0) continue;
        triplets.emplace_back(row, tri[k] - 1, local[t][3 * i + k]);
      }
    }
  }
  const auto solved = detail::solve_sparse_lu(triplets, static_cast<Eigen::Index>(nv - 1), rhs);
  std::vector<double> values(nv, 0.0);
  for (std::size_t v = 1; v < nv; ++v) values[v] = solved.x[static_cast<Eigen::Index>(v - 1)];
  ScalarField v(u.mesh_ptr(), std::move(values));

  const auto vgrads = kernels::triangle_gradients(mesh, v.values());
  std::vector<double> misfit(grads.size());
  for (std::size_t t = 0; t < grads.size(); ++t) {
    const double dx = vgrads[t][0] - target[t][0];
    const double dy = vgrads[t][1] - target[t][1];
    misfit[t] = (dx * dx + dy * dy) * mesh.area(t);
  }
  return {std::move(v), std::sqrt(kernels::ordered_sum(misfit) / flux_norm2)};
}

ComplexDerivativeField complex_derivatives(const ScalarField& u, const ScalarField& v) {
  if (u.mesh_ptr() != v.mesh_ptr()) throw ConfigError("u and v live on different meshes");
  const auto gu = kernels::triangle_gradients(u.mesh(), u.values());
  const auto gv = kernels::triangle_gradients(v.mesh(), v.values());
  ComplexDerivativeField cd{u.mesh_ptr(), {}, {}};
  cd.fz.resize(gu.size());
  cd.fzbar.resize(gu.size());
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t t = 0; t < gu.size(); ++t) {
    const std::complex<double> fx(gu[t][0], gv[t][0]);
    const std::complex<double> fy(gu[t][1], gv[t][1]);
    cd.fz[t] = 0.5 * (fx - i * fy);
    cd.fzbar[t] = 0.5 * (fx + i * fy);
  }
  return cd;
}

double beltrami_residual(const ComplexDerivativeField& cd, const CoefficientField& sigma) {
  const Mesh& mesh = *cd.mesh;
  const auto coeffs = kernels::centroid_coefficients(mesh, sigma);
  std::vector<double> num(coeffs.size());
  std::vector<double> den(coeffs.size());
  for (std::size_t t = 0; t < coeffs.size(); ++t) {
    const auto d = dilatations(coeffs[t]);
    const auto r = cd.fzbar[t] - d.mu * cd.fz[t] - d.nu * std::conj(cd.fz[t]);
    num[t] = std::norm(r) * mesh.area(t);
    den[t] = std::norm(cd.fz[t]) * mesh.area(t);
  }
  const double fz_norm2 = kernels::ordered_sum(den);
  if (!(fz_norm2 > 0.0)) throw NumericalError("beltrami residual undefined: f_z vanishes identically");
  return std::sqrt(kernels::ordered_sum(num) / fz_norm2);
}

QuasiconformalDefect quasiconformal_defect(const ComplexDerivativeField& cd, double margin,
                                           double degeneracy_tolerance) {
  const auto mask = inset_mask(*cd.mesh, margin);
  QuasiconformalDefect out;
  out.min_jacobian_f = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (!mask[t]) continue;
    ++out.triangles_used;
    const double a = std::abs(cd.fz[t]);
    const double b = std::abs(cd.fzbar[t]);
    if (a == 0.0) {
      out.ratio_unbounded = true;
      out.sup_ratio = std::numeric_limits<double>::infinity();
    } else {
      out.sup_ratio = std::max(out.sup_ratio, b / a);
    }
    out.min_jacobian_f = std::min(out.min_jacobian_f, a * a - b * b);
  }
  if (out.triangles_used == 0) throw ConfigError("no triangle lies inside the margin-inset region");
  out.near_degenerate = out.min_jacobian_f < degeneracy_tolerance;
  return out;
}

// ---- mappings ----------------------------------------------------------------

std::vector<double> jacobian_field(const MappingField& map) {
  return kernels::triangle_jacobians(map.mesh(), map.u1.values(), map.u2.values());
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(a, b, c);
  return (v > 0.0) - (v < 0.0);
}

bool within_box(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x1, b.x1) <= p.x1 && p.x1 <= std::max(a.x1, b.x1) &&
         std::min(a.x2, b.x2) <= p.x2 && p.x2 <= std::max(a.x2, b.x2);
}

// Closed segments; touching counts as intersecting.
bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && within_box(p1, p2, q1)) return true;
  if (o2 == 0 && within_box(p1, p2, q2)) return true;
  if (o3 == 0 && within_box(q1, q2, p1)) return true;
  if (o4 == 0 && within_box(q1, q2, p2)) return true;
  return false;
}

struct ImageSegment {
  Point2 a;
  Point2 b;
  std::size_t loop;
  std::size_t pos;  // position within the loop
  std::size_t id;
};

}  // namespace

InjectivityResult injectivity_check(const MappingField& map) {
  const Mesh& mesh = map.mesh();
  InjectivityResult out;
  auto record = [&out](InjectivityViolation v) {
    ++out.violation_count;
    if (out.violations.size() < 100) out.violations.push_back(v);
  };

  std::vector<ImageSegment> segs;
  std::vector<std::size_t> loop_size;
  for (std::size_t l = 0; l < mesh.loop_count(); ++l) {
    const auto& loop = mesh.boundary()[l];
    loop_size.push_back(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      segs.push_back({map.at_vertex(loop[i]), map.at_vertex(loop[(i + 1) % loop.size()]), l, i,
                      segs.size()});
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> crossings;
  // Consecutive segments of one loop meet at their shared vertex; only a
  // fold-back (collinear reversal) or a collapsed segment is a defect there.
  for (const auto& s : segs) {
    const auto& next = segs[s.id + 1 < segs.size() && segs[s.id + 1].loop == s.loop
                                ? s.id + 1
                                : s.id + 1 - loop_size[s.loop]];
    const Point2 d1 = s.b - s.a;
    const Point2 d2 = next.b - next.a;
    const bool collapsed = s.a == s.b;
    const bool folds = orientation(s.a, s.b, next.b) == 0 && d1.x1 * d2.x1 + d1.x2 * d2.x2 < 0.0;
    if (collapsed || folds) crossings.emplace_back(std::min(s.id, next.id), std::max(s.id, next.id));
  }

  std::vector<std::size_t> order(segs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto xmin = [&](std::size_t i) { return std::min(segs[i].a.x1, segs[i].b.x1); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xmin(a) < xmin(b); });
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const auto& s = segs[order[oi]];
    const double s_xmax = std::max(s.a.x1, s.b.x1);
    const double s_ymin = std::min(s.a.x2, s.b.x2);
    const double s_ymax = std::max(s.a.x2, s.b.x2);
    for (std::size_t oj = oi + 1; oj < order.size() && xmin(order[oj]) <= s_xmax; ++oj) {
      const auto& q = segs[order[oj]];
      if (std::max(q.a.x2, q.b.x2) < s_ymin || std::min(q.a.x2, q.b.x2) > s_ymax) continue;
      if (s.loop == q.loop) {
        const std::size_t n = loop_size[s.loop];
        if ((s.pos + 1) % n == q.pos || (q.pos + 1) % n == s.pos) continue;
      }
      if (segments_intersect(s.a, s.b, q.a, q.b)) {
        crossings.emplace_back(std::min(s.id, q.id), std::max(s.id, q.id));
      }
    }
  }
  std::sort(crossings.begin(), crossings.end());
  crossings.erase(std::unique(crossings.begin(), crossings.end()), crossings.end());
  for (const auto& [a, b] : crossings) {
    record({InjectivityViolation::Kind::boundary_crossing, a, b});
  }

  const auto jac = jacobian_field(map);
  std::vector<double> signed_area(jac.size());
  for (std::size_t t = 0; t < jac.size(); ++t) signed_area[t] = jac[t] * mesh.area(t);
  const double total = kernels::ordered_sum(signed_area);
  const int dominant = (total > 0.0) - (total < 0.0);
  for (std::size_t t = 0; t < jac.size(); ++t) {
    const int s = (jac[t] > 0.0) - (jac[t] < 0.0);
    if (s == 0 || s != dominant) record({InjectivityViolation::Kind::orientation, t, 0});
  }
  out.injective = out.violation_count == 0;
  return out;
}

// ---- unimodality ------------------------------------------------------------------

UnimodalityVerdict unimodality_check(std::span<const double> values, double tie_tolerance) {
  const std::size_t n = values.size();
  if (n < 3) throw ConfigError("unimodality check needs at least three values");
  std::vector<std::size_t> pos;
  std::vector<int> sign;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[(i + 1) % n] - values[i];
    if (!std::isfinite(d)) throw ConfigError("unimodality check on non-finite values");
    if (std::abs(d) <= tie_tolerance) continue;
    pos.push_back(i);
    sign.push_back(d > 0.0 ? 1 : -1);
  }
  if (pos.empty()) throw ConfigError("unimodality is undefined for a constant sequence");

  UnimodalityVerdict verdict;
  const std::size_t m = pos.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (sign[k] != sign[(k + 1) % m]) ++verdict.direction_changes;
  }
  if (verdict.direction_changes != 2) return verdict;

  std::size_t rise = 0;
  std::size_t fall = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const int prev = sign[(k + m - 1) % m];
    if (prev < 0 && sign[k] > 0) rise = pos[k];
    if (prev > 0 && sign[k] < 0) fall = pos[k];
  }
  verdict.unimodal = true;
  verdict.rise_arc = {rise, fall};
  verdict.fall_arc = {fall, rise};
  return verdict;
}

// ---- pullback subdomain -------------------------------------------------------------

namespace {

std::vector<std::size_t> edge_component(const std::vector<std::array<long, 3>>& nb,
                                        const std::vector<char>& selected, std::size_t seed) {
  std::vector<char> seen(selected.size(), 0);
  std::vector<std::size_t> comp;
  std::queue<std::size_t> queue;
  queue.push(seed);
  seen[seed] = 1;
  while (!queue.empty()) {
    const std::size_t t = queue.front();
    queue.pop();
    comp.push_back(t);
    for (long n : nb[t]) {
      if (n < 0) continue;
      const auto u = static_cast<std::size_t>(n);
      if (selected[u] && !seen[u]) {
        seen[u] = 1;
        queue.push(u);
      }
    }
  }
  std::sort(comp.begin(), comp.end());
  return comp;
}

bool polygon_contains(const std::vector<LevelCrossing>& poly, Point2 p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i].position;
    const Point2 b = poly[j].position;
    if ((a.x2 > p.x2) != (b.x2 > p.x2) &&
        p.x1 < (b.x1 - a.x1) * (p.x2 - a.x2) / (b.x2 - a.x2) + a.x1) {
      inside = !inside;
    }
  }
  return inside;
}

double polygon_area(const std::vector<LevelCrossing>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i].position;
    const Point2 b = poly[(i + 1) % poly.size()].position;
    twice += a.x1 * b.x2 - b.x1 * a.x2;
  }
  return 0.5 * twice;
}

}  // namespace

PullbackSubdomain pullback_subdomain(const MappingField& map, Point2 z0, double r) {
  if (!(r > 0.0)) throw ConfigError("pullback radius must be positive");
  const Mesh& mesh = map.mesh();
  const PointLocator locator(map.mesh_ptr());
  const auto loc = locator.locate(z0);
  if (!loc) throw ConfigError("pullback centre " + to_string(z0) + " is outside the domain");
  const Point2 w0{*map.u1.evaluate(locator, z0), *map.u2.evaluate(locator, z0)};

  for (const auto& loop : mesh.boundary()) {
    for (int v : loop) {
      if (!(distance(map.at_vertex(static_cast<std::size_t>(v)), w0) > r)) {
        throw ConfigError("disk of radius " + format_double(r) + " around U(z0) is not compactly "
                          "contained in the image of the domain");
      }
    }
  }

  std::vector<char> inside(mesh.vertex_count());
  for (std::size_t v = 0; v < inside.size(); ++v) inside[v] = distance(map.at_vertex(v), w0) <= r;
  std::vector<char> selected(mesh.triangle_count(), 0);
  for (std::size_t t = 0; t < selected.size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    selected[t] = inside[tri[0]] && inside[tri[1]] && inside[tri[2]];
  }

  auto nearest_selected = [&]() -> std::optional<std::size_t> {
    if (selected[loc->triangle]) return loc->triangle;
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < selected.size(); ++t) {
      if (!selected[t]) continue;
      const double d = distance(mesh.centroid(t), z0);
      if (d < best_d) {
        best_d = d;
        best = t;
      }
    }
    return best;
  };

  const auto nb = triangle_neighbours(mesh);
  std::vector<std::size_t> comp;
  // Drop triangles around pinch vertices (two boundary fans meeting at one
  // vertex) until the component boundary is a set of simple loops.
  for (;;) {
    const auto seed = nearest_selected();
    if (!seed) throw ConfigError("pullback subdomain is empty; increase r or refine the mesh");
    comp = edge_component(nb, selected, *seed);
    std::vector<char> in_comp(selected.size(), 0);
    for (auto t : comp) in_comp[t] = 1;
    std::unordered_map<int, int> out_degree;
    for (auto t : comp) {
      for (int k = 0; k < 3; ++k) {
        const long n = nb[t][k];
        if (n < 0 || !in_comp[static_cast<std::size_t>(n)]) ++out_degree[mesh.triangles()[t][k]];
      }
    }
    std::vector<char> pinch(mesh.vertex_count(), 0);
    bool any = false;
    for (const auto& [v, d] : out_degree) {
      if (d > 1) {
        pinch[static_cast<std::size_t>(v)] = 1;
        any = true;
      }
    }
    if (!any) break;
    std::fill(selected.begin(), selected.end(), 0);
    for (auto t : comp) {
      const auto& tri = mesh.triangles()[t];
      selected[t] = !(pinch[tri[0]] || pinch[tri[1]] || pinch[tri[2]]);
    }
  }

  PullbackSubdomain out;
  out.z0 = z0;
  out.w0 = w0;
  out.r = r;

  std::vector<int> local(mesh.vertex_count(), -1);
  std::vector<Point2> vertices;
  std::vector<Triangle> triangles;
  for (auto t : comp) {
    Triangle tri{};
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangles()[t][k];
      if (local[v] < 0) {
        local[v] = static_cast<int>(vertices.size());
        vertices.push_back(mesh.vertex(v));
        out.parent_vertex.push_back(v);
      }
      tri[k] = local[v];
    }
    triangles.push_back(tri);
  }
  std::vector<char> in_comp(mesh.triangle_count(), 0);
  for (auto t : comp) in_comp[t] = 1;
  std::unordered_map<int, int> next;
  std::vector<int> starts;
  for (auto t : comp) {
    const auto& tri = mesh.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      const long n = nb[t][k];
      if (n >= 0 && in_comp[static_cast<std::size_t>(n)]) continue;
      next[local[tri[k]]] = local[tri[(k + 1) % 3]];
      starts.push_back(local[tri[k]]);
    }
  }
  std::vector<std::vector<int>> loops;
  std::unordered_map<int, char> used;
  for (int s : starts) {
    if (used[s]) continue;
    std::vector<int> loop;
    int v = s;
    do {
      used[v] = 1;
      loop.push_back(v);
      v = next.at(v);
    } while (v != s);
    loops.push_back(std::move(loop));
  }
  auto loop_area = [&](const std::vector<int>& loop) {
    double twice = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Point2 a = vertices[loop[i]];
      const Point2 b = vertices[loop[(i + 1) % loop.size()]];
      twice += a.x1 * b.x2 - b.x1 * a.x2;
    }
    return twice;
  };
  std::stable_sort(loops.begin(), loops.end(),
                   [&](const auto& a, const auto& b) { return loop_area(a) > loop_area(b); });
  out.mesh = std::make_shared<const Mesh>(std::move(vertices), std::move(triangles), std::move(loops),
                                          mesh.h());

  // Level curve |U - w0| = r through the parent triangles, inside on the left.
  auto crossing = [&](int in_v, int out_v) {
    const Point2 ui = map.at_vertex(static_cast<std::size_t>(in_v));
    const Point2 uo = map.at_vertex(static_cast<std::size_t>(out_v));
    const Point2 d = uo - ui;
    const Point2 e = ui - w0;
    const double a = d.x1 * d.x1 + d.x2 * d.x2;
    const double b = e.x1 * d.x1 + e.x2 * d.x2;
    const double c = e.x1 * e.x1 + e.x2 * e.x2 - r * r;
    const double t = std::clamp((-b + std::sqrt(std::max(0.0, b * b - a * c))) / a, 0.0, 1.0);
    const Point2 pi = mesh.vertex(in_v);
    const Point2 po = mesh.vertex(out_v);
    return LevelCrossing{in_v, out_v, t, pi + t * (po - pi), ui + t * d};
  };
  // exit_edge[key] = triangle in which the edge runs inside -> outside.
  std::unordered_map<std::uint64_t, std::size_t> exit_triangle;
  std::vector<std::size_t> mixed;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const int n_in = inside[tri[0]] + inside[tri[1]] + inside[tri[2]];
    if (n_in == 0 || n_in == 3) continue;
    mixed.push_back(t);
    for (int k = 0; k < 3; ++k) {
      if (inside[tri[k]] && !inside[tri[(k + 1) % 3]]) {
        exit_triangle[edge_key(tri[k], tri[(k + 1) % 3])] = t;
      }
    }
  }
  std::vector<char> visited(mesh.triangle_count(), 0);
  std::vector<std::vector<LevelCrossing>> contours;
  for (std::size_t t0 : mixed) {
    if (visited[t0]) continue;
    std::vector<LevelCrossing> contour;
    std::size_t t = t0;
    while (!visited[t]) {
      visited[t] = 1;
      const auto& tri = mesh.triangles()[t];
      int exit_k = -1;
      int entry_k = -1;
      for (int k = 0; k < 3; ++k) {
        const bool a = inside[tri[k]];
        const bool b = inside[tri[(k + 1) % 3]];
        if (a && !b) exit_k = k;
        if (!a && b) entry_k = k;
      }
      contour.push_back(crossing(tri[exit_k], tri[(exit_k + 1) % 3]));
      const int p = tri[entry_k];
      const int q = tri[(entry_k + 1) % 3];
      const auto it = exit_triangle.find(edge_key(p, q));
      if (it == exit_triangle.end()) break;
      t = it->second;
    }
    if (contour.size() >= 3) contours.push_back(std::move(contour));
  }
  const std::vector<LevelCrossing>* chosen = nullptr;
  for (const auto& c : contours) {
    const double area = polygon_area(c);
    if (area > 0.0 && polygon_contains(c, z0) && (!chosen || area < polygon_area(*chosen))) {
      chosen = &c;
    }
  }
  if (!chosen) throw NumericalError("no level curve of |U - w0| = r encloses z0");
  out.level_trace = *chosen;
  return out;
}

// ---- Lewy pipeline --------------------------------------------------------------------

std::vector<Vec2> half_circle_directions(int count) {
  if (count < 1) throw ConfigError("direction count must be positive");
  std::vector<Vec2> out;
  for (int k = 0; k < count; ++k) {
    const double angle = std::numbers::pi * k / count;
    out.push_back({std::cos(angle), std::sin(angle)});
  }
  return out;
}

namespace {

double directional_minimum(const std::vector<Vec2>& g1, const std::vector<Vec2>& g2,
                           const std::vector<char>& mask, Vec2 xi) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mask.size(); ++t) {
    if (!mask[t]) continue;
    best = std::min(best, std::hypot(xi[0] * g1[t][0] + xi[1] * g2[t][0],
                                     xi[0] * g1[t][1] + xi[1] * g2[t][1]));
  }
  return best;
}

}  // namespace

double directional_gradient_minimum(const MappingField& map, Vec2 xi, double margin) {
  const auto mask = inset_mask(map.mesh(), margin);
  if (count_set(mask) == 0) throw ConfigError("no triangle lies inside the margin-inset region");
  return directional_minimum(kernels::triangle_gradients(map.mesh(), map.u1.values()),
                             kernels::triangle_gradients(map.mesh(), map.u2.values()), mask, xi);
}

std::vector<Point2> default_probe_points(const MeshPtr& mesh, double margin, int count) {
  if (count < 1) return {};
  Point2 lo = mesh->vertices().front();
  Point2 hi = lo;
  for (const auto& v : mesh->vertices()) {
    lo = {std::min(lo.x1, v.x1), std::min(lo.x2, v.x2)};
    hi = {std::max(hi.x1, v.x1), std::max(hi.x2, v.x2)};
  }
  const PointLocator locator(mesh);
  std::vector<Point2> candidates;
  constexpr int kLattice = 8;
  for (int j = 1; j < kLattice; ++j) {
    for (int i = 1; i < kLattice; ++i) {
      const Point2 p{lo.x1 + (hi.x1 - lo.x1) * i / kLattice, lo.x2 + (hi.x2 - lo.x2) * j / kLattice};
      if (locator.locate(p) && distance_to_boundary(*mesh, p) >= 2.0 * margin) {
        candidates.push_back(p);
      }
    }
  }
  if (static_cast<int>(candidates.size()) <= count) return candidates;
  std::vector<Point2> out;
  for (int k = 0; k < count; ++k) {
    const auto idx = count == 1 ? candidates.size() / 2
                                : static_cast<std::size_t>(k) * (candidates.size() - 1) /
                                      static_cast<std::size_t>(count - 1);
    out.push_back(candidates[idx]);
  }
  return out;
}

LewyReport lewy_verify(const MappingField& map, const CoefficientField& sigma,
                       const LewyOptions& options) {
  const Mesh& mesh = map.mesh();
  const auto injectivity = injectivity_check(map);
  if (!injectivity.injective) {
    throw HypothesisError("mapping is not injective (" + std::to_string(injectivity.violation_count) +
                          " violations); the injectivity hypothesis fails");
  }
  std::vector<Point2> centroids(mesh.triangle_count());
  for (std::size_t t = 0; t < centroids.size(); ++t) centroids[t] = mesh.centroid(t);
  require_elliptic(ellipticity_report(sigma, centroids), sigma.descriptor());

  LewyReport report;
  report.injective = true;
  report.margin = options.margin;
  report.directions_tested = options.directions;
  const auto mask = inset_mask(mesh, options.margin);
  report.inset_triangles = count_set(mask);
  if (report.inset_triangles == 0) throw ConfigError("no triangle lies inside the margin-inset region");

  const auto jac = jacobian_field(map);
  report.min_abs_det = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < jac.size(); ++t) {
    if (mask[t]) report.min_abs_det = std::min(report.min_abs_det, std::abs(jac[t]));
  }
  const auto g1 = kernels::triangle_gradients(mesh, map.u1.values());
  const auto g2 = kernels::triangle_gradients(mesh, map.u2.values());
  const auto directions = half_circle_directions(options.directions);
  for (const Vec2& xi : directions) report.min_abs_grad.push_back(directional_minimum(g1, g2, mask, xi));

  const auto probes = options.probes.empty()
                          ? default_probe_points(map.mesh_ptr(), options.margin, options.probe_count)
                          : options.probes;
  const PointLocator locator(map.mesh_ptr());
  report.all_unimodal = true;
  for (const Point2& z0 : probes) {
    const auto a = map.u1.evaluate(locator, z0);
    if (!a) throw ConfigError("probe point " + to_string(z0) + " is outside the domain");
    const Point2 w0{*a, *map.u2.evaluate(locator, z0)};
    double reach = std::numeric_limits<double>::infinity();
    for (const auto& loop : mesh.boundary()) {
      for (int v : loop) reach = std::min(reach, distance(map.at_vertex(static_cast<std::size_t>(v)), w0));
    }
    const auto pull = pullback_subdomain(map, z0, options.probe_radius_fraction * reach);
    ProbeResult probe{z0, pull.w0, pull.r, pull.mesh->triangle_count(), {}};
    for (const Vec2& xi : directions) {
      std::vector<double> trace;
      trace.reserve(pull.level_trace.size());
      for (const auto& c : pull.level_trace) trace.push_back(xi[0] * c.image.x1 + xi[1] * c.image.x2);
      const bool ok = unimodality_check(trace, options.tie_tolerance).unimodal;
      probe.unimodal.push_back(ok ? 1 : 0);
      report.all_unimodal = report.all_unimodal && ok;
    }
    report.probes.push_back(std::move(probe));
  }

  report.passed = report.min_abs_det > 0.0 &&
                  std::all_of(report.min_abs_grad.begin(), report.min_abs_grad.end(),
                              [](double g) { return g > 0.0; });
  return report;
}

// ---- critical points --------------------------------------------------------------------

std::vector<CriticalCandidate> critical_point_candidates(const ScalarField& u, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("rel_tol must lie in (0, 1)");
  const auto grads = kernels::triangle_gradients(u.mesh(), u.values());
  std::vector<double> norms(grads.size());
  for (std::size_t t = 0; t < grads.size(); ++t) norms[t] = norm(grads[t]);
  std::vector<double> sorted = norms;
  const auto mid = sorted.begin() + static_cast<long>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double threshold = rel_tol * *mid;
  std::vector<CriticalCandidate> out;
  for (std::size_t t = 0; t < norms.size(); ++t) {
    if (norms[t] < threshold) out.push_back({t, norms[t]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.grad_norm < b.grad_norm; });
  return out;
}

}  // namespace sigmalab
