#include "sigmalab/kernels.hpp"

#include <omp.h>

#include "parallel_for.hpp"

namespace sigmalab::kernels {

namespace {

LocalMatrix element_matrix(const Mesh& mesh, std::size_t t, const Matrix2& s) {
  const auto grads = basis_gradients(mesh, t);
  const double area = mesh.area(t);
  LocalMatrix k{};
  for (int j = 0; j < 3; ++j) {
    const Vec2 flux = s * grads[j];
    for (int i = 0; i < 3; ++i) k[3 * i + j] = area * dot(flux, grads[i]);
  }
  return k;
}

Vec2 element_gradient(const Mesh& mesh, std::size_t t, std::span<const double> values) {
  const auto grads = basis_gradients(mesh, t);
  const auto& tri = mesh.triangles()[t];
  // Differences against vertex 0 so constants have exactly zero gradient.
  const double d1 = values[tri[1]] - values[tri[0]];
  const double d2 = values[tri[2]] - values[tri[0]];
  return {d1 * grads[1][0] + d2 * grads[2][0], d1 * grads[1][1] + d2 * grads[2][1]};
}

double element_jacobian(const Mesh& mesh, std::size_t t, std::span<const double> u1,
                        std::span<const double> u2) {
  const Vec2 g1 = element_gradient(mesh, t, u1);
  const Vec2 g2 = element_gradient(mesh, t, u2);
  return g1[0] * g2[1] - g1[1] * g2[0];
}

void check_size(const Mesh& mesh, std::span<const double> values) {
  if (values.size() != mesh.vertex_count()) {
    throw ConfigError("nodal value count does not match the mesh vertex count");
  }
}

}  // namespace

std::array<Vec2, 3> basis_gradients(const Mesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  const Point2 a = mesh.vertex(tri[0]);
  const Point2 b = mesh.vertex(tri[1]);
  const Point2 c = mesh.vertex(tri[2]);
  const double twice = cross(a, b, c);
  return {Vec2{(b.x2 - c.x2) / twice, (c.x1 - b.x1) / twice},
          Vec2{(c.x2 - a.x2) / twice, (a.x1 - c.x1) / twice},
          Vec2{(a.x2 - b.x2) / twice, (b.x1 - a.x1) / twice}};
}

std::vector<LocalMatrix> local_stiffness(const Mesh& mesh, const CoefficientField& sigma) {
  std::vector<LocalMatrix> out(mesh.triangle_count());
  detail::parallel_for(out.size(), [&](std::size_t t) {
    out[t] = element_matrix(mesh, t, sigma(mesh.centroid(t)));
  });
  return out;
}

std::vector<Matrix2> centroid_coefficients(const Mesh& mesh, const CoefficientField& sigma) {
  std::vector<Matrix2> out(mesh.triangle_count());
  detail::parallel_for(out.size(), [&](std::size_t t) { out[t] = sigma(mesh.centroid(t)); });
  return out;
}

std::vector<Vec2> triangle_gradients(const Mesh& mesh, std::span<const double> values) {
  check_size(mesh, values);
  std::vector<Vec2> out(mesh.triangle_count());
  detail::parallel_for(out.size(), [&](std::size_t t) { out[t] = element_gradient(mesh, t, values); });
  return out;
}

std::vector<double> triangle_jacobians(const Mesh& mesh, std::span<const double> u1,
                                       std::span<const double> u2) {
  check_size(mesh, u1);
  check_size(mesh, u2);
  std::vector<double> out(mesh.triangle_count());
  detail::parallel_for(out.size(), [&](std::size_t t) { out[t] = element_jacobian(mesh, t, u1, u2); });
  return out;
}

std::vector<double> centroid_boundary_distances(const Mesh& mesh) {
  std::vector<double> out(mesh.triangle_count());
  detail::parallel_for(out.size(), [&](std::size_t t) {
    out[t] = distance_to_boundary(mesh, mesh.centroid(t));
  });
  return out;
}

double ordered_sum(std::span<const double> terms) {
  double sum = 0.0;
  for (double x : terms) sum += x;
  return sum;
}

int max_threads() { return omp_get_max_threads(); }

namespace serial {

std::vector<LocalMatrix> local_stiffness(const Mesh& mesh, const CoefficientField& sigma) {
  std::vector<LocalMatrix> out;
  out.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    out.push_back(element_matrix(mesh, t, sigma(mesh.centroid(t))));
  }
  return out;
}

std::vector<Matrix2> centroid_coefficients(const Mesh& mesh, const CoefficientField& sigma) {
  std::vector<Matrix2> out;
  out.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) out.push_back(sigma(mesh.centroid(t)));
  return out;
}

std::vector<Vec2> triangle_gradients(const Mesh& mesh, std::span<const double> values) {
  check_size(mesh, values);
  std::vector<Vec2> out;
  out.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    out.push_back(element_gradient(mesh, t, values));
  }
  return out;
}

std::vector<double> triangle_jacobians(const Mesh& mesh, std::span<const double> u1,
                                       std::span<const double> u2) {
  check_size(mesh, u1);
  check_size(mesh, u2);
  std::vector<double> out;
  out.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    out.push_back(element_jacobian(mesh, t, u1, u2));
  }
  return out;
}

std::vector<double> centroid_boundary_distances(const Mesh& mesh) {
  std::vector<double> out;
  out.reserve(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    out.push_back(distance_to_boundary(mesh, mesh.centroid(t)));
  }
  return out;
}

}  // namespace serial

}  // namespace sigmalab::kernels
