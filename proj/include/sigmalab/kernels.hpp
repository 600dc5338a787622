#pragma once

#include <array>
#include <span>
#include <vector>

#include "sigmalab/coefficients.hpp"
#include "sigmalab/mesh.hpp"

// Per-triangle kernels behind the solvers and analysis passes.
//
// The default implementations run OpenMP-parallel over triangles. Each
// triangle writes only its own output slot, so results are bit-identical for
// every thread count. The serial:: versions are the plain-loop reference
// the tests and the benchmark compare against.

namespace sigmalab::kernels {

/// Row-major 3x3 element matrix; entry (i, j) = area * (sigma grad phi_j) . grad phi_i.
using LocalMatrix = std::array<double, 9>;

/// Gradients of the three P1 hat functions of triangle t.
std::array<Vec2, 3> basis_gradients(const Mesh& mesh, std::size_t t);

std::vector<LocalMatrix> local_stiffness(const Mesh& mesh, const CoefficientField& sigma);
std::vector<Matrix2> centroid_coefficients(const Mesh& mesh, const CoefficientField& sigma);
std::vector<Vec2> triangle_gradients(const Mesh& mesh, std::span<const double> values);
std::vector<double> triangle_jacobians(const Mesh& mesh, std::span<const double> u1,
                                       std::span<const double> u2);
std::vector<double> centroid_boundary_distances(const Mesh& mesh);

/// Sum in index order; deterministic regardless of how the terms were produced.
double ordered_sum(std::span<const double> terms);

namespace serial {
std::vector<LocalMatrix> local_stiffness(const Mesh& mesh, const CoefficientField& sigma);
std::vector<Matrix2> centroid_coefficients(const Mesh& mesh, const CoefficientField& sigma);
std::vector<Vec2> triangle_gradients(const Mesh& mesh, std::span<const double> values);
std::vector<double> triangle_jacobians(const Mesh& mesh, std::span<const double> u1,
                                       std::span<const double> u2);
std::vector<double> centroid_boundary_distances(const Mesh& mesh);
}  // namespace serial

int max_threads();

}  // namespace sigmalab::kernels
