#pragma once

#include <Eigen/Sparse>
#include <vector>

namespace sigmalab::detail {

using Triplet = Eigen::Triplet<double>;

struct SparseSolution {
  Eigen::VectorXd x;
  /// ||b - A x||_inf / (||A||_inf ||x||_inf + ||b||_inf)
  double residual = 0.0;
};

/// Sparse LU (COLAMD ordering) with one step of iterative refinement.
/// Throws NumericalError on a singular system or a residual above `max_residual`.
SparseSolution solve_sparse_lu(const std::vector<Triplet>& triplets, Eigen::Index n,
                               const Eigen::VectorXd& rhs, double max_residual = 1e-10);

}  // namespace sigmalab::detail
