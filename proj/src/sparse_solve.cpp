#include "sparse_solve.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <string>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/geometry.hpp"

namespace sigmalab::detail {

namespace {

double inf_norm(const Eigen::SparseMatrix<double>& a) {
  Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      row_sums[it.row()] += std::abs(it.value());
    }
  }
  return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

double relative_residual(const Eigen::SparseMatrix<double>& a, double a_norm,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double scale = a_norm * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) return 0.0;
  return (b - a * x).lpNorm<Eigen::Infinity>() / scale;
}

}  // namespace

SparseSolution solve_sparse_lu(const std::vector<Triplet>& triplets, Eigen::Index n,
                               const Eigen::VectorXd& rhs, double max_residual) {
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("singular system: sparse LU factorization failed (" + lu.lastErrorMessage() +
                         ")");
  }
  SparseSolution out;
  out.x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !out.x.allFinite()) {
    throw NumericalError("singular system: sparse LU solve failed");
  }
  const double a_norm = inf_norm(a);
  const Eigen::VectorXd correction = lu.solve(rhs - a * out.x);
  const Eigen::VectorXd refined = out.x + correction;
  const double before = relative_residual(a, a_norm, out.x, rhs);
  const double after = relative_residual(a, a_norm, refined, rhs);
  if (after < before) out.x = refined;
  out.residual = std::min(before, after);
  if (!(out.residual <= max_residual)) {
    throw NumericalError("linear solve residual " + format_double(out.residual) +
                         " exceeds " + format_double(max_residual));
  }
  return out;
}

}  // namespace sigmalab::detail
