#include "sigmalab/fem.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/kernels.hpp"
#include "sparse_solve.hpp"

namespace sigmalab {

ScalarField::ScalarField(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (!mesh_) throw ConfigError("scalar field without a mesh");
  if (values_.size() != mesh_->vertex_count()) {
    throw ConfigError("scalar field has " + std::to_string(values_.size()) + " values for " +
                      std::to_string(mesh_->vertex_count()) + " vertices");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericalError("scalar field has a non-finite value");
  }
}

std::optional<double> ScalarField::evaluate(const PointLocator& locator, Point2 p) const {
  const auto loc = locator.locate(p);
  if (!loc) return std::nullopt;
  const auto& tri = mesh_->triangles()[loc->triangle];
  return loc->barycentric[0] * values_[tri[0]] + loc->barycentric[1] * values_[tri[1]] +
         loc->barycentric[2] * values_[tri[2]];
}

ScalarField interpolate(MeshPtr mesh, const ScalarFunction& f) {
  std::vector<double> values;
  values.reserve(mesh->vertex_count());
  for (const auto& p : mesh->vertices()) values.push_back(f(p));
  return ScalarField(std::move(mesh), std::move(values));
}

ScalarField combine(double a, const ScalarField& x, double b, const ScalarField& y) {
  if (x.mesh_ptr() != y.mesh_ptr()) throw ConfigError("fields live on different meshes");
  std::vector<double> values(x.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = a * x[i] + b * y[i];
  return ScalarField(x.mesh_ptr(), std::move(values));
}

MappingField::MappingField(ScalarField first, ScalarField second)
    : u1(std::move(first)), u2(std::move(second)) {
  if (u1.mesh_ptr() != u2.mesh_ptr()) throw ConfigError("mapping components live on different meshes");
}

ScalarField MappingField::directional(Vec2 xi) const { return combine(xi[0], u1, xi[1], u2); }

DirichletSolution solve_dirichlet(const DirichletProblem& problem) {
  const Mesh& mesh = *problem.mesh;
  const std::size_t nv = mesh.vertex_count();

  std::vector<Point2> centroids(mesh.triangle_count());
  for (std::size_t t = 0; t < centroids.size(); ++t) centroids[t] = mesh.centroid(t);
  const EllipticityReport ell = ellipticity_report(problem.sigma, centroids);
  require_elliptic(ell, problem.sigma.descriptor());

  // Interior numbering in vertex order; boundary vertices carry g.
  std::vector<long> unknown(nv, -1);
  long n_interior = 0;
  std::vector<double> values(nv, 0.0);
  for (std::size_t v = 0; v < nv; ++v) {
    if (mesh.on_boundary(static_cast<int>(v))) {
      values[v] = problem.boundary_data(mesh.vertex(static_cast<int>(v)));
      if (!std::isfinite(values[v])) throw ConfigError("boundary data is not finite");
    } else {
      unknown[v] = n_interior++;
    }
  }
  if (n_interior == 0) throw ConfigError("mesh has no interior vertices");

  const auto local = kernels::local_stiffness(mesh, problem.sigma);
  std::vector<detail::Triplet> triplets;
  triplets.reserve(local.size() * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_interior);
  for (std::size_t t = 0; t < local.size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      const long row = unknown[tri[i]];
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const long col = unknown[tri[j]];
        const double k = local[t][3 * i + j];
        if (col >= 0) {
          triplets.emplace_back(row, col, k);
        } else {
          rhs[row] -= k * values[tri[j]];
        }
      }
    }
  }
  const auto solved = detail::solve_sparse_lu(triplets, n_interior, rhs);
  for (std::size_t v = 0; v < nv; ++v) {
    if (unknown[v] >= 0) values[v] = solved.x[unknown[v]];
  }
  return {ScalarField(problem.mesh, std::move(values)), solved.residual, ell};
}

TriangleGradientField gradient_field(const ScalarField& u) {
  return {u.mesh_ptr(), kernels::triangle_gradients(u.mesh(), u.values())};
}

double energy(const ScalarField& u, const CoefficientField& sigma) {
  const Mesh& mesh = u.mesh();
  const auto grads = kernels::triangle_gradients(mesh, u.values());
  const auto coeffs = kernels::centroid_coefficients(mesh, sigma);
  std::vector<double> terms(grads.size());
  for (std::size_t t = 0; t < grads.size(); ++t) {
    terms[t] = dot(coeffs[t] * grads[t], grads[t]) * mesh.area(t);
  }
  return kernels::ordered_sum(terms);
}

namespace {

template <class Term>
double midpoint_rule(const Mesh& mesh, Term&& term) {
  std::vector<double> terms(mesh.triangle_count());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) sum += term(t, tri[k], tri[(k + 1) % 3]);
    terms[t] = sum * mesh.area(t) / 3.0;
  }
  return kernels::ordered_sum(terms);
}

Point2 midpoint(const Mesh& mesh, int a, int b) {
  const Point2 pa = mesh.vertex(a);
  const Point2 pb = mesh.vertex(b);
  return {(pa.x1 + pb.x1) / 2.0, (pa.x2 + pb.x2) / 2.0};
}

}  // namespace

double l2_norm(const ScalarField& u) {
  return std::sqrt(midpoint_rule(u.mesh(), [&](std::size_t, int a, int b) {
    const double m = 0.5 * (u[a] + u[b]);
    return m * m;
  }));
}

double relative_l2_error(const ScalarField& u, const ScalarFunction& exact) {
  const Mesh& mesh = u.mesh();
  const double err = midpoint_rule(mesh, [&](std::size_t, int a, int b) {
    const double e = exact(midpoint(mesh, a, b));
    const double d = 0.5 * (u[a] + u[b]) - e;
    return d * d;
  });
  const double ref = midpoint_rule(mesh, [&](std::size_t, int a, int b) {
    const double e = exact(midpoint(mesh, a, b));
    return e * e;
  });
  if (ref == 0.0) return std::sqrt(err);
  return std::sqrt(err / ref);
}

double relative_h1_seminorm_error(const ScalarField& u, const GradientFunction& exact_gradient) {
  const Mesh& mesh = u.mesh();
  const auto grads = kernels::triangle_gradients(mesh, u.values());
  const double err = midpoint_rule(mesh, [&](std::size_t t, int a, int b) {
    const Vec2 g = exact_gradient(midpoint(mesh, a, b));
    const double dx = grads[t][0] - g[0];
    const double dy = grads[t][1] - g[1];
    return dx * dx + dy * dy;
  });
  const double ref = midpoint_rule(mesh, [&](std::size_t, int a, int b) {
    const Vec2 g = exact_gradient(midpoint(mesh, a, b));
    return dot(g, g);
  });
  if (ref == 0.0) return std::sqrt(err);
  return std::sqrt(err / ref);
}

double max_nodal_error(const ScalarField& u, const ScalarFunction& exact) {
  double worst = 0.0;
  for (std::size_t v = 0; v < u.size(); ++v) {
    worst = std::max(worst, std::abs(u[v] - exact(u.mesh().vertex(static_cast<int>(v)))));
  }
  return worst;
}

void write_field(std::ostream& out, const ScalarField& u) {
  out << "field v1\n";
  out << "values " << u.size() << "\n";
  for (double v : u.values()) out << format_double(v) << '\n';
}

ScalarField read_field(std::istream& in, MeshPtr mesh) {
  std::string line;
  auto next = [&](const char* what) {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return;
    }
    throw ConfigError(std::string("field file truncated while reading ") + what);
  };
  next("header");
  if (line != "field v1") throw ConfigError("not a 'field v1' file");
  next("value header");
  std::istringstream ss(line);
  std::string word, count;
  ss >> word >> count;
  if (word != "values") throw ConfigError("field file: expected 'values N'");
  const long long n = parse_integer(count, "value count");
  if (n < 0) throw ConfigError("field file: negative value count");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    next("values");
    values.push_back(parse_double(line, "field value"));
  }
  return ScalarField(std::move(mesh), std::move(values));
}

}  // namespace sigmalab
