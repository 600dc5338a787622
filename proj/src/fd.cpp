#include "sigmalab/fd.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "parallel_for.hpp"
#include "sigmalab/descriptor.hpp"
#include "sparse_solve.hpp"

namespace sigmalab {

GridDomain::GridDomain(Point2 origin, double spacing, int nx, int ny, std::vector<NodeKind> kinds)
    : origin_(origin), spacing_(spacing), nx_(nx), ny_(ny), kinds_(std::move(kinds)) {
  if (!(spacing_ > 0.0)) throw ConfigError("grid spacing must be positive");
  if (nx_ < 3 || ny_ < 3) throw ConfigError("grid needs at least 3 nodes per direction");
  if (kinds_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)) {
    throw ConfigError("grid mask size does not match nx * ny");
  }
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (kinds_[index(i, j)] != NodeKind::interior) continue;
      if (i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1) {
        throw ConfigError("interior grid node on the edge of the grid");
      }
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (kinds_[index(i + di, j + dj)] == NodeKind::exterior) {
            throw ConfigError("interior grid node with an exterior neighbour");
          }
        }
      }
    }
  }
}

GridDomain GridDomain::from_predicate(Point2 origin, double spacing, int nx, int ny,
                                      const std::function<bool(Point2)>& inside) {
  if (!(spacing > 0.0)) throw ConfigError("grid spacing must be positive");
  if (nx < 3 || ny < 3) throw ConfigError("grid needs at least 3 nodes per direction");
  const auto n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  if (n > 4'000'000) throw ResourceLimitError("grid exceeds 4e6 nodes");
  std::vector<unsigned char> in(n, 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      in[static_cast<std::size_t>(j) * nx + i] =
          inside({origin.x1 + i * spacing, origin.x2 + j * spacing}) ? 1 : 0;
    }
  }
  std::vector<NodeKind> kinds(n, NodeKind::exterior);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const auto k = static_cast<std::size_t>(j) * nx + i;
      if (!in[k]) continue;
      bool all = i > 0 && j > 0 && i < nx - 1 && j < ny - 1;
      for (int dj = -1; all && dj <= 1; ++dj) {
        for (int di = -1; all && di <= 1; ++di) {
          all = in[static_cast<std::size_t>(j + dj) * nx + (i + di)] != 0;
        }
      }
      kinds[k] = all ? NodeKind::interior : NodeKind::boundary;
    }
  }
  return GridDomain(origin, spacing, nx, ny, std::move(kinds));
}

GridDomain GridDomain::annulus(Point2 center, double r_in, double r_out, double spacing) {
  if (!(r_in >= 0.0) || !(r_out > r_in)) throw ConfigError("grid annulus needs 0 <= r_in < r_out");
  if (!(spacing > 0.0) || !(spacing < r_out - r_in)) {
    throw ConfigError("grid spacing must satisfy 0 < spacing < r_out - r_in");
  }
  const int half = static_cast<int>(std::ceil(r_out / spacing)) + 1;
  const Point2 origin{center.x1 - half * spacing, center.x2 - half * spacing};
  return from_predicate(origin, spacing, 2 * half + 1, 2 * half + 1, [=](Point2 p) {
    const double r = distance(p, center);
    return r >= r_in && r <= r_out;
  });
}

GridDomain GridDomain::rectangle(Point2 corner, double width, double height, double spacing) {
  if (!(width > 0.0) || !(height > 0.0)) throw ConfigError("rectangle sides must be positive");
  if (!(spacing > 0.0)) throw ConfigError("grid spacing must be positive");
  const int nx = static_cast<int>(std::llround(width / spacing)) + 1;
  const int ny = static_cast<int>(std::llround(height / spacing)) + 1;
  std::vector<NodeKind> kinds(static_cast<std::size_t>(nx) * ny, NodeKind::interior);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) {
        kinds[static_cast<std::size_t>(j) * nx + i] = NodeKind::boundary;
      }
    }
  }
  return GridDomain(corner, spacing, nx, ny, std::move(kinds));
}

std::size_t GridDomain::count(NodeKind kind) const {
  std::size_t n = 0;
  for (NodeKind k : kinds_) n += k == kind ? 1 : 0;
  return n;
}

namespace {

// Stencil weights in the order C, E, W, N, S, NE, NW, SE, SW.
struct Stencil {
  std::array<double, 9> w{};
  double violation = 0.0;  // > 0 when the dominance condition fails
};

constexpr std::array<std::array<int, 2>, 9> kOffsets{{
    {0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

Stencil node_stencil(const Matrix2& s, Vec2 b, double h) {
  const double h2 = h * h;
  const double cross_sum = s.a12 + s.a21;
  Stencil st;
  st.w[0] = -2.0 * (s.a11 + s.a22) / h2;
  st.w[1] = s.a11 / h2 + b[0] / (2.0 * h);
  st.w[2] = s.a11 / h2 - b[0] / (2.0 * h);
  st.w[3] = s.a22 / h2 + b[1] / (2.0 * h);
  st.w[4] = s.a22 / h2 - b[1] / (2.0 * h);
  st.w[5] = cross_sum / (4.0 * h2);
  st.w[6] = -cross_sum / (4.0 * h2);
  st.w[7] = -cross_sum / (4.0 * h2);
  st.w[8] = cross_sum / (4.0 * h2);
  // Dominance: the symmetrised principal part is diagonally dominant and the
  // drift does not flip the sign of the axial weights.
  const double half_cross = 0.5 * std::abs(cross_sum);
  st.violation = std::max({half_cross - s.a11, half_cross - s.a22,
                           std::abs(b[0]) * h / 2.0 - s.a11, std::abs(b[1]) * h / 2.0 - s.a22});
  return st;
}

}  // namespace

NondivergenceSolution solve_nondivergence(const GridPtr& grid, const CoefficientField& sigma,
                                          const VectorField2& drift, const ScalarFunction& g) {
  const GridDomain& dom = *grid;
  const double h = dom.spacing();
  const std::size_t n = dom.node_count();

  std::vector<long> unknown(n, -1);
  std::vector<std::size_t> interior_nodes;
  std::vector<Point2> interior_points;
  std::vector<double> values(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (dom.kind(k) == NodeKind::interior) {
      unknown[k] = static_cast<long>(interior_nodes.size());
      interior_nodes.push_back(k);
      interior_points.push_back(dom.node(k));
    } else if (dom.kind(k) == NodeKind::boundary) {
      values[k] = g(dom.node(k));
      if (!std::isfinite(values[k])) throw ConfigError("boundary data is not finite");
    }
  }
  if (interior_nodes.empty()) throw ConfigError("grid has no interior nodes");
  require_elliptic(ellipticity_report(sigma, interior_points), sigma.descriptor());

  std::vector<Stencil> stencils(interior_nodes.size());
  detail::parallel_for(stencils.size(), [&](std::size_t r) {
    const Point2 p = interior_points[r];
    stencils[r] = node_stencil(sigma(p), drift(p), h);
  });

  std::size_t worst = 0;
  for (std::size_t r = 1; r < stencils.size(); ++r) {
    if (stencils[r].violation > stencils[worst].violation) worst = r;
  }
  if (stencils[worst].violation > 0.0) {
    throw ConfigError("stencil not diagonally dominant at node " + to_string(interior_points[worst]) +
                      " (violation " + format_double(stencils[worst].violation) +
                      "); try a smaller spacing or a less anisotropic coefficient");
  }

  std::vector<detail::Triplet> triplets;
  triplets.reserve(stencils.size() * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(stencils.size()));
  for (std::size_t r = 0; r < stencils.size(); ++r) {
    const std::size_t k = interior_nodes[r];
    const int i = static_cast<int>(k % dom.nx());
    const int j = static_cast<int>(k / dom.nx());
    for (std::size_t s = 0; s < kOffsets.size(); ++s) {
      const double w = stencils[r].w[s];
      if (w == 0.0 && s != 0) continue;
      const std::size_t nb = dom.index(i + kOffsets[s][0], j + kOffsets[s][1]);
      if (unknown[nb] >= 0) {
        triplets.emplace_back(static_cast<Eigen::Index>(r), unknown[nb], w);
      } else {
        rhs[static_cast<Eigen::Index>(r)] -= w * values[nb];
      }
    }
  }
  const auto solved =
      detail::solve_sparse_lu(triplets, static_cast<Eigen::Index>(stencils.size()), rhs);
  for (std::size_t r = 0; r < interior_nodes.size(); ++r) {
    values[interior_nodes[r]] = solved.x[static_cast<Eigen::Index>(r)];
  }
  return {GridField{grid, std::move(values)}, solved.residual};
}

std::pair<CoefficientField, VectorField2> to_nondivergence(const CoefficientField& sigma, double step) {
  if (!(step > 0.0)) throw ConfigError("divergence step must be positive");
  VectorField2 b([sigma, step](Point2 p) { return divergence_of_sigma(sigma, p, step); },
                 "div(" + sigma.descriptor() + ")");
  return {sigma, std::move(b)};
}

double grid_relative_l2_error(const GridField& u, const ScalarFunction& exact) {
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (u.grid->kind(k) == NodeKind::exterior) continue;
    const double e = exact(u.grid->node(k));
    err += (u.values[k] - e) * (u.values[k] - e);
    ref += e * e;
  }
  return ref == 0.0 ? std::sqrt(err) : std::sqrt(err / ref);
}

void write_grid(std::ostream& out, const GridField& u) {
  const GridDomain& g = *u.grid;
  out << "grid v1\n";
  out << "origin " << format_double(g.origin().x1) << ' ' << format_double(g.origin().x2) << '\n';
  out << "spacing " << format_double(g.spacing()) << '\n';
  out << "size " << g.nx() << ' ' << g.ny() << '\n';
  out << "mask\n";
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out << (i ? " " : "") << static_cast<int>(g.kind(g.index(i, j)));
    }
    out << '\n';
  }
  out << "values\n";
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      out << (i ? " " : "") << format_double(u.values[g.index(i, j)]);
    }
    out << '\n';
  }
}

GridField read_grid(std::istream& in) {
  std::string line;
  auto next = [&](const char* what) {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return;
    }
    throw ConfigError(std::string("grid file truncated while reading ") + what);
  };
  auto fields = [&](const char* keyword, std::size_t count) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != keyword) throw ConfigError(std::string("grid file: expected '") + keyword + "'");
    std::vector<std::string> out(count);
    for (auto& f : out) {
      if (!(ss >> f)) throw ConfigError(std::string("grid file: short '") + keyword + "' line");
    }
    return out;
  };
  next("header");
  if (line != "grid v1") throw ConfigError("not a 'grid v1' file");
  next("origin");
  const auto o = fields("origin", 2);
  next("spacing");
  const auto sp = fields("spacing", 1);
  next("size");
  const auto sz = fields("size", 2);
  const Point2 origin{parse_double(o[0], "origin x1"), parse_double(o[1], "origin x2")};
  const double spacing = parse_double(sp[0], "spacing");
  const auto nx = parse_integer(sz[0], "nx");
  const auto ny = parse_integer(sz[1], "ny");
  if (nx < 3 || ny < 3 || nx * ny > 4'000'000) throw ConfigError("grid file: invalid size");

  auto read_rows = [&](const char* what, auto&& convert) {
    for (long long j = 0; j < ny; ++j) {
      next(what);
      std::istringstream ss(line);
      std::string token;
      for (long long i = 0; i < nx; ++i) {
        if (!(ss >> token)) throw ConfigError(std::string("grid file: short ") + what + " row");
        convert(token);
      }
      if (ss >> token) throw ConfigError(std::string("grid file: long ") + what + " row");
    }
  };
  next("mask header");
  if (line != "mask") throw ConfigError("grid file: expected 'mask'");
  std::vector<NodeKind> kinds;
  read_rows("mask", [&](const std::string& t) {
    const auto v = parse_integer(t, "mask entry");
    if (v < 0 || v > 2) throw ConfigError("grid file: mask entries must be 0, 1 or 2");
    kinds.push_back(static_cast<NodeKind>(v));
  });
  next("values header");
  if (line != "values") throw ConfigError("grid file: expected 'values'");
  std::vector<double> values;
  read_rows("values", [&](const std::string& t) { values.push_back(parse_double(t, "grid value")); });
  auto grid = std::make_shared<const GridDomain>(origin, spacing, static_cast<int>(nx),
                                                 static_cast<int>(ny), std::move(kinds));
  return {std::move(grid), std::move(values)};
}

}  // namespace sigmalab
