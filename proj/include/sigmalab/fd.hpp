#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "sigmalab/coefficients.hpp"
#include "sigmalab/fem.hpp"

namespace sigmalab {

enum class NodeKind : std::uint8_t { exterior = 0, interior = 1, boundary = 2 };

/// Uniform grid with a node mask. Interior nodes have all eight neighbours
/// inside the domain; boundary nodes carry Dirichlet data.
class GridDomain {
 public:
  GridDomain(Point2 origin, double spacing, int nx, int ny, std::vector<NodeKind> kinds);

  /// Nodes with inside(p) true form the domain; interior = inside with all
  /// eight neighbours inside, boundary = the rest of the inside nodes.
  static GridDomain from_predicate(Point2 origin, double spacing, int nx, int ny,
                                   const std::function<bool(Point2)>& inside);
  /// Grid centred on `center` with r_in <= |x - center| <= r_out as the domain.
  static GridDomain annulus(Point2 center, double r_in, double r_out, double spacing);
  static GridDomain rectangle(Point2 corner, double width, double height, double spacing);

  Point2 origin() const { return origin_; }
  double spacing() const { return spacing_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t node_count() const { return kinds_.size(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  Point2 node(int i, int j) const { return {origin_.x1 + i * spacing_, origin_.x2 + j * spacing_}; }
  Point2 node(std::size_t k) const { return node(static_cast<int>(k % nx_), static_cast<int>(k / nx_)); }
  NodeKind kind(std::size_t k) const { return kinds_[k]; }
  const std::vector<NodeKind>& kinds() const { return kinds_; }
  std::size_t count(NodeKind kind) const;

 private:
  Point2 origin_;
  double spacing_;
  int nx_;
  int ny_;
  std::vector<NodeKind> kinds_;
};

using GridPtr = std::shared_ptr<const GridDomain>;

/// Values per grid node; exterior nodes hold 0.
struct GridField {
  GridPtr grid;
  std::vector<double> values;
};

struct NondivergenceSolution {
  GridField u;
  double residual;
};

/// Central-difference solution of
///   s11 dxx u + (s12 + s21) dxy u + s22 dyy u + b1 dx u + b2 dy u = 0
/// at interior nodes with u = g at boundary nodes. dxy is the four-point
/// cross difference. Refuses grids where the stencil loses diagonal
/// dominance (see the dominance check in the implementation).
NondivergenceSolution solve_nondivergence(const GridPtr& grid, const CoefficientField& sigma,
                                          const VectorField2& drift, const ScalarFunction& g);

/// (sigma, b) with b = div sigma by central differences of the given step,
/// turning div(sigma grad u) = 0 into Tr(sigma D^2 u) + b . grad u = 0.
std::pair<CoefficientField, VectorField2> to_nondivergence(const CoefficientField& sigma, double step);

/// Discrete relative l2 error over interior and boundary nodes.
double grid_relative_l2_error(const GridField& u, const ScalarFunction& exact);

/// "grid v1" text format: header, 0/1/2 mask rows, value rows.
void write_grid(std::ostream& out, const GridField& u);
GridField read_grid(std::istream& in);

}  // namespace sigmalab
