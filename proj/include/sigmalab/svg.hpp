#pragma once

#include <string>
#include <vector>

#include "sigmalab/fem.hpp"

namespace sigmalab {

struct SvgOptions {
  int width = 600;
  int height = 600;
  int levels = 12;        // contour levels strictly between min and max
  int max_arrows = 400;   // quiver subsampling
};

/// Level sets of the piecewise-linear field, one segment per crossed triangle.
std::string contour_svg(const ScalarField& u, const SvgOptions& options = {});
/// Arrows at triangle centroids, scaled to the largest gradient.
std::string quiver_svg(const TriangleGradientField& field, const SvgOptions& options = {});
/// Triangles filled on a blue-white-red scale centred at 0.
std::string heatmap_svg(const Mesh& mesh, const std::vector<double>& values,
                        const SvgOptions& options = {});

}  // namespace sigmalab
