#include "sigmalab/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace sigmalab {

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v == 0.0 ? 0.0 : v);
  return buf;
}

struct Rgb {
  double r, g, b;
};

std::string hex(Rgb c) {
  auto byte = [](double x) { return static_cast<int>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(c.r), byte(c.g), byte(c.b));
  return buf;
}

Rgb mix(Rgb a, Rgb b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

Rgb sequential(double t) {
  static constexpr std::array<Rgb, 5> stops{{{0.267, 0.005, 0.329},
                                             {0.231, 0.322, 0.545},
                                             {0.129, 0.569, 0.549},
                                             {0.369, 0.788, 0.384},
                                             {0.993, 0.906, 0.144}}};
  t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(t), stops.size() - 2);
  return mix(stops[i], stops[i + 1], t - static_cast<double>(i));
}

Rgb diverging(double t) {
  const Rgb blue{0.129, 0.400, 0.674};
  const Rgb white{0.969, 0.969, 0.969};
  const Rgb red{0.698, 0.094, 0.169};
  t = std::clamp(t, -1.0, 1.0);
  return t < 0 ? mix(white, blue, -t) : mix(white, red, t);
}

// Maps mesh coordinates into the picture with a 5% margin, y pointing up.
class Frame {
 public:
  Frame(const Mesh& mesh, const SvgOptions& options) : w_(options.width), h_(options.height) {
    Point2 lo = mesh.vertices().front();
    Point2 hi = lo;
    for (const auto& v : mesh.vertices()) {
      lo = {std::min(lo.x1, v.x1), std::min(lo.x2, v.x2)};
      hi = {std::max(hi.x1, v.x1), std::max(hi.x2, v.x2)};
    }
    const double span = std::max({hi.x1 - lo.x1, hi.x2 - lo.x2, 1e-300});
    scale_ = 0.9 * std::min(w_, h_) / span;
    cx_ = 0.5 * (lo.x1 + hi.x1);
    cy_ = 0.5 * (lo.x2 + hi.x2);
  }
  double x(Point2 p) const { return 0.5 * w_ + (p.x1 - cx_) * scale_; }
  double y(Point2 p) const { return 0.5 * h_ - (p.x2 - cy_) * scale_; }
  std::string xy(Point2 p) const { return fixed(x(p)) + " " + fixed(y(p)); }
  double scale() const { return scale_; }

  std::string header() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) +
           "\" height=\"" + std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + " " +
           std::to_string(h_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

 private:
  int w_, h_;
  double scale_ = 1.0, cx_ = 0.0, cy_ = 0.0;
};

std::string boundary_paths(const Mesh& mesh, const Frame& frame) {
  std::string out;
  for (const auto& loop : mesh.boundary()) {
    out += "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    for (std::size_t i = 0; i < loop.size(); ++i) {
      out += (i == 0 ? "M" : " L") + frame.xy(mesh.vertex(loop[i]));
    }
    out += " Z\"/>\n";
  }
  return out;
}

void check_options(const SvgOptions& options) {
  if (options.width <= 0 || options.height <= 0 || options.levels < 1 || options.max_arrows < 1) {
    throw ConfigError("svg options must be positive");
  }
}

}  // namespace

std::string contour_svg(const ScalarField& u, const SvgOptions& options) {
  check_options(options);
  const Mesh& mesh = u.mesh();
  const Frame frame(mesh, options);
  const auto [lo_it, hi_it] = std::minmax_element(u.values().begin(), u.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::string out = frame.header();
  for (int k = 0; k < options.levels && hi > lo; ++k) {
    const double frac = (k + 1.0) / (options.levels + 1.0);
    const double c = lo + frac * (hi - lo);
    std::string d;
    for (const auto& tri : mesh.triangles()) {
      std::array<Point2, 2> ends{};
      int found = 0;
      for (int e = 0; e < 3 && found < 2; ++e) {
        const int a = tri[e];
        const int b = tri[(e + 1) % 3];
        const bool above_a = u[a] >= c;
        const bool above_b = u[b] >= c;
        if (above_a == above_b) continue;
        const double t = (c - u[a]) / (u[b] - u[a]);
        ends[found++] = mesh.vertex(a) + t * (mesh.vertex(b) - mesh.vertex(a));
      }
      if (found == 2) d += "M" + frame.xy(ends[0]) + " L" + frame.xy(ends[1]) + " ";
    }
    if (d.empty()) continue;
    d.pop_back();
    out += "<path fill=\"none\" stroke=\"" + hex(sequential(frac)) +
           "\" stroke-width=\"1.2\" d=\"" + d + "\"/>\n";
  }
  out += boundary_paths(mesh, frame);
  out += "</svg>\n";
  return out;
}

std::string quiver_svg(const TriangleGradientField& field, const SvgOptions& options) {
  check_options(options);
  const Mesh& mesh = *field.mesh;
  const Frame frame(mesh, options);
  const std::size_t n = field.gradients.size();
  const std::size_t stride = std::max<std::size_t>(1, (n + options.max_arrows - 1) / options.max_arrows);
  double gmax = 0.0;
  for (std::size_t t = 0; t < n; t += stride) gmax = std::max(gmax, norm(field.gradients[t]));
  const double arrows = static_cast<double>((n + stride - 1) / stride);
  const double longest = 0.8 * std::min(options.width, options.height) / std::sqrt(std::max(arrows, 1.0));
  std::string out = frame.header();
  out += "<g stroke=\"#1f4e79\" stroke-width=\"1\" fill=\"none\">\n";
  for (std::size_t t = 0; t < n && gmax > 0.0; t += stride) {
    const Vec2 g = field.gradients[t];
    const double len = longest * norm(g) / gmax;
    if (len < 0.5) continue;
    const Point2 c = mesh.centroid(t);
    const double ux = g[0] / norm(g);
    const double uy = -g[1] / norm(g);
    const double x0 = frame.x(c) - 0.5 * len * ux;
    const double y0 = frame.y(c) - 0.5 * len * uy;
    const double x1 = x0 + len * ux;
    const double y1 = y0 + len * uy;
    const double head = 0.3 * len;
    const double lx = x1 - head * (ux - 0.5 * uy);
    const double ly = y1 - head * (uy + 0.5 * ux);
    const double rx = x1 - head * (ux + 0.5 * uy);
    const double ry = y1 - head * (uy - 0.5 * ux);
    out += "<path d=\"M" + fixed(x0) + " " + fixed(y0) + " L" + fixed(x1) + " " + fixed(y1) + " M" +
           fixed(lx) + " " + fixed(ly) + " L" + fixed(x1) + " " + fixed(y1) + " L" + fixed(rx) + " " +
           fixed(ry) + "\"/>\n";
  }
  out += "</g>\n";
  out += boundary_paths(mesh, frame);
  out += "</svg>\n";
  return out;
}

std::string heatmap_svg(const Mesh& mesh, const std::vector<double>& values, const SvgOptions& options) {
  check_options(options);
  if (values.size() != mesh.triangle_count()) throw ConfigError("heat map needs one value per triangle");
  const Frame frame(mesh, options);
  double vmax = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) vmax = std::max(vmax, std::abs(v));
  }
  std::string out = frame.header();
  out += "<g stroke=\"none\">\n";
  for (std::size_t t = 0; t < values.size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const std::string fill = !std::isfinite(values[t]) ? "#808080"
                             : vmax > 0.0              ? hex(diverging(values[t] / vmax))
                                                       : hex(diverging(0.0));
    out += "<path fill=\"" + fill + "\" d=\"M" + frame.xy(mesh.vertex(tri[0])) + " L" +
           frame.xy(mesh.vertex(tri[1])) + " L" + frame.xy(mesh.vertex(tri[2])) + " Z\"/>\n";
  }
  out += "</g>\n";
  out += boundary_paths(mesh, frame);
  char legend[96];
  std::snprintf(legend, sizeof legend, "scale: -%.6g .. 0 .. %.6g", vmax, vmax);
  out += "<text x=\"8\" y=\"" + std::to_string(options.height - 8) +
         "\" font-family=\"monospace\" font-size=\"12\">" + legend + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace sigmalab
