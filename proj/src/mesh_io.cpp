#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sigmalab/descriptor.hpp"
#include "sigmalab/mesh.hpp"

namespace sigmalab {

namespace {

std::string next_line(std::istream& in, const char* context) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw ConfigError(std::string("mesh file truncated while reading ") + context);
}

std::size_t header_count(const std::string& line, const std::string& keyword) {
  std::istringstream ss(line);
  std::string word;
  std::string count;
  ss >> word >> count;
  if (word != keyword || count.empty()) {
    throw ConfigError("mesh file: expected '" + keyword + " N', got '" + line + "'");
  }
  const long long n = parse_integer(count, keyword + " count");
  if (n < 0) throw ConfigError("mesh file: negative " + keyword + " count");
  return static_cast<std::size_t>(n);
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "mesh v1\n";
  out << "vertices " << mesh.vertex_count() << "\n";
  for (const auto& p : mesh.vertices()) {
    out << format_double(p.x1) << ' ' << format_double(p.x2) << '\n';
  }
  out << "triangles " << mesh.triangle_count() << "\n";
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& loop : mesh.boundary()) {
    out << "boundary " << loop.size();
    for (int v : loop) out << ' ' << v;
    out << '\n';
  }
}

Mesh read_mesh(std::istream& in, MeshLimits limits) {
  if (next_line(in, "header") != "mesh v1") throw ConfigError("not a 'mesh v1' file");

  const std::size_t nv = header_count(next_line(in, "vertex header"), "vertices");
  if (nv > limits.max_vertices) throw ResourceLimitError("mesh file exceeds the vertex cap");
  std::vector<Point2> vertices;
  vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    std::istringstream ss(next_line(in, "vertices"));
    std::string a, b, extra;
    ss >> a >> b;
    if (b.empty() || (ss >> extra)) throw ConfigError("mesh file: malformed vertex line");
    vertices.push_back({parse_double(a, "vertex x1"), parse_double(b, "vertex x2")});
  }

  const std::size_t nt = header_count(next_line(in, "triangle header"), "triangles");
  std::vector<Triangle> triangles;
  triangles.reserve(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    std::istringstream ss(next_line(in, "triangles"));
    std::string a, b, c, extra;
    ss >> a >> b >> c;
    if (c.empty() || (ss >> extra)) throw ConfigError("mesh file: malformed triangle line");
    triangles.push_back({static_cast<int>(parse_integer(a, "triangle index")),
                         static_cast<int>(parse_integer(b, "triangle index")),
                         static_cast<int>(parse_integer(c, "triangle index"))});
  }

  std::vector<std::vector<int>> boundary;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word, count;
    ss >> word >> count;
    if (word != "boundary") throw ConfigError("mesh file: unexpected line '" + line + "'");
    const long long n = parse_integer(count, "boundary count");
    std::vector<int> loop;
    std::string token;
    while (ss >> token) loop.push_back(static_cast<int>(parse_integer(token, "boundary index")));
    if (n < 0 || static_cast<std::size_t>(n) != loop.size()) {
      throw ConfigError("mesh file: boundary count does not match its index list");
    }
    boundary.push_back(std::move(loop));
  }

  // The format carries no nominal size; use the longest edge.
  double h = 0.0;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (a >= 0 && b >= 0 && static_cast<std::size_t>(a) < nv && static_cast<std::size_t>(b) < nv) {
        h = std::max(h, distance(vertices[a], vertices[b]));
      }
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(boundary), h, {}, limits);
}

}  // namespace sigmalab
