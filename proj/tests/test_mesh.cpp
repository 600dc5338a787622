#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "sigmalab/mesh.hpp"

using namespace sigmalab;

namespace {

double min_area(const Mesh& m) {
  double lo = INFINITY;
  for (std::size_t t = 0; t < m.triangle_count(); ++t) lo = std::min(lo, m.area(t));
  return lo;
}

// Independent incidence count: every undirected edge in one or two triangles,
// boundary edges exactly those in one.
void check_conforming(const Mesh& m) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : m.triangles()) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::size_t boundary_edges = 0;
  for (const auto& [edge, n] : count) {
    CHECK((n == 1 || n == 2));
    if (n == 1) ++boundary_edges;
  }
  std::size_t loop_edges = 0;
  for (const auto& loop : m.boundary()) loop_edges += loop.size();
  CHECK(boundary_edges == loop_edges);
  CHECK(static_cast<long>(m.vertex_count()) - static_cast<long>(count.size()) +
            static_cast<long>(m.triangle_count()) ==
        m.euler_characteristic());
}

}  // namespace

TEST_CASE("disk meshes are valid and cover the disk") {
  const Mesh coarse = generate_disk({0, 0}, 1.0, 0.3);
  CHECK(min_area(coarse) > 0.0);
  CHECK(coarse.loop_count() == 1);
  check_conforming(coarse);

  const Mesh m = generate_disk({0, 0}, 1.0, 0.1);
  CHECK(std::abs(m.total_area() - std::numbers::pi) / std::numbers::pi < 0.02);
  CHECK(m.euler_characteristic() == 1);
  for (const auto& bv : boundary_trace(m, 0)) {
    CHECK(std::abs(std::hypot(bv.position.x1, bv.position.x2) - 1.0) <= 0.01);
  }
  CHECK(m.loop_signed_area(0) > 0.0);
}

TEST_CASE("disk preconditions") {
  CHECK_THROWS_AS(generate_disk({0, 0}, 1.0, 1.5), ConfigError);
  CHECK_THROWS_AS(generate_disk({0, 0}, -1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(generate_disk({0, 0}, 1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(generate_disk({0, 0}, 1.0, 1e-4, MeshLimits{1000}), ResourceLimitError);
}

TEST_CASE("annulus meshes have two loops with opposite orientation") {
  const Mesh m = generate_annulus({0, 0}, 0.2, 1.0, 0.1);
  CHECK(m.loop_count() == 2);
  CHECK(m.euler_characteristic() == 0);
  check_conforming(m);
  const double exact = std::numbers::pi * (1.0 - 0.04);
  CHECK(std::abs(m.total_area() - exact) / exact < 0.02);
  CHECK(m.loop_signed_area(0) > 0.0);
  CHECK(m.loop_signed_area(1) < 0.0);
  CHECK_THROWS_AS(generate_annulus({0, 0}, 1.0, 0.5, 0.1), ConfigError);
  CHECK_THROWS_AS(generate_annulus({0, 0}, 0.2, 1.0, 0.9), ConfigError);
}

TEST_CASE("disk and annulus meshes are centrally symmetric") {
  for (const Mesh& m : {generate_disk({0, 0}, 1.0, 0.1), generate_annulus({0, 0}, 0.2, 1.0, 0.1)}) {
    std::map<std::pair<long long, long long>, int> keys;
    auto key = [](Point2 p) {
      return std::make_pair(std::llround(p.x1 * 1e9), std::llround(p.x2 * 1e9));
    };
    for (const auto& v : m.vertices()) keys[key(v)] = 1;
    for (const auto& v : m.vertices()) CHECK(keys.count(key(Point2{-v.x1, -v.x2})) == 1);
  }
}

TEST_CASE("rectangle mesh area is exact") {
  const Mesh m = generate_rectangle({-1, 0}, 2.0, 1.0, 0.1);
  CHECK(m.total_area() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.loop_count() == 1);
  CHECK(m.euler_characteristic() == 1);
  check_conforming(m);
}

TEST_CASE("refinement") {
  const Mesh m = generate_disk({0, 0}, 1.0, 0.2);
  const Mesh r1 = refine(m);
  const Mesh r2 = refine(r1);
  CHECK(r1.triangle_count() == 4 * m.triangle_count());
  CHECK(std::abs(r1.total_area() - std::numbers::pi) < std::abs(m.total_area() - std::numbers::pi));
  CHECK(r2.h() == doctest::Approx(m.h() / 4).epsilon(0.1));
  CHECK(min_area(r2) > 0.0);
  check_conforming(r2);
  for (const auto& bv : boundary_trace(r1, 0)) {
    CHECK(std::hypot(bv.position.x1, bv.position.x2) == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Old boundary vertices keep their cyclic order.
  const auto before = boundary_trace(m, 0);
  const auto after = boundary_trace(r1, 0);
  std::vector<int> positions;
  for (const auto& b : before) {
    for (std::size_t i = 0; i < after.size(); ++i) {
      if (after[i].position == b.position) positions.push_back(static_cast<int>(i));
    }
  }
  REQUIRE(positions.size() == before.size());
  int descents = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[(i + 1) % positions.size()] < positions[i]) ++descents;
  }
  CHECK(descents == 1);

  const Mesh a = refine(generate_annulus({0, 0}, 0.2, 1.0, 0.1));
  CHECK(a.loop_count() == 2);
  CHECK(a.euler_characteristic() == 0);
  for (const auto& bv : boundary_trace(a, 1)) {
    CHECK(std::hypot(bv.position.x1, bv.position.x2) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("boundary trace indexing") {
  const Mesh m = generate_disk({0, 0}, 1.0, 0.2);
  const auto trace = boundary_trace(m, 0);
  CHECK(trace.size() == m.boundary()[0].size());
  CHECK_THROWS_AS(boundary_trace(m, 5), ConfigError);
  CHECK_THROWS_AS(boundary_trace(m, -1), ConfigError);
}

TEST_CASE("mesh validation rejects broken input") {
  const std::vector<Point2> v{{0, 0}, {1, 0}, {0, 1}};
  CHECK_NOTHROW(Mesh(v, {{0, 1, 2}}, {{0, 1, 2}}, 1.0));
  CHECK_THROWS_AS(Mesh(v, {{0, 2, 1}}, {{0, 2, 1}}, 1.0), ConfigError);  // clockwise triangle
  CHECK_THROWS_AS(Mesh(v, {{0, 1, 3}}, {{0, 1, 3}}, 1.0), ConfigError);  // index out of range
  CHECK_THROWS_AS(Mesh(v, {{0, 1, 2}}, {{0, 2, 1}}, 1.0), ConfigError);  // loop against orientation
  CHECK_THROWS_AS(Mesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}, {{0, 1, 2}}, 1.0), ConfigError);
}

TEST_CASE("mesh file round trip is bit exact") {
  const Mesh m = generate_annulus({0.1, -0.2}, 0.3, 1.1, 0.15);
  std::stringstream s;
  write_mesh(s, m);
  const Mesh back = read_mesh(s);
  REQUIRE(back.vertex_count() == m.vertex_count());
  for (std::size_t i = 0; i < m.vertex_count(); ++i) CHECK(back.vertices()[i] == m.vertices()[i]);
  CHECK(back.triangles() == m.triangles());
  CHECK(back.boundary() == m.boundary());
  std::stringstream again;
  write_mesh(again, back);
  std::stringstream first;
  write_mesh(first, m);
  CHECK(again.str() == first.str());

  std::istringstream bad("mesh v2\n");
  CHECK_THROWS_AS(read_mesh(bad), ConfigError);
}

TEST_CASE("point location") {
  const auto m = std::make_shared<const Mesh>(generate_disk({0, 0}, 1.0, 0.1));
  const PointLocator locator(m);
  for (const Point2 p : {Point2{0.3, 0.2}, Point2{-0.7, 0.1}, Point2{0, 0}}) {
    const auto loc = locator.locate(p);
    REQUIRE(loc.has_value());
    const auto& tri = m->triangles()[loc->triangle];
    Point2 q{0, 0};
    for (int k = 0; k < 3; ++k) q = q + loc->barycentric[k] * m->vertex(tri[k]);
    CHECK(distance(p, q) < 1e-12);
  }
  CHECK_FALSE(locator.locate({2.0, 0.0}).has_value());
  CHECK(distance_to_boundary(*m, {0, 0}) == doctest::Approx(1.0).epsilon(0.01));
}
