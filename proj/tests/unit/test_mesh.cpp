// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "resonance/errors.hpp"
#include "resonance/mesh.hpp"

using namespace resonance;

TEST_CASE("coarse disk mesh satisfies the invariants")
{
  const Mesh m = generate_disk_mesh(1.0, 0.5);
  CHECK(m.triangles.size() >= 4);
  CHECK_NOTHROW(validate(m));
}

TEST_CASE("fine disk mesh size")
{
  const Mesh m = generate_disk_mesh(1.0, 0.05);
  const MeshStats s = mesh_stats(m);
  CHECK(s.h <= 0.075);
  CHECK(s.n_triangles >= 2000);
  CHECK_NOTHROW(validate(m));
}

TEST_CASE("boundary vertices lie on the circle")
{
  const Mesh m = generate_disk_mesh(2.0, 0.1);
  for (const auto &e : m.boundary_edges)
  {
    const Point2 p = m.vertices[e.a];
    CHECK(std::abs(std::hypot(p.x, p.y) - 2.0) < 1e-12);
  }
  const Mesh r = refine(m);
  for (const auto &e : r.boundary_edges)
  {
    const Point2 p = r.vertices[e.b];
    CHECK(std::abs(std::hypot(p.x, p.y) - 2.0) < 1e-12);
  }
}

TEST_CASE("invalid mesh parameters")
{
  CHECK_THROWS_AS(generate_disk_mesh(1.0, 0.0), ParamError);
  CHECK_THROWS_AS(generate_disk_mesh(1.0, 1.5), ParamError);
}

TEST_CASE("refinement counts and area convergence")
{
  Mesh m = generate_disk_mesh(1.0, 0.4);
  double prev_angle = mesh_stats(m).min_angle;
  std::vector<double> constants;
  for (int l = 0; l < 4; l++)
  {
    const Mesh r = refine(m);
    CHECK(r.triangles.size() == 4 * m.triangles.size());
    CHECK(r.vertices.size() == m.vertices.size() + m.num_edges());
    CHECK_NOTHROW(validate(r));
    const MeshStats s = mesh_stats(r);
    CHECK(s.min_angle >= 0.8 * prev_angle);
    prev_angle = s.min_angle;
    const double err = std::numbers::pi - mesh_area(r);
    CHECK(err > 0.0);
    constants.push_back(err / (s.h * s.h));
    m = r;
  }
  // |area - pi| <= C h^2 with C stable across levels.
  for (std::size_t i = 1; i < constants.size(); i++)
  {
    CHECK(constants[i] / constants[i - 1] == doctest::Approx(1.0).epsilon(0.25));
  }
}

TEST_CASE("level meshes keep vertex indices")
{
  const Mesh a = disk_mesh_at_level(1.0, 0.3, 1);
  const Mesh b = disk_mesh_at_level(1.0, 0.3, 3);
  CHECK(b.level == 3);
  for (std::size_t i = 0; i < a.vertices.size(); i++)
  {
    CHECK(a.vertices[i].x == b.vertices[i].x);
    CHECK(a.vertices[i].y == b.vertices[i].y);
  }
}

TEST_CASE("equilateral triangle statistics")
{
  Mesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
  m.triangles = {{0, 1, 2}};
  const MeshStats s = mesh_stats(m);
  CHECK(s.min_angle == doctest::Approx(std::numbers::pi / 3.0).epsilon(1e-12));
  CHECK(s.h == doctest::Approx(1.0));
}

TEST_CASE("mesh text round trip")
{
  const Mesh m = disk_mesh_at_level(1.0, 0.3, 2);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh r = read_mesh(ss);
  CHECK(r.level == m.level);
  CHECK(r.vertices.size() == m.vertices.size());
  CHECK(r.triangles == m.triangles);
  CHECK(r.boundary_edges.size() == m.boundary_edges.size());
  CHECK(mesh_area(r) == doctest::Approx(mesh_area(m)).epsilon(1e-14));
}
