// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_MESH_HPP
#define RESONANCE_MESH_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

namespace resonance
{

struct Point2
{
  double x = 0.0;
  double y = 0.0;
};

// Edge of the mesh boundary on the circle of radius R. The hat-function traces are treated
// as linear in the polar angle on [theta_a, theta_b]; the last edge of the circle ends at
// theta_b = 2*pi so that theta_b > theta_a always holds.
struct BoundaryEdge
{
  int a = 0;
  int b = 0;
  double theta_a = 0.0;
  double theta_b = 0.0;
};

// Conforming linear triangulation of the disk of radius `radius` centred at the origin.
// Triangles are counterclockwise, boundary vertices lie on the circle and boundary edges are
// sorted by theta_a. Vertex indices of a mesh survive refinement unchanged.
struct Mesh
{
  double radius = 1.0;
  int level = 1;
  double h = 0.0;  // longest edge
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  std::size_t num_edges() const;
};

struct MeshStats
{
  double h = 0.0;
  double min_angle = 0.0;  // radians
  std::size_t n_vertices = 0;
  std::size_t n_triangles = 0;
  std::size_t n_boundary = 0;
  std::size_t n_edges = 0;
};

// Ring triangulation of the disk: a centre vertex and concentric rings of 6i vertices on
// radius i*R/n. The ring count is chosen so the longest edge lands close to target_h.
// Throws ParamError unless 0 < target_h < R.
Mesh generate_disk_mesh(double R, double target_h);

// Red refinement: every triangle is split into four through its edge midpoints, and the
// midpoints of boundary edges are moved radially onto the circle.
Mesh refine(const Mesh &mesh);

// generate_disk_mesh followed by (level - 1) refinements.
Mesh disk_mesh_at_level(double R, double base_h, int level);

MeshStats mesh_stats(const Mesh &mesh);

// Polygon area of the triangulation.
double mesh_area(const Mesh &mesh);

// Throws ParamError describing the first violated structural invariant.
void validate(const Mesh &mesh);

// Plain-text export/import. Header "vertices N / triangles M / boundary K", then a
// "level L radius R" line followed by the vertex, triangle and boundary-edge records.
void write_mesh(std::ostream &os, const Mesh &mesh);
Mesh read_mesh(std::istream &is);

}  // namespace resonance

#endif  // RESONANCE_MESH_HPP
