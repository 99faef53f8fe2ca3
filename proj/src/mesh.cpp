// SPDX-License-Identifier: Apache-2.0

#include "resonance/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>

#include "resonance/errors.hpp"

namespace resonance
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t edge_key(int a, int b)
{
  if (a > b)
  {
    std::swap(a, b);
  }
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double dist(const Point2 &p, const Point2 &q)
{
  return std::hypot(p.x - q.x, p.y - q.y);
}

double signed_area(const Point2 &a, const Point2 &b, const Point2 &c)
{
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double longest_edge(const Mesh &mesh)
{
  double h = 0.0;
  for (const auto &t : mesh.triangles)
  {
    for (int e = 0; e < 3; e++)
    {
      h = std::max(h, dist(mesh.vertices[t[e]], mesh.vertices[t[(e + 1) % 3]]));
    }
  }
  return h;
}

}  // namespace

std::size_t Mesh::num_edges() const
{
  std::unordered_map<std::uint64_t, int> edges;
  edges.reserve(triangles.size() * 2);
  for (const auto &t : triangles)
  {
    for (int e = 0; e < 3; e++)
    {
      edges.emplace(edge_key(t[e], t[(e + 1) % 3]), 0);
    }
  }
  return edges.size();
}

Mesh generate_disk_mesh(double R, double target_h)
{
  if (!(R > 0.0) || !(target_h > 0.0) || !(target_h < R))
  {
    throw ParamError("disk mesh needs 0 < target_h < R (got R = " + std::to_string(R) +
                     ", target_h = " + std::to_string(target_h) + ")");
  }
  // Ring spacing R/n; the longest edges are ring-to-ring diagonals of about 1.45 R/n.
  const int n_rings = std::max(2, static_cast<int>(std::ceil(1.1 * R / target_h)));

  Mesh mesh;
  mesh.radius = R;
  mesh.level = 1;
  mesh.vertices.push_back({0.0, 0.0});
  std::vector<int> ring_start{0};
  std::vector<int> ring_size{1};
  for (int i = 1; i <= n_rings; i++)
  {
    const int m = 6 * i;
    const double rho = (i == n_rings) ? R : R * static_cast<double>(i) / n_rings;
    ring_start.push_back(static_cast<int>(mesh.vertices.size()));
    ring_size.push_back(m);
    for (int j = 0; j < m; j++)
    {
      const double theta = kTwoPi * j / m;
      mesh.vertices.push_back({rho * std::cos(theta), rho * std::sin(theta)});
    }
  }

  for (int i = 1; i <= n_rings; i++)
  {
    const int a0 = ring_start[i - 1], na = ring_size[i - 1];
    const int b0 = ring_start[i], nb = ring_size[i];
    if (na == 1)
    {
      for (int q = 0; q < nb; q++)
      {
        mesh.triangles.push_back({a0, b0 + q, b0 + (q + 1) % nb});
      }
      continue;
    }
    // Zip the two rings together, closing each quad with its shorter diagonal.
    int p = 0, q = 0;
    while (p < na || q < nb)
    {
      const int vp = a0 + p % na;
      const int vq = b0 + q % nb;
      const int next_a = a0 + (p + 1) % na;
      const int next_b = b0 + (q + 1) % nb;
      bool advance_outer = (p == na);
      if (p < na && q < nb)
      {
        advance_outer = dist(mesh.vertices[vp], mesh.vertices[next_b]) <=
                        dist(mesh.vertices[next_a], mesh.vertices[vq]);
      }
      if (advance_outer)
      {
        mesh.triangles.push_back({vp, vq, next_b});
        q++;
      }
      else
      {
        mesh.triangles.push_back({vp, vq, next_a});
        p++;
      }
    }
  }

  const int b0 = ring_start.back(), nb = ring_size.back();
  for (int j = 0; j < nb; j++)
  {
    const double ta = kTwoPi * j / nb;
    const double tb = (j + 1 == nb) ? kTwoPi : kTwoPi * (j + 1) / nb;
    mesh.boundary_edges.push_back({b0 + j, b0 + (j + 1) % nb, ta, tb});
  }
  mesh.h = longest_edge(mesh);
  return mesh;
}

Mesh refine(const Mesh &mesh)
{
  Mesh out;
  out.radius = mesh.radius;
  out.level = mesh.level + 1;
  out.vertices = mesh.vertices;
  out.vertices.reserve(mesh.vertices.size() + mesh.triangles.size() * 3 / 2 + 16);

  std::unordered_map<std::uint64_t, const BoundaryEdge *> boundary;
  for (const auto &be : mesh.boundary_edges)
  {
    boundary.emplace(edge_key(be.a, be.b), &be);
  }

  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(mesh.triangles.size() * 2);
  auto mid = [&](int a, int b)
  {
    const auto key = edge_key(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end())
    {
      return it->second;
    }
    Point2 p{0.5 * (out.vertices[a].x + out.vertices[b].x),
             0.5 * (out.vertices[a].y + out.vertices[b].y)};
    if (auto bit = boundary.find(key); bit != boundary.end())
    {
      const double theta = 0.5 * (bit->second->theta_a + bit->second->theta_b);
      p = {mesh.radius * std::cos(theta), mesh.radius * std::sin(theta)};
    }
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    midpoint.emplace(key, idx);
    return idx;
  };

  out.triangles.reserve(mesh.triangles.size() * 4);
  for (const auto &t : mesh.triangles)
  {
    const int m01 = mid(t[0], t[1]);
    const int m12 = mid(t[1], t[2]);
    const int m20 = mid(t[2], t[0]);
    out.triangles.push_back({t[0], m01, m20});
    out.triangles.push_back({m01, t[1], m12});
    out.triangles.push_back({m20, m12, t[2]});
    out.triangles.push_back({m01, m12, m20});
  }

  out.boundary_edges.reserve(mesh.boundary_edges.size() * 2);
  for (const auto &be : mesh.boundary_edges)
  {
    const int m = midpoint.at(edge_key(be.a, be.b));
    const double tm = 0.5 * (be.theta_a + be.theta_b);
    out.boundary_edges.push_back({be.a, m, be.theta_a, tm});
    out.boundary_edges.push_back({m, be.b, tm, be.theta_b});
  }
  out.h = longest_edge(out);
  return out;
}

Mesh disk_mesh_at_level(double R, double base_h, int level)
{
  if (level < 1)
  {
    throw ParamError("mesh level must be >= 1");
  }
  Mesh mesh = generate_disk_mesh(R, base_h);
  for (int l = 1; l < level; l++)
  {
    mesh = refine(mesh);
  }
  return mesh;
}

MeshStats mesh_stats(const Mesh &mesh)
{
  MeshStats s;
  s.n_vertices = mesh.vertices.size();
  s.n_triangles = mesh.triangles.size();
  s.n_boundary = mesh.boundary_edges.size();
  s.n_edges = mesh.num_edges();
  s.h = longest_edge(mesh);
  double min_angle = std::numbers::pi;
  for (const auto &t : mesh.triangles)
  {
    for (int e = 0; e < 3; e++)
    {
      const Point2 &p = mesh.vertices[t[e]];
      const Point2 &q = mesh.vertices[t[(e + 1) % 3]];
      const Point2 &r = mesh.vertices[t[(e + 2) % 3]];
      const double ux = q.x - p.x, uy = q.y - p.y;
      const double vx = r.x - p.x, vy = r.y - p.y;
      const double angle = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
      min_angle = std::min(min_angle, angle);
    }
  }
  s.min_angle = min_angle;
  return s;
}

double mesh_area(const Mesh &mesh)
{
  double area = 0.0;
  for (const auto &t : mesh.triangles)
  {
    area += signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  }
  return area;
}

void validate(const Mesh &mesh)
{
  const int nv = static_cast<int>(mesh.vertices.size());
  std::unordered_map<std::uint64_t, int> edge_count;
  for (std::size_t i = 0; i < mesh.triangles.size(); i++)
  {
    const auto &t = mesh.triangles[i];
    for (int v : t)
    {
      if (v < 0 || v >= nv)
      {
        throw ParamError("triangle " + std::to_string(i) + " has an invalid vertex index");
      }
    }
    if (!(signed_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0))
    {
      throw ParamError("triangle " + std::to_string(i) + " is not counterclockwise");
    }
    for (int e = 0; e < 3; e++)
    {
      edge_count[edge_key(t[e], t[(e + 1) % 3])]++;
    }
  }
  const long euler = static_cast<long>(nv) - static_cast<long>(edge_count.size()) +
                     static_cast<long>(mesh.triangles.size());
  if (euler != 1)
  {
    throw ParamError("Euler characteristic " + std::to_string(euler) + " != 1");
  }

  std::size_t boundary_from_triangles = 0;
  for (const auto &[key, count] : edge_count)
  {
    if (count > 2)
    {
      throw ParamError("non-manifold edge shared by more than two triangles");
    }
    if (count == 1)
    {
      boundary_from_triangles++;
    }
  }
  if (boundary_from_triangles != mesh.boundary_edges.size())
  {
    throw ParamError("boundary edge list does not match the triangulation");
  }

  double expected = 0.0;
  for (const auto &be : mesh.boundary_edges)
  {
    auto it = edge_count.find(edge_key(be.a, be.b));
    if (it == edge_count.end() || it->second != 1)
    {
      throw ParamError("listed boundary edge is not a boundary edge of the triangulation");
    }
    for (int v : {be.a, be.b})
    {
      const double r = std::hypot(mesh.vertices[v].x, mesh.vertices[v].y);
      if (std::abs(r - mesh.radius) > 1e-12 * mesh.radius)
      {
        throw ParamError("boundary vertex " + std::to_string(v) + " is off the circle");
      }
    }
    if (std::abs(be.theta_a - expected) > 1e-12 || !(be.theta_b > be.theta_a))
    {
      throw ParamError("boundary edges do not partition [0, 2pi) in order");
    }
    expected = be.theta_b;
  }
  if (std::abs(expected - kTwoPi) > 1e-12)
  {
    throw ParamError("boundary edges do not close the circle");
  }
}

void write_mesh(std::ostream &os, const Mesh &mesh)
{
  os << "vertices " << mesh.vertices.size() << " / triangles " << mesh.triangles.size()
     << " / boundary " << mesh.boundary_edges.size() << "\n";
  os << std::setprecision(17);
  os << "level " << mesh.level << " radius " << mesh.radius << "\n";
  for (const auto &v : mesh.vertices)
  {
    os << v.x << " " << v.y << "\n";
  }
  for (const auto &t : mesh.triangles)
  {
    os << t[0] << " " << t[1] << " " << t[2] << "\n";
  }
  for (const auto &b : mesh.boundary_edges)
  {
    os << b.a << " " << b.b << " " << b.theta_a << " " << b.theta_b << "\n";
  }
}

Mesh read_mesh(std::istream &is)
{
  std::string w1, s1, w2, s2, w3;
  std::size_t nv = 0, nt = 0, nb = 0;
  if (!(is >> w1 >> nv >> s1 >> w2 >> nt >> s2 >> w3 >> nb) || w1 != "vertices" ||
      w2 != "triangles" || w3 != "boundary" || s1 != "/" || s2 != "/")
  {
    throw ParamError("malformed mesh header");
  }
  Mesh mesh;
  std::string wl, wr;
  if (!(is >> wl >> mesh.level >> wr >> mesh.radius) || wl != "level" || wr != "radius")
  {
    throw ParamError("malformed mesh level/radius line");
  }
  mesh.vertices.resize(nv);
  for (auto &v : mesh.vertices)
  {
    is >> v.x >> v.y;
  }
  mesh.triangles.resize(nt);
  for (auto &t : mesh.triangles)
  {
    is >> t[0] >> t[1] >> t[2];
  }
  mesh.boundary_edges.resize(nb);
  for (auto &b : mesh.boundary_edges)
  {
    is >> b.a >> b.b >> b.theta_a >> b.theta_b;
  }
  if (!is)
  {
    throw ParamError("truncated mesh file");
  }
  mesh.h = longest_edge(mesh);
  return mesh;
}

}  // namespace resonance
