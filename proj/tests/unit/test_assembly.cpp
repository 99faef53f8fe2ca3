// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "resonance/assembly.hpp"
#include "resonance/errors.hpp"
#include "resonance/linalg.hpp"
#include "resonance/mesh.hpp"
#include "resonance/potential.hpp"
#include "resonance/sim.hpp"
#include "resonance/specfun.hpp"

using namespace resonance;

namespace
{

Mesh right_triangle()
{
  Mesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.triangles = {{0, 1, 2}};
  return m;
}

std::shared_ptr<const Mesh> disk(int level)
{
  return std::make_shared<const Mesh>(disk_mesh_at_level(1.0, 0.2, level));
}

double dot_real(const ComplexVector &a, const ComplexVector &b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); i++)
  {
    s += (a[i] * b[i]).real();
  }
  return s;
}

Complex bilinear(const ComplexVector &a, const ComplexVector &b)
{
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); i++)
  {
    s += a[i] * b[i];
  }
  return s;
}

double max_abs_diff(const ComplexVector &a, const ComplexVector &b)
{
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); i++)
  {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("reference element stiffness and mass")
{
  const Mesh m = right_triangle();
  const SparseComplexMatrix S = assemble_stiffness(m);
  const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      CHECK(std::abs(S.coeff(i, j) - Complex(expected[i][j])) < 1e-15);
    }
  }
  const SparseComplexMatrix M = assemble_mass(m);
  Complex sum = 0.0;
  for (Complex v : M.values)
  {
    sum += v;
  }
  CHECK(std::abs(sum - 0.5) < 1e-15);
  CHECK(std::abs(M.coeff(0, 0) - 0.5 / 6.0) < 1e-15);
  CHECK(std::abs(M.coeff(0, 1) - 0.5 / 12.0) < 1e-15);
}

TEST_CASE("stiffness kernel and energy of x")
{
  const auto mesh = disk(2);
  const SparseComplexMatrix S = assemble_stiffness(*mesh);
  CHECK(S.is_symmetric(0.0));
  const ComplexVector one(S.n, 1.0);
  const ComplexVector s1 = S.multiply(one);
  double worst = 0.0;
  for (Complex v : s1)
  {
    worst = std::max(worst, std::abs(v));
  }
  CHECK(worst <= 1e-12 * S.norm_inf());

  ComplexVector x(S.n);
  for (int i = 0; i < S.n; i++)
  {
    x[i] = mesh->vertices[i].x;
  }
  CHECK(std::abs(dot_real(x, S.multiply(x)) - mesh_area(*mesh)) < 1e-10);
}

TEST_CASE("mass matrix sums to the polygon area")
{
  double prev_err = 0.0;
  for (int level = 1; level <= 3; level++)
  {
    const auto mesh = disk(level);
    const SparseComplexMatrix M = assemble_mass(*mesh);
    CHECK(M.is_symmetric(0.0));
    Complex sum = 0.0;
    for (Complex v : M.values)
    {
      sum += v;
    }
    CHECK(std::abs(sum - mesh_area(*mesh)) < 1e-12);
    const double err = std::numbers::pi - sum.real();
    if (level > 1)
    {
      CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.15));
    }
    prev_err = err;
  }
  // Positive pivots: M is SPD, so it factors and solves accurately.
  const SparseComplexMatrix M = assemble_mass(*disk(1));
  const Factorization f = lu_factor(M);
  const ComplexVector b(M.n, Complex(1.0, -2.0));
  CHECK(f.relative_residual(f.solve(b), b) < 1e-12);
}

TEST_CASE("potential matrix")
{
  const auto mesh = disk(2);
  const SparseComplexMatrix M = assemble_mass(*mesh);
  const SparseComplexMatrix MV = assemble_potential(*mesh, parse_potential("piece disk(0,0;1): 2"));
  REQUIRE(MV.nnz() == M.nnz());
  for (std::size_t i = 0; i < M.nnz(); i++)
  {
    CHECK(std::abs(MV.values[i] - 2.0 * M.values[i]) <= 1e-12 * std::abs(M.values[i]));
  }
  const SparseComplexMatrix Z = assemble_potential(*mesh, parse_potential(""));
  for (Complex v : Z.values)
  {
    CHECK(v == Complex(0.0));
  }
  PotentialQuadrature three;
  three.rule = QuadratureRule::ThreePoint;
  const SparseComplexMatrix M3 =
      assemble_potential(*mesh, parse_potential("piece disk(0,0;1): 2 - 0.5i"), three);
  CHECK(M3.is_symmetric(1e-15));
  CHECK(std::abs(M3.values[0] - Complex(2.0, -0.5) * M.values[0]) < 1e-12);
}

TEST_CASE("boundary modes")
{
  const auto mesh = disk(2);
  const BoundaryModes b = assemble_boundary_modes(*mesh, 6);
  const ComplexVector c0 = b.c(0);
  const ComplexVector s0 = b.s(0);
  Complex sum = 0.0;
  for (Complex v : c0)
  {
    sum += v;
  }
  CHECK(std::abs(sum - 2.0 * std::numbers::pi) < 1e-12);
  CHECK(norm2(s0) == 0.0);
  for (int n = 1; n <= 6; n++)
  {
    Complex sc = 0.0, ss = 0.0;
    for (Complex v : b.c(n))
    {
      sc += v;
    }
    for (Complex v : b.s(n))
    {
      ss += v;
    }
    CHECK(std::abs(sc) < 1e-12);
    CHECK(std::abs(ss) < 1e-12);
  }
  // Interior vertices carry no boundary moments.
  std::vector<bool> on_boundary(mesh->vertices.size(), false);
  for (int v : b.vertices)
  {
    on_boundary[v] = true;
  }
  const ComplexVector c3 = b.c(3);
  for (std::size_t i = 0; i < c3.size(); i++)
  {
    if (!on_boundary[i])
    {
      CHECK(c3[i] == Complex(0.0));
    }
  }
}

TEST_CASE("cosine moments on a uniform 8-gon against brute-force quadrature")
{
  Mesh m;
  m.vertices.push_back({0.0, 0.0});
  for (int i = 0; i < 8; i++)
  {
    const double t = 2.0 * std::numbers::pi * i / 8.0;
    m.vertices.push_back({std::cos(t), std::sin(t)});
  }
  for (int i = 0; i < 8; i++)
  {
    m.triangles.push_back({0, 1 + i, 1 + (i + 1) % 8});
    const double ta = 2.0 * std::numbers::pi * i / 8.0;
    m.boundary_edges.push_back({1 + i, 1 + (i + 1) % 8, ta, ta + 2.0 * std::numbers::pi / 8.0});
  }
  const BoundaryModes b = assemble_boundary_modes(m, 1);
  const ComplexVector c1 = b.c(1);
  const int q = 10000;
  const double dt = 2.0 * std::numbers::pi / 8.0;
  for (int i = 0; i < 8; i++)
  {
    // Hat of vertex i: piecewise linear in theta on [t_i - dt, t_i + dt], midpoint rule.
    const double ti = 2.0 * std::numbers::pi * i / 8.0;
    double s = 0.0;
    for (int j = 0; j < q; j++)
    {
      const double u = -1.0 + (j + 0.5) * 2.0 / q;
      s += (1.0 - std::abs(u)) * std::cos(ti + u * dt) * (2.0 * dt / q);
    }
    CHECK(std::abs(c1[1 + i].real() - s) < 1e-8);
  }
}

TEST_CASE("F(k) structure")
{
  const auto mesh = disk(1);
  const auto bundle = std::make_shared<const OperatorBundle>(
      build_bundle(mesh, parse_potential("piece disk(0,0;1): 2"), 20));
  const Complex k(-0.85, -1.34);
  const SparseComplexMatrix F = assemble_F(*bundle, k);
  CHECK(F.is_symmetric(1e-13));
  CHECK(F.is_structurally_symmetric());

  const Eigen::MatrixXcd E = boundary_block(*bundle, k);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
  const auto sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); i++)
  {
    if (sv[i] > 1e-10 * sv[0])
    {
      rank++;
    }
  }
  CHECK(rank <= 41);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  ComplexVector x(F.n);
  for (auto &v : x)
  {
    v = Complex(g(rng), g(rng));
  }
  const ComplexVector y1 = F.multiply(x);
  const ComplexVector y2 = apply_F(*bundle, k, x);
  CHECK(max_abs_diff(y1, y2) < 1e-11 * norm2(y1));
  CHECK_THROWS_AS(apply_F(*bundle, k, ComplexVector(3)), DimensionError);
}

TEST_CASE("bordered solves invert F(k)")
{
  const auto mesh = disk(1);
  const auto bundle = std::make_shared<const OperatorBundle>(
      build_bundle(mesh, parse_potential("piece disk(0,0;1): exp(1/(r^2-2))"), 20));
  const FemFunction fun(bundle);
  for (Complex k : {Complex(1.2, -0.9), Complex(-2.5, -3.0)})
  {
    const ComplexVector f = probe_vector(fun.dim(), 11);
    const ComplexVector x = fun.factor(k)->solve(f);
    const ComplexVector r = apply_F(*bundle, k, x);
    CHECK(max_abs_diff(r, f) < 1e-10 * norm2(f));
  }
}

TEST_CASE("analytic derivative and holomorphy")
{
  const auto mesh = disk(1);
  const auto bundle = std::make_shared<const OperatorBundle>(
      build_bundle(mesh, parse_potential("piece annulus(0.5;1): 2"), 20));
  const ComplexVector u = probe_vector(bundle->dim(), 5);
  const ComplexVector v = probe_vector(bundle->dim(), 6);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(-4.0, -0.5);
  for (int trial = 0; trial < 20; trial++)
  {
    const Complex k(re(rng), im(rng));
    const double h = 1e-5;
    auto q = [&](Complex z) { return bilinear(v, apply_F(*bundle, z, u)); };
    const Complex dx = (q(k + h) - q(k - h)) / (2 * h);
    const Complex dy = (q(k + Complex(0, h)) - q(k - Complex(0, h))) / (2 * h);
    CAPTURE(k);
    // d/d conj(k) = (dx + i dy) / 2 vanishes for a holomorphic function.
    CHECK(std::abs(dx + Complex(0, 1) * dy) <= 1e-6 * std::abs(dx));
    const Complex exact = bilinear(v, apply_dF(*bundle, k, u));
    CHECK(std::abs(exact - dx) <= 1e-6 * std::abs(dx));
  }
}

TEST_CASE("DtN coefficients")
{
  const auto mesh = disk(1);
  const OperatorBundle b = build_bundle(mesh, parse_potential(""), 20);
  const Complex k(0.7, -1.1);
  const ComplexVector beta = dtn_coefficients(b, k);
  REQUIRE(beta.size() == 21);
  CHECK(std::abs(beta[0] - 0.5 * specfun::dtn_symbol(0, k, 1.0)) < 1e-14);
  CHECK(std::abs(beta[7] - specfun::dtn_symbol(7, k, 1.0)) < 1e-13 * std::abs(beta[7]));
  const ComplexVector d = dtn_coefficient_derivatives(b, k);
  const double h = 1e-6;
  const ComplexVector bp = dtn_coefficients(b, k + h);
  const ComplexVector bm = dtn_coefficients(b, k - h);
  for (int n = 0; n <= 20; n++)
  {
    const Complex fd = (bp[n] - bm[n]) / (2 * h);
    CHECK(std::abs(d[n] - fd) <= 1e-6 * std::abs(fd));
  }
}
