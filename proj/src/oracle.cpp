// SPDX-License-Identifier: Apache-2.0

#include "resonance/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "resonance/errors.hpp"
#include "resonance/specfun.hpp"

namespace resonance::oracle
{

namespace
{

using specfun::ExtComplex;

std::vector<Complex> determinants(const DiskProblem &problem, Complex k, bool flip_branch,
                                  int n_max)
{
  if (k == Complex(0.0, 0.0))
  {
    throw DomainError("d_n is undefined at k = 0");
  }
  const ExtComplex kk(k.real(), k.imag());
  const ExtComplex v0(problem.V0.real(), problem.V0.imag());
  ExtComplex w = std::sqrt(kk * kk - v0);
  if ((w * std::conj(kk)).real() < 0.0L)
  {
    w = -w;
  }
  if (flip_branch)
  {
    w = -w;
  }
  const long double r0 = problem.r0;
  const auto J = specfun::bessel_j_seq(n_max + 1, w * r0);
  const auto H = specfun::hankel1_seq(n_max + 1, kk * r0);
  std::vector<Complex> d(n_max + 1);
  for (int n = 0; n <= n_max; n++)
  {
    const ExtComplex v = w * J[n + 1] * H[n] - kk * H[n + 1] * J[n];
    d[n] = Complex(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  return d;
}

}  // namespace

Complex d_n(const DiskProblem &problem, int n, Complex k, bool flip_branch)
{
  if (n < 0)
  {
    throw DomainError("d_n needs n >= 0");
  }
  return determinants(problem, k, flip_branch, n)[n];
}

std::vector<Complex> d_all(const DiskProblem &problem, Complex k)
{
  return determinants(problem, k, false, problem.n_max);
}

RootSearch oracle_roots(const DiskProblem &problem, const ComplexRect &theta, double grid_step)
{
  if (!(grid_step > 0.0) || !(theta.width() > 0.0) || !(theta.height() > 0.0))
  {
    throw ParamError("oracle root search needs a non-empty rectangle and grid_step > 0");
  }
  const int nx = static_cast<int>(std::round(theta.width() / grid_step)) + 1;
  const int ny = static_cast<int>(std::round(theta.height() / grid_step)) + 1;
  const double dx = theta.width() / (nx - 1);
  const double dy = theta.height() / (ny - 1);
  const int nn = problem.n_max + 1;

  std::vector<double> mag(static_cast<std::size_t>(nx) * ny * nn);
  std::vector<double> grid_max(nn, 0.0);
  for (int j = 0; j < ny; j++)
  {
    for (int i = 0; i < nx; i++)
    {
      const Complex k(theta.re_min + i * dx, theta.im_min + j * dy);
      const auto d = d_all(problem, k);
      for (int n = 0; n < nn; n++)
      {
        const double m = std::abs(d[n]);
        mag[(static_cast<std::size_t>(j) * nx + i) * nn + n] = m;
        grid_max[n] = std::max(grid_max[n], m);
      }
    }
  }

  RootSearch out;
  for (int n = 0; n < nn; n++)
  {
    auto at = [&](int i, int j) { return mag[(static_cast<std::size_t>(j) * nx + i) * nn + n]; };
    auto f = [&](Complex k) { return d_n(problem, n, k); };
    std::vector<OracleRoot> found;
    for (int j = 0; j < ny; j++)
    {
      for (int i = 0; i < nx; i++)
      {
        const double m = at(i, j);
        bool is_min = true;
        for (int dj = -1; dj <= 1 && is_min; dj++)
        {
          for (int di = -1; di <= 1; di++)
          {
            const int ii = i + di, jj = j + dj;
            if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= nx || jj >= ny)
            {
              continue;
            }
            if (at(ii, jj) < m)
            {
              is_min = false;
              break;
            }
          }
        }
        if (!is_min)
        {
          continue;
        }

        Complex k(theta.re_min + i * dx, theta.im_min + j * dy);
        bool converged = false;
        try
        {
          for (int it = 0; it < 60; it++)
          {
            const double h = 1e-7;
            const Complex fk = f(k);
            const Complex df = (f(k + h) - f(k - h)) / (2.0 * h);
            if (df == Complex(0.0, 0.0))
            {
              break;
            }
            const Complex step = fk / df;
            k -= step;
            if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(k)))
            {
              converged = true;
              break;
            }
          }
        }
        catch (const Error &)
        {
          converged = false;
        }
        const double residual = converged ? std::abs(f(k)) : 0.0;
        if (!converged || !theta.contains(k) || residual > 1e-10 * grid_max[n])
        {
          out.dropped++;
          continue;
        }
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const OracleRoot &r)
                                           { return std::abs(r.k - k) <= 1e-6; });
        if (!duplicate)
        {
          found.push_back({n, k, residual});
        }
      }
    }
    std::sort(found.begin(), found.end(), [](const OracleRoot &a, const OracleRoot &b)
              { return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag(); });
    out.roots.insert(out.roots.end(), found.begin(), found.end());
  }
  return out;
}

std::vector<Complex> distinct_roots(const RootSearch &search, double tol)
{
  std::vector<Complex> out;
  for (const auto &r : search.roots)
  {
    if (std::none_of(out.begin(), out.end(), [&](Complex z) { return std::abs(z - r.k) <= tol; }))
    {
      out.push_back(r.k);
    }
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b)
            { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return out;
}

Complex ContourMap::point(int row, int col) const
{
  const double fx = resolution > 1 ? static_cast<double>(col) / (resolution - 1) : 0.0;
  const double fy = resolution > 1 ? static_cast<double>(row) / (resolution - 1) : 0.0;
  return {theta.re_min + fx * theta.width(), theta.im_min + fy * theta.height()};
}

ContourMap contour_map(const DiskProblem &problem, const ComplexRect &theta, int resolution)
{
  if (resolution < 16)
  {
    throw ParamError("contour map resolution must be at least 16");
  }
  ContourMap map;
  map.resolution = resolution;
  map.theta = theta;
  map.values.resize(static_cast<std::size_t>(resolution) * resolution);
  for (int row = 0; row < resolution; row++)
  {
    for (int col = 0; col < resolution; col++)
    {
      double best = std::numeric_limits<double>::infinity();
      for (const auto &d : d_all(problem, map.point(row, col)))
      {
        best = std::min(best, std::log10(std::max(std::abs(d), 1e-300)));
      }
      map.values[static_cast<std::size_t>(row) * resolution + col] = best;
    }
  }
  return map;
}

void write_roots_csv(std::ostream &os, const RootSearch &search)
{
  os << "n,re,im,residual\n";
  char buf[128];
  for (const auto &r : search.roots)
  {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.3e\n", r.n, r.k.real(), r.k.imag(), r.residual);
    os << buf;
  }
}

void write_map_csv(std::ostream &os, const ContourMap &map)
{
  os << "re,im,value\n";
  char buf[128];
  for (int row = 0; row < map.resolution; row++)
  {
    for (int col = 0; col < map.resolution; col++)
    {
      const Complex z = map.point(row, col);
      std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f\n", z.real(), z.imag(),
                    map.values[static_cast<std::size_t>(row) * map.resolution + col]);
      os << buf;
    }
  }
}

}  // namespace resonance::oracle
