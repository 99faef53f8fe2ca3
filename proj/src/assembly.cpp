// SPDX-License-Identifier: Apache-2.0

#include "resonance/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "resonance/errors.hpp"
#include "resonance/specfun.hpp"

namespace resonance
{

namespace
{

using Bary = std::array<double, 3>;

struct QuadPoint
{
  Bary bary;
  double weight;  // fraction of the triangle area
};

const std::vector<QuadPoint> &rule_points(QuadratureRule rule)
{
  static const std::vector<QuadPoint> three = {{{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
                                               {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
                                               {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0}};
  static const std::vector<QuadPoint> seven = []
  {
    // Degree-5 symmetric rule on the triangle.
    const double s15 = std::sqrt(15.0);
    const double a = (6.0 - s15) / 21.0, wa = (155.0 - s15) / 1200.0;
    const double b = (6.0 + s15) / 21.0, wb = (155.0 + s15) / 1200.0;
    return std::vector<QuadPoint>{{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
                                  {{1.0 - 2.0 * a, a, a}, wa},
                                  {{a, 1.0 - 2.0 * a, a}, wa},
                                  {{a, a, 1.0 - 2.0 * a}, wa},
                                  {{1.0 - 2.0 * b, b, b}, wb},
                                  {{b, 1.0 - 2.0 * b, b}, wb},
                                  {{b, b, 1.0 - 2.0 * b}, wb}};
  }();
  return rule == QuadratureRule::ThreePoint ? three : seven;
}

// Interior points used to decide whether a (sub)triangle straddles a piece boundary.
const std::vector<Bary> &probe_points()
{
  static const std::vector<Bary> probes = []
  {
    std::vector<Bary> p;
    for (const auto &q : rule_points(QuadratureRule::SevenPoint))
    {
      p.push_back(q.bary);
    }
    p.push_back({0.9, 0.05, 0.05});
    p.push_back({0.05, 0.9, 0.05});
    p.push_back({0.05, 0.05, 0.9});
    return p;
  }();
  return probes;
}

double triangle_area(const Point2 &a, const Point2 &b, const Point2 &c)
{
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

// Zero-valued matrix on the vertex graph of the mesh (diagonal included).
SparseComplexMatrix mesh_pattern(const Mesh &mesh,
                                 const std::vector<int> *clique = nullptr)
{
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; i++)
  {
    adj[i].push_back(i);
  }
  for (const auto &t : mesh.triangles)
  {
    for (int a = 0; a < 3; a++)
    {
      for (int b = 0; b < 3; b++)
      {
        if (a != b)
        {
          adj[t[a]].push_back(t[b]);
        }
      }
    }
  }
  if (clique)
  {
    for (int v : *clique)
    {
      adj[v].insert(adj[v].end(), clique->begin(), clique->end());
    }
  }
  SparseComplexMatrix A;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; i++)
  {
    auto &row = adj[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    A.row_ptr[i + 1] = A.row_ptr[i] + static_cast<int>(row.size());
  }
  A.col_idx.reserve(A.row_ptr[n]);
  for (int i = 0; i < n; i++)
  {
    A.col_idx.insert(A.col_idx.end(), adj[i].begin(), adj[i].end());
  }
  A.values.assign(A.col_idx.size(), Complex(0.0, 0.0));
  return A;
}

template <typename Local>
void scatter(SparseComplexMatrix &A, const std::array<int, 3> &t, const Local &local)
{
  for (int a = 0; a < 3; a++)
  {
    for (int b = 0; b < 3; b++)
    {
      A.values[A.find(t[a], t[b])] += local[a][b];
    }
  }
}

class CutCellIntegrator
{
public:
  CutCellIntegrator(const PotentialSpec &spec, QuadratureRule rule, int max_depth)
    : spec_(spec), rule_(rule_points(rule)), max_depth_(max_depth)
  {
  }

  std::array<std::array<Complex, 3>, 3> integrate(const std::array<Point2, 3> &p)
  {
    p_ = p;
    area_ = triangle_area(p[0], p[1], p[2]);
    for (auto &row : local_)
    {
      row.fill(Complex(0.0, 0.0));
    }
    recurse({Bary{1.0, 0.0, 0.0}, Bary{0.0, 1.0, 0.0}, Bary{0.0, 0.0, 1.0}}, 0);
    return local_;
  }

private:
  Bary to_parent(const std::array<Bary, 3> &sub, const Bary &lam) const
  {
    Bary b{};
    for (int k = 0; k < 3; k++)
    {
      for (int i = 0; i < 3; i++)
      {
        b[i] += lam[k] * sub[k][i];
      }
    }
    return b;
  }

  Point2 physical(const Bary &b) const
  {
    return {b[0] * p_[0].x + b[1] * p_[1].x + b[2] * p_[2].x,
            b[0] * p_[0].y + b[1] * p_[1].y + b[2] * p_[2].y};
  }

  void recurse(const std::array<Bary, 3> &sub, int depth)
  {
    int piece = -2;
    bool mixed = false;
    for (const auto &lam : probe_points())
    {
      const Point2 x = physical(to_parent(sub, lam));
      const int pc = locate(spec_, x.x, x.y);
      if (piece == -2)
      {
        piece = pc;
      }
      else if (pc != piece)
      {
        mixed = true;
        break;
      }
    }
    if (mixed && depth < max_depth_)
    {
      Bary m01{}, m12{}, m20{};
      for (int i = 0; i < 3; i++)
      {
        m01[i] = 0.5 * (sub[0][i] + sub[1][i]);
        m12[i] = 0.5 * (sub[1][i] + sub[2][i]);
        m20[i] = 0.5 * (sub[2][i] + sub[0][i]);
      }
      recurse({sub[0], m01, m20}, depth + 1);
      recurse({m01, sub[1], m12}, depth + 1);
      recurse({m20, m12, sub[2]}, depth + 1);
      recurse({m01, m12, m20}, depth + 1);
      return;
    }
    if (!mixed && piece < 0)
    {
      return;
    }
    const double sub_area = area_ * std::ldexp(1.0, -2 * depth);
    for (const auto &q : rule_)
    {
      const Bary b = to_parent(sub, q.bary);
      const Point2 x = physical(b);
      const int pc = mixed ? locate(spec_, x.x, x.y) : piece;
      if (pc < 0)
      {
        continue;
      }
      const Complex v = eval_piece(spec_, pc, x.x, x.y) * (q.weight * sub_area);
      for (int i = 0; i < 3; i++)
      {
        for (int j = 0; j < 3; j++)
        {
          local_[i][j] += v * (b[i] * b[j]);
        }
      }
    }
  }

  const PotentialSpec &spec_;
  const std::vector<QuadPoint> &rule_;
  int max_depth_;
  std::array<Point2, 3> p_{};
  double area_ = 0.0;
  std::array<std::array<Complex, 3>, 3> local_{};
};

// Moments of the hat function that equals 1 at theta_a and 0 at theta_a + delta, written
// so the O(1) terms that cancel for small n*delta never get formed.
void left_hat_moments(int n, double theta_a, double delta, double &mc, double &ms)
{
  if (n == 0)
  {
    mc = 0.5 * delta;
    ms = 0.0;
    return;
  }
  const double u = n * theta_a;
  const double d = n * delta;
  double d_minus_sin;
  if (d < 0.1)
  {
    // d - sin d = d^3/3! - d^5/5! + ...
    const double d2 = d * d;
    d_minus_sin = d * d2 / 6.0 * (1.0 - d2 / 20.0 * (1.0 - d2 / 42.0 * (1.0 - d2 / 72.0)));
  }
  else
  {
    d_minus_sin = d - std::sin(d);
  }
  const double half_sin = std::sin(0.5 * d);
  const double one_minus_cos = 2.0 * half_sin * half_sin;
  const double cu = std::cos(u), su = std::sin(u);
  const double scale = 1.0 / (n * d);
  mc = (cu * one_minus_cos - su * d_minus_sin) * scale;
  ms = (cu * d_minus_sin + su * one_minus_cos) * scale;
}

}  // namespace

SparseComplexMatrix SparseComplexMatrix::from_triplets(int n, const std::vector<Triplet> &triplets)
{
  std::vector<Triplet> t = triplets;
  for (const auto &e : t)
  {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
    {
      throw DimensionError("triplet index out of range");
    }
  }
  std::stable_sort(t.begin(), t.end(), [](const Triplet &a, const Triplet &b)
                   { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  SparseComplexMatrix A;
  A.n = n;
  A.row_ptr.assign(n + 1, 0);
  for (std::size_t k = 0; k < t.size(); k++)
  {
    if (k > 0 && t[k].row == t[k - 1].row && t[k].col == t[k - 1].col)
    {
      A.values.back() += t[k].value;
      continue;
    }
    A.col_idx.push_back(t[k].col);
    A.values.push_back(t[k].value);
    A.row_ptr[t[k].row + 1]++;
  }
  for (int i = 0; i < n; i++)
  {
    A.row_ptr[i + 1] += A.row_ptr[i];
  }
  return A;
}

SparseComplexMatrix SparseComplexMatrix::identity(int n)
{
  SparseComplexMatrix A;
  A.n = n;
  A.row_ptr.resize(n + 1);
  for (int i = 0; i <= n; i++)
  {
    A.row_ptr[i] = i;
  }
  A.col_idx.resize(n);
  for (int i = 0; i < n; i++)
  {
    A.col_idx[i] = i;
  }
  A.values.assign(n, Complex(1.0, 0.0));
  return A;
}

long SparseComplexMatrix::find(int i, int j) const
{
  const auto begin = col_idx.begin() + row_ptr[i];
  const auto end = col_idx.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  return (it != end && *it == j) ? static_cast<long>(it - col_idx.begin()) : -1;
}

Complex SparseComplexMatrix::coeff(int i, int j) const
{
  const long p = find(i, j);
  return p < 0 ? Complex(0.0, 0.0) : values[p];
}

ComplexVector SparseComplexMatrix::multiply(const ComplexVector &x) const
{
  if (static_cast<int>(x.size()) != n)
  {
    throw DimensionError("matrix-vector size mismatch");
  }
  ComplexVector y(n);
  for (int i = 0; i < n; i++)
  {
    Complex acc(0.0, 0.0);
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      acc += values[p] * x[col_idx[p]];
    }
    y[i] = acc;
  }
  return y;
}

double SparseComplexMatrix::norm_inf() const
{
  double best = 0.0;
  for (int i = 0; i < n; i++)
  {
    double row = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      row += std::abs(values[p]);
    }
    best = std::max(best, row);
  }
  return best;
}

bool SparseComplexMatrix::is_structurally_symmetric() const
{
  for (int i = 0; i < n; i++)
  {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      if (find(col_idx[p], i) < 0)
      {
        return false;
      }
    }
  }
  return true;
}

bool SparseComplexMatrix::is_symmetric(double tol) const
{
  double scale = 0.0;
  for (const auto &v : values)
  {
    scale = std::max(scale, std::abs(v));
  }
  for (int i = 0; i < n; i++)
  {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      if (std::abs(values[p] - coeff(col_idx[p], i)) > tol * scale)
      {
        return false;
      }
    }
  }
  return true;
}

void SparseComplexMatrix::write_coo(std::ostream &os) const
{
  os << std::setprecision(17);
  for (int i = 0; i < n; i++)
  {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      os << i << " " << col_idx[p] << " " << values[p].real() << " " << values[p].imag()
         << "\n";
    }
  }
}

SparseComplexMatrix assemble_stiffness(const Mesh &mesh)
{
  SparseComplexMatrix S = mesh_pattern(mesh);
  for (const auto &t : mesh.triangles)
  {
    const Point2 &p0 = mesh.vertices[t[0]], &p1 = mesh.vertices[t[1]], &p2 = mesh.vertices[t[2]];
    const double area = triangle_area(p0, p1, p2);
    // Edge opposite each vertex; grad(phi_i) is that edge rotated by 90 degrees over 2A.
    const double ex[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    const double ey[3] = {p2.y - p1.y, p0.y - p2.y, p1.y - p0.y};
    double local[3][3];
    for (int a = 0; a < 3; a++)
    {
      for (int b = 0; b < 3; b++)
      {
        local[a][b] = (ex[a] * ex[b] + ey[a] * ey[b]) / (4.0 * area);
      }
    }
    scatter(S, t, local);
  }
  return S;
}

SparseComplexMatrix assemble_mass(const Mesh &mesh)
{
  SparseComplexMatrix M = mesh_pattern(mesh);
  for (const auto &t : mesh.triangles)
  {
    const double area =
        triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    double local[3][3];
    for (int a = 0; a < 3; a++)
    {
      for (int b = 0; b < 3; b++)
      {
        local[a][b] = area / 12.0 * (a == b ? 2.0 : 1.0);
      }
    }
    scatter(M, t, local);
  }
  return M;
}

SparseComplexMatrix assemble_potential(const Mesh &mesh, const PotentialSpec &spec,
                                       const PotentialQuadrature &quad)
{
  SparseComplexMatrix MV = mesh_pattern(mesh);
  if (spec.pieces.empty())
  {
    return MV;
  }
  int depth = quad.max_cut_depth;
  if (depth < 0)
  {
    const double h = mesh.h > 0.0 ? mesh.h : mesh_stats(mesh).h;
    depth = std::clamp(static_cast<int>(std::ceil(std::log2(1.0 / h))) + 2, 2, 12);
  }
  CutCellIntegrator integrator(spec, quad.rule, depth);
  for (const auto &t : mesh.triangles)
  {
    const auto local =
        integrator.integrate({mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]});
    scatter(MV, t, local);
  }
  return MV;
}

ComplexVector BoundaryModes::c(int n) const
{
  ComplexVector v(dim, Complex(0.0, 0.0));
  for (std::size_t a = 0; a < vertices.size(); a++)
  {
    v[vertices[a]] = cos_moments(static_cast<Eigen::Index>(a), n);
  }
  return v;
}

ComplexVector BoundaryModes::s(int n) const
{
  ComplexVector v(dim, Complex(0.0, 0.0));
  for (std::size_t a = 0; a < vertices.size(); a++)
  {
    v[vertices[a]] = sin_moments(static_cast<Eigen::Index>(a), n);
  }
  return v;
}

BoundaryModes assemble_boundary_modes(const Mesh &mesh, int N)
{
  if (N < 0 || N > specfun::kMaxOrder - 1)
  {
    throw ParamError("DtN truncation order must lie in [0, " +
                     std::to_string(specfun::kMaxOrder - 1) + "]");
  }
  BoundaryModes modes;
  modes.N = N;
  modes.R = mesh.radius;
  modes.dim = static_cast<int>(mesh.vertices.size());

  std::vector<int> row_of(mesh.vertices.size(), -1);
  for (const auto &e : mesh.boundary_edges)
  {
    for (int v : {e.a, e.b})
    {
      if (row_of[v] < 0)
      {
        row_of[v] = static_cast<int>(modes.vertices.size());
        modes.vertices.push_back(v);
      }
    }
  }
  const auto nb = static_cast<Eigen::Index>(modes.vertices.size());
  modes.cos_moments = Eigen::MatrixXd::Zero(nb, N + 1);
  modes.sin_moments = Eigen::MatrixXd::Zero(nb, N + 1);
  for (const auto &e : mesh.boundary_edges)
  {
    const double delta = e.theta_b - e.theta_a;
    for (int n = 0; n <= N; n++)
    {
      double mc, ms;
      left_hat_moments(n, e.theta_a, delta, mc, ms);
      modes.cos_moments(row_of[e.a], n) += mc;
      modes.sin_moments(row_of[e.a], n) += ms;
      // The hat rising towards theta_b is the mirror image under theta -> -theta.
      left_hat_moments(n, -e.theta_b, delta, mc, ms);
      modes.cos_moments(row_of[e.b], n) += mc;
      modes.sin_moments(row_of[e.b], n) -= ms;
    }
  }
  return modes;
}

OperatorBundle build_bundle(std::shared_ptr<const Mesh> mesh, const PotentialSpec &spec, int N,
                            const PotentialQuadrature &quad)
{
  if (!mesh)
  {
    throw ParamError("operator bundle needs a mesh");
  }
  if (spec.support > mesh->radius * (1.0 + 1e-12))
  {
    throw ParamError("potential support radius " + std::to_string(spec.support) +
                     " exceeds the truncation radius " + std::to_string(mesh->radius));
  }
  OperatorBundle b;
  b.mesh = mesh;
  b.R = mesh->radius;
  b.N = N;
  b.S = assemble_stiffness(*mesh);
  b.M = assemble_mass(*mesh);
  b.MV = assemble_potential(*mesh, spec, quad);
  b.modes = assemble_boundary_modes(*mesh, N);

  b.pattern = mesh_pattern(*mesh, &b.modes.vertices);
  b.mesh_to_pattern.resize(b.S.nnz());
  for (int i = 0; i < b.S.n; i++)
  {
    for (int p = b.S.row_ptr[i]; p < b.S.row_ptr[i + 1]; p++)
    {
      b.mesh_to_pattern[p] = b.pattern.find(i, b.S.col_idx[p]);
    }
  }
  const std::size_t nb = b.modes.vertices.size();
  b.boundary_block.resize(nb * nb);
  for (std::size_t a = 0; a < nb; a++)
  {
    for (std::size_t c = 0; c < nb; c++)
    {
      b.boundary_block[a * nb + c] = b.pattern.find(b.modes.vertices[a], b.modes.vertices[c]);
    }
  }

  const int J = b.S.n;
  const int m = b.num_modes();
  std::vector<Triplet> trip;
  trip.reserve(b.S.nnz() + 2 * nb * m + m);
  for (int i = 0; i < J; i++)
  {
    for (int p = b.S.row_ptr[i]; p < b.S.row_ptr[i + 1]; p++)
    {
      trip.push_back({i, b.S.col_idx[p], Complex(1.0, 0.0)});
    }
  }
  for (int q = 0; q < m; q++)
  {
    for (std::size_t a = 0; a < nb; a++)
    {
      trip.push_back({b.modes.vertices[a], J + q, Complex(1.0, 0.0)});
      trip.push_back({J + q, b.modes.vertices[a], Complex(1.0, 0.0)});
    }
    trip.push_back({J + q, J + q, Complex(1.0, 0.0)});
  }
  b.bordered = SparseComplexMatrix::from_triplets(J + m, trip);
  std::fill(b.bordered.values.begin(), b.bordered.values.end(), Complex(0.0, 0.0));
  b.mesh_to_bordered.resize(b.S.nnz());
  for (int i = 0; i < J; i++)
  {
    for (int p = b.S.row_ptr[i]; p < b.S.row_ptr[i + 1]; p++)
    {
      b.mesh_to_bordered[p] = b.bordered.find(i, b.S.col_idx[p]);
    }
  }
  b.border_right.resize(static_cast<std::size_t>(m) * nb);
  b.border_below.resize(static_cast<std::size_t>(m) * nb);
  b.border_diag.resize(m);
  for (int q = 0; q < m; q++)
  {
    for (std::size_t a = 0; a < nb; a++)
    {
      b.border_right[q * nb + a] = b.bordered.find(b.modes.vertices[a], J + q);
      b.border_below[q * nb + a] = b.bordered.find(J + q, b.modes.vertices[a]);
    }
    b.border_diag[q] = b.bordered.find(J + q, J + q);
  }
  return b;
}

ComplexVector dtn_coefficients(const OperatorBundle &bundle, Complex k)
{
  ComplexVector beta = specfun::dtn_symbols(bundle.N, k, bundle.R);
  for (auto &v : beta)
  {
    v *= bundle.R;
  }
  beta[0] *= 0.5;
  return beta;
}

ComplexVector dtn_coefficient_derivatives(const OperatorBundle &bundle, Complex k)
{
  // beta_n = (R/pi) z q(z) with z = kR and q = H_n'/H_n, which obeys the Riccati equation
  // q' = -q/z - (1 - n^2/z^2) - q^2 (Bessel's equation).
  const ComplexVector symbols = specfun::dtn_symbols(bundle.N, k, bundle.R);
  const double R = bundle.R;
  const Complex z = k * R;
  ComplexVector d(symbols.size());
  for (std::size_t n = 0; n < symbols.size(); n++)
  {
    const Complex q = std::numbers::pi * symbols[n] / k;
    const double nn = static_cast<double>(n * n);
    const Complex dq = -q / z - (1.0 - nn / (z * z)) - q * q;
    d[n] = (R / std::numbers::pi) * (q + z * dq) * R;
  }
  d[0] *= 0.5;
  return d;
}

Eigen::MatrixXcd boundary_block(const OperatorBundle &bundle, Complex k)
{
  const ComplexVector beta = dtn_coefficients(bundle, k);
  const Eigen::Map<const Eigen::VectorXcd> w(beta.data(), static_cast<Eigen::Index>(beta.size()));
  const Eigen::MatrixXcd C = bundle.modes.cos_moments.cast<Complex>();
  const Eigen::MatrixXcd S = bundle.modes.sin_moments.cast<Complex>();
  Eigen::MatrixXcd E = (C * w.asDiagonal()) * C.transpose();
  E.noalias() += (S * w.asDiagonal()) * S.transpose();
  return E;
}

SparseComplexMatrix assemble_F(const OperatorBundle &bundle, Complex k)
{
  const Eigen::MatrixXcd E = boundary_block(bundle, k);
  SparseComplexMatrix F;
  F.n = bundle.pattern.n;
  F.row_ptr = bundle.pattern.row_ptr;
  F.col_idx = bundle.pattern.col_idx;
  F.values.assign(F.col_idx.size(), Complex(0.0, 0.0));
  const Complex k2 = k * k;
  for (std::size_t p = 0; p < bundle.S.nnz(); p++)
  {
    F.values[bundle.mesh_to_pattern[p]] =
        bundle.S.values[p] + bundle.MV.values[p] - k2 * bundle.M.values[p];
  }
  const auto nb = static_cast<Eigen::Index>(bundle.modes.vertices.size());
  for (Eigen::Index a = 0; a < nb; a++)
  {
    for (Eigen::Index c = 0; c < nb; c++)
    {
      F.values[bundle.boundary_block[a * nb + c]] -= E(a, c);
    }
  }
  return F;
}

namespace
{

// y -= sum_n w_n (c_n c_n^T + s_n s_n^T) x
void subtract_boundary(const OperatorBundle &bundle, const ComplexVector &w,
                       const ComplexVector &x, ComplexVector &y)
{
  const auto &modes = bundle.modes;
  const auto nb = static_cast<Eigen::Index>(modes.vertices.size());
  Eigen::VectorXcd xb(nb);
  for (Eigen::Index a = 0; a < nb; a++)
  {
    xb(a) = x[modes.vertices[a]];
  }
  const Eigen::VectorXcd pc = modes.cos_moments.transpose().cast<Complex>() * xb;
  const Eigen::VectorXcd ps = modes.sin_moments.transpose().cast<Complex>() * xb;
  Eigen::VectorXcd wc(pc.size()), ws(ps.size());
  for (Eigen::Index n = 0; n < pc.size(); n++)
  {
    wc(n) = w[n] * pc(n);
    ws(n) = w[n] * ps(n);
  }
  const Eigen::VectorXcd ex = modes.cos_moments.cast<Complex>() * wc +
                              modes.sin_moments.cast<Complex>() * ws;
  for (Eigen::Index a = 0; a < nb; a++)
  {
    y[modes.vertices[a]] -= ex(a);
  }
}

void check_length(const OperatorBundle &bundle, const ComplexVector &x)
{
  if (static_cast<int>(x.size()) != bundle.dim())
  {
    throw DimensionError("vector has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(bundle.dim()));
  }
}

}  // namespace

ComplexVector apply_F(const OperatorBundle &bundle, Complex k, const ComplexVector &x)
{
  check_length(bundle, x);
  ComplexVector y = bundle.S.multiply(x);
  const ComplexVector mv = bundle.MV.multiply(x);
  const ComplexVector m = bundle.M.multiply(x);
  const Complex k2 = k * k;
  for (std::size_t i = 0; i < y.size(); i++)
  {
    y[i] += mv[i] - k2 * m[i];
  }
  subtract_boundary(bundle, dtn_coefficients(bundle, k), x, y);
  return y;
}

ComplexVector apply_dF(const OperatorBundle &bundle, Complex k, const ComplexVector &x)
{
  check_length(bundle, x);
  ComplexVector y = bundle.M.multiply(x);
  for (auto &v : y)
  {
    v *= -2.0 * k;
  }
  subtract_boundary(bundle, dtn_coefficient_derivatives(bundle, k), x, y);
  return y;
}

SparseComplexMatrix assemble_bordered(const OperatorBundle &bundle, Complex k)
{
  const ComplexVector beta = dtn_coefficients(bundle, k);
  SparseComplexMatrix A;
  A.n = bundle.bordered.n;
  A.row_ptr = bundle.bordered.row_ptr;
  A.col_idx = bundle.bordered.col_idx;
  A.values.assign(A.col_idx.size(), Complex(0.0, 0.0));
  const Complex k2 = k * k;
  for (std::size_t p = 0; p < bundle.S.nnz(); p++)
  {
    A.values[bundle.mesh_to_bordered[p]] =
        bundle.S.values[p] + bundle.MV.values[p] - k2 * bundle.M.values[p];
  }
  const auto &modes = bundle.modes;
  const std::size_t nb = modes.vertices.size();
  const int N = bundle.N;
  for (int q = 0; q < bundle.num_modes(); q++)
  {
    const bool cosine = q <= N;
    const int n = cosine ? q : q - N;
    for (std::size_t a = 0; a < nb; a++)
    {
      const double moment = cosine ? modes.cos_moments(a, n) : modes.sin_moments(a, n);
      A.values[bundle.border_right[q * nb + a]] = moment;
      A.values[bundle.border_below[q * nb + a]] = beta[n] * moment;
    }
    A.values[bundle.border_diag[q]] = 1.0;
  }
  return A;
}

}  // namespace resonance
