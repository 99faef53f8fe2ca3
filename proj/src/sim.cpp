// SPDX-License-Identifier: Apache-2.0

#include "resonance/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <numeric>
#include <ostream>
#include <thread>
#include <utility>

#include "resonance/errors.hpp"

namespace resonance
{

namespace
{

bool canonical_less(Complex a, Complex b)
{
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

// Runs fn(0..n-1) on up to `workers` threads; rethrows the first exception by index order.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn &&fn)
{
  const std::size_t nt = std::min<std::size_t>(std::max(workers, 1), n);
  if (nt <= 1)
  {
    for (std::size_t i = 0; i < n; i++)
    {
      fn(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&]()
  {
    for (std::size_t i = next++; i < n; i = next++)
    {
      try
      {
        fn(i);
      }
      catch (...)
      {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nt; t++)
  {
    pool.emplace_back(work);
  }
  for (auto &t : pool)
  {
    t.join();
  }
  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }
}

Complex bilinear(const ComplexVector &a, const ComplexVector &b)
{
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); i++)
  {
    s += a[i] * b[i];
  }
  return s;
}

// Unit 2-norm with the largest-magnitude entry real and positive.
void normalize_phase(ComplexVector &u)
{
  const double nu = norm2(u);
  if (!(nu > 0.0))
  {
    return;
  }
  std::size_t imax = 0;
  for (std::size_t i = 1; i < u.size(); i++)
  {
    if (std::abs(u[i]) > std::abs(u[imax]))
    {
      imax = i;
    }
  }
  const Complex phase = std::abs(u[imax]) > 0.0 ? std::conj(u[imax]) / std::abs(u[imax]) : 1.0;
  for (auto &e : u)
  {
    e *= phase / nu;
  }
}

class BorderedSolver : public LinearSolver
{
public:
  BorderedSolver(SparseComplexMatrix A, std::shared_ptr<const SymbolicLU> symbolic, int dim)
    : fact_(std::move(A), std::move(symbolic)), dim_(dim)
  {
  }

  int dim() const override { return dim_; }

  ComplexVector solve(const ComplexVector &b) const override
  {
    if (static_cast<int>(b.size()) != dim_)
    {
      throw DimensionError("right-hand side has length " + std::to_string(b.size()) +
                           ", expected " + std::to_string(dim_));
    }
    ComplexVector rhs(b);
    rhs.resize(fact_.dim(), Complex(0.0, 0.0));
    ComplexVector x = fact_.solve(rhs);
    x.resize(dim_);
    return x;
  }

private:
  Factorization fact_;
  int dim_;
};

class DiagonalSolver : public LinearSolver
{
public:
  explicit DiagonalSolver(ComplexVector inverse) : inverse_(std::move(inverse)) {}

  int dim() const override { return static_cast<int>(inverse_.size()); }

  ComplexVector solve(const ComplexVector &b) const override
  {
    if (b.size() != inverse_.size())
    {
      throw DimensionError("right-hand side length does not match the diagonal");
    }
    ComplexVector x(b.size());
    for (std::size_t i = 0; i < b.size(); i++)
    {
      x[i] = inverse_[i] * b[i];
    }
    return x;
  }

private:
  ComplexVector inverse_;
};

void check_dim(const ComplexVector &x, int n)
{
  if (static_cast<int>(x.size()) != n)
  {
    throw DimensionError("vector has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(n));
  }
}

std::unique_ptr<LinearSolver> factor_nonsingular(const MatrixFunction &F, Complex &k)
{
  try
  {
    return F.factor(k);
  }
  catch (const SingularError &)
  {
    // k is an eigenvalue to working precision; the eigenvector is unchanged by a shift of
    // one ulp and the shifted matrix can be factored.
    k += Complex(1e-14 * std::max(1.0, std::abs(k)), 0.0);
    return F.factor(k);
  }
}

struct Candidate
{
  SearchRegion region;
  std::vector<double> indicators;
};

struct Outcome
{
  IndicatorValue value;
  bool rotated = false;
  bool aborted = false;
};

}  // namespace

FemFunction::FemFunction(std::shared_ptr<const OperatorBundle> bundle)
  : bundle_(std::move(bundle))
{
  if (!bundle_)
  {
    throw ParamError("finite element function needs an operator bundle");
  }
  LUOptions options;
  options.symmetric = true;
  options.metis = true;
  options.refinement_steps = 0;
  symbolic_ = std::make_shared<const SymbolicLU>(bundle_->bordered, options);
}

int FemFunction::dim() const
{
  return bundle_->dim();
}

std::unique_ptr<LinearSolver> FemFunction::factor(Complex z) const
{
  return std::make_unique<BorderedSolver>(assemble_bordered(*bundle_, z), symbolic_, dim());
}

ComplexVector FemFunction::apply(Complex z, const ComplexVector &x) const
{
  return apply_F(*bundle_, z, x);
}

ComplexVector FemFunction::apply_derivative(Complex z, const ComplexVector &x) const
{
  return apply_dF(*bundle_, z, x);
}

double FemFunction::norm_inf(Complex z) const
{
  return assemble_F(*bundle_, z).norm_inf();
}

DiagonalFunction::DiagonalFunction(std::vector<Complex> poles) : poles_(std::move(poles))
{
  if (poles_.empty())
  {
    throw DimensionError("diagonal function needs at least one entry");
  }
}

int DiagonalFunction::dim() const
{
  return static_cast<int>(poles_.size());
}

std::unique_ptr<LinearSolver> DiagonalFunction::factor(Complex z) const
{
  ComplexVector inv(poles_.size());
  for (std::size_t i = 0; i < poles_.size(); i++)
  {
    const Complex d = z - poles_[i];
    if (d == Complex(0.0, 0.0))
    {
      throw SingularError("diagonal entry vanishes", i);
    }
    inv[i] = 1.0 / d;
  }
  return std::make_unique<DiagonalSolver>(std::move(inv));
}

ComplexVector DiagonalFunction::apply(Complex z, const ComplexVector &x) const
{
  check_dim(x, dim());
  ComplexVector y(x.size());
  for (std::size_t i = 0; i < x.size(); i++)
  {
    y[i] = (z - poles_[i]) * x[i];
  }
  return y;
}

ComplexVector DiagonalFunction::apply_derivative(Complex, const ComplexVector &x) const
{
  check_dim(x, dim());
  return x;
}

double DiagonalFunction::norm_inf(Complex z) const
{
  double m = 0.0;
  for (const auto &p : poles_)
  {
    m = std::max(m, std::abs(z - p));
  }
  return m;
}

ScalarFunction::ScalarFunction(std::function<Complex(Complex)> f,
                               std::function<Complex(Complex)> df)
  : f_(std::move(f)), df_(std::move(df))
{
}

ScalarFunction ScalarFunction::planted(std::vector<Complex> roots)
{
  auto f = [roots](Complex z)
  {
    Complex p(1.0, 0.0);
    for (const auto &r : roots)
    {
      p *= z - r;
    }
    return p;
  };
  auto df = [roots](Complex z)
  {
    Complex s(0.0, 0.0);
    for (std::size_t m = 0; m < roots.size(); m++)
    {
      Complex p(1.0, 0.0);
      for (std::size_t l = 0; l < roots.size(); l++)
      {
        if (l != m)
        {
          p *= z - roots[l];
        }
      }
      s += p;
    }
    return s;
  };
  return ScalarFunction(f, df);
}

std::unique_ptr<LinearSolver> ScalarFunction::factor(Complex z) const
{
  const Complex v = f_(z);
  if (v == Complex(0.0, 0.0))
  {
    throw SingularError("scalar function vanishes", 0);
  }
  return std::make_unique<DiagonalSolver>(ComplexVector{1.0 / v});
}

ComplexVector ScalarFunction::apply(Complex z, const ComplexVector &x) const
{
  check_dim(x, 1);
  return {f_(z) * x[0]};
}

ComplexVector ScalarFunction::apply_derivative(Complex z, const ComplexVector &x) const
{
  check_dim(x, 1);
  return {df_(z) * x[0]};
}

double ScalarFunction::norm_inf(Complex z) const
{
  return std::abs(f_(z));
}

void validate(const SimConfig &config)
{
  if (config.n_omega < 8 || config.n_omega % 2 != 0)
  {
    throw ParamError("n_omega must be even and at least 8");
  }
  if (!(config.tol_eps > 0.0) || !(config.tol_eps < config.r0))
  {
    throw ParamError("need 0 < tol_eps < r0");
  }
  if (!(config.tol_ind > 0.0) || !(config.tol_ind < 1.0))
  {
    throw ParamError("need 0 < tol_ind < 1");
  }
  if (!(config.cover_margin >= 1.0))
  {
    throw ParamError("cover_margin must be at least 1");
  }
  if (config.workers < 1 || config.max_levels < 1 || config.max_live < 1)
  {
    throw ParamError("workers, max_levels and max_live must be positive");
  }
  if (!(config.near_pole_tol > 0.0))
  {
    throw ParamError("near_pole_tol must be positive");
  }
}

std::vector<SearchRegion> initial_regions(const ComplexRect &theta, const SimConfig &config)
{
  validate(config);
  if (!(theta.width() > 0.0) || !(theta.height() > 0.0))
  {
    throw ParamError("search rectangle must have positive width and height");
  }
  const bool quadtree = config.subdivision == Subdivision::Quadtree;
  const double margin = quadtree ? config.cover_margin : 1.0;
  const double side = std::numbers::sqrt2 * config.r0 / margin;
  const int nx = std::max(1, static_cast<int>(std::ceil(theta.width() / side - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(theta.height() / side - 1e-9)));
  const double hw = theta.width() / (2.0 * nx);
  const double hh = theta.height() / (2.0 * ny);
  std::vector<SearchRegion> out;
  out.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; j++)
  {
    for (int i = 0; i < nx; i++)
    {
      SearchRegion r;
      r.center = {theta.re_min + (2 * i + 1) * hw, theta.im_min + (2 * j + 1) * hh};
      r.level = 1;
      if (quadtree)
      {
        r.half_width = hw;
        r.half_height = hh;
        r.radius = margin * std::hypot(hw, hh);
      }
      else
      {
        r.radius = config.r0;
      }
      r.history = {r.center};
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<SearchRegion> children(const SearchRegion &parent, const SimConfig &config)
{
  std::vector<SearchRegion> out;
  const double signs[4][2] = {{-1, -1}, {1, -1}, {-1, 1}, {1, 1}};
  for (const auto &s : signs)
  {
    SearchRegion c;
    c.level = parent.level + 1;
    if (config.subdivision == Subdivision::Quadtree)
    {
      c.half_width = 0.5 * parent.half_width;
      c.half_height = 0.5 * parent.half_height;
      c.center = parent.center + Complex(s[0] * c.half_width, s[1] * c.half_height);
      c.radius = 0.5 * parent.radius;
    }
    else
    {
      c.center = parent.center + 0.5 * parent.radius * Complex(s[0], s[1]);
      c.radius = parent.radius / std::numbers::sqrt2;
    }
    c.history = parent.history;
    c.history.push_back(c.center);
    out.push_back(std::move(c));
  }
  return out;
}

Projection projection(const MatrixFunction &F, const SearchRegion &region, const ComplexVector &f,
                      int n_points, double rotation, double near_pole_tol)
{
  if (n_points < 2 || n_points % 2 != 0)
  {
    throw ParamError("quadrature needs an even number of nodes");
  }
  if (!(region.radius > 0.0))
  {
    throw ParamError("region radius must be positive");
  }
  check_dim(f, F.dim());
  const double nf = norm2(f);
  Projection p;
  p.full.assign(f.size(), Complex(0.0, 0.0));
  p.half.assign(f.size(), Complex(0.0, 0.0));
  for (int j = 0; j < n_points; j++)
  {
    const double angle = 2.0 * std::numbers::pi * j / n_points + rotation;
    const Complex offset = std::polar(region.radius, angle);
    const Complex z = region.center + offset;
    ComplexVector x;
    double residual = 0.0;
    try
    {
      x = F.factor(z)->solve(f);
      const ComplexVector Fx = F.apply(z, x);
      double num = 0.0;
      for (std::size_t i = 0; i < f.size(); i++)
      {
        num += std::norm(Fx[i] - f[i]);
      }
      residual = nf > 0.0 ? std::sqrt(num) / nf : std::sqrt(num);
    }
    catch (const SingularError &)
    {
      residual = std::numeric_limits<double>::infinity();
    }
    if (!(residual <= near_pole_tol))
    {
      throw NearPoleError("solve at a quadrature node failed its residual check", z, residual);
    }
    p.max_residual = std::max(p.max_residual, residual);
    p.max_solution = std::max(p.max_solution, norm2(x));
    p.nodes.push_back(z);
    p.node_residuals.push_back(residual);
    const Complex wf = offset / static_cast<double>(n_points);
    for (std::size_t i = 0; i < f.size(); i++)
    {
      p.full[i] += wf * x[i];
    }
    if (j % 2 == 0)
    {
      for (std::size_t i = 0; i < f.size(); i++)
      {
        p.half[i] += 2.0 * wf * x[i];
      }
    }
  }
  return p;
}

ComplexVector projection_apply(const MatrixFunction &F, const SearchRegion &region,
                               const ComplexVector &f, int n_points)
{
  return projection(F, region, f, n_points).full;
}

IndicatorValue indicator(const MatrixFunction &F, const SearchRegion &region,
                         const SimConfig &config, const ComplexVector &f, double rotation)
{
  const Projection p = projection(F, region, f, config.n_omega, rotation, config.near_pole_tol);
  IndicatorValue out;
  out.norm_full = norm2(p.full);
  out.norm_half = norm2(p.half);
  out.max_residual = p.max_residual;
  out.nodes = p.nodes;
  out.node_residuals = p.node_residuals;
  const double floor =
      1e3 * std::numeric_limits<double>::epsilon() * region.radius * p.max_solution;
  if (out.norm_full <= floor || out.norm_half <= floor)
  {
    out.degenerate = true;
    return out;
  }
  out.value = out.norm_full / (std::sqrt(static_cast<double>(config.n_omega)) * out.norm_half);
  return out;
}

IndicatorValue indicator(const MatrixFunction &F, const SearchRegion &region,
                         const SimConfig &config)
{
  return indicator(F, region, config, probe_vector(F.dim(), config.seed));
}

ComplexVector probe_vector(int dim, std::uint64_t seed)
{
  return random_unit_vector(dim, seed);
}

namespace
{

std::vector<std::vector<std::size_t>> clusters(const std::vector<Complex> &points, double tol)
{
  const std::size_t n = points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i)
  {
    while (parent[i] != i)
    {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = i + 1; j < n; j++)
    {
      if (std::abs(points[i] - points[j]) <= 2.0 * tol)
      {
        parent[root(i)] = root(j);
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; i++)
  {
    const std::size_t r = root(i);
    if (slot[r] < 0)
    {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

Complex centroid(const std::vector<Complex> &points, const std::vector<std::size_t> &members)
{
  Complex s(0.0, 0.0);
  for (auto i : members)
  {
    s += points[i];
  }
  return s / static_cast<double>(members.size());
}

}  // namespace

std::vector<Complex> deduplicate(const std::vector<Complex> &candidates, double tol)
{
  std::vector<Complex> out;
  for (const auto &members : clusters(candidates, tol))
  {
    out.push_back(centroid(candidates, members));
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

EigenPair smallest_eigenpair(const MatrixFunction &F, Complex k, std::uint64_t seed)
{
  Complex kf = k;
  const auto solver = factor_nonsingular(F, kf);
  const auto apply = [&](const ComplexVector &x) { return F.apply(kf, x); };
  const InverseIterationResult ii =
      inverse_iteration(*solver, apply, std::max(F.norm_inf(k), 1e-300), 1e-13, 50, seed);
  EigenPair out;
  out.k = k;
  out.u = ii.u;
  normalize_phase(out.u);
  out.residual = norm2(F.apply(k, out.u));
  out.converged = ii.converged;
  return out;
}

ResonanceResult extract_eigenpair(const MatrixFunction &F, Complex k, const SimConfig &config,
                                  double max_shift)
{
  ResonanceResult r;
  r.center = k;
  Complex kk = k;
  if (config.polish)
  {
    bool converged = false;
    ComplexVector u;
    for (int it = 1; it <= 25; it++)
    {
      Complex kf = kk;
      const auto solver = factor_nonsingular(F, kf);
      if (kf != kk)
      {
        converged = true;
        break;
      }
      const auto apply = [&](const ComplexVector &x) { return F.apply(kk, x); };
      u = inverse_iteration(*solver, apply, 1.0, 0.0, u.empty() ? 4 : 2, config.seed, u).u;
      const Complex p = bilinear(u, F.apply(kk, u));
      const Complex dp = bilinear(u, F.apply_derivative(kk, u));
      r.newton_iterations = it;
      if (dp == Complex(0.0, 0.0) || !std::isfinite(std::abs(p / dp)))
      {
        break;
      }
      const Complex step = p / dp;
      kk -= step;
      if (!(std::abs(kk - k) <= max_shift))
      {
        break;
      }
      if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(kk)))
      {
        converged = true;
        break;
      }
    }
    r.polished = converged && std::abs(kk - k) <= max_shift;
    if (!r.polished)
    {
      kk = k;
    }
  }
  const EigenPair e = smallest_eigenpair(F, kk, config.seed);
  r.k = kk;
  r.u = e.u;
  r.residual = e.residual;
  const double scale = F.norm_inf(kk);
  r.relative_residual = scale > 0.0 ? e.residual / scale : e.residual;
  r.converged = e.converged;
  return r;
}

SearchResult search(const MatrixFunction &F, const ComplexRect &theta, const SimConfig &config)
{
  validate(config);
  const ComplexVector f = probe_vector(F.dim(), config.seed);
  const double rotation = std::numbers::pi / config.n_omega;

  SearchResult result;
  std::vector<Candidate> live;
  for (auto &r : initial_regions(theta, config))
  {
    live.push_back({std::move(r), {}});
  }
  std::vector<Candidate> accepted;
  int level = 0;
  while (!live.empty())
  {
    level++;
    if (level > config.max_levels)
    {
      throw BudgetError("search did not reach tol_eps within " +
                        std::to_string(config.max_levels) + " levels");
    }
    std::vector<Outcome> outcomes(live.size());
    parallel_for(live.size(), config.workers,
                 [&](std::size_t i)
                 {
                   Outcome &o = outcomes[i];
                   try
                   {
                     o.value = indicator(F, live[i].region, config, f);
                   }
                   catch (const NearPoleError &)
                   {
                     o.rotated = true;
                     try
                     {
                       o.value = indicator(F, live[i].region, config, f, rotation);
                     }
                     catch (const NearPoleError &)
                     {
                       o.aborted = true;
                     }
                   }
                 });

    std::vector<Candidate> next;
    for (std::size_t i = 0; i < live.size(); i++)
    {
      const Outcome &o = outcomes[i];
      Candidate &c = live[i];
      result.regions_evaluated++;
      result.solves += static_cast<std::size_t>(config.n_omega) * (o.rotated ? 2 : 1);
      TraceEntry t{c.region.level, c.region.center, c.region.radius, o.value.value, ""};
      if (o.aborted)
      {
        t.decision = "on-contour";
        result.flagged.push_back(c.region);
      }
      else if (o.value.degenerate)
      {
        t.decision = "degenerate";
      }
      else if (!(o.value.value > config.tol_ind))
      {
        t.decision = "discard";
      }
      else
      {
        c.indicators.push_back(o.value.value);
        if (c.region.radius <= config.tol_eps)
        {
          t.decision = "accept";
          accepted.push_back(c);
        }
        else
        {
          t.decision = "subdivide";
          for (auto &child : children(c.region, config))
          {
            next.push_back({std::move(child), c.indicators});
          }
        }
      }
      if (o.rotated)
      {
        t.decision = "rotated-" + t.decision;
      }
      result.trace.push_back(std::move(t));
    }
    if (next.size() > config.max_live)
    {
      throw BudgetError("live region count " + std::to_string(next.size()) + " exceeds the cap " +
                        std::to_string(config.max_live));
    }
    live = std::move(next);
  }
  result.levels = level;

  std::vector<Complex> centers;
  for (const auto &c : accepted)
  {
    centers.push_back(c.region.center);
  }
  const auto groups = clusters(centers, config.tol_eps);
  std::vector<ResonanceResult> found(groups.size());
  parallel_for(groups.size(), config.workers,
               [&](std::size_t g)
               {
                 const Complex k0 = centroid(centers, groups[g]);
                 double spread = 0.0;
                 std::size_t nearest = groups[g].front();
                 for (auto i : groups[g])
                 {
                   spread = std::max(spread, std::abs(centers[i] - k0));
                   if (std::abs(centers[i] - k0) < std::abs(centers[nearest] - k0))
                   {
                     nearest = i;
                   }
                 }
                 ResonanceResult r = extract_eigenpair(F, k0, config, spread + 2.0 * config.tol_eps);
                 r.final_level = accepted[nearest].region.level;
                 r.final_radius = accepted[nearest].region.radius;
                 r.center_history = accepted[nearest].region.history;
                 r.indicator_trace = accepted[nearest].indicators;
                 found[g] = std::move(r);
               });

  // Refinement can carry two cluster centroids onto one eigenvalue; keep the better pair.
  std::sort(found.begin(), found.end(),
            [](const ResonanceResult &a, const ResonanceResult &b) { return a.residual < b.residual; });
  for (auto &r : found)
  {
    if (!theta.contains(r.k, config.tol_eps))
    {
      continue;
    }
    const bool duplicate = std::any_of(result.resonances.begin(), result.resonances.end(),
                                       [&](const ResonanceResult &s)
                                       { return std::abs(s.k - r.k) <= config.tol_eps; });
    if (!duplicate)
    {
      result.resonances.push_back(std::move(r));
    }
  }
  std::sort(result.resonances.begin(), result.resonances.end(),
            [](const ResonanceResult &a, const ResonanceResult &b) { return canonical_less(a.k, b.k); });
  return result;
}

void write_trace(std::ostream &os, const std::vector<TraceEntry> &trace)
{
  char buf[256];
  for (const auto &t : trace)
  {
    std::snprintf(buf, sizeof buf, "%d %.12e %.12e %.6e %.6e %s\n", t.level, t.center.real(),
                  t.center.imag(), t.radius, t.indicator, t.decision.c_str());
    os << buf;
  }
}

}  // namespace resonance
