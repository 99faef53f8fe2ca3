// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_SIM_HPP
#define RESONANCE_SIM_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "resonance/assembly.hpp"
#include "resonance/linalg.hpp"
#include "resonance/types.hpp"

namespace resonance
{

// Holomorphic matrix function F(z). The eigensolver touches F only through these calls, so
// implementations must be safe to call concurrently.
class MatrixFunction
{
public:
  virtual ~MatrixFunction() = default;
  virtual int dim() const = 0;
  // Throws SingularError when F(z) is exactly singular.
  virtual std::unique_ptr<LinearSolver> factor(Complex z) const = 0;
  virtual ComplexVector apply(Complex z, const ComplexVector &x) const = 0;
  virtual ComplexVector apply_derivative(Complex z, const ComplexVector &x) const = 0;
  virtual double norm_inf(Complex z) const = 0;
};

// F(k) of a finite element bundle. Solves go through the bordered system of
// assemble_bordered, with one symbolic analysis shared by every k.
class FemFunction : public MatrixFunction
{
public:
  explicit FemFunction(std::shared_ptr<const OperatorBundle> bundle);

  int dim() const override;
  std::unique_ptr<LinearSolver> factor(Complex z) const override;
  ComplexVector apply(Complex z, const ComplexVector &x) const override;
  ComplexVector apply_derivative(Complex z, const ComplexVector &x) const override;
  double norm_inf(Complex z) const override;

  const OperatorBundle &bundle() const { return *bundle_; }

private:
  std::shared_ptr<const OperatorBundle> bundle_;
  std::shared_ptr<const SymbolicLU> symbolic_;
};

// diag(z - lambda_1, ..., z - lambda_m).
class DiagonalFunction : public MatrixFunction
{
public:
  explicit DiagonalFunction(std::vector<Complex> poles);

  int dim() const override;
  std::unique_ptr<LinearSolver> factor(Complex z) const override;
  ComplexVector apply(Complex z, const ComplexVector &x) const override;
  ComplexVector apply_derivative(Complex z, const ComplexVector &x) const override;
  double norm_inf(Complex z) const override;

private:
  std::vector<Complex> poles_;
};

// 1 x 1 function f(z) with derivative df(z).
class ScalarFunction : public MatrixFunction
{
public:
  ScalarFunction(std::function<Complex(Complex)> f, std::function<Complex(Complex)> df);
  // prod_m (z - lambda_m)
  static ScalarFunction planted(std::vector<Complex> roots);

  int dim() const override { return 1; }
  std::unique_ptr<LinearSolver> factor(Complex z) const override;
  ComplexVector apply(Complex z, const ComplexVector &x) const override;
  ComplexVector apply_derivative(Complex z, const ComplexVector &x) const override;
  double norm_inf(Complex z) const override;

private:
  std::function<Complex(Complex)> f_;
  std::function<Complex(Complex)> df_;
};

enum class Subdivision
{
  // Square cells; a cell's contour is the circle through its corners scaled by cover_margin,
  // and children are the 4 quarter cells, so the radius halves per level.
  Quadtree,
  // Disks as printed: children centered at c + (r/2)(+-1 +- i) with radius r/sqrt(2).
  Disk
};

struct SimConfig
{
  int n_omega = 32;
  double tol_ind = 0.1;
  double tol_eps = 1e-3;
  double r0 = 0.25;
  std::uint64_t seed = 1;
  int max_levels = 40;
  std::size_t max_live = 4096;
  Subdivision subdivision = Subdivision::Quadtree;
  double cover_margin = 1.15;
  int workers = 1;
  // Relative solve residual above which a node counts as sitting on an eigenvalue.
  double near_pole_tol = 1e-8;
  // Newton refinement of the region centers in eigenpair extraction.
  bool polish = true;
};

// Throws ParamError unless n_omega is even and >= 8, 0 < tol_eps < r0, 0 < tol_ind < 1,
// cover_margin >= 1 and workers >= 1.
void validate(const SimConfig &config);

struct SearchRegion
{
  Complex center{};
  double radius = 0.0;
  int level = 1;
  // Cell half extents (quadtree); zero for disk subdivision.
  double half_width = 0.0;
  double half_height = 0.0;
  std::vector<Complex> history;  // ancestor centers, level 1 first
};

// Level-1 cover of theta.
std::vector<SearchRegion> initial_regions(const ComplexRect &theta, const SimConfig &config);
std::vector<SearchRegion> children(const SearchRegion &parent, const SimConfig &config);

struct Projection
{
  ComplexVector full;  // (1/N) sum_j (z_j - c) x_j
  ComplexVector half;  // same rule on the even-indexed nodes
  std::vector<Complex> nodes;
  std::vector<double> node_residuals;  // ||F(z_j) x_j - f|| / ||f||
  double max_residual = 0.0;
  double max_solution = 0.0;  // max_j ||x_j||
};

// Trapezoidal approximation of (1/2 pi i) \oint F(z)^{-1} f dz on the region's circle, nodes
// z_j = c + r exp(i (2 pi j / n_points + rotation)). Throws NearPoleError when a node solve
// has relative residual above near_pole_tol.
Projection projection(const MatrixFunction &F, const SearchRegion &region, const ComplexVector &f,
                      int n_points, double rotation = 0.0, double near_pole_tol = 1e-8);
ComplexVector projection_apply(const MatrixFunction &F, const SearchRegion &region,
                               const ComplexVector &f, int n_points);

struct IndicatorValue
{
  double value = 0.0;
  double norm_full = 0.0;
  double norm_half = 0.0;
  // One of the projections is at the rounding level of the quadrature sum,
  // 1e3 eps r max_j ||x_j||, so the ratio carries no information; value is 0.
  bool degenerate = false;
  double max_residual = 0.0;
  std::vector<Complex> nodes;
  std::vector<double> node_residuals;
};

// I = ||P f|_N|| / (sqrt(N) ||P f|_{N/2}||).
IndicatorValue indicator(const MatrixFunction &F, const SearchRegion &region,
                         const SimConfig &config, const ComplexVector &f, double rotation = 0.0);
// With the probe vector drawn from config.seed.
IndicatorValue indicator(const MatrixFunction &F, const SearchRegion &region,
                         const SimConfig &config);

ComplexVector probe_vector(int dim, std::uint64_t seed);

// Single-linkage clusters with link distance 2 tol; returns centroids sorted by real then
// imaginary part.
std::vector<Complex> deduplicate(const std::vector<Complex> &candidates, double tol);

struct EigenPair
{
  Complex k{};
  ComplexVector u;        // unit 2-norm, largest entry real and positive
  double residual = 0.0;  // ||F(k) u||_2
  bool converged = false;
};

// Eigenvector of the smallest eigenvalue of the matrix F(k) by inverse iteration, at fixed k.
EigenPair smallest_eigenpair(const MatrixFunction &F, Complex k, std::uint64_t seed);

struct ResonanceResult
{
  Complex k{};
  double residual = 0.0;           // ||F(k) u||_2
  double relative_residual = 0.0;  // residual / ||F(k)||_inf
  ComplexVector u;
  bool converged = false;  // inverse iteration reached its tolerance
  bool polished = false;   // Newton refinement converged inside the allowed shift
  int newton_iterations = 0;
  Complex center{};  // region-center estimate before refinement
  int final_level = 0;
  double final_radius = 0.0;
  std::vector<Complex> center_history;
  std::vector<double> indicator_trace;  // indicator of each ancestor, level 1 first
};

// Step 2 at a center estimate k: Newton steps on the Rayleigh functional u^T F(k) u (u from
// inverse iteration at the current k) when config.polish is set and the iterate stays within
// max_shift of k, then the smallest eigenpair at the final k.
ResonanceResult extract_eigenpair(const MatrixFunction &F, Complex k, const SimConfig &config,
                                  double max_shift = std::numeric_limits<double>::infinity());

struct TraceEntry
{
  int level = 0;
  Complex center{};
  double radius = 0.0;
  double indicator = 0.0;
  std::string decision;  // subdivide, accept, discard, degenerate, rotated-*, on-contour
};

struct SearchResult
{
  std::vector<ResonanceResult> resonances;  // sorted by real then imaginary part
  std::vector<TraceEntry> trace;
  std::vector<SearchRegion> flagged;  // aborted as "eigenvalue on contour"
  int levels = 0;
  std::size_t regions_evaluated = 0;
  std::size_t solves = 0;
};

SearchResult search(const MatrixFunction &F, const ComplexRect &theta, const SimConfig &config);

// "level re im radius indicator decision", one line per entry.
void write_trace(std::ostream &os, const std::vector<TraceEntry> &trace);

}  // namespace resonance

#endif  // RESONANCE_SIM_HPP
