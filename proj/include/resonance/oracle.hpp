// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_ORACLE_HPP
#define RESONANCE_ORACLE_HPP

#include <iosfwd>
#include <vector>

#include "resonance/types.hpp"

namespace resonance::oracle
{

// Constant potential V0 on the disk of radius r0; the resonances are the zeros of the
// matching determinants d_n(k), n = 0..n_max.
struct DiskProblem
{
  double r0 = 1.0;
  Complex V0{};
  int n_max = 10;
};

// d_n(k) = w J_{n+1}(w r0) H_n(k r0) - k H_{n+1}(k r0) J_n(w r0) with w^2 = k^2 - V0 and the
// sign of w chosen so that Re(w conj(k)) >= 0; w = k at V0 = 0, where d_n = 2i/pi. The other
// sign (flip_branch) multiplies d_n by (-1)^n. Throws DomainError at k = 0 or outside the
// special-function range.
Complex d_n(const DiskProblem &problem, int n, Complex k, bool flip_branch = false);

// d_0(k) .. d_{n_max}(k) from one pair of Bessel/Hankel sequences.
std::vector<Complex> d_all(const DiskProblem &problem, Complex k);

struct OracleRoot
{
  int n = 0;
  Complex k{};
  double residual = 0.0;  // |d_n(k)|
};

struct RootSearch
{
  std::vector<OracleRoot> roots;  // sorted by n, then real part, then imaginary part
  int dropped = 0;                // Newton runs that failed to converge or left the rectangle
};

// Zeros of d_n in `theta`: Newton (central-difference derivative) seeded at the local minima
// of |d_n| on a grid of spacing grid_step, accepted when |d_n| <= 1e-10 max_grid |d_n|.
RootSearch oracle_roots(const DiskProblem &problem, const ComplexRect &theta,
                        double grid_step = 0.05);

// Distinct resonances (roots of different orders that coincide within `tol` merged).
std::vector<Complex> distinct_roots(const RootSearch &search, double tol = 1e-8);

// Samples of min_n log10 |d_n(k)| on a resolution x resolution grid over `theta`, row-major
// with the real part running fastest.
struct ContourMap
{
  int resolution = 0;
  ComplexRect theta;
  std::vector<double> values;

  Complex point(int row, int col) const;
};

ContourMap contour_map(const DiskProblem &problem, const ComplexRect &theta, int resolution);

// CSV writers: "n,re,im,residual" and "re,im,value".
void write_roots_csv(std::ostream &os, const RootSearch &search);
void write_map_csv(std::ostream &os, const ContourMap &map);

}  // namespace resonance::oracle

#endif  // RESONANCE_ORACLE_HPP
