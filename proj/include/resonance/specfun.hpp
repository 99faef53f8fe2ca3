// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_SPECFUN_HPP
#define RESONANCE_SPECFUN_HPP

#include <complex>
#include <vector>

namespace resonance::specfun
{

// Bessel and Hankel sequences are evaluated in x87 extended precision. Deep in the lower
// half-plane J_n and Y_n are of size e^{|Im z|} and the quantities built from them (the
// Wronskian, the disk determinant) cancel; the extra guard bits keep those combinations
// accurate to better than 1e-9 when the values are rounded back to double.
using ExtComplex = std::complex<long double>;

inline constexpr int kMaxOrder = 60;
inline constexpr long double kMaxArgument = 100.0L;

enum class CylKind
{
  BesselJ,
  Hankel1
};

// Values C_0(z) .. C_{n_max}(z) of one cylinder function family.
struct CylSequence
{
  CylKind kind = CylKind::BesselJ;
  std::vector<ExtComplex> values;

  int order_max() const { return static_cast<int>(values.size()) - 1; }
  const ExtComplex &operator[](int n) const { return values.at(static_cast<std::size_t>(n)); }
};

// J_0(z) .. J_{n_max}(z). Power series for |z| <= 4, Miller backward recurrence otherwise.
// Throws DomainError for |z| > 100 or n_max outside [0, 60].
CylSequence bessel_j_seq(int n_max, ExtComplex z);

// H^{(1)}_0(z) .. H^{(1)}_{n_max}(z), principal branch (cut along the negative real axis).
// Y_0 and Y_1 come from series (ascending series for |z| <= 4, Neumann series in the Miller
// J's otherwise) and Y_n from forward recurrence. Throws DomainError at z = 0.
CylSequence hankel1_seq(int n_max, ExtComplex z);

// d/dz H^{(1)}_n(z) = H_{n-1} - (n/z) H_n, and -H_1 for n = 0. `seq` must be a Hankel
// sequence at z holding orders up to max(n, 1).
ExtComplex hankel1_prime(int n, ExtComplex z, const CylSequence &seq);

// Boundary symbol of the outgoing Dirichlet-to-Neumann map on the circle of radius R:
// (k / pi) H_n'(kR) / H_n(kR). Throws PoleError if H_n(kR) vanishes numerically.
std::complex<double> dtn_symbol(int n, std::complex<double> k, double R);

// dtn_symbol for n = 0 .. n_max from a single Hankel sequence.
std::vector<std::complex<double>> dtn_symbols(int n_max, std::complex<double> k, double R);

}  // namespace resonance::specfun

#endif  // RESONANCE_SPECFUN_HPP
