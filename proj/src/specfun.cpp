// SPDX-License-Identifier: Apache-2.0

#include "resonance/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resonance/errors.hpp"

namespace resonance::specfun
{

namespace
{

using Real = long double;

constexpr Real kPi = 3.141592653589793238462643383279502884L;
constexpr Real kEuler = 0.577215664901532860606512090082402431L;
constexpr Real kEps = 1e-21L;
constexpr Real kSeriesRadius = 4.0L;
const ExtComplex kI{0.0L, 1.0L};

void check_range(int n_max, ExtComplex z)
{
  if (n_max < 0 || n_max > kMaxOrder)
  {
    throw DomainError("order " + std::to_string(n_max) + " outside [0, " +
                      std::to_string(kMaxOrder) + "]");
  }
  if (!(std::abs(z) <= kMaxArgument))
  {
    throw DomainError("|z| = " + std::to_string(static_cast<double>(std::abs(z))) +
                      " exceeds the supported bound 100");
  }
}

bool all_finite(const std::vector<ExtComplex> &v)
{
  return std::all_of(v.begin(), v.end(), [](const ExtComplex &c)
                     { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

// Ascending series sum_m (-1)^m (z/2)^{n+2m} / (m! (n+m)!).
ExtComplex j_series(int n, ExtComplex z)
{
  const ExtComplex half = z / 2.0L;
  ExtComplex term = 1.0L;
  for (int j = 1; j <= n; j++)
  {
    term *= half / static_cast<Real>(j);
  }
  const ExtComplex q = -half * half;
  ExtComplex sum = term;
  for (int m = 1; m < 200; m++)
  {
    term *= q / (static_cast<Real>(m) * static_cast<Real>(n + m));
    sum += term;
    if (std::abs(term) <= kEps * std::abs(sum))
    {
      break;
    }
  }
  return sum;
}

// Y_0 and Y_1 by their ascending series, |z| <= 4.
void y01_series(ExtComplex z, ExtComplex j0, ExtComplex j1, ExtComplex &y0, ExtComplex &y1)
{
  const ExtComplex half = z / 2.0L;
  const ExtComplex lg = std::log(half);
  const ExtComplex q = -half * half;

  // Y_0 = (2/pi) [ (ln(z/2) + gamma) J_0 - sum_{m>=1} H_m (-z^2/4)^m / (m!)^2 ]
  ExtComplex s0 = 0.0L;
  {
    ExtComplex term = 1.0L;
    Real harmonic = 0.0L;
    for (int m = 1; m < 200; m++)
    {
      term *= q / (static_cast<Real>(m) * static_cast<Real>(m));
      harmonic += 1.0L / static_cast<Real>(m);
      const ExtComplex add = harmonic * term;
      s0 += add;
      if (std::abs(add) <= kEps * std::abs(s0))
      {
        break;
      }
    }
  }
  y0 = (2.0L / kPi) * ((lg + kEuler) * j0 - s0);

  // Y_1 = -2/(pi z) + (2/pi) ln(z/2) J_1
  //       - (1/pi) sum_{m>=0} (psi(m+1) + psi(m+2)) (-1)^m (z/2)^{2m+1} / (m! (m+1)!)
  ExtComplex s1 = 0.0L;
  {
    ExtComplex term = half;
    Real hm = 0.0L;  // H_m
    for (int m = 0; m < 200; m++)
    {
      if (m > 0)
      {
        term *= q / (static_cast<Real>(m) * static_cast<Real>(m + 1));
        hm += 1.0L / static_cast<Real>(m);
      }
      const Real psi_sum = (hm - kEuler) + (hm + 1.0L / static_cast<Real>(m + 1) - kEuler);
      const ExtComplex add = psi_sum * term;
      s1 += add;
      if (m > 2 && std::abs(add) <= kEps * std::abs(s1))
      {
        break;
      }
    }
  }
  y1 = -2.0L / (kPi * z) + (2.0L / kPi) * lg * j1 - s1 / kPi;
}

// log10 of the large-order envelope |z/2|^n / n!.
Real log_envelope(int n, Real az)
{
  return static_cast<Real>(n) * std::log10(az / 2.0L) - std::lgamma(static_cast<Real>(n) + 1.0L) / std::log(10.0L);
}

// Miller start order: J_M small enough that the backward recurrence has settled onto the
// minimal solution to ~24 digits at every order up to max(n_max, |z|).
int miller_start(int n_max, Real az)
{
  const int n_ref = std::max(n_max, static_cast<int>(std::ceil(az))) + 1;
  const Real ref = log_envelope(n_ref, az);
  int m = n_ref + 5;
  while (2.0L * (log_envelope(m, az) - ref) > -26.0L)
  {
    m++;
  }
  m += 10;
  return m + (m % 2);
}

// J_0 .. J_M by normalized backward recurrence; M is chosen internally and is at least
// n_max. The normalization uses e^{iz} = J_0 + 2 sum i^n J_n (or its mirror with -i in the
// upper half-plane) whose terms have the same e^{|Im z|} size as the sum, so it is free of
// cancellation anywhere in the plane.
std::vector<ExtComplex> j_miller(int n_max, ExtComplex z)
{
  const int m_start = miller_start(n_max, std::abs(z));
  std::vector<ExtComplex> f(static_cast<std::size_t>(m_start) + 2, ExtComplex(0.0L));
  f[static_cast<std::size_t>(m_start)] = 1e-40L;
  for (int k = m_start; k >= 1; k--)
  {
    f[static_cast<std::size_t>(k - 1)] =
        (2.0L * static_cast<Real>(k) / z) * f[static_cast<std::size_t>(k)] -
        f[static_cast<std::size_t>(k + 1)];
  }
  const bool lower = z.imag() <= 0.0L;
  const ExtComplex t = lower ? kI : -kI;
  ExtComplex sum = f[0];
  ExtComplex tp = 1.0L;
  for (int k = 1; k <= m_start; k++)
  {
    tp *= t;
    sum += 2.0L * tp * f[static_cast<std::size_t>(k)];
  }
  const ExtComplex target = lower ? std::exp(kI * z) : std::exp(-kI * z);
  const ExtComplex scale = target / sum;
  f.resize(static_cast<std::size_t>(m_start) + 1);
  for (auto &v : f)
  {
    v *= scale;
  }
  return f;
}

// Neumann series for Y_0, Y_1 in terms of J_0 .. J_M (M = j.size() - 1).
void y01_neumann(ExtComplex z, const std::vector<ExtComplex> &j, ExtComplex &y0,
                 ExtComplex &y1)
{
  const ExtComplex lg = std::log(z / 2.0L) + kEuler;
  const int m = static_cast<int>(j.size()) - 1;
  ExtComplex s0 = 0.0L;
  for (int k = 1; 2 * k <= m; k++)
  {
    const Real sign = (k % 2 == 0) ? 1.0L : -1.0L;
    s0 += sign * j[static_cast<std::size_t>(2 * k)] / static_cast<Real>(k);
  }
  y0 = (2.0L / kPi) * (lg * j[0] - 2.0L * s0);

  ExtComplex s1 = 0.0L;
  for (int k = 1; 2 * k + 1 <= m; k++)
  {
    const Real sign = (k % 2 == 0) ? 1.0L : -1.0L;
    s1 += sign * static_cast<Real>(2 * k + 1) * j[static_cast<std::size_t>(2 * k + 1)] /
          (static_cast<Real>(k) * static_cast<Real>(k + 1));
  }
  y1 = (2.0L / kPi) * (-j[0] / z + (lg - 1.0L) * j[1] - s1);
}

std::vector<ExtComplex> j_values(int n_max, ExtComplex z)
{
  std::vector<ExtComplex> out(static_cast<std::size_t>(n_max) + 1, ExtComplex(0.0L));
  if (z == ExtComplex(0.0L))
  {
    out[0] = 1.0L;
    return out;
  }
  if (std::abs(z) <= kSeriesRadius)
  {
    for (int n = 0; n <= n_max; n++)
    {
      out[static_cast<std::size_t>(n)] = j_series(n, z);
    }
    return out;
  }
  auto f = j_miller(n_max, z);
  std::copy(f.begin(), f.begin() + n_max + 1, out.begin());
  return out;
}

}  // namespace

CylSequence bessel_j_seq(int n_max, ExtComplex z)
{
  check_range(n_max, z);
  CylSequence seq;
  seq.kind = CylKind::BesselJ;
  seq.values = j_values(n_max, z);
  if (!all_finite(seq.values))
  {
    throw DomainError("Bessel J sequence overflowed");
  }
  return seq;
}

CylSequence hankel1_seq(int n_max, ExtComplex z)
{
  check_range(n_max, z);
  if (z == ExtComplex(0.0L))
  {
    throw DomainError("Hankel function is singular at z = 0");
  }
  const int need = std::max(n_max, 1);
  std::vector<ExtComplex> j;
  ExtComplex y0, y1;
  if (std::abs(z) <= kSeriesRadius)
  {
    j.resize(static_cast<std::size_t>(need) + 1);
    for (int n = 0; n <= need; n++)
    {
      j[static_cast<std::size_t>(n)] = j_series(n, z);
    }
    y01_series(z, j[0], j[1], y0, y1);
  }
  else
  {
    j = j_miller(need, z);
    y01_neumann(z, j, y0, y1);
  }

  std::vector<ExtComplex> y(static_cast<std::size_t>(need) + 1);
  y[0] = y0;
  y[1] = y1;
  for (int n = 1; n < need; n++)
  {
    y[static_cast<std::size_t>(n + 1)] =
        (2.0L * static_cast<Real>(n) / z) * y[static_cast<std::size_t>(n)] -
        y[static_cast<std::size_t>(n - 1)];
  }

  CylSequence seq;
  seq.kind = CylKind::Hankel1;
  seq.values.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; n++)
  {
    seq.values[static_cast<std::size_t>(n)] =
        j[static_cast<std::size_t>(n)] + kI * y[static_cast<std::size_t>(n)];
  }
  if (!all_finite(seq.values))
  {
    throw DomainError("Hankel sequence overflowed near z = 0");
  }
  return seq;
}

ExtComplex hankel1_prime(int n, ExtComplex z, const CylSequence &seq)
{
  if (n < 0 || seq.order_max() < std::max(n, 1))
  {
    throw DomainError("Hankel sequence too short for derivative of order " +
                      std::to_string(n));
  }
  if (z == ExtComplex(0.0L))
  {
    throw DomainError("Hankel derivative is singular at z = 0");
  }
  if (n == 0)
  {
    return -seq[1];
  }
  return seq[n - 1] - (static_cast<Real>(n) / z) * seq[n];
}

std::vector<std::complex<double>> dtn_symbols(int n_max, std::complex<double> k, double R)
{
  if (k == std::complex<double>(0.0))
  {
    throw DomainError("DtN symbol requires k != 0");
  }
  const ExtComplex kk(k.real(), k.imag());
  const ExtComplex z = kk * static_cast<Real>(R);
  const auto seq = hankel1_seq(std::max(n_max, 1), z);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; n++)
  {
    const ExtComplex h = seq[n];
    if (!(std::abs(h) > 1e-4000L))
    {
      throw PoleError("H_" + std::to_string(n) + "(kR) vanishes at k = (" +
                      std::to_string(k.real()) + ", " + std::to_string(k.imag()) + ")");
    }
    const ExtComplex ratio = hankel1_prime(n, z, seq) / h;
    const ExtComplex value = (kk / kPi) * ratio;
    out[static_cast<std::size_t>(n)] = {static_cast<double>(value.real()),
                                        static_cast<double>(value.imag())};
    if (!std::isfinite(out[static_cast<std::size_t>(n)].real()) ||
        !std::isfinite(out[static_cast<std::size_t>(n)].imag()))
    {
      throw PoleError("DtN symbol of order " + std::to_string(n) + " is not finite");
    }
  }
  return out;
}

std::complex<double> dtn_symbol(int n, std::complex<double> k, double R)
{
  if (n < 0)
  {
    throw DomainError("negative DtN order");
  }
  return dtn_symbols(n, k, R)[static_cast<std::size_t>(n)];
}

}  // namespace resonance::specfun
