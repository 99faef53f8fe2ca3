// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "resonance/errors.hpp"
#include "resonance/specfun.hpp"
#include "support/mp_bessel.hpp"

using namespace resonance;
using namespace resonance::specfun;

namespace
{

double rel(ExtComplex a, ExtComplex b)
{
  return static_cast<double>(std::abs(a - b) / std::abs(b));
}

ExtComplex ref_j(int n, ExtComplex z)
{
  return mp_bessel::to_ld(mp_bessel::bessel_j(n, mp_bessel::to_mp(z)));
}

ExtComplex ref_h(int n, ExtComplex z)
{
  return mp_bessel::to_ld(mp_bessel::hankel1(n, mp_bessel::to_mp(z)));
}

}  // namespace

TEST_CASE("bessel_j_seq at zero is the unit vector")
{
  const CylSequence s = bessel_j_seq(3, 0.0L);
  CHECK(s.order_max() == 3);
  CHECK(s[0] == ExtComplex(1.0L));
  CHECK(std::abs(s[1]) == 0.0L);
  CHECK(std::abs(s[3]) == 0.0L);
}

TEST_CASE("bessel_j_seq matches the high-precision series")
{
  const CylSequence s = bessel_j_seq(2, 1.0L);
  for (int n = 0; n <= 2; n++)
  {
    CHECK(rel(s[n], ref_j(n, 1.0L)) < 1e-12);
  }
  // Miller branch, including the lower half-plane.
  for (ExtComplex z : {ExtComplex(7.5L, 0.3L), ExtComplex(-3.0L, -8.0L), ExtComplex(20.0L, 2.0L)})
  {
    const CylSequence t = bessel_j_seq(12, z);
    for (int n : {0, 1, 5, 12})
    {
      CAPTURE(n);
      CHECK(rel(t[n], ref_j(n, z)) < 1e-12);
    }
  }
}

TEST_CASE("bessel_j_seq satisfies the three-term recurrence")
{
  const ExtComplex z(-0.85L, -1.34L);
  const CylSequence s = bessel_j_seq(5, z);
  for (int n = 1; n < 5; n++)
  {
    const ExtComplex lhs = s[n - 1] + s[n + 1];
    const ExtComplex rhs = (2.0L * n / z) * s[n];
    CHECK(rel(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("hankel1_seq matches the high-precision series")
{
  const CylSequence s = hankel1_seq(1, 1.0L);
  CHECK(rel(s[0], ref_h(0, 1.0L)) < 1e-12);
  CHECK(rel(s[1], ref_h(1, 1.0L)) < 1e-12);
  for (ExtComplex z : {ExtComplex(2.0L, -3.0L), ExtComplex(-0.85L, -1.34L), ExtComplex(6.0L, -1.0L)})
  {
    const CylSequence t = hankel1_seq(8, z);
    for (int n : {0, 1, 4, 8})
    {
      CAPTURE(n);
      CHECK(rel(t[n], ref_h(n, z)) < 1e-11);
    }
  }
}

TEST_CASE("hankel1_seq satisfies the three-term recurrence")
{
  const ExtComplex z(2.0L, -3.0L);
  const CylSequence s = hankel1_seq(10, z);
  for (int n = 1; n < 10; n++)
  {
    CHECK(rel(s[n - 1] + s[n + 1], (2.0L * n / z) * s[n]) < 1e-9);
  }
}

TEST_CASE("hankel1_seq rejects the origin")
{
  CHECK_THROWS_AS(hankel1_seq(2, 0.0L), DomainError);
  CHECK_THROWS_AS(bessel_j_seq(2, ExtComplex(150.0L, 0.0L)), DomainError);
}

TEST_CASE("hankel1_prime identities")
{
  const CylSequence s1 = hankel1_seq(3, 1.0L);
  CHECK(rel(hankel1_prime(0, 1.0L, s1), -s1[1]) < 1e-15);
  CHECK(rel(hankel1_prime(1, 1.0L, s1), (s1[0] - s1[2]) / 2.0L) < 1e-11);

  const ExtComplex z(2.0L, -1.0L);
  const long double step = 1e-6L;
  const CylSequence s = hankel1_seq(3, z);
  const ExtComplex fd = (hankel1_seq(3, z + step)[3] - hankel1_seq(3, z - step)[3]) / (2 * step);
  CHECK(rel(hankel1_prime(3, z, s), fd) < 1e-7);
}

TEST_CASE("dtn_symbol")
{
  const double pi = std::numbers::pi;
  const CylSequence s = hankel1_seq(1, 1.0L);
  const std::complex<double> expected(-s[1] / s[0] / static_cast<long double>(pi));
  CHECK(std::abs(dtn_symbol(0, 1.0, 1.0) - expected) < 1e-14);

  // n = 5 against the series reference.
  const std::complex<double> k(2.0, -2.0);
  const ExtComplex z(2.0L, -2.0L);
  const ExtComplex h5 = ref_h(5, z);
  const ExtComplex dh5 = ref_h(4, z) - (5.0L / z) * h5;
  const std::complex<double> ref(z / static_cast<long double>(pi) * dh5 / h5);
  const std::complex<double> got = dtn_symbol(5, k, 1.0);
  CHECK(std::isfinite(got.real()));
  CHECK(std::abs(got - ref) / std::abs(ref) < 1e-8);

  // The sequence form agrees with the scalar form, including R != 1.
  const auto all = dtn_symbols(6, k, 1.5);
  for (int n = 0; n <= 6; n++)
  {
    CHECK(std::abs(all[n] - dtn_symbol(n, k, 1.5)) <= 1e-14 * std::abs(all[n]));
  }
}

TEST_CASE("Wronskian on random arguments")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mod(0.1, 50.0), im(-10.0, 10.0), sgn(-1.0, 1.0);
  std::uniform_int_distribution<int> order(0, 39);
  const long double pi = std::numbers::pi_v<long double>;
  int checked = 0;
  while (checked < 200)
  {
    const double r = mod(rng);
    const double y = im(rng);
    if (std::abs(y) > r)
    {
      continue;
    }
    const double x = std::sqrt(r * r - y * y) * (sgn(rng) < 0 ? -1.0 : 1.0);
    const ExtComplex z(x, y);
    const int n = order(rng);
    const CylSequence j = bessel_j_seq(n + 1, z);
    const CylSequence h = hankel1_seq(n + 1, z);
    const ExtComplex i(0.0L, 1.0L);
    const ExtComplex yn = (h[n] - j[n]) / i;
    const ExtComplex yn1 = (h[n + 1] - j[n + 1]) / i;
    const ExtComplex w = j[n + 1] * yn - j[n] * yn1;
    const ExtComplex expected = 2.0L / (pi * z);
    CAPTURE(x);
    CAPTURE(y);
    CAPTURE(n);
    CHECK(std::abs(w - expected) <= 1e-9L * std::abs(expected));
    checked++;
  }
}
