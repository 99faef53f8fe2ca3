// SPDX-License-Identifier: Apache-2.0

#ifndef RESONANCE_TYPES_HPP
#define RESONANCE_TYPES_HPP

#include <complex>
#include <vector>

namespace resonance
{

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Axis-aligned rectangle in the complex plane, bounds inclusive.
struct ComplexRect
{
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(Complex z, double margin = 0.0) const
  {
    return z.real() >= re_min - margin && z.real() <= re_max + margin &&
           z.imag() >= im_min - margin && z.imag() <= im_max + margin;
  }
  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
};

}  // namespace resonance

#endif  // RESONANCE_TYPES_HPP
