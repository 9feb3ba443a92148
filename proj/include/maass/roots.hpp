#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <complex>
#include <vector>

#include "maass/arith.hpp"

namespace maass {

using BigReal = boost::multiprecision::cpp_bin_float_100;
using BigComplex = boost::multiprecision::cpp_complex_100;

// Complex roots of a squarefree integer polynomial, refined to ~100 digits.
// Real roots come first in ascending order (imaginary part exactly zero),
// then complex roots with positive imaginary part, each followed by its
// conjugate.
struct RootSet {
  std::vector<BigComplex> z;
  int r1 = 0;  // number of real roots
  std::vector<std::complex<long double>> approx() const;
};

RootSet polynomial_roots(const IntPoly& f);

// Nearest integer to x.
Int round_to_int(const BigReal& x);

// All h in Q[x] of degree < deg f, with denominators dividing `den`, such
// that g(h(theta)) = 0 in Q[x]/(f). Found by interpolating h(theta_i) =
// target root over embedding assignments, then verified exactly.
std::vector<RatPoly> roots_in_field(const IntPoly& f, const RootSet& fr, const Int& den, const IntPoly& g,
                                    bool injective = false);

// Composition h1(h2(x)) mod f.
RatPoly compose_mod(const RatPoly& h1, const RatPoly& h2, const IntPoly& f);

}  // namespace maass
