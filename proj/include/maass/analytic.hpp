#pragma once

#include <complex>
#include <vector>

#include "maass/number_field.hpp"

namespace maass {

// Analytic value of h * R for a totally real field.
struct AnalyticHR {
  long double value = 0;
  bool exact = false;        // from exact Dirichlet L(1, chi) values
  uint32_t euler_bound = 0;  // truncation point of the Euler product otherwise
};

// L(1, chi) for a primitive even character chi mod f given by its values on
// residues (zero off the units).
std::complex<long double> dirichlet_L1_even(long f, const std::vector<std::complex<long double>>& chi);

// Residue of the Dedekind zeta function at s = 1 estimated by the Euler
// product over primes up to `bound`.
long double euler_residue(const NumberField& K, uint32_t bound);

// h R from the class number formula. Abelian fields (AbelianData present)
// use exact L-values; others use the truncated Euler product.
AnalyticHR analytic_hR(const NumberField& K, uint32_t euler_bound = 100000);

}  // namespace maass
