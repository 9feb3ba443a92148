#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "maass/number_field.hpp"

namespace maass {

// ell = a^2 + 3a + 9 with a >= -1.
struct ShanksWitness {
  long a = 0;
  long ell = 0;
};

std::optional<ShanksWitness> shanks_check(long ell);
// x^3 - a x^2 - (a+3) x - 1; DomainError unless a >= -1 and a^2+3a+9 is prime.
IntPoly shanks_polynomial(long a);

// Conductors of cyclic cubic fields: 9^e * (distinct primes = 1 mod 3), e in {0, 1}.
bool is_cyclic_cubic_conductor(long n);
// All cyclic cubic fields of conductor exactly n, in canonical order. Each is
// the period field of an index-3 subgroup of (Z/n)^*, certified to have
// discriminant n^2.
std::vector<NumberField> cyclic_cubic_fields(long n);
// The unique cubic subfield of Q(zeta_ell), ell = 1 mod 3 prime.
NumberField cubic_subfield_of_cyclotomic(long ell);
// The two cyclic cubic fields of conductor ell1 * ell2.
std::pair<NumberField, NumberField> diagonal_cubic_fields(long ell1, long ell2);
// Minimal polynomial of the Gaussian period sum_{t in H} zeta_n^t, H = ker.
IntPoly period_polynomial(long n, const std::vector<bool>& in_kernel);

// Q(sqrt(D)) for a fundamental discriminant D, with its abelian data.
NumberField quadratic_field(long D);

// Non-conjugate cubic fields of field discriminant exactly D (D != 0, not a
// square), via Hessian-reduced binary cubic forms.
std::vector<NumberField> cubic_fields_of_discriminant(long D);

// Same field with the characteristic polynomial of a short element of the
// reduced integral basis.
NumberField polred(const NumberField& K);
IntPoly char_poly(const IntMat& M);

// Galois closure of a non-Galois cubic, as an absolute sextic.
NumberField galois_closure_sextic(const NumberField& cubic);

// Automorphisms of a Galois field (identity first); DomainError otherwise.
const std::vector<IntMat>& galois_automorphisms(const NumberField& K);
// An automorphism of order 3 (first found), or -1.
int order_three_automorphism(const NumberField& K);

// x^3 + a x^2 + b x + c moved by x -> +-x + t so that a is in {0, 1} and the
// coefficient vector is lexicographically least among those choices.
IntPoly canonical_cubic(const IntPoly& f);

}  // namespace maass
