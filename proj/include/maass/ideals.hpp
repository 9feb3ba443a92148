#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maass/number_field.hpp"

namespace maass {

// Integral ideal as the n x n upper-triangular HNF of its Z-basis, columns
// being generators in integral-basis coordinates. H(0, 0) generates I cap Z.
struct Ideal {
  IntMat H;
  Int norm() const;
  Int min_integer() const { return H(0, 0); }
  bool operator==(const Ideal& o) const { return H == o.H; }
  bool is_unit() const;
};

Ideal ideal_from_generators(const NumberField& K, const std::vector<Elt>& gens);
Ideal principal_ideal(const NumberField& K, const Elt& x);
Ideal ideal_mul(const NumberField& K, const Ideal& a, const Ideal& b);
Ideal ideal_add(const NumberField& K, const Ideal& a, const Ideal& b);
Ideal ideal_pow(const NumberField& K, const Ideal& a, unsigned e);
bool ideal_contains(const Ideal& I, const Elt& x);
Ideal ideal_apply(const NumberField& K, const Ideal& I, const IntMat& aut);
std::string ideal_to_string(const Ideal& I);

struct PrimeIdeal {
  Int p;
  int e = 0;
  int f = 0;
  Ideal ideal;
  Elt beta;  // beta * P in pO, beta not in pO
  // Fast path for degree-one unramified primes with p not dividing the index:
  // images of omega_j under O -> Z/p^k sending P to zero.
  int fast_prec = 0;
  Int fast_mod;
  std::vector<Int> fast_images;

  Int norm() const;
  std::string to_string() const;
};

// Primes above p sorted by (f, e, HNF); checks sum e f = n.
std::vector<PrimeIdeal> prime_decomposition(const NumberField& K, const Int& p);
int prime_valuation(const NumberField& K, const PrimeIdeal& P, const Elt& x);
int prime_valuation(const NumberField& K, const PrimeIdeal& P, const Ideal& I);
// Index of aut(P) in `primes` (which must contain all primes above P.p).
int apply_aut_prime(const NumberField& K, const PrimeIdeal& P, const std::vector<PrimeIdeal>& primes,
                    const IntMat& aut);

// Reduction O -> O/P = F_{p^f}; elements of F_{p^f} as coordinate vectors.
class ResidueField {
 public:
  ResidueField(const NumberField& K, const PrimeIdeal& P);
  std::vector<uint64_t> reduce(const Elt& x) const;
  bool is_zero(const Elt& x) const;
  // Quadratic character of x (+1 / -1), 0 if x in P. Needs p odd.
  int quadratic_character(const Elt& x) const;
  bool is_square(const Elt& x) const { return quadratic_character(x) == 1; }
  int degree() const { return f_; }

 private:
  std::vector<uint64_t> mul(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) const;
  NumberField K_;
  uint64_t p_;
  int f_;
  IntMat H_;
  std::vector<int> free_;  // positions with H(j, j) = p
  std::vector<uint64_t> lin_;  // f = 1 fast path
};

}  // namespace maass
