#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "maass/arith.hpp"

namespace maass {

// Polynomial over F_p (p < 2^62 prime), low degree first, no trailing zeros.
struct FpPoly {
  uint64_t p = 2;
  std::vector<uint64_t> c;

  FpPoly() = default;
  FpPoly(uint64_t p_, std::vector<uint64_t> c_);
  static FpPoly reduce(const IntPoly& f, uint64_t p);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  uint64_t lead() const { return c.back(); }
  void trim();
  uint64_t eval(uint64_t x) const;
  IntPoly lift() const;  // coefficients in [0, p)
  bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
  bool operator<(const FpPoly& o) const { return c.size() != o.c.size() ? c.size() < o.c.size() : c < o.c; }
};

FpPoly fp_add(const FpPoly& a, const FpPoly& b);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b);
FpPoly fp_scale(const FpPoly& a, uint64_t s);
void fp_divmod(const FpPoly& a, const FpPoly& b, FpPoly* q, FpPoly* r);
FpPoly fp_mod(const FpPoly& a, const FpPoly& m);
FpPoly fp_monic(const FpPoly& a);
FpPoly fp_gcd(FpPoly a, FpPoly b);
FpPoly fp_derivative(const FpPoly& a);
FpPoly fp_powmod(FpPoly base, Int e, const FpPoly& m);

// Complete factorization into monic irreducibles with multiplicities, sorted
// by (degree, coefficients). The leading coefficient is dropped.
std::vector<std::pair<FpPoly, int>> factor_mod_p(const IntPoly& f, uint64_t p);
std::vector<std::pair<FpPoly, int>> factor_mod_p(const FpPoly& f);
// Degrees of the irreducible factors (with repetition for multiplicity), ascending.
std::vector<int> factor_degrees_mod_p(const IntPoly& f, uint64_t p);
std::vector<uint64_t> roots_mod_p(const IntPoly& f, uint64_t p);

// Lift a simple root r of f mod p to a root mod p^k.
Int hensel_lift_root(const IntPoly& f, uint64_t r, uint64_t p, int k);

}  // namespace maass
