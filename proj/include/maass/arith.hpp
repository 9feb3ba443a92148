#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "maass/errors.hpp"

namespace maass {

using Int = mpz_class;
using Rat = mpq_class;
using i128 = __int128;
using u128 = unsigned __int128;

inline Int to_int(long long v) { return Int(static_cast<long>(v)); }
bool fits_i64(const Int& v);
long long to_i64(const Int& v);
Int from_i128(i128 v);
std::string to_string(const Int& v);

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t m);  // throws DomainError if not invertible
int legendre(uint64_t a, uint64_t p);      // p odd prime; 0, 1 or -1
int kronecker(long long a, long long n);

bool is_prime(uint64_t n);  // deterministic
// Deterministic below 3.3e24; BPSW-strength probable prime above. `certain`
// reports which regime applied.
bool is_prime(const Int& n, bool* certain = nullptr);

// Primes up to n (inclusive), cached sieve.
std::vector<uint32_t> primes_up_to(uint32_t n);

struct Factorization {
  int sign = 1;
  std::vector<std::pair<Int, int>> factors;  // ascending primes
  Int value() const;
  std::string to_string() const;
  bool operator==(const Factorization&) const = default;
};

Factorization factor_integer(const Int& n);
std::vector<std::pair<uint64_t, int>> factor_u64(uint64_t n);
int valuation(Int n, const Int& p);
bool is_square(const Int& n, Int* root = nullptr);

// Dense integer polynomial, coefficient of x^i at index i, no trailing zeros.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Int> c);
  static IntPoly from_i64(std::initializer_list<long long> c);  // low degree first
  static IntPoly monomial(int deg, const Int& c = 1);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Int& operator[](int i) const { return c_[i]; }
  Int coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : Int(0); }
  const Int& lead() const { return c_.back(); }
  const std::vector<Int>& coeffs() const { return c_; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Int eval(const Int& x) const;
  Rat eval(const Rat& x) const;
  long double eval(long double x) const;
  IntPoly derivative() const;
  Int content() const;
  IntPoly primitive_part() const;
  IntPoly compose_linear(const Int& a, const Int& b) const;  // f(a x + b)

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const Int& s, const IntPoly& a);
  IntPoly operator-() const;
  bool operator==(const IntPoly& o) const { return c_ == o.c_; }

  std::string to_string(const char* var = "x") const;

 private:
  void trim();
  std::vector<Int> c_;
};

// Rational polynomial helpers, used for interpolation and gcds.
using RatPoly = std::vector<Rat>;
void trim(RatPoly& p);
RatPoly to_rat(const IntPoly& f);
RatPoly rat_mul(const RatPoly& a, const RatPoly& b);
RatPoly rat_mod(RatPoly a, const RatPoly& m);
RatPoly rat_gcd(RatPoly a, RatPoly b);  // monic
// Integer polynomial through the points (x_i, y_i); throws if not integral.
IntPoly interpolate(const std::vector<Int>& xs, const std::vector<Int>& ys);

Int resultant(const IntPoly& f, const IntPoly& g);
Int poly_discriminant(const IntPoly& f);
// Monic integral polynomial defining the same field as f via theta' = lead * theta.
IntPoly make_monic(const IntPoly& f, Int* scale = nullptr);
bool is_squarefree(const IntPoly& f);
// Number of distinct real roots (Sturm).
int count_real_roots(const IntPoly& f);

}  // namespace maass
