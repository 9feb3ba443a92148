#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maass/arith.hpp"
#include "maass/linalg.hpp"
#include "maass/roots.hpp"

namespace maass {

// Algebraic integer in coordinates of the integral basis.
using Elt = std::vector<Int>;

// Data describing an abelian field as the fixed field of a subgroup of
// (Z/n)^*; lets the analytic side use exact Dirichlet L-values.
struct AbelianData {
  long conductor = 0;
  std::vector<bool> in_kernel;  // indexed by residues mod conductor
};

struct FieldOptions {
  bool assume_irreducible = false;
  // If non-empty, only make the order p-maximal at these primes.
  std::vector<Int> maximal_at;
  // maximal_at lists every prime whose square divides the polynomial
  // discriminant, so the resulting order is the full ring of integers.
  bool maximal_at_complete = false;
  std::optional<AbelianData> abelian;
  std::string label;
};

struct FieldData;

class NumberField {
 public:
  NumberField() = default;
  // f must be irreducible over Q; non-monic inputs are made monic by scaling
  // the generator (theta' = lead * theta).
  static NumberField create(const IntPoly& f, const FieldOptions& opt = {});

  bool valid() const { return d_ != nullptr; }
  const IntPoly& poly() const;  // the monic defining polynomial actually used
  int degree() const;
  int r1() const;
  int r2() const;
  bool totally_real() const { return r2() == 0; }
  const Int& disc() const;
  const Factorization& disc_factorization() const;
  const Int& index() const;  // [O : Z[theta]]
  bool maximal() const;      // false if only maximal at FieldOptions::maximal_at
  bool is_p_maximal(const Int& p) const;
  const Int& poly_disc() const;
  const std::optional<AbelianData>& abelian() const;
  const std::string& label() const;
  const RootSet& roots() const;

  // omega_j = (sum_i basis(i, j) theta^i) / basis_den(); upper triangular.
  const IntMat& basis() const;
  const Int& basis_den() const;

  // Conversions between power-basis (rational) and integral-basis coordinates.
  RatPoly to_power(const Elt& x) const;
  Elt from_power(const RatPoly& v) const;  // throws if not integral
  std::vector<Rat> coords_rational(const RatPoly& v) const;

  Elt one() const;
  Elt from_int(const Int& a) const;
  Elt theta() const;
  Elt mul(const Elt& x, const Elt& y) const;
  Elt add(const Elt& x, const Elt& y) const;
  Elt sub(const Elt& x, const Elt& y) const;
  Elt scale(const Elt& x, const Int& s) const;
  Elt pow(Elt x, unsigned long e) const;
  bool is_zero(const Elt& x) const;
  IntMat mult_matrix(const Elt& x) const;  // column j = x * omega_j
  const IntMat& mult_matrix_basis(int i) const;
  Int norm(const Elt& x) const;
  Int trace(const Elt& x) const;
  // Exact quotient x / y, throws DomainError if not integral.
  Elt div_exact(const Elt& x, const Elt& y) const;
  std::vector<Rat> div_rational(const Elt& x, const Elt& y) const;
  // Real embeddings (first r1) and one of each complex pair, in long double.
  std::vector<std::complex<long double>> embed(const Elt& x) const;
  std::vector<long double> embed_real(const Elt& x) const;  // totally real fields
  const std::vector<std::vector<std::complex<long double>>>& basis_embeddings() const;
  long double t2(const Elt& x) const;

  // Automorphisms as integer matrices acting on integral coordinates; index 0 is the identity.
  const std::vector<IntMat>& automorphisms() const;
  Elt apply(const IntMat& aut, const Elt& x) const;
  // Polynomials h with g(h(theta)) = 0, i.e. the roots of g in this field.
  std::vector<RatPoly> roots_of(const IntPoly& g) const;

  // Integral basis reduced for the T2 norm (coordinates in the integral basis).
  const std::vector<Elt>& lll_basis() const;

  bool same_field_data(const NumberField& o) const { return d_ == o.d_; }
  std::string describe() const;

 private:
  std::shared_ptr<FieldData> d_;
};

// Irreducibility over Q (degree patterns mod small primes, then an exact
// search over root subsets).
bool is_irreducible(const IntPoly& f);

// Fields generated by f1 and f2 are isomorphic.
bool fields_isomorphic(const NumberField& k1, const NumberField& k2);

}  // namespace maass
