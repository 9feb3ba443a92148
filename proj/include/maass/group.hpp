#pragma once

#include <string>
#include <vector>

#include "maass/arith.hpp"
#include "maass/linalg.hpp"

namespace maass {

// Finite (or finitely generated) abelian group Z/d1 x ... x Z/dr with
// d1 | d2 | ... ; a zero divisor stands for a free factor Z.
struct AbelianGroup {
  std::vector<Int> divisors;
  std::vector<std::string> generators;  // optional labels, one per divisor

  Int order() const;  // 0 if infinite
  int rank() const { return static_cast<int>(divisors.size()); }
  int p_rank(unsigned long p) const;
  bool is_trivial() const { return divisors.empty(); }
  std::string structure() const;  // "(2,2)", "(7,49)", "trivial"

  // Cokernel of the relation rows R (rows = relations among the columns).
  static AbelianGroup from_relations(const IntMat& R);
  // Same, for a finite group whose exponent divides `modulus`; entries stay reduced.
  static AbelianGroup from_relations_mod(const IntMat& R, const Int& modulus);
  // Normalises any list of cyclic orders into invariant factors.
  static AbelianGroup from_cyclic_orders(const std::vector<Int>& orders);
};

// Number of elementary divisors divisible by 3.
int three_rank(const AbelianGroup& g);

}  // namespace maass
