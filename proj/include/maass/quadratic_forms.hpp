#pragma once

#include <string>
#include <vector>

#include "maass/arith.hpp"
#include "maass/group.hpp"

namespace maass {

// Binary quadratic form a x^2 + b xy + c y^2.
struct QuadForm {
  Int a, b, c;
  Int disc() const { return b * b - 4 * a * c; }
  bool operator==(const QuadForm&) const = default;
  bool operator<(const QuadForm& o) const;
  std::string to_string() const;
};

// Narrow form class group of a positive non-square discriminant D, from the
// rho-cycles of reduced forms.
class FormClassGroup {
 public:
  explicit FormClassGroup(long D);

  long disc() const { return D_; }
  int narrow_class_number() const { return static_cast<int>(cycles_.size()); }
  // Class index of an arbitrary primitive form of discriminant D.
  int class_of(const QuadForm& f) const;
  int compose(int i, int j) const;
  int identity() const { return principal_; }
  int inverse(int i) const;
  // Canonical (lexicographically least) reduced form in each cycle.
  const QuadForm& representative(int i) const { return cycles_[i].front(); }
  const std::vector<QuadForm>& cycle(int i) const { return cycles_[i]; }

  AbelianGroup narrow_group() const;
  // Narrow group modulo the class of the form (-1, b, c).
  AbelianGroup wide_group() const;
  bool narrow_equals_wide() const;

  bool is_reduced(const QuadForm& f) const;
  QuadForm rho(const QuadForm& f) const;
  QuadForm reduce(QuadForm f) const;

 private:
  bool lt_sqrt(const Int& x) const;  // x < sqrt(D)
  bool gt_sqrt(const Int& x) const;  // x > sqrt(D)
  AbelianGroup structure_of(const std::vector<int>& elems) const;

  long D_;
  Int Dz_;
  Int s0_;  // floor(sqrt(D))
  std::vector<std::vector<QuadForm>> cycles_;
  std::vector<std::pair<QuadForm, int>> index_;  // sorted reduced form -> cycle
  int principal_ = 0;
};

QuadForm compose_forms(const QuadForm& f, const QuadForm& g);

// Narrow class group of discriminant ell (prime = 1 mod 4, so narrow = wide).
AbelianGroup form_class_group(long ell);

}  // namespace maass
