#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "maass/analytic.hpp"
#include "maass/group.hpp"
#include "maass/ideals.hpp"

namespace maass {

struct ClassGroupOptions {
  bool grh = false;           // factor base from the Bach bound instead of Minkowski
  uint64_t seed = 0;          // shuffles the order in which candidates are tried
  double budget_seconds = 0;  // 0: no limit
  uint32_t euler_bound = 10000;
  // Rational primes whose prime ideals join the factor base whatever their norm.
  std::vector<Int> extra_primes;
};

// A principal ideal (elt) supported on the factor base.
struct Relation {
  Elt elt;
  std::vector<std::pair<int, int>> vals;  // (factor-base index, exponent), ascending index
  std::vector<uint8_t> neg;               // 1 at real embeddings where elt < 0
  std::vector<long double> logs;          // log |sigma_i(elt)|
};

// A unit as a product of relation elements.
struct CompactUnit {
  std::vector<std::pair<int, Int>> factors;  // (relation index, exponent)
  std::vector<long double> logs;
  std::vector<uint8_t> neg;
  std::optional<Elt> elt;  // explicit form when small enough to rebuild exactly
};

struct ClassGroupResult {
  NumberField field;
  long double fb_bound = 0;
  bool conditional = false;             // factor base from the GRH bound
  std::vector<PrimeIdeal> factor_base;  // ascending norm
  std::vector<Relation> relations;      // relations[0] is -1; together they generate the S-units
  AbelianGroup group;
  AbelianGroup narrow;
  std::vector<std::vector<Int>> dlog;  // per factor-base prime, coordinates on group.generators
  std::vector<CompactUnit> units;      // fundamental units
  long double regulator = 0;
  AnalyticHR analytic;
  long double ratio = 0;  // h R from the relations over the analytic value
  int targeted = 0;       // relations that eliminated a factor-base prime
  int core_size = 0;      // factor-base primes left to the dense phase

  Int h() const { return group.order(); }
  int fb_index(const Ideal& P) const;  // -1 if absent
  std::vector<std::vector<uint8_t>> signature_matrix() const;
  // Permutation of the factor base induced by an automorphism of the field.
  std::vector<int> fb_permutation(const IntMat& aut) const;
};

// Class group, narrow class group and units of a totally real field.
// Throws IncompleteError when the budget runs out and IntegrityError when
// the relation lattice disagrees with the analytic class number formula.
ClassGroupResult compute_class_group(const NumberField& K, const ClassGroupOptions& opt = {});

long double minkowski_bound(const NumberField& K);
long double bach_bound(const NumberField& K);

// Integral basis of I reduced for the T2 norm.
std::vector<Elt> reduced_ideal_basis(const NumberField& K, const Ideal& I);
// A generator of I found by enumerating small elements of norm +-N(I).
std::optional<Elt> find_generator(const NumberField& K, const Ideal& I, int coeff_bound = 6);

}  // namespace maass
