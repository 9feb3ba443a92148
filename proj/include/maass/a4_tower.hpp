#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maass/class_group.hpp"
#include "maass/galois_module.hpp"
#include "maass/ideals.hpp"

namespace maass {

// alpha with (alpha) = witness^2, reduced to small size modulo squares.
struct SelmerElement {
  Elt alpha;
  Ideal witness;
  bool totally_positive = false;
};

// Kummer generators of the unramified (infinity and 2 included) quadratic
// extensions of a cyclic cubic field, with the action of its automorphism.
struct KummerData {
  int sel_dim = 0;       // ideal-square classes mod squares (n + 2-rank of Cl)
  int sel_plus_dim = 0;  // totally positive ones
  std::vector<SelmerElement> basis;  // basis of the unramified part W
  GaloisF2Module module;             // sigma on W
  int sigma_index = -1;              // automorphism used, index into galois_automorphisms
};

KummerData selmer_unramified_quadratics(const ClassGroupResult& cg);

struct Splitting {
  int e = 0, f = 0, g = 0;
};

struct A4FieldData {
  long ell = 0;
  int submodule = 0;  // index in u2_submodules order
  Elt alpha;          // K = L(sqrt alpha, sqrt sigma alpha)
  IntPoly quartic;    // x^4 - 2T x^2 - 8m x + T^2 - 4 T2, a root field of K
  Int quartic_field_disc;
  IntPoly degree12_poly;
  int primitive_c = 1;  // root sqrt(alpha) + c sqrt(sigma alpha)
  Splitting at_ell;
};

// One A4 field per U2-submodule of W (there are (4^k - 1)/3 of them).
// Certifies each quartic field discriminant is ell^2 and the degree-12
// field splits ell as (e, f, g) = (3, 1, 4).
std::vector<A4FieldData> a4_fields(const ClassGroupResult& cg, const KummerData& kd, long ell);

enum class A4Class { Identity, DoubleTransposition, ThreeCycle };
std::string a4_class_name(A4Class c);

struct FrobeniusClassData {
  uint64_t p = 0;
  A4Class cls = A4Class::Identity;
  std::vector<int> pattern;  // residue degrees in the degree-12 field
  int trace_squared_mod3 = 0;
};

// Trace^2 mod 3 of any lift to SL(2, F_3) of an element of the given class,
// derived from the 24 elements of SL(2, F_3).
int sl2f3_trace_squared(A4Class c);

// Frobenius class at p != ell.
FrobeniusClassData frobenius_data(const A4FieldData& K, uint64_t p);

// Number of pairwise non-isomorphic fields in the list.
int mod3_distinctness(const std::vector<A4FieldData>& fields);

// Reduce x modulo squares: given (x) = B C^2, return x' = x g^2 small with
// (x') = B C'^2. With odd_witness, C' is coprime to 2. The field must be Galois.
std::pair<Elt, Ideal> reduce_mod_squares(const NumberField& K, const Elt& x, const Ideal& C, bool odd_witness = false);

// Tower check for Cl_2(L) = (2,2): the 2-part of the class number of the
// sextic L(sqrt alpha) is 2 when the 2-class field tower of L stops at K and
// 4 for a quaternion tower.
struct TowerCheck {
  Int sextic_h;
  int sextic_two_part = 0;  // 2-adic valuation of the sextic class number
  bool terminates = false;
  bool conditional = false;
};
TowerCheck two_class_tower_check(const ClassGroupResult& cg, const KummerData& kd, const ClassGroupOptions& opt);

}  // namespace maass
