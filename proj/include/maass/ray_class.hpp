#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maass/class_group.hpp"
#include "maass/conductor.hpp"
#include "maass/galois_module.hpp"

namespace maass {

// Class group with the primes above ell forced into the factor base, as
// ray_class_2_elementary needs.
ClassGroupResult class_group_with_ell(const NumberField& K, long ell, ClassGroupOptions opt = {});

// RayCl_m / 2 for m = product of the primes above ell (no infinite places),
// from the exact sequence (O/m)^* / units -> RayCl_m -> Cl -> 0.
struct RayClass2Data {
  std::string label;
  long ell = 0;
  int quotient_dim = 0;
  int quotient_dim_with_infinity = 0;  // modulus m times all real places
  std::vector<std::string> generators;  // labels of the quotient basis
  // Quotient coordinates of the nonsquare residue class at each prime above ell.
  std::vector<F2Vec> inertia;
  // Class of the first prime above ell modulo the inertia images.
  F2Vec frobenius_first_prime;
  std::optional<GaloisF2Module> sigma;  // order-3 automorphism, when the field has one
  std::optional<std::vector<F2Vec>> tau;  // an involution (columns), when the field has one
};

RayClass2Data ray_class_2_elementary(const ClassGroupResult& cg, long ell);

// (dim L - dim F) / 2, checked against the U_2 multiplicity of sigma on the L quotient.
int k_L(const RayClass2Data& L, const RayClass2Data& F);

// One octahedral form: an S3-stable quotient RayCl_m(L)/2 -> U_2.
struct OctahedralForm {
  int e = 0, f = 0;  // of ell in the S4 closure; f = 0 when e = 4 (not needed)
  int conductor_exponent = 0;
};

struct OctahedralCubic {
  IntPoly cubic;
  IntPoly sextic;
  AbelianGroup sextic_class_group;
  int quotient_dim = 0;
  int k = 0;
  std::vector<OctahedralForm> forms;  // 2^k - 1 of them
};

struct OctahedralData {
  long ell = 0;
  AbelianGroup quadratic_class_group;  // from binary forms
  int h_ell = 0;                       // 3-rank, forms
  int h_ell_engine = 0;                // 3-rank, relation engine
  int card_L = 0;
  int quotient_dim_F = 0;
  std::vector<OctahedralCubic> cubics;
  long n_forms = 0;  // sum over cubics of 2^k - 1
  bool conditional = false;
};

OctahedralData count_octahedral(long ell, const ClassGroupOptions& opt = {});

}  // namespace maass
