#include <map>
#include <set>

#include "doctest.h"
#include "maass/a4_tower.hpp"
#include "maass/arith.hpp"
#include "maass/class_group.hpp"
#include "maass/fields.hpp"
#include "maass/poly_fp.hpp"
#include "maass/quadratic_forms.hpp"
#include "maass/ray_class.hpp"

using namespace maass;

TEST_SUITE("ray-class") {
  TEST_CASE("RayCl_m(F)/2 for F = Q(sqrt ell) has dimension [ell = 1 mod 8]") {
    // h(F) is odd, so the quotient is F_ell^* / squares modulo the image of the
    // fundamental unit eps. N(eps) = -1 makes eps mod sqrt(ell) a primitive
    // fourth root of unity, a square exactly when ell = 1 mod 8.
    for (long ell = 5; ell < 600; ell += 4) {
      if (!is_prime(static_cast<uint64_t>(ell))) continue;
      auto cg = class_group_with_ell(quadratic_field(ell), ell);
      auto d = ray_class_2_elementary(cg, ell);
      CHECK_MESSAGE(d.quotient_dim == (ell % 8 == 1 ? 1 : 0), "ell = " << ell);
      CHECK(d.quotient_dim_with_infinity >= d.quotient_dim);
    }
  }

  TEST_CASE("octahedral counting for ell = 1 mod 4 below 400") {
    for (long ell = 5; ell < 400; ell += 4) {
      if (!is_prime(static_cast<uint64_t>(ell))) continue;
      auto o = count_octahedral(ell);
      CHECK(o.h_ell == o.h_ell_engine);
      CHECK(o.h_ell == three_rank(form_class_group(ell)));
      CHECK(o.card_L == (projective_count(3, o.h_ell)).get_si());
      CHECK(static_cast<int>(o.cubics.size()) == o.card_L);
      CHECK_MESSAGE(o.quotient_dim_F == (ell % 8 == 1 ? 1 : 0), "ell = " << ell);
      for (auto& c : o.cubics) {
        CHECK((c.quotient_dim - o.quotient_dim_F) % 2 == 0);
        CHECK(c.k == (c.quotient_dim - o.quotient_dim_F) / 2);
        CHECK(static_cast<long>(c.forms.size()) == (1L << c.k) - 1);
      }
    }
  }

  TEST_CASE("ell = 2777 carries three octahedral forms") {
    auto o = count_octahedral(2777);
    CHECK(o.quadratic_class_group.structure() == "(3)");
    CHECK(o.card_L == 1);
    CHECK(o.n_forms == 3);
    REQUIRE(o.cubics.size() == 1);
    CHECK(o.cubics[0].k == 2);
    CHECK(o.cubics[0].sextic_class_group.structure() == "(2,2)");
    for (auto& f : o.cubics[0].forms) CHECK(f.conductor_exponent == 1);
  }

  TEST_CASE("sigma acts on the ray class quotient of a cyclic cubic field") {
    NumberField L = cubic_subfield_of_cyclotomic(163);
    auto cg = class_group_with_ell(L, 163);
    auto d = ray_class_2_elementary(cg, 163);
    REQUIRE(d.sigma);
    CHECK(2 * d.sigma->k + d.sigma->m == d.quotient_dim);
  }
}

TEST_SUITE("a4-tower") {
  TEST_CASE("trace squared mod 3 on SL(2, F_3)") {
    CHECK(sl2f3_trace_squared(A4Class::Identity) == 1);
    CHECK(sl2f3_trace_squared(A4Class::DoubleTransposition) == 0);
    CHECK(sl2f3_trace_squared(A4Class::ThreeCycle) == 1);
  }

  TEST_CASE("Kummer generators and the A4 field for 163") {
    auto cg = compute_class_group(cubic_subfield_of_cyclotomic(163));
    auto kd = selmer_unramified_quadratics(cg);
    CHECK(kd.basis.size() == 2);
    CHECK(kd.module.k == 1);
    CHECK(kd.module.m == 0);
    for (auto& b : kd.basis) CHECK(b.totally_positive);
    auto fields = a4_fields(cg, kd, 163);
    REQUIRE(fields.size() == 1);
    auto& F = fields[0];
    CHECK(F.quartic_field_disc == 163 * 163);
    CHECK(F.degree12_poly.degree() == 12);
    CHECK(F.at_ell.e == 3);
    CHECK(F.at_ell.f == 1);
    CHECK(F.at_ell.g == 4);
    std::map<int, int> seen;
    for (uint32_t p : primes_up_to(300)) {
      if (p == 163) continue;
      auto fd = frobenius_data(F, p);
      std::multiset<int> pat(fd.pattern.begin(), fd.pattern.end());
      CHECK(pat.size() * static_cast<size_t>(*pat.begin()) == 12);
      CHECK(*pat.begin() == *pat.rbegin());
      ++seen[*pat.begin()];
      // The quartic resolvent agrees: A4 classes have quartic patterns 1111, 22, 13.
      if (p > 2 && !mpz_divisible_ui_p(poly_discriminant(F.quartic).get_mpz_t(), p)) {
        auto q = factor_degrees_mod_p(F.quartic, p);
        if (fd.cls == A4Class::Identity) CHECK(q == std::vector<int>{1, 1, 1, 1});
        if (fd.cls == A4Class::DoubleTransposition) CHECK(q == std::vector<int>{2, 2});
        if (fd.cls == A4Class::ThreeCycle) CHECK(q == std::vector<int>{1, 3});
      }
    }
    CHECK(seen.size() == 3);
  }

  TEST_CASE("7687 gives five A4 fields, pairwise non-isomorphic") {
    auto cg = compute_class_group(cubic_subfield_of_cyclotomic(7687));
    auto kd = selmer_unramified_quadratics(cg);
    CHECK(kd.module.k == 2);
    auto fields = a4_fields(cg, kd, 7687);
    CHECK(fields.size() == 5);
    CHECK(mod3_distinctness(fields) == 5);
  }

  TEST_CASE("reduction modulo squares keeps the square class") {
    NumberField L = cubic_subfield_of_cyclotomic(163);
    auto cg = compute_class_group(L);
    auto kd = selmer_unramified_quadratics(cg);
    for (auto& b : kd.basis) {
      // (alpha) = witness^2
      CHECK(principal_ideal(L, b.alpha) == ideal_mul(L, b.witness, b.witness));
      Elt big = L.mul(b.alpha, L.pow(L.add(L.theta(), L.from_int(7)), 2));
      Ideal C = ideal_mul(L, b.witness, principal_ideal(L, L.add(L.theta(), L.from_int(7))));
      auto [red, C2] = reduce_mod_squares(L, big, C);
      CHECK(principal_ideal(L, red) == ideal_mul(L, C2, C2));
      // red / alpha is a square: same quadratic character at a few split primes
      for (uint32_t p : {31u, 43u, 47u}) {
        for (auto& P : prime_decomposition(L, Int(p))) {
          ResidueField k(L, P);
          if (k.is_zero(red) || k.is_zero(b.alpha)) continue;
          CHECK(k.quadratic_character(red) == k.quadratic_character(b.alpha));
        }
      }
    }
  }
}
