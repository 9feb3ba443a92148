#include "doctest.h"
#include "maass/errors.hpp"
#include "maass/fields.hpp"
#include "maass/ideals.hpp"
#include "maass/number_field.hpp"

using namespace maass;

TEST_SUITE("field-constructions") {
  TEST_CASE("cubic subfields of cyclotomic fields have discriminant ell^2") {
    for (long ell : {7L, 13L, 19L, 163L, 277L, 313L, 7687L}) {
      NumberField L = cubic_subfield_of_cyclotomic(ell);
      CHECK(L.degree() == 3);
      CHECK(L.totally_real());
      CHECK(L.disc() == Int(ell) * ell);
      CHECK(galois_automorphisms(L).size() == 3);
      CHECK(order_three_automorphism(L) >= 0);
    }
    CHECK_THROWS_AS(cubic_subfield_of_cyclotomic(11), DomainError);
  }

  TEST_CASE("Shanks primes") {
    auto w = shanks_check(163);
    REQUIRE(w);
    CHECK(w->a == 11);
    CHECK_FALSE(shanks_check(277));
    CHECK(shanks_check(71563)->a == 266);
    NumberField S = NumberField::create(shanks_polynomial(11));
    CHECK(fields_isomorphic(S, cubic_subfield_of_cyclotomic(163)));
    CHECK(shanks_polynomial(2) == IntPoly::from_i64({-1, -5, -2, 1}));
    CHECK_THROWS_AS(shanks_polynomial(-2), DomainError);
    CHECK_THROWS_AS(shanks_polynomial(3), DomainError);  // 27 is not prime
  }

  TEST_CASE("cyclic cubic conductors") {
    std::vector<long> got;
    for (long n = 2; n < 100; ++n) {
      if (is_cyclic_cubic_conductor(n)) got.push_back(n);
    }
    CHECK(got == std::vector<long>{7, 9, 13, 19, 31, 37, 43, 61, 63, 67, 73, 79, 91, 97});
    CHECK(cyclic_cubic_fields(63).size() == 2);
    CHECK(cyclic_cubic_fields(91).size() == 2);
    CHECK(cyclic_cubic_fields(9).size() == 1);
    for (auto& K : cyclic_cubic_fields(63)) CHECK(K.disc() == 63 * 63);
  }

  TEST_CASE("diagonal fields") {
    auto [K1, K2] = diagonal_cubic_fields(7, 13);
    CHECK(K1.disc() == 91 * 91);
    CHECK(K2.disc() == 91 * 91);
    CHECK_FALSE(fields_isomorphic(K1, K2));
  }

  TEST_CASE("quadratic fields") {
    NumberField F = quadratic_field(229);
    CHECK(F.disc() == 229);
    CHECK(quadratic_field(8).disc() == 8);
  }

  TEST_CASE("non-Galois cubic fields by discriminant") {
    auto f229 = cubic_fields_of_discriminant(229);
    REQUIRE(f229.size() == 1);
    CHECK(f229[0].disc() == 229);
    CHECK_THROWS_AS(cubic_fields_of_discriminant(-23), UnsupportedError);  // totally real only
    CHECK(cubic_fields_of_discriminant(257).size() == 1);
    CHECK(cubic_fields_of_discriminant(100).empty());
    int n = 0;
    for (long D = 1; D <= 1000; ++D) n += static_cast<int>(cubic_fields_of_discriminant(D).size());
    CHECK(n == 22);
  }

  TEST_CASE("Galois closure of the discriminant 229 cubic") {
    auto f229 = cubic_fields_of_discriminant(229);
    NumberField S = galois_closure_sextic(f229.at(0));
    CHECK(S.degree() == 6);
    CHECK(S.disc() == Int(229) * 229 * 229);
    CHECK(galois_automorphisms(S).size() == 6);
  }

  TEST_CASE("polred keeps the field") {
    NumberField K = NumberField::create(IntPoly::from_i64({-1, -(11 + 3), -11, 1}));
    NumberField R = polred(K);
    CHECK(R.disc() == K.disc());
    CHECK(fields_isomorphic(K, R));
  }

  TEST_CASE("canonical cubic is translation invariant") {
    IntPoly f = IntPoly::from_i64({1, -4, 1, 1});
    CHECK(canonical_cubic(f) == canonical_cubic(f.compose_linear(1, 5)));
    CHECK(canonical_cubic(f) == canonical_cubic(Int(-1) * f.compose_linear(-1, -2)));
  }
}

TEST_SUITE("orders-and-ideals") {
  TEST_CASE("prime decomposition: sum e f = n and the product is pO") {
    NumberField L = cubic_subfield_of_cyclotomic(163);
    for (uint32_t p : primes_up_to(200)) {
      auto ps = prime_decomposition(L, Int(p));
      int s = 0;
      Ideal prod = principal_ideal(L, L.one());
      for (auto& P : ps) {
        s += P.e * P.f;
        for (int i = 0; i < P.e; ++i) prod = ideal_mul(L, prod, P.ideal);
        Int q = 1;
        for (int i = 0; i < P.f; ++i) q *= p;
        CHECK(P.norm() == q);
      }
      CHECK(s == 3);
      CHECK(prod == principal_ideal(L, L.from_int(p)));
      // Cyclic cubic: the splitting type is 3 primes, 1 inert prime or total ramification.
      if (p == 163) {
        CHECK(ps.size() == 1);
        CHECK(ps[0].e == 3);
      } else {
        CHECK((ps.size() == 3 || (ps.size() == 1 && ps[0].f == 3)));
        CHECK((ps.size() == 3) == (powmod(p % 163, 54, 163) == 1));
      }
    }
  }

  TEST_CASE("ideal norms are multiplicative and valuations add") {
    NumberField L = cubic_subfield_of_cyclotomic(277);
    Elt x = L.add(L.theta(), L.from_int(5)), y = L.sub(L.pow(L.theta(), 2), L.from_int(3));
    Ideal I = principal_ideal(L, x), J = principal_ideal(L, y);
    CHECK(ideal_mul(L, I, J).norm() == abs(L.norm(x) * L.norm(y)));
    CHECK(I.norm() == abs(L.norm(x)));
    for (auto& [p, e] : factor_integer(L.norm(L.mul(x, y))).factors) {
      for (auto& P : prime_decomposition(L, p)) {
        CHECK(prime_valuation(L, P, L.mul(x, y)) == prime_valuation(L, P, x) + prime_valuation(L, P, y));
      }
    }
  }

  TEST_CASE("maximal order of a pure cubic") {
    NumberField K2 = NumberField::create(IntPoly::from_i64({-54, 0, 0, 1}));  // x^3 - 54, cube root of 2 times 3
    CHECK(K2.disc() == -108);
    CHECK(K2.index() == 27);
  }
}
