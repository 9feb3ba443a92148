#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "maass/arith.hpp"
#include "maass/class_group.hpp"
#include "maass/conductor.hpp"
#include "maass/errors.hpp"
#include "maass/fields.hpp"
#include "maass/galois_module.hpp"
#include "maass/quadratic_forms.hpp"

using namespace maass;

namespace {

// Number of reduced forms (a, b, c) of discriminant D > 0, non-square:
// 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b.
int reduced_form_count(long D) {
  long s = 0;
  while ((s + 1) * (s + 1) <= D) ++s;
  int n = 0;
  for (long b = 1; b <= s; ++b) {
    if ((D - b * b) % 4 != 0) continue;
    const long N = (D - b * b) / 4;
    for (long a = 1; a <= N; ++a) {
      if (N % a != 0 || 2 * a < s + 1 - b || 2 * a > s + b) continue;
      if (std::gcd(std::gcd(a, b), N / a) == 1) n += 2;  // a and -a
    }
  }
  return n;
}

// sigma on U_2^k + 1^m, conjugated by random transvections.
std::vector<F2Vec> random_module(std::mt19937_64& rng, int k, int m) {
  const int n = 2 * k + m;
  std::vector<F2Vec> s(n, F2Vec(n));
  for (int b = 0; b < k; ++b) {
    s[2 * b].set(2 * b + 1, true);  // e -> f
    s[2 * b + 1].set(2 * b, true);  // f -> e + f
    s[2 * b + 1].set(2 * b + 1, true);
  }
  for (int j = 2 * k; j < n; ++j) s[j].set(j, true);
  auto apply = [n](const std::vector<F2Vec>& A, const F2Vec& v) {
    F2Vec r(n);
    for (int a = 0; a < n; ++a) {
      if (v.get(a)) r ^= A[a];
    }
    return r;
  };
  for (int t = 0; t < 6 * n && n > 1; ++t) {
    int i = rng() % n, j = rng() % n;
    if (i == j) continue;
    // T = 1 + E_ji is its own inverse over F_2; sigma -> T sigma T.
    std::vector<F2Vec> T(n, F2Vec(n));
    for (int a = 0; a < n; ++a) T[a].set(a, true);
    T[i].set(j, true);
    std::vector<F2Vec> ns(n);
    for (int a = 0; a < n; ++a) ns[a] = apply(T, apply(s, T[a]));
    s = ns;
  }
  return s;
}

}  // namespace

TEST_SUITE("quadratic-forms") {
  TEST_CASE("class groups of Q(sqrt ell), ell = 1 mod 4") {
    CHECK(form_class_group(229).structure() == "(3)");
    CHECK(form_class_group(257).structure() == "(3)");
    CHECK(form_class_group(401).structure() == "(5)");
    CHECK(form_class_group(577).structure() == "(7)");
    CHECK(form_class_group(2777).structure() == "(3)");
    CHECK(form_class_group(13).structure() == "trivial");
    // Narrow equals wide for prime discriminants.
    for (long ell : {5L, 13L, 17L, 229L, 1009L, 2777L}) CHECK(FormClassGroup(ell).narrow_equals_wide());
    CHECK_FALSE(FormClassGroup(12).narrow_equals_wide());
  }

  TEST_CASE("composition is a group law") {
    FormClassGroup G(4 * 79);
    const int h = G.narrow_class_number();
    for (int i = 0; i < h; ++i) {
      CHECK(G.compose(i, G.identity()) == i);
      CHECK(G.compose(i, G.inverse(i)) == G.identity());
      for (int j = 0; j < h; ++j) {
        CHECK(G.compose(i, j) == G.compose(j, i));
        for (int k = 0; k < h; ++k) CHECK(G.compose(G.compose(i, j), k) == G.compose(i, G.compose(j, k)));
      }
    }
    CHECK(G.narrow_group().order() == h);
  }

  TEST_CASE("reduced forms are permuted by rho within cycles") {
    for (long D : {229L, 316L, 1009L}) {
      FormClassGroup G(D);
      size_t total = 0;
      for (int i = 0; i < G.narrow_class_number(); ++i) {
        for (auto& f : G.cycle(i)) {
          CHECK(G.is_reduced(f));
          CHECK(G.class_of(G.rho(f)) == i);
        }
        total += G.cycle(i).size();
      }
      CHECK(static_cast<int>(total) == reduced_form_count(D));
    }
  }

  TEST_CASE("forms agree with the relation engine on quadratic fields") {
    for (long ell = 5; ell < 1000; ell += 4) {
      if (!is_prime(static_cast<uint64_t>(ell))) continue;
      auto cg = compute_class_group(quadratic_field(ell));
      CHECK_MESSAGE(cg.group.structure() == form_class_group(ell).structure(), "ell = " << ell);
    }
  }
}

TEST_SUITE("galois-modules") {
  TEST_CASE("decompose recovers k and m from conjugated modules") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
      int k = rng() % 4, m = rng() % 4;
      if (k + m == 0) continue;
      auto s = random_module(rng, k, m);
      auto [kk, mm] = decompose(2 * k + m, s);
      CHECK(kk == k);
      CHECK(mm == m);
      auto M = make_module(2 * k + m, s);
      auto subs = u2_submodules(M);
      CHECK(static_cast<long>(subs.size()) == (projective_count(4, k)).get_si());
      std::set<F2Vec> seen;
      for (auto& [v, sv] : subs) {
        CHECK(M.apply(v) == sv);
        CHECK_FALSE(v.is_zero());
        CHECK_FALSE(sv == v);
        seen.insert(v);
      }
      CHECK(seen.size() == subs.size());
    }
  }

  TEST_CASE("sigma must have order dividing 3") {
    std::vector<F2Vec> s(2, F2Vec(2));
    s[0].set(1, true);
    s[1].set(0, true);  // a transposition
    CHECK_THROWS(make_module(2, s));
  }

  TEST_CASE("projective counts") {
    CHECK(projective_count(2, 1) == 1);
    CHECK(projective_count(2, 2) == 3);
    CHECK(projective_count(3, 2) == 4);
    CHECK(projective_count(4, 2) == 5);
    CHECK(projective_count(2, 0) == 0);
  }
}

TEST_SUITE("conductor-rules") {
  TEST_CASE("tame rule") {
    RamificationProfile r;
    r.p = 163;
    r.type = ProjectiveType::A4;
    r.e = 1;
    CHECK(projective_conductor_exponent(r) == 0);
    r.e = 3;
    CHECK(projective_conductor_exponent(r) == 1);
    r.p = 5;
    CHECK(projective_conductor_exponent(r) == 2);
    r.p = 13;
    r.type = ProjectiveType::S4;
    r.e = 4;
    CHECK(projective_conductor_exponent(r) == 1);
    r.p = 7;
    CHECK(projective_conductor_exponent(r) == 2);
    r.e = 2;
    r.decomposition_cyclic = true;
    CHECK(projective_conductor_exponent(r) == 1);
    r.decomposition_cyclic = false;
    CHECK(projective_conductor_exponent(r) == 2);
    r.p = 3;
    r.e = 3;
    CHECK_THROWS_AS(projective_conductor_exponent(r), UnsupportedError);
  }

  TEST_CASE("profiles from splitting data") {
    auto a = ramification_profile_from_splitting(ProjectiveType::A4, 163, 3, 1, 4);
    CHECK(a.decomposition_cyclic);
    CHECK(projective_conductor_exponent(a) == 1);
    auto b = ramification_profile_from_splitting(ProjectiveType::A4, 13, 2, 2, 3);
    CHECK_FALSE(b.decomposition_cyclic);
    CHECK(projective_conductor_exponent(b) == 2);
    auto c = ramification_profile_from_splitting(ProjectiveType::S4, 13, 2, 2, 6, 1);
    CHECK(projective_conductor_exponent(c) == 2);
    CHECK_THROWS_AS(ramification_profile_from_splitting(ProjectiveType::S4, 13, 2, 2, 6), UnsupportedError);
    auto d = ramification_profile_from_splitting(ProjectiveType::S4, 13, 4, 1, 6);
    CHECK(projective_conductor_exponent(d) == 1);
    auto e = ramification_profile_from_splitting(ProjectiveType::S4, 13, 3, 2, 4);
    CHECK_FALSE(e.decomposition_cyclic);
    CHECK(projective_conductor_exponent(e) == 1);
    CHECK_THROWS_AS(ramification_profile_from_splitting(ProjectiveType::A4, 13, 5, 1, 1), DomainError);
  }
}
