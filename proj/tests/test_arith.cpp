#include <random>

#include "doctest.h"
#include "maass/arith.hpp"
#include "maass/errors.hpp"
#include "maass/group.hpp"
#include "maass/linalg.hpp"
#include "maass/poly_fp.hpp"

using namespace maass;

namespace {

bool trial_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

IntMat random_matrix(std::mt19937_64& rng, int r, int c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMat m(r, c);
  for (auto& x : m.a) x = d(rng);
  return m;
}

}  // namespace

TEST_SUITE("exact-arith") {
  TEST_CASE("primality agrees with trial division") {
    for (uint64_t n = 0; n < 20000; ++n) CHECK(is_prime(n) == trial_prime(n));
    auto ps = primes_up_to(20000);
    CHECK(ps.size() == 2262);
    CHECK(is_prime(Int("170141183460469231731687303715884105727")));  // 2^127 - 1
    CHECK_FALSE(is_prime(Int("170141183460469231731687303715884105729")));
    CHECK_FALSE(is_prime(uint64_t{3215031751}));  // strong pseudoprime to 2, 3, 5, 7
  }

  TEST_CASE("modular helpers against naive loops") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 300; ++t) {
      uint64_t m = rng() % 1000 + 2, a = rng() % 5000, e = rng() % 60;
      uint64_t naive = 1 % m;
      for (uint64_t i = 0; i < e; ++i) naive = naive * (a % m) % m;
      CHECK(powmod(a, e, m) == naive);
    }
    for (uint64_t p : {3u, 5u, 7u, 11u, 163u, 277u}) {
      for (uint64_t a = 0; a < p; ++a) {
        int euler = a == 0 ? 0 : (powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1);
        CHECK(legendre(a, p) == euler);
        if (a) CHECK(mulmod(a, invmod(a, p), p) == 1);
      }
    }
    CHECK_THROWS_AS(invmod(6, 9), DomainError);
    CHECK(kronecker(5, 8) == -1);
    CHECK(kronecker(-3, 7) == 1);
  }

  TEST_CASE("factorization round trip") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
      Int n = Int(static_cast<unsigned long>(rng() >> 20)) * Int(static_cast<unsigned long>(rng() >> 40)) + 2;
      auto f = factor_integer(n);
      CHECK(f.value() == n);
      for (auto& [p, e] : f.factors) {
        CHECK(is_prime(p));
        CHECK(e >= 1);
      }
    }
    CHECK(factor_integer(Int(-360)).to_string() == "-2^3*3^2*5");
    CHECK(valuation(Int(1) << 40, 2) == 40);
    Int r;
    CHECK(is_square(Int(26569), &r));
    CHECK(r == 163);
  }

  TEST_CASE("polynomial discriminants and resultants") {
    // Simplest cubic for ell = 13 and the Shanks family.
    CHECK(poly_discriminant(IntPoly::from_i64({1, -4, 1, 1})) == 169);
    for (long a = -1; a < 40; ++a) {
      IntPoly f = IntPoly::from_i64({-1, -(a + 3), -a, 1});
      long ell = a * a + 3 * a + 9;
      CHECK(poly_discriminant(f) == Int(ell) * ell);
    }
    IntPoly f = IntPoly::from_i64({-2, 0, 1}), g = IntPoly::from_i64({-3, 0, 1});
    CHECK(resultant(f, g) == 1);
    CHECK(count_real_roots(IntPoly::from_i64({-1, 0, 0, 1})) == 1);
    CHECK(count_real_roots(IntPoly::from_i64({1, -4, 1, 1})) == 3);
    CHECK(is_squarefree(IntPoly::from_i64({1, 2, 1})) == false);
  }

  TEST_CASE("interpolation is exact") {
    IntPoly f = IntPoly::from_i64({7, -3, 0, 2});
    std::vector<Int> xs, ys;
    for (int x = -2; x <= 2; ++x) {
      xs.push_back(x);
      ys.push_back(f.eval(Int(x)));
    }
    CHECK(interpolate(xs, ys) == f);
  }

  TEST_CASE("factorization mod p multiplies back") {
    std::mt19937_64 rng(3);
    for (uint64_t p : {2u, 3u, 7u, 101u, 65537u}) {
      for (int t = 0; t < 20; ++t) {
        std::vector<Int> c;
        for (int i = 0; i < 7; ++i) c.push_back(Int(static_cast<long>(rng() % 50)) - 25);
        c.push_back(1);
        IntPoly f(c);
        auto fac = factor_mod_p(f, p);
        FpPoly prod(p, {1});
        int deg = 0;
        for (auto& [g, e] : fac) {
          for (int i = 0; i < e; ++i) prod = fp_mul(prod, g);
          deg += g.degree() * e;
        }
        CHECK(prod == FpPoly::reduce(f, p));
        CHECK(deg == 7);
        std::vector<uint64_t> brute;
        if (p < 1000) {
          for (uint64_t x = 0; x < p; ++x) {
            if (FpPoly::reduce(f, p).eval(x) == 0) brute.push_back(x);
          }
          auto rs = roots_mod_p(f, p);
          std::sort(rs.begin(), rs.end());
          CHECK(rs == brute);
        }
      }
    }
    IntPoly g = IntPoly::from_i64({-2, 0, 1});
    Int r = hensel_lift_root(g, 3, 7, 5);  // sqrt 2 in Z_7
    CHECK((r * r - 2) % Int(16807) == 0);
  }
}

TEST_SUITE("linear-algebra") {
  TEST_CASE("Smith normal form: U A V is diagonal with divisibility") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 60; ++t) {
      int r = 1 + rng() % 5, c = 1 + rng() % 5;
      IntMat A = random_matrix(rng, r, c, -6, 6);
      IntMat U, V;
      auto d = smith_normal_form(A, &U, &V);
      IntMat D = U * A * V;
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) CHECK(D(i, j) == (i == j ? d[i] : Int(0)));
      }
      for (size_t i = 0; i + 1 < d.size(); ++i) {
        if (d[i] != 0) CHECK(d[i + 1] % d[i] == 0);
        CHECK(d[i] >= 0);
      }
      CHECK(abs(determinant(U)) == 1);
      CHECK(abs(determinant(V)) == 1);
      if (r == c) {
        Int prod = 1;
        for (auto& x : d) prod *= x;
        CHECK(prod == abs(determinant(A)));
      }
    }
  }

  TEST_CASE("Hermite normal form is canonical") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
      int n = 1 + rng() % 4;
      IntMat G = random_matrix(rng, n, n + 2, -9, 9);
      for (int i = 0; i < n; ++i) G(i, i) += 31;  // full rank
      IntMat H = hnf_columns(G);
      for (int i = 0; i < n; ++i) {
        CHECK(H(i, i) > 0);
        for (int j = 0; j < i; ++j) CHECK(H(i, j) == 0);
        for (int j = i + 1; j < n; ++j) {
          CHECK(H(i, j) >= 0);
          CHECK(H(i, j) < H(i, i));
        }
      }
      // Same lattice after a unimodular column operation.
      IntMat G2 = G;
      for (int i = 0; i < n; ++i) G2(i, 0) += 3 * G(i, 1);
      CHECK(hnf_columns(G2) == H);
    }
  }

  TEST_CASE("abelian groups from relations") {
    IntMat R(2, 2);
    R(0, 0) = 2;
    R(1, 1) = 4;
    CHECK(AbelianGroup::from_relations(R).structure() == "(2,4)");
    CHECK(AbelianGroup::from_cyclic_orders({Int(7), Int(49)}).structure() == "(7,49)");
    CHECK(AbelianGroup::from_cyclic_orders({Int(2), Int(3)}).structure() == "(6)");
    auto g = AbelianGroup::from_cyclic_orders({Int(4), Int(4), Int(3)});
    CHECK(g.order() == 48);
    CHECK(g.p_rank(2) == 2);
    CHECK(g.p_rank(3) == 1);
    CHECK(three_rank(g) == 1);
    CHECK(AbelianGroup::from_cyclic_orders({}).structure() == "trivial");
  }

  TEST_CASE("F2 rank agrees with rank over F_p for p = 2") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 50; ++t) {
      int r = 1 + rng() % 12, c = 1 + rng() % 70;
      FpMat M(2, r, c);
      std::vector<F2Vec> rows(r, F2Vec(c));
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
          bool b = rng() & 1;
          M(i, j) = b;
          rows[i].set(j, b);
        }
      }
      CHECK(f2_rank(rows) == fp_rank(M));
      for (auto& v : fp_kernel(M)) {
        for (int i = 0; i < r; ++i) {
          uint64_t s = 0;
          for (int j = 0; j < c; ++j) s ^= M(i, j) & v[j];
          CHECK(s == 0);
        }
      }
    }
  }

  TEST_CASE("LLL returns a unimodular transform") {
    std::vector<std::vector<long double>> b = {{1, 0, 0}, {0, 1, 0}, {1000, 999, 1}};
    auto orig = b;
    auto T = lll_reduce(b);
    for (size_t i = 0; i < b.size(); ++i) {
      for (size_t j = 0; j < 3; ++j) {
        long double s = 0;
        for (size_t k = 0; k < 3; ++k) s += T[i][k] * orig[k][j];
        CHECK(s == doctest::Approx(static_cast<double>(b[i][j])));
      }
    }
    IntMat TM(3, 3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) TM(i, j) = static_cast<long>(T[i][j]);
    }
    CHECK(abs(determinant(TM)) == 1);
  }
}
