#pragma once

#include <cmath>
#include <algorithm>
#include <array>
#include <functional>

#include "maass/arith.hpp"
#include "maass/fields.hpp"
#include "maass/group.hpp"
#include "maass/ideals.hpp"
#include "maass/linalg.hpp"

namespace maass::testing {

// Brute-force class group of a cyclic cubic field: every ideal of norm up to
// the Minkowski bound, classes by direct principality search.
class IdealClassOracle {
 public:
  explicit IdealClassOracle(NumberField K) : K_(std::move(K)), auts_(galois_automorphisms(K_)) {
    // n! / n^n sqrt(d) with n = 3, d = f^2.
    const double M = 6.0 / 27.0 * std::sqrt(static_cast<double>(K_.disc().get_d()));
    std::vector<PrimeIdeal> primes;
    for (uint32_t p : primes_up_to(static_cast<uint32_t>(M))) {
      for (auto& P : prime_decomposition(K_, Int(p))) {
        if (P.norm() <= M) primes.push_back(P);
      }
    }
    std::vector<Ideal> ideals{principal_ideal(K_, K_.one())};
    std::function<void(size_t, Ideal)> grow = [&](size_t from, Ideal I) {
      for (size_t i = from; i < primes.size(); ++i) {
        Ideal J = ideal_mul(K_, I, primes[i].ideal);
        if (J.norm() > M) continue;
        ideals.push_back(J);
        grow(i, J);
      }
    };
    grow(0, ideals[0]);
    ideals_enumerated = ideals.size();
    for (auto& I : ideals) class_of(I);
  }

  size_t ideals_enumerated = 0;

  // Invariant factors read off from the multiplication table.
  AbelianGroup group() {
    const size_t h = reps_.size();
    auto mul = [&](size_t a, size_t b) { return class_of(ideal_mul(K_, reps_[a], reps_[b])); };
    auto power = [&](size_t a, long e) {
      size_t r = 0;  // reps_[0] is the unit ideal
      for (long i = 0; i < e; ++i) r = mul(r, a);
      return r;
    };
    std::vector<Int> cyclic;
    for (auto& [p, e] : factor_integer(Int(static_cast<long>(h))).factors) {
      const long pp = p.get_si();
      // n_i = #{x : x^(p^i) = 1}; the number of cyclic factors of order >= p^i
      // is log_p(n_i / n_{i-1}).
      std::vector<long> n{1};
      long q = 1;
      for (int i = 1; i <= e; ++i) {
        q *= pp;
        long c = 0;
        for (size_t a = 0; a < h; ++a) c += power(a, q) == 0;
        n.push_back(c);
      }
      std::vector<int> at_least(e + 2, 0);
      for (int i = 1; i <= e; ++i) {
        long ratio = n[i] / n[i - 1];
        int t = 0;
        while (ratio > 1) {
          ratio /= pp;
          ++t;
        }
        at_least[i] = t;
      }
      for (int i = 1; i <= e; ++i) {
        int exactly = at_least[i] - at_least[i + 1];
        Int order = 1;
        for (int j = 0; j < i; ++j) order *= pp;
        for (int j = 0; j < exactly; ++j) cyclic.push_back(order);
      }
    }
    return AbelianGroup::from_cyclic_orders(cyclic);
  }

  size_t class_count() const { return reps_.size(); }

 private:
  // Element of norm +-N(I) among small combinations of a T2-reduced basis
  // with embeddings scaled by exp(t); some unit multiple of a generator is
  // balanced for one of the scalings tried.
  bool search(const std::vector<Elt>& basis, const Int& N, const std::array<long double, 3>& t, int B) {
    std::vector<std::vector<long double>> emb;
    for (auto& x : basis) {
      auto e = K_.embed_real(x);
      for (int j = 0; j < 3; ++j) e[j] *= std::exp(t[j]);
      emb.push_back(e);
    }
    auto T = lll_reduce(emb);
    std::vector<Elt> red;
    std::vector<std::vector<long double>> re;
    for (int i = 0; i < 3; ++i) {
      Elt x(3, Int(0));
      for (int k = 0; k < 3; ++k) x = K_.add(x, K_.scale(basis[k], Int(static_cast<long>(T[i][k]))));
      red.push_back(x);
      re.push_back(K_.embed_real(x));
    }
    const long double target = N.get_d();
    for (int a = -B; a <= B; ++a) {
      for (int b = -B; b <= B; ++b) {
        for (int c = 0; c <= B; ++c) {  // x and -x generate the same ideal
          long double nx = 1;
          for (int j = 0; j < 3; ++j) nx *= a * re[0][j] + b * re[1][j] + c * re[2][j];
          if (std::fabs(std::fabs(nx) - target) > 1e-6L * target + 0.5L) continue;
          Elt x = K_.add(K_.add(K_.scale(red[0], Int(a)), K_.scale(red[1], Int(b))), K_.scale(red[2], Int(c)));
          if (abs(K_.norm(x)) == N) return true;
        }
      }
    }
    return false;
  }

  bool principal(const Ideal& I) {
    const Int N = I.norm();
    if (N == 1) return true;
    std::vector<Elt> basis;
    for (int j = 0; j < 3; ++j) basis.push_back(I.H.col(j));
    if (search(basis, N, {0, 0, 0}, 12)) return true;
    for (long double t1 = -kTwist; t1 <= kTwist; t1 += kStep) {
      for (long double t2 = -kTwist; t2 <= kTwist; t2 += kStep) {
        if (search(basis, N, {t1, t2, -t1 - t2}, 4)) return true;
      }
    }
    return false;
  }

  static constexpr long double kTwist = 8;
  static constexpr long double kStep = 0.75;

  size_t class_of(const Ideal& I) {
    for (size_t r = 0; r < reps_.size(); ++r) {
      // I ~ R iff I * sigma(R) * sigma^2(R) is principal, since the product
      // of the conjugates of R is (N R).
      Ideal J = I;
      for (size_t a = 1; a < auts_.size(); ++a) J = ideal_mul(K_, J, ideal_apply(K_, reps_[r], auts_[a]));
      if (principal(J)) return r;
    }
    reps_.push_back(I);
    return reps_.size() - 1;
  }

  NumberField K_;
  std::vector<IntMat> auts_;
  std::vector<Ideal> reps_;
};


}  // namespace maass::testing
