#include "maass/quadratic_forms.hpp"

#include <algorithm>
#include <map>

#include "maass/errors.hpp"

namespace maass {

namespace {

// (g, x, y) with x a + y b = g >= 0.
void ext_gcd(const Int& a, const Int& b, Int* g, Int* x, Int* y) {
  mpz_gcdext(g->get_mpz_t(), x->get_mpz_t(), y->get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

// Equivalent form with a > 0, for reduced indefinite forms (a c < 0).
QuadForm positive_a(const QuadForm& f) {
  if (f.a > 0) return f;
  if (f.c > 0) return QuadForm{f.c, -f.b, f.a};
  throw DomainError("form has no positive outer coefficient");
}

}  // namespace

bool QuadForm::operator<(const QuadForm& o) const {
  if (a != o.a) return a < o.a;
  if (b != o.b) return b < o.b;
  return c < o.c;
}

std::string QuadForm::to_string() const { return "(" + a.get_str() + ", " + b.get_str() + ", " + c.get_str() + ")"; }

// Dirichlet composition (Shanks' formulation) for forms with positive a.
QuadForm compose_forms(const QuadForm& f0, const QuadForm& g0) {
  QuadForm f = f0, g = g0;
  if (f.disc() != g.disc()) throw DomainError("composing forms of different discriminants");
  if (f.a <= 0 || g.a <= 0) throw DomainError("composition needs positive leading coefficients");
  if (f.a > g.a) std::swap(f, g);
  const Int D = f.disc();
  Int s = (f.b + g.b) / 2;
  Int n = g.b - s;
  Int y1, d;
  if (g.a % f.a == 0) {
    y1 = 0;
    d = f.a;
  } else {
    Int u, v;
    ext_gcd(g.a, f.a, &d, &u, &v);
    y1 = u;
  }
  Int x2, y2, d1;
  if (s % d == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    ext_gcd(s, d, &d1, &x2, &y2);
    y2 = -y2;
  }
  Int v1 = f.a / d1, v2 = g.a / d1;
  Int r = mod_pos(y1 * y2 * n - x2 * g.c, v1);
  Int b3 = g.b + 2 * v2 * r;
  Int a3 = v1 * v2;
  Int num = b3 * b3 - D;
  if (num % (4 * a3) != 0) throw IntegrityError("composition produced a non-integral form");
  return QuadForm{a3, b3, num / (4 * a3)};
}

bool FormClassGroup::lt_sqrt(const Int& x) const { return x < 0 || x * x < Dz_; }
bool FormClassGroup::gt_sqrt(const Int& x) const { return x > 0 && x * x > Dz_; }

bool FormClassGroup::is_reduced(const QuadForm& f) const {
  if (f.b <= 0 || !lt_sqrt(f.b)) return false;
  Int a2 = 2 * abs(f.a);
  return gt_sqrt(a2 + f.b) && lt_sqrt(a2 - f.b);
}

QuadForm FormClassGroup::rho(const QuadForm& f) const {
  Int c = f.c;
  if (c == 0) throw DomainError("degenerate form");
  Int ac = abs(c);
  Int two_c = 2 * ac;
  Int r;
  if (lt_sqrt(ac)) {
    // largest r = -b mod 2|c| with r < sqrt(D)
    r = s0_ - mod_pos(s0_ + f.b, two_c);
  } else {
    r = mod_pos(-f.b, two_c);
    if (r > ac) r -= two_c;
  }
  Int num = r * r - Dz_;
  return QuadForm{c, r, num / (4 * c)};
}

QuadForm FormClassGroup::reduce(QuadForm f) const {
  for (int it = 0; it < 100000; ++it) {
    if (is_reduced(f)) return f;
    f = rho(f);
  }
  throw IntegrityError("form reduction did not terminate");
}

FormClassGroup::FormClassGroup(long D) : D_(D), Dz_(to_int(D)) {
  if (D <= 0 || is_square(Dz_) || (D % 4 != 0 && D % 4 != 1)) {
    throw DomainError("need a positive non-square discriminant");
  }
  mpz_sqrt(s0_.get_mpz_t(), Dz_.get_mpz_t());
  std::vector<QuadForm> reduced;
  for (Int b = (D % 2 == 1) ? 1 : 2; b <= s0_; b += 2) {
    Int m = (Dz_ - b * b) / 4;
    for (Int t = 1; t * t <= m; ++t) {
      if (m % t != 0) continue;
      for (Int u : {t, Int(m / t)}) {
        if (!(gt_sqrt(2 * u + b) && lt_sqrt(2 * u - b))) continue;
        QuadForm p{u, b, -m / u}, q{-u, b, m / u};
        Int g = gcd(gcd(u, b), m / u);
        if (g != 1) continue;  // primitive forms only
        reduced.push_back(p);
        reduced.push_back(q);
      }
    }
  }
  std::sort(reduced.begin(), reduced.end());
  reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
  std::map<QuadForm, int> where;
  for (auto& f : reduced) {
    if (where.count(f)) continue;
    std::vector<QuadForm> cyc;
    QuadForm g = f;
    int id = static_cast<int>(cycles_.size());
    do {
      if (!is_reduced(g)) throw IntegrityError("rho left the set of reduced forms");
      cyc.push_back(g);
      where[g] = id;
      g = rho(g);
    } while (!(g == f) && cyc.size() <= reduced.size());
    if (cyc.size() > reduced.size()) throw IntegrityError("rho cycle did not close");
    std::sort(cyc.begin(), cyc.end());
    cycles_.push_back(cyc);
  }
  for (auto& [f, id] : where) index_.emplace_back(f, id);
  // cycles_ are in order of their least member already; fix the principal one.
  QuadForm one{1, to_int(D % 2), (to_int(D % 2) - Dz_) / 4};
  principal_ = class_of(one);
}

int FormClassGroup::class_of(const QuadForm& f) const {
  if (f.disc() != Dz_) throw DomainError("form has the wrong discriminant");
  QuadForm r = reduce(f);
  auto it = std::lower_bound(index_.begin(), index_.end(), r, [](const auto& x, const QuadForm& y) { return x.first < y; });
  if (it == index_.end() || !(it->first == r)) throw IntegrityError("reduced form missing from the cycle table");
  return it->second;
}

int FormClassGroup::compose(int i, int j) const {
  QuadForm f = positive_a(representative(i));
  QuadForm g = positive_a(representative(j));
  return class_of(compose_forms(f, g));
}

int FormClassGroup::inverse(int i) const {
  const QuadForm& f = representative(i);
  return class_of(QuadForm{f.a, -f.b, f.c});
}

AbelianGroup FormClassGroup::structure_of(const std::vector<int>& H) const {
  // Structure of the class group modulo the subgroup H, from counts of
  // elements whose p^j-th power lies in H.
  const int h = narrow_class_number();
  std::vector<bool> inH(h, false);
  for (int x : H) inH[x] = true;
  const long hq = h / static_cast<long>(H.size());
  auto power = [&](int x, long e) {
    int r = principal_;
    int b = x;
    while (e > 0) {
      if (e & 1) r = compose(r, b);
      b = compose(b, b);
      e >>= 1;
    }
    return r;
  };
  std::map<unsigned long, std::vector<int>> exps;  // p -> exponents, descending
  for (auto& [p, e] : factor_u64(static_cast<uint64_t>(hq))) {
    std::vector<long> cnt{1};
    long pj = 1;
    for (int j = 1; j <= e; ++j) {
      pj *= static_cast<long>(p);
      long c = 0;
      for (int x = 0; x < h; ++x) c += inH[power(x, pj)] ? 1 : 0;
      cnt.push_back(c / static_cast<long>(H.size()));
    }
    // s_j = log_p cnt_j; #(e_i >= j) = s_j - s_{j-1}
    std::vector<int> s;
    for (long c : cnt) {
      int k = 0;
      while (c > 1) {
        c /= static_cast<long>(p);
        ++k;
      }
      s.push_back(k);
    }
    std::vector<int> ge(e + 2, 0);
    for (int j = 1; j <= e; ++j) ge[j] = s[j] - s[j - 1];
    std::vector<int> ex;
    for (int j = 1; j <= e; ++j) {
      int exactly = ge[j] - ge[j + 1];
      for (int t = 0; t < exactly; ++t) ex.push_back(j);
    }
    std::sort(ex.rbegin(), ex.rend());
    exps[p] = ex;
  }
  std::vector<Int> orders;
  for (auto& [p, ex] : exps) {
    for (int e : ex) {
      Int q;
      mpz_ui_pow_ui(q.get_mpz_t(), p, static_cast<unsigned long>(e));
      orders.push_back(q);
    }
  }
  AbelianGroup g = AbelianGroup::from_cyclic_orders(orders);
  if (g.order() != hq) throw IntegrityError("form class group structure does not match its order");
  return g;
}

AbelianGroup FormClassGroup::narrow_group() const { return structure_of({principal_}); }

AbelianGroup FormClassGroup::wide_group() const {
  QuadForm neg{-1, to_int(D_ % 2), (Dz_ - to_int(D_ % 2)) / 4};
  int c = class_of(neg);
  std::vector<int> H{principal_};
  if (c != principal_) H.push_back(c);
  return structure_of(H);
}

bool FormClassGroup::narrow_equals_wide() const {
  QuadForm neg{-1, to_int(D_ % 2), (Dz_ - to_int(D_ % 2)) / 4};
  return class_of(neg) == principal_;
}

AbelianGroup form_class_group(long ell) {
  if (ell < 5 || ell % 4 != 1 || !is_prime(static_cast<uint64_t>(ell))) {
    throw DomainError("form_class_group needs a prime = 1 mod 4");
  }
  FormClassGroup G(ell);
  if (!G.narrow_equals_wide()) throw IntegrityError("prime discriminant with a norm +1 fundamental unit");
  return G.narrow_group();
}

}  // namespace maass
