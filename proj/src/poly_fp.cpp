#include "maass/poly_fp.hpp"

#include <algorithm>

namespace maass {

FpPoly::FpPoly(uint64_t p_, std::vector<uint64_t> c_) : p(p_), c(std::move(c_)) {
  for (auto& x : c) x %= p;
  trim();
}

FpPoly FpPoly::reduce(const IntPoly& f, uint64_t p) {
  std::vector<uint64_t> v;
  Int r;
  Int P(static_cast<unsigned long>(p));
  for (auto& a : f.coeffs()) {
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), P.get_mpz_t());
    v.push_back(r.get_ui());
  }
  return FpPoly(p, std::move(v));
}

void FpPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

uint64_t FpPoly::eval(uint64_t x) const {
  uint64_t r = 0;
  for (int i = degree(); i >= 0; --i) r = (mulmod(r, x, p) + c[i]) % p;
  return r;
}

IntPoly FpPoly::lift() const {
  std::vector<Int> v;
  for (auto x : c) v.emplace_back(static_cast<unsigned long>(x));
  return IntPoly(std::move(v));
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
  std::vector<uint64_t> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] = (r[i] + b.c[i]) % a.p;
  return FpPoly(a.p, std::move(r));
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b) {
  std::vector<uint64_t> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] = (r[i] + a.p - b.c[i]) % a.p;
  return FpPoly(a.p, std::move(r));
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly(a.p, {});
  const uint64_t p = a.p;
  std::vector<uint64_t> r(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (!a.c[i]) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      r[i + j] = static_cast<uint64_t>((static_cast<u128>(a.c[i]) * b.c[j] + r[i + j]) % p);
    }
  }
  return FpPoly(p, std::move(r));
}

FpPoly fp_scale(const FpPoly& a, uint64_t s) {
  std::vector<uint64_t> r = a.c;
  for (auto& x : r) x = mulmod(x, s, a.p);
  return FpPoly(a.p, std::move(r));
}

void fp_divmod(const FpPoly& a, const FpPoly& b, FpPoly* q, FpPoly* r) {
  if (b.is_zero()) throw DomainError("polynomial division by zero mod p");
  const uint64_t p = a.p;
  std::vector<uint64_t> rem = a.c;
  const int db = b.degree();
  const uint64_t inv = invmod(b.lead(), p);
  std::vector<uint64_t> quo(std::max(0, a.degree() - db + 1), 0);
  for (int i = a.degree(); i >= db; --i) {
    uint64_t t = mulmod(rem[i], inv, p);
    if (!t) continue;
    quo[i - db] = t;
    for (int j = 0; j <= db; ++j) {
      rem[i - db + j] = (rem[i - db + j] + p - mulmod(t, b.c[j], p)) % p;
    }
  }
  if (q) *q = FpPoly(p, std::move(quo));
  if (r) {
    rem.resize(std::min<size_t>(rem.size(), static_cast<size_t>(std::max(db, 0))));
    *r = FpPoly(p, std::move(rem));
  }
}

FpPoly fp_mod(const FpPoly& a, const FpPoly& m) {
  if (a.degree() < m.degree()) return a;
  FpPoly r;
  fp_divmod(a, m, nullptr, &r);
  return r;
}

FpPoly fp_monic(const FpPoly& a) {
  if (a.is_zero()) return a;
  return fp_scale(a, invmod(a.lead(), a.p));
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = fp_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a);
}

FpPoly fp_derivative(const FpPoly& a) {
  std::vector<uint64_t> r;
  for (int i = 1; i <= a.degree(); ++i) r.push_back(mulmod(a.c[i], i % a.p, a.p));
  return FpPoly(a.p, std::move(r));
}

FpPoly fp_powmod(FpPoly base, Int e, const FpPoly& m) {
  FpPoly r(m.p, {1});
  base = fp_mod(base, m);
  r = fp_mod(r, m);
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    r = fp_mod(fp_mul(r, r), m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = fp_mod(fp_mul(r, base), m);
  }
  return r;
}

namespace {

FpPoly exact_div(const FpPoly& a, const FpPoly& b) {
  FpPoly q, r;
  fp_divmod(a, b, &q, &r);
  return q;
}

// Squarefree decomposition of a monic polynomial: pairs (g_i, i), g_i squarefree.
std::vector<std::pair<FpPoly, int>> squarefree(const FpPoly& f) {
  std::vector<std::pair<FpPoly, int>> out;
  const uint64_t p = f.p;
  FpPoly c = fp_gcd(f, fp_derivative(f));
  FpPoly w = exact_div(f, c);
  int i = 1;
  while (!w.is_one()) {
    FpPoly y = fp_gcd(w, c);
    FpPoly fac = exact_div(w, y);
    if (fac.degree() > 0) out.emplace_back(fac, i);
    w = y;
    c = exact_div(c, y);
    ++i;
  }
  if (!c.is_one()) {
    // c is a p-th power.
    std::vector<uint64_t> root;
    for (size_t j = 0; j < c.c.size(); j += p) root.push_back(c.c[j]);
    for (auto& [g, m] : squarefree(FpPoly(p, root))) out.emplace_back(g, static_cast<int>(m * p));
  }
  return out;
}

void equal_degree(const FpPoly& g, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  const uint64_t p = g.p;
  Int q;
  mpz_ui_pow_ui(q.get_mpz_t(), p, d);
  Int e = (q - 1) / 2;
  while (true) {
    std::vector<uint64_t> a(g.degree());
    for (auto& x : a) x = rng() % p;
    FpPoly A(p, a);
    if (A.degree() < 1) continue;
    FpPoly b;
    if (p == 2) {
      // Absolute trace to F_2.
      FpPoly t = A, acc = A;
      for (int i = 1; i < d; ++i) {
        t = fp_mod(fp_mul(t, t), g);
        acc = fp_add(acc, t);
      }
      b = acc;
    } else {
      b = fp_sub(fp_powmod(A, e, g), FpPoly(p, {1}));
    }
    FpPoly h = fp_gcd(g, b);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree(h, d, rng, out);
      equal_degree(exact_div(g, h), d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<FpPoly, int>> factor_mod_p(const FpPoly& f0) {
  if (f0.degree() < 1) return {};
  const uint64_t p = f0.p;
  FpPoly f = fp_monic(f0);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ p);
  std::vector<std::pair<FpPoly, int>> out;
  for (auto& [g0, mult] : squarefree(f)) {
    FpPoly g = g0;
    FpPoly x(p, {0, 1});
    FpPoly h = fp_mod(x, g);
    for (int d = 1; g.degree() >= 2 * d; ++d) {
      h = fp_powmod(h, Int(static_cast<unsigned long>(p)), g);
      FpPoly t = fp_gcd(g, fp_sub(h, x));
      if (t.degree() > 0) {
        std::vector<FpPoly> parts;
        equal_degree(t, d, rng, parts);
        for (auto& q : parts) out.emplace_back(q, mult);
        g = exact_div(g, t);
        h = fp_mod(h, g);
      }
    }
    if (g.degree() > 0) out.emplace_back(g, mult);
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    return a.first.c < b.first.c;
  });
  return out;
}

std::vector<std::pair<FpPoly, int>> factor_mod_p(const IntPoly& f, uint64_t p) {
  if (p < 2 || !is_prime(p)) throw DomainError("factor_mod_p needs a prime modulus");
  FpPoly fp = FpPoly::reduce(f, p);
  if (fp.degree() < f.degree()) throw DomainError("leading coefficient vanishes mod p");
  return factor_mod_p(fp);
}

std::vector<int> factor_degrees_mod_p(const IntPoly& f, uint64_t p) {
  std::vector<int> d;
  for (auto& [g, m] : factor_mod_p(f, p)) {
    for (int i = 0; i < m; ++i) d.push_back(g.degree());
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<uint64_t> roots_mod_p(const IntPoly& f, uint64_t p) {
  std::vector<uint64_t> r;
  for (auto& [g, m] : factor_mod_p(f, p)) {
    if (g.degree() == 1) r.push_back((p - g.c[0]) % p);
  }
  std::sort(r.begin(), r.end());
  return r;
}

Int hensel_lift_root(const IntPoly& f, uint64_t r, uint64_t p, int k) {
  Int P(static_cast<unsigned long>(p));
  Int x(static_cast<unsigned long>(r));
  IntPoly df = f.derivative();
  Int mod = P;
  int prec = 1;
  while (prec < k) {
    prec = std::min(2 * prec, k);
    mpz_pow_ui(mod.get_mpz_t(), P.get_mpz_t(), prec);
    Int fx = f.eval(x) % mod;
    Int dfx = df.eval(x) % mod;
    Int inv;
    if (!mpz_invert(inv.get_mpz_t(), dfx.get_mpz_t(), mod.get_mpz_t())) {
      throw DomainError("Hensel lift of a non-simple root");
    }
    x = (x - fx * inv) % mod;
    if (x < 0) x += mod;
  }
  return x;
}

}  // namespace maass
