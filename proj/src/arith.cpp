#include "maass/arith.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

namespace maass {

bool fits_i64(const Int& v) { return mpz_fits_slong_p(v.get_mpz_t()) != 0; }

long long to_i64(const Int& v) {
  if (!fits_i64(v)) throw DomainError("integer does not fit in 64 bits");
  return v.get_si();
}

Int from_i128(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  Int hi(static_cast<unsigned long>(u >> 64));
  Int r = (hi << 64) + Int(static_cast<unsigned long>(u & ~0ULL));
  return neg ? Int(-r) : r;
}

std::string to_string(const Int& v) { return v.get_str(); }

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<u128>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

uint64_t invmod(uint64_t a, uint64_t m) {
  long long t = 0, nt = 1;
  long long r = static_cast<long long>(m), nr = static_cast<long long>(a % m);
  while (nr) {
    long long q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) throw DomainError("element not invertible modulo m");
  if (t < 0) t += static_cast<long long>(m);
  return static_cast<uint64_t>(t);
}

int legendre(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  uint64_t r = powmod(a, (p - 1) / 2, p);
  return r == 1 ? 1 : -1;
}

int kronecker(long long a, long long n) {
  Int A(static_cast<long>(a)), N(static_cast<long>(n));
  return mpz_kronecker(A.get_mpz_t(), N.get_mpz_t());
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  static const uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (uint64_t p : small) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : small) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

bool is_prime(const Int& n, bool* certain) {
  if (certain) *certain = true;
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime(static_cast<uint64_t>(n.get_ui()));
  // Bases 2..41 are deterministic below 3.3e24.
  static const Int limit("3317044064679887385961981");
  static const unsigned bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned b : bases) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), b)) return n == b;
  }
  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Int nm1 = n - 1, x;
  for (unsigned b : bases) {
    Int a(b);
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) continue;
    bool comp = true;
    for (unsigned long i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == nm1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  if (n < limit) return true;
  if (certain) *certain = false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::vector<uint32_t> primes_up_to(uint32_t n) {
  static std::mutex mu;
  static std::vector<uint32_t> cache;
  static uint32_t cached_to = 0;
  std::lock_guard<std::mutex> lock(mu);
  if (n > cached_to) {
    uint32_t m = std::max<uint32_t>(n, 2 * cached_to);
    std::vector<bool> comp(m + 1, false);
    cache.clear();
    for (uint32_t i = 2; i <= m; ++i) {
      if (comp[i]) continue;
      cache.push_back(i);
      for (uint64_t j = static_cast<uint64_t>(i) * i; j <= m; j += i) comp[j] = true;
    }
    cached_to = m;
  }
  return std::vector<uint32_t>(cache.begin(), std::upper_bound(cache.begin(), cache.end(), n));
}

Int Factorization::value() const {
  Int v = sign;
  for (auto& [p, e] : factors) {
    Int pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
    v *= pe;
  }
  return v;
}

std::string Factorization::to_string() const {
  std::ostringstream os;
  if (sign < 0) os << "-";
  if (factors.empty()) os << "1";
  for (size_t i = 0; i < factors.size(); ++i) {
    if (i) os << "*";
    os << factors[i].first.get_str();
    if (factors[i].second > 1) os << "^" << factors[i].second;
  }
  return os.str();
}

namespace {

uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

uint64_t brent_u64(uint64_t n) {
  if (n % 2 == 0) return 2;
  for (uint64_t c = 1;; ++c) {
    uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
    uint64_t r = 1;
    const uint64_t m = 128;
    auto f = [&](uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (uint64_t i = 0; i < r; ++i) y = f(y);
      uint64_t k = 0;
      do {
        ys = y;
        for (uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = gcd_u64(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_u64_rec(uint64_t n, std::vector<uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = brent_u64(n);
  factor_u64_rec(d, out);
  factor_u64_rec(n / d, out);
}

Int brent_mpz(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x = 2, g = 1, q = 1, ys = 2, t;
    unsigned long r = 1;
    const unsigned long m = 256;
    auto f = [&](Int& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          f(y);
          t = abs(x - y);
          q = q * t % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        f(ys);
        t = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_mpz_rec(const Int& n, std::vector<Int>& out) {
  if (n == 1) return;
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    std::vector<uint64_t> f;
    factor_u64_rec(n.get_ui(), f);
    for (auto p : f) out.emplace_back(static_cast<unsigned long>(p));
    return;
  }
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  if (is_square(n)) {
    Int r = sqrt(n);
    factor_mpz_rec(r, out);
    factor_mpz_rec(r, out);
    return;
  }
  Int d = brent_mpz(n);
  factor_mpz_rec(d, out);
  factor_mpz_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<uint64_t, int>> factor_u64(uint64_t n) {
  std::vector<uint64_t> ps;
  for (uint64_t p : {2, 3, 5, 7, 11, 13}) {
    while (n % p == 0) {
      ps.push_back(p);
      n /= p;
    }
  }
  factor_u64_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  std::vector<std::pair<uint64_t, int>> out;
  for (auto p : ps) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

Factorization factor_integer(const Int& n0) {
  if (n0 == 0) throw DomainError("cannot factor zero");
  Factorization f;
  f.sign = sgn(n0) < 0 ? -1 : 1;
  Int n = abs(n0);
  std::vector<Int> ps;
  for (uint32_t p : primes_up_to(10000)) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ps.emplace_back(static_cast<unsigned long>(p));
      n /= p;
    }
    if (n == 1) break;
  }
  factor_mpz_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  for (auto& p : ps) {
    if (!f.factors.empty() && f.factors.back().first == p) {
      ++f.factors.back().second;
    } else {
      f.factors.emplace_back(p, 1);
    }
  }
  return f;
}

int valuation(Int n, const Int& p) {
  if (n == 0) throw DomainError("valuation of zero");
  int v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

bool is_square(const Int& n, Int* root) {
  if (n < 0) return false;
  if (!mpz_perfect_square_p(n.get_mpz_t())) return false;
  if (root) *root = sqrt(n);
  return true;
}

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(std::vector<Int> c) : c_(std::move(c)) { trim(); }

IntPoly IntPoly::from_i64(std::initializer_list<long long> c) {
  std::vector<Int> v;
  for (long long x : c) v.push_back(to_int(x));
  return IntPoly(std::move(v));
}

IntPoly IntPoly::monomial(int deg, const Int& c) {
  std::vector<Int> v(deg + 1, Int(0));
  v[deg] = c;
  return IntPoly(std::move(v));
}

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Int IntPoly::eval(const Int& x) const {
  Int r = 0;
  for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
  return r;
}

Rat IntPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (int i = degree(); i >= 0; --i) r = r * x + Rat(c_[i]);
  return r;
}

long double IntPoly::eval(long double x) const {
  long double r = 0;
  for (int i = degree(); i >= 0; --i) r = r * x + static_cast<long double>(c_[i].get_d());
  return r;
}

IntPoly IntPoly::derivative() const {
  if (degree() < 1) return IntPoly();
  std::vector<Int> d(degree());
  for (int i = 1; i <= degree(); ++i) d[i - 1] = c_[i] * i;
  return IntPoly(std::move(d));
}

Int IntPoly::content() const {
  Int g = 0;
  for (auto& c : c_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

IntPoly IntPoly::primitive_part() const {
  Int g = content();
  if (g == 0) return *this;
  if (lead() < 0) g = -g;
  std::vector<Int> v = c_;
  for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return IntPoly(std::move(v));
}

IntPoly IntPoly::compose_linear(const Int& a, const Int& b) const {
  IntPoly lin(std::vector<Int>{b, a});
  IntPoly r;
  for (int i = degree(); i >= 0; --i) r = r * lin + IntPoly(std::vector<Int>{c_[i]});
  return r;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Int(0));
  for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly IntPoly::operator-() const {
  std::vector<Int> r = c_;
  for (auto& c : r) c = -c;
  return IntPoly(std::move(r));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  std::vector<Int> r(a.c_.size() + b.c_.size() - 1, Int(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return IntPoly(std::move(r));
}

IntPoly operator*(const Int& s, const IntPoly& a) {
  std::vector<Int> r = a.c_;
  for (auto& c : r) c *= s;
  return IntPoly(std::move(r));
}

std::string IntPoly::to_string(const char* var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Int& c = c_[i];
    if (c == 0) continue;
    Int a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (a != 1 || i == 0) os << a.get_str();
    if (i > 0) {
      if (a != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- RatPoly

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly to_rat(const IntPoly& f) {
  RatPoly r;
  for (auto& c : f.coeffs()) r.emplace_back(c);
  return r;
}

RatPoly rat_mul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

RatPoly rat_mod(RatPoly a, const RatPoly& m) {
  trim(a);
  if (m.empty()) throw DomainError("polynomial division by zero");
  const size_t dm = m.size() - 1;
  while (a.size() > dm && !a.empty()) {
    Rat q = a.back() / m.back();
    size_t shift = a.size() - 1 - dm;
    for (size_t i = 0; i <= dm; ++i) a[shift + i] -= q * m[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

RatPoly rat_gcd(RatPoly a, RatPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    RatPoly r = rat_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat l = a.back();
    for (auto& c : a) c /= l;
  }
  return a;
}

IntPoly interpolate(const std::vector<Int>& xs, const std::vector<Int>& ys) {
  // Newton divided differences.
  const size_t n = xs.size();
  std::vector<Rat> dd(ys.begin(), ys.end());
  for (size_t j = 1; j < n; ++j) {
    for (size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / Rat(xs[i] - xs[i - j]);
    }
  }
  RatPoly r{dd[n - 1]};
  for (size_t k = n - 1; k-- > 0;) {
    r = rat_mul(r, RatPoly{Rat(-xs[k]), Rat(1)});
    if (r.empty()) r.push_back(0);
    r[0] += dd[k];
  }
  std::vector<Int> c;
  for (auto& q : r) {
    if (q.get_den() != 1) throw IntegrityError("interpolated polynomial is not integral");
    c.push_back(q.get_num());
  }
  return IntPoly(std::move(c));
}

// -------------------------------------------------------- resultant/disc

namespace {

Int bareiss_det(std::vector<std::vector<Int>> a) {
  const size_t n = a.size();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

Int resultant(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  const int m = f.degree(), n = g.degree();
  if (m == 0) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), f[0].get_mpz_t(), n);
    return r;
  }
  if (n == 0) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), g[0].get_mpz_t(), m);
    return r;
  }
  const int N = m + n;
  std::vector<std::vector<Int>> s(N, std::vector<Int>(N, Int(0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= m; ++j) s[i][i + j] = f[m - j];
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= n; ++j) s[n + i][i + j] = g[n - j];
  }
  return bareiss_det(std::move(s));
}

Int poly_discriminant(const IntPoly& f) {
  const int n = f.degree();
  if (n < 1) throw DomainError("discriminant of a constant");
  if (n == 1) return 1;
  Int r = resultant(f, f.derivative());
  Int d;
  mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.lead().get_mpz_t());
  if ((n * (n - 1) / 2) % 2) d = -d;
  return d;
}

IntPoly make_monic(const IntPoly& f, Int* scale) {
  if (f.degree() < 1) throw DomainError("constant polynomial");
  Int a = f.lead();
  if (a < 0) return make_monic(-f, scale);
  if (scale) *scale = a;
  const int n = f.degree();
  // theta' = a*theta is a root of a^{n-1} f(x/a): c[i] = f[i] * a^{n-1-i}.
  std::vector<Int> c(n + 1);
  Int pw = 1;
  for (int i = n - 1; i >= 0; --i) {
    c[i] = f[i] * pw;
    pw *= a;
  }
  c[n] = 1;
  return IntPoly(std::move(c));
}

bool is_squarefree(const IntPoly& f) {
  RatPoly g = rat_gcd(to_rat(f), to_rat(f.derivative()));
  return g.size() <= 1;
}

int count_real_roots(const IntPoly& f0) {
  IntPoly f = f0.primitive_part();
  {
    // Reduce to the squarefree part so the Sturm count is the number of distinct roots.
    RatPoly g = rat_gcd(to_rat(f), to_rat(f.derivative()));
    if (g.size() > 1) throw DomainError("Sturm count needs a squarefree polynomial");
  }
  auto to_prim = [](RatPoly p) {
    Int den = 1;
    for (auto& c : p) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Int> v;
    for (auto& c : p) v.push_back(Rat(c * den).get_num());
    IntPoly q(std::move(v));
    Int g = q.content();
    std::vector<Int> w = q.coeffs();
    for (auto& c : w) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return IntPoly(std::move(w));
  };
  std::vector<IntPoly> seq{f, f.derivative().primitive_part()};
  while (seq.back().degree() > 0) {
    RatPoly r = rat_mod(to_rat(seq[seq.size() - 2]), to_rat(seq.back()));
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(to_prim(r));
  }
  auto changes = [&](bool plus_inf) {
    int cnt = 0, last = 0;
    for (auto& p : seq) {
      int s = sgn(p.lead());
      if (!plus_inf && p.degree() % 2) s = -s;
      if (s == 0) continue;
      if (last && s != last) ++cnt;
      last = s;
    }
    return cnt;
  };
  return changes(false) - changes(true);
}

}  // namespace maass
