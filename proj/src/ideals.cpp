#include "maass/ideals.hpp"

#include <algorithm>
#include <sstream>

#include "maass/poly_fp.hpp"

namespace maass {

Int Ideal::norm() const {
  Int n = 1;
  for (int i = 0; i < H.rows; ++i) n *= H(i, i);
  return n;
}

bool Ideal::is_unit() const { return norm() == 1; }

namespace {

Ideal hnf_of(const std::vector<Elt>& cols, int n, const Int& modulus) {
  IntMat g(n, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    for (int i = 0; i < n; ++i) g(i, static_cast<int>(j)) = cols[j][i];
  }
  return Ideal{hnf_columns(g, abs(modulus))};
}

std::vector<Elt> columns(const Ideal& I) {
  std::vector<Elt> c;
  for (int j = 0; j < I.H.cols; ++j) c.push_back(I.H.col(j));
  return c;
}

}  // namespace

Ideal ideal_from_generators(const NumberField& K, const std::vector<Elt>& gens) {
  const int n = K.degree();
  Int m = 0;
  std::vector<Elt> cols;
  for (auto& g : gens) {
    if (K.is_zero(g)) continue;
    Int N = K.norm(g);
    mpz_gcd(m.get_mpz_t(), m.get_mpz_t(), N.get_mpz_t());
    IntMat M = K.mult_matrix(g);
    for (int j = 0; j < n; ++j) cols.push_back(M.col(j));
  }
  if (m == 0) throw DomainError("zero ideal");
  return hnf_of(cols, n, m);
}

Ideal principal_ideal(const NumberField& K, const Elt& x) { return ideal_from_generators(K, {x}); }

Ideal ideal_mul(const NumberField& K, const Ideal& a, const Ideal& b) {
  const int n = K.degree();
  std::vector<Elt> cols;
  auto ca = columns(a), cb = columns(b);
  for (auto& x : ca) {
    for (auto& y : cb) cols.push_back(K.mul(x, y));
  }
  return hnf_of(cols, n, a.min_integer() * b.min_integer());
}

Ideal ideal_add(const NumberField& K, const Ideal& a, const Ideal& b) {
  auto cols = columns(a);
  for (auto& c : columns(b)) cols.push_back(c);
  Int m;
  mpz_gcd(m.get_mpz_t(), a.min_integer().get_mpz_t(), b.min_integer().get_mpz_t());
  return hnf_of(cols, K.degree(), m);
}

Ideal ideal_pow(const NumberField& K, const Ideal& a, unsigned e) {
  Ideal r{IntMat::identity(K.degree())};
  Ideal base = a;
  while (e) {
    if (e & 1) r = ideal_mul(K, r, base);
    e >>= 1;
    if (e) base = ideal_mul(K, base, base);
  }
  return r;
}

bool ideal_contains(const Ideal& I, const Elt& x0) {
  const int n = I.H.rows;
  Elt x = x0;
  Int q;
  for (int j = n - 1; j >= 0; --j) {
    if (!mpz_divisible_p(x[j].get_mpz_t(), I.H(j, j).get_mpz_t())) return false;
    mpz_divexact(q.get_mpz_t(), x[j].get_mpz_t(), I.H(j, j).get_mpz_t());
    if (q == 0) continue;
    for (int i = 0; i <= j; ++i) x[i] -= q * I.H(i, j);
  }
  return true;
}

Ideal ideal_apply(const NumberField& K, const Ideal& I, const IntMat& aut) {
  std::vector<Elt> cols;
  for (auto& c : columns(I)) cols.push_back(K.apply(aut, c));
  return hnf_of(cols, K.degree(), I.min_integer());
}

std::string ideal_to_string(const Ideal& I) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < I.H.rows; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < I.H.cols; ++j) os << (j ? " " : "") << I.H(i, j).get_str();
  }
  os << "]";
  return os.str();
}

Int PrimeIdeal::norm() const {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), f);
  return r;
}

std::string PrimeIdeal::to_string() const {
  std::ostringstream os;
  os << "P(" << p.get_str() << ", e=" << e << ", f=" << f << ", " << ideal_to_string(ideal) << ")";
  return os.str();
}

namespace {

std::vector<uint64_t> mod_vec(const Elt& x, uint64_t p) {
  std::vector<uint64_t> v(x.size());
  Int P(static_cast<unsigned long>(p)), r;
  for (size_t i = 0; i < x.size(); ++i) {
    mpz_fdiv_r(r.get_mpz_t(), x[i].get_mpz_t(), P.get_mpz_t());
    v[i] = r.get_ui();
  }
  return v;
}

Elt lift_vec(const std::vector<uint64_t>& v) {
  Elt e;
  for (auto x : v) e.emplace_back(static_cast<unsigned long>(x));
  return e;
}

Ideal prime_from_kernel(const std::vector<std::vector<uint64_t>>& ker, int n, uint64_t p) {
  std::vector<Elt> cols;
  for (auto& k : ker) cols.push_back(lift_vec(k));
  for (int i = 0; i < n; ++i) {
    Elt e(n, Int(0));
    e[i] = Int(static_cast<unsigned long>(p));
    cols.push_back(e);
  }
  return hnf_of(cols, n, Int(static_cast<unsigned long>(p)));
}

// beta with beta * P in pO and beta not in pO.
Elt anti_uniformizer(const NumberField& K, const Ideal& P, uint64_t p) {
  const int n = K.degree();
  FpMat m(p, n * n, n);
  for (int k = 0; k < n; ++k) {
    const IntMat& Mk = K.mult_matrix_basis(k);
    for (int i = 0; i < n; ++i) {
      Elt col = P.H.col(i);
      Elt prod = mat_vec(Mk, col);
      auto v = mod_vec(prod, p);
      for (int r = 0; r < n; ++r) m(i * n + r, k) = v[r];
    }
  }
  auto ker = fp_kernel(m);
  if (ker.empty()) throw IntegrityError("no anti-uniformizer for a prime ideal");
  return lift_vec(ker[0]);
}

class ModAlgebra {
 public:
  ModAlgebra(const NumberField& K, uint64_t p) : K_(K), p_(p), n_(K.degree()) {
    for (int i = 0; i < n_; ++i) {
      M_.emplace_back(p, n_, n_);
      const IntMat& Mi = K.mult_matrix_basis(i);
      auto v = mod_vec(Mi.a, p);
      M_.back().a = v;
    }
  }
  std::vector<uint64_t> mul(const std::vector<uint64_t>& x, const std::vector<uint64_t>& y) const {
    std::vector<uint64_t> r(n_, 0);
    for (int i = 0; i < n_; ++i) {
      if (!x[i]) continue;
      for (int k = 0; k < n_; ++k) {
        u128 s = 0;
        for (int j = 0; j < n_; ++j) s += static_cast<u128>(M_[i](k, j)) * y[j] % p_;
        r[k] = static_cast<uint64_t>((r[k] + mulmod(x[i], static_cast<uint64_t>(s % p_), p_)) % p_);
      }
    }
    return r;
  }
  std::vector<uint64_t> pow(std::vector<uint64_t> x, Int e) const {
    std::vector<uint64_t> r(n_, 0);
    r[0] = 1;
    const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t b = bits; b-- > 0;) {
      r = mul(r, r);
      if (mpz_tstbit(e.get_mpz_t(), b)) r = mul(r, x);
    }
    return r;
  }
  int n() const { return n_; }

 private:
  const NumberField& K_;
  uint64_t p_;
  int n_;
  std::vector<FpMat> M_;
};

std::vector<PrimeIdeal> decompose_generic(const NumberField& K, uint64_t p) {
  const int n = K.degree();
  ModAlgebra A(K, p);
  const Int P(static_cast<unsigned long>(p));
  int j = 1;
  for (uint64_t q = p; q < static_cast<uint64_t>(n); q *= p) ++j;
  Int pj;
  mpz_pow_ui(pj.get_mpz_t(), P.get_mpz_t(), j);
  FpMat frobj(p, n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<uint64_t> e(n, 0);
    e[i] = 1;
    auto img = A.pow(e, pj);
    for (int k = 0; k < n; ++k) frobj(k, i) = img[k];
  }
  auto rad = fp_kernel(frobj);
  // Echelon form of the radical for reduction modulo it.
  FpMat R(p, static_cast<int>(rad.size()), n);
  for (size_t r = 0; r < rad.size(); ++r) {
    for (int c = 0; c < n; ++c) R(static_cast<int>(r), c) = rad[r][c];
  }
  std::vector<int> rpiv = fp_rref(R);
  std::vector<bool> is_piv(n, false);
  for (int c : rpiv) is_piv[c] = true;
  std::vector<int> freec;
  for (int c = 0; c < n; ++c) {
    if (!is_piv[c]) freec.push_back(c);
  }
  const int m = static_cast<int>(freec.size());
  auto reduce = [&](std::vector<uint64_t> x) {
    for (size_t r = 0; r < rpiv.size(); ++r) {
      uint64_t c = x[rpiv[r]];
      if (!c) continue;
      for (int k = 0; k < n; ++k) x[k] = (x[k] + p - mulmod(c, R(static_cast<int>(r), k), p)) % p;
    }
    return x;
  };
  auto proj = [&](const std::vector<uint64_t>& x) {
    auto y = reduce(x);
    std::vector<uint64_t> v(m);
    for (int i = 0; i < m; ++i) v[i] = y[freec[i]];
    return v;
  };
  auto lift = [&](const std::vector<uint64_t>& v) {
    std::vector<uint64_t> x(n, 0);
    for (int i = 0; i < m; ++i) x[freec[i]] = v[i];
    return x;
  };
  auto amul = [&](const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    return proj(A.mul(lift(a), lift(b)));
  };
  // Berlekamp subalgebra {x : x^p = x} of the semisimple quotient.
  FpMat ber(p, m, m);
  for (int i = 0; i < m; ++i) {
    std::vector<uint64_t> e(m, 0);
    e[i] = 1;
    auto img = proj(A.pow(lift(e), P));
    for (int k = 0; k < m; ++k) ber(k, i) = (img[k] + (k == i ? p - 1 : 0)) % p;
  }
  auto bbasis = fp_kernel(ber);
  const size_t g = bbasis.size();
  std::vector<uint64_t> one_a = proj([&] {
    std::vector<uint64_t> o(n, 0);
    o[0] = 1;
    return o;
  }());
  std::vector<std::vector<uint64_t>> idem{one_a};
  std::mt19937_64 rng(p * 0x9E3779B97F4A7C15ULL + 17);
  int guard = 0;
  while (idem.size() < g) {
    if (++guard > 10000) throw IntegrityError("idempotent splitting did not converge");
    std::vector<std::vector<uint64_t>> next;
    for (auto& e : idem) {
      std::vector<uint64_t> b(m, 0);
      for (auto& v : bbasis) {
        uint64_t c = rng() % p;
        for (int k = 0; k < m; ++k) b[k] = (b[k] + mulmod(c, v[k], p)) % p;
      }
      auto c = amul(e, b);
      // Minimal polynomial of c inside eA.
      std::vector<std::vector<uint64_t>> pw{e};
      std::vector<uint64_t> mu;
      while (true) {
        auto nxt = amul(pw.back(), c);
        const int k = static_cast<int>(pw.size());
        FpMat sys(p, m, k + 1);
        for (int col = 0; col < k; ++col) {
          for (int r = 0; r < m; ++r) sys(r, col) = pw[col][r];
        }
        for (int r = 0; r < m; ++r) sys(r, k) = nxt[r];
        auto ker = fp_kernel(sys);
        if (!ker.empty()) {
          auto v = ker[0];
          uint64_t inv = invmod(v[k], p);
          mu.assign(k + 1, 0);
          for (int t = 0; t <= k; ++t) mu[t] = mulmod(v[t], inv, p);
          break;
        }
        pw.push_back(nxt);
      }
      FpPoly mp(p, mu);
      if (mp.degree() < 2) {
        next.push_back(e);
        continue;
      }
      std::vector<uint64_t> rts;
      for (auto& [fac, mult] : factor_mod_p(mp)) {
        if (fac.degree() != 1 || mult != 1) throw IntegrityError("Berlekamp element with non-split minimal polynomial");
        rts.push_back((p - fac.c[0]) % p);
      }
      for (size_t a = 0; a < rts.size(); ++a) {
        std::vector<uint64_t> acc = e;
        for (size_t b2 = 0; b2 < rts.size(); ++b2) {
          if (a == b2) continue;
          uint64_t den = invmod((rts[a] + p - rts[b2]) % p, p);
          std::vector<uint64_t> factor(m);
          for (int k = 0; k < m; ++k) {
            factor[k] = mulmod((c[k] + p - mulmod(rts[b2], e[k], p)) % p, den, p);
          }
          acc = amul(acc, factor);
        }
        next.push_back(acc);
      }
    }
    idem = std::move(next);
  }
  std::vector<PrimeIdeal> out;
  for (auto& e : idem) {
    // Kernel of x -> proj(x) e on O/pO is the prime ideal mod p.
    FpMat mm(p, m, n);
    FpMat me(p, m, m);
    for (int i = 0; i < n; ++i) {
      std::vector<uint64_t> x(n, 0);
      x[i] = 1;
      auto y = amul(proj(x), e);
      for (int k = 0; k < m; ++k) mm(k, i) = y[k];
    }
    for (int i = 0; i < m; ++i) {
      std::vector<uint64_t> x(m, 0);
      x[i] = 1;
      auto y = amul(x, e);
      for (int k = 0; k < m; ++k) me(k, i) = y[k];
    }
    PrimeIdeal pr;
    pr.p = P;
    pr.f = fp_rank(me);
    pr.ideal = prime_from_kernel(fp_kernel(mm), n, p);
    pr.beta = anti_uniformizer(K, pr.ideal, p);
    out.push_back(std::move(pr));
  }
  for (auto& pr : out) pr.e = prime_valuation(K, pr, K.from_int(P));
  return out;
}

std::vector<PrimeIdeal> decompose_dedekind(const NumberField& K, uint64_t p) {
  const int n = K.degree();
  const Int P(static_cast<unsigned long>(p));
  std::vector<PrimeIdeal> out;
  for (auto& [g, mult] : factor_mod_p(K.poly(), p)) {
    PrimeIdeal pr;
    pr.p = P;
    pr.e = mult;
    pr.f = g.degree();
    RatPoly gp = to_rat(g.lift());
    Elt gt = K.from_power(gp);
    pr.ideal = ideal_from_generators(K, {K.from_int(P), gt});
    pr.beta = anti_uniformizer(K, pr.ideal, p);
    if (pr.e == 1 && pr.f == 1) {
      uint64_t r = (p - g.c[0]) % p;
      int k = 1;
      Int mod = P;
      while (mod < Int("1000000000000000000") && k < 64) {
        mod *= P;
        ++k;
      }
      Int R = hensel_lift_root(K.poly(), r, p, k);
      Int deninv;
      mpz_invert(deninv.get_mpz_t(), K.basis_den().get_mpz_t(), mod.get_mpz_t());
      pr.fast_prec = k;
      pr.fast_mod = mod;
      const IntMat& B = K.basis();
      for (int j = 0; j < n; ++j) {
        Int s = 0, pw = 1;
        for (int i = 0; i <= j; ++i) {
          s += B(i, j) * pw;
          pw = pw * R % mod;
        }
        s = s * deninv % mod;
        if (s < 0) s += mod;
        pr.fast_images.push_back(s);
      }
    }
    out.push_back(std::move(pr));
  }
  return out;
}

}  // namespace

std::vector<PrimeIdeal> prime_decomposition(const NumberField& K, const Int& p) {
  if (p < 2 || !is_prime(p)) throw DomainError("prime_decomposition needs a prime");
  if (!mpz_fits_ulong_p(p.get_mpz_t()) || p > Int("4611686018427387903")) {
    throw UnsupportedError("prime too large for the decomposition engine");
  }
  if (!K.is_p_maximal(p)) throw UnsupportedError("order not known to be maximal at this prime");
  uint64_t pp = p.get_ui();
  std::vector<PrimeIdeal> out = mpz_divisible_p(K.index().get_mpz_t(), p.get_mpz_t())
                                    ? decompose_generic(K, pp)
                                    : decompose_dedekind(K, pp);
  int sum = 0;
  for (auto& pr : out) sum += pr.e * pr.f;
  if (sum != K.degree()) throw IntegrityError("sum of e*f differs from the degree");
  std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.e != b.e) return a.e < b.e;
    return a.ideal.H.a < b.ideal.H.a;
  });
  return out;
}

int prime_valuation(const NumberField& K, const PrimeIdeal& P, const Elt& x0) {
  if (K.is_zero(x0)) throw DomainError("valuation of zero");
  if (P.fast_prec > 0) {
    Int s = 0;
    for (size_t j = 0; j < x0.size(); ++j) {
      if (x0[j] != 0) s += x0[j] * P.fast_images[j];
    }
    mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), P.fast_mod.get_mpz_t());
    if (s != 0) return valuation(s, P.p);
  }
  Elt x = x0;
  int v = 0;
  while (true) {
    Elt y = K.mul(x, P.beta);
    bool div = true;
    for (auto& c : y) {
      if (!mpz_divisible_p(c.get_mpz_t(), P.p.get_mpz_t())) {
        div = false;
        break;
      }
    }
    if (!div) return v;
    for (auto& c : y) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), P.p.get_mpz_t());
    x = std::move(y);
    ++v;
  }
}

int prime_valuation(const NumberField& K, const PrimeIdeal& P, const Ideal& I) {
  int v = -1;
  for (int j = 0; j < I.H.cols; ++j) {
    int w = prime_valuation(K, P, I.H.col(j));
    if (v < 0 || w < v) v = w;
  }
  return v;
}

int apply_aut_prime(const NumberField& K, const PrimeIdeal& P, const std::vector<PrimeIdeal>& primes,
                    const IntMat& aut) {
  Ideal img = ideal_apply(K, P.ideal, aut);
  for (size_t i = 0; i < primes.size(); ++i) {
    if (primes[i].ideal == img) return static_cast<int>(i);
  }
  throw IntegrityError("image of a prime ideal under an automorphism not found");
}

ResidueField::ResidueField(const NumberField& K, const PrimeIdeal& P) : K_(K), f_(P.f), H_(P.ideal.H) {
  if (!mpz_fits_ulong_p(P.p.get_mpz_t())) throw UnsupportedError("residue field prime too large");
  p_ = P.p.get_ui();
  for (int j = 0; j < H_.rows; ++j) {
    if (H_(j, j) != 1) free_.push_back(j);
  }
  if (static_cast<int>(free_.size()) != f_) throw IntegrityError("prime HNF does not match residue degree");
  if (f_ == 1) {
    for (int j = 0; j < H_.rows; ++j) {
      Elt e(H_.rows, Int(0));
      e[j] = 1;
      lin_.push_back(reduce(e)[0]);
    }
  }
}

std::vector<uint64_t> ResidueField::reduce(const Elt& x0) const {
  if (!lin_.empty()) {
    Int s = 0;
    for (size_t j = 0; j < x0.size(); ++j) {
      if (x0[j] != 0) s += x0[j] * static_cast<unsigned long>(lin_[j]);
    }
    Int P(static_cast<unsigned long>(p_));
    mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), P.get_mpz_t());
    return {s.get_ui()};
  }
  const int n = H_.rows;
  Elt x = x0;
  Int q;
  for (int j = n - 1; j >= 0; --j) {
    mpz_fdiv_q(q.get_mpz_t(), x[j].get_mpz_t(), H_(j, j).get_mpz_t());
    if (q == 0) continue;
    for (int i = 0; i <= j; ++i) x[i] -= q * H_(i, j);
  }
  std::vector<uint64_t> v;
  for (int j : free_) v.push_back(x[j].get_ui());
  return v;
}

bool ResidueField::is_zero(const Elt& x) const {
  for (auto c : reduce(x)) {
    if (c) return false;
  }
  return true;
}

std::vector<uint64_t> ResidueField::mul(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) const {
  const int n = H_.rows;
  Elt x(n, Int(0)), y(n, Int(0));
  for (int i = 0; i < f_; ++i) {
    x[free_[i]] = Int(static_cast<unsigned long>(a[i]));
    y[free_[i]] = Int(static_cast<unsigned long>(b[i]));
  }
  return reduce(K_.mul(x, y));
}

int ResidueField::quadratic_character(const Elt& x) const {
  if (p_ == 2) throw DomainError("quadratic character at a prime above 2");
  auto v = reduce(x);
  bool zero = true;
  for (auto c : v) zero = zero && c == 0;
  if (zero) return 0;
  if (f_ == 1) return legendre(v[0], p_);
  Int q;
  mpz_ui_pow_ui(q.get_mpz_t(), p_, f_);
  Int e = (q - 1) / 2;
  std::vector<uint64_t> r(f_, 0);
  // One in coordinates: reduce the element 1.
  r = reduce(K_.one());
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t b = bits; b-- > 0;) {
    r = mul(r, r);
    if (mpz_tstbit(e.get_mpz_t(), b)) r = mul(r, v);
  }
  auto one = reduce(K_.one());
  if (r == one) return 1;
  return -1;
}

}  // namespace maass
