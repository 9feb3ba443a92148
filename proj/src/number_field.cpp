#include "maass/number_field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>

#include "maass/poly_fp.hpp"

namespace maass {

struct FieldData {
  IntPoly f;
  int n = 0;
  RootSet roots;
  IntMat B;
  Int den;
  Int index;
  Int disc;
  Factorization disc_fac;
  bool maximal = true;
  std::vector<Int> maximal_at;
  Int poly_disc;
  std::optional<AbelianData> abelian;
  std::string label;
  std::vector<IntMat> M;  // multiplication by omega_i
  std::vector<std::vector<std::complex<long double>>> emb;  // emb[k][i] = sigma_k(omega_i)
  std::once_flag aut_once, lll_once;
  std::vector<IntMat> auts;
  std::vector<Elt> lll;
};

namespace {

// Order given by power-basis columns B / den (upper triangular HNF).
struct Order {
  IntMat B;
  Int den;
};

// Integral coordinates of a power-basis vector v in the order, or nullopt
// if v is not in the order.
std::optional<std::vector<Int>> order_coords(const Order& o, const RatPoly& v0) {
  const int n = o.B.rows;
  std::vector<Rat> v(n, Rat(0));
  for (int i = 0; i < n && i < static_cast<int>(v0.size()); ++i) v[i] = v0[i] * o.den;
  std::vector<Int> c(n);
  for (int i = n - 1; i >= 0; --i) {
    Rat s = v[i];
    for (int j = i + 1; j < n; ++j) s -= Rat(o.B(i, j) * c[j]);
    s /= Rat(o.B(i, i));
    if (s.get_den() != 1) return std::nullopt;
    c[i] = s.get_num();
  }
  return c;
}

RatPoly order_elem(const Order& o, int j) {
  RatPoly v(o.B.rows);
  for (int i = 0; i < o.B.rows; ++i) v[i] = Rat(o.B(i, j), o.den);
  for (auto& x : v) x.canonicalize();
  trim(v);
  return v;
}

RatPoly mul_mod_f(const RatPoly& a, const RatPoly& b, const IntPoly& f) {
  return rat_mod(rat_mul(a, b), to_rat(f));
}

// table[i][j] = coordinates of w_i w_j.
std::vector<std::vector<std::vector<Int>>> order_table(const Order& o, const IntPoly& f) {
  const int n = o.B.rows;
  std::vector<RatPoly> w(n);
  for (int j = 0; j < n; ++j) w[j] = order_elem(o, j);
  std::vector<std::vector<std::vector<Int>>> t(n, std::vector<std::vector<Int>>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto c = order_coords(o, mul_mod_f(w[i], w[j], f));
      if (!c) throw IntegrityError("order is not closed under multiplication");
      t[i][j] = *c;
      t[j][i] = *c;
    }
  }
  return t;
}

using Table = std::vector<std::vector<std::vector<Int>>>;

std::vector<uint64_t> tab_mul_mod(const Table& t, const std::vector<uint64_t>& x, const std::vector<uint64_t>& y,
                                  uint64_t p) {
  const int n = static_cast<int>(x.size());
  std::vector<uint64_t> r(n, 0);
  Int P(static_cast<unsigned long>(p)), m;
  for (int i = 0; i < n; ++i) {
    if (!x[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (!y[j]) continue;
      uint64_t xy = mulmod(x[i], y[j], p);
      for (int k = 0; k < n; ++k) {
        mpz_fdiv_r(m.get_mpz_t(), t[i][j][k].get_mpz_t(), P.get_mpz_t());
        r[k] = (r[k] + mulmod(xy, m.get_ui(), p)) % p;
      }
    }
  }
  return r;
}

std::vector<uint64_t> tab_pow_mod(const Table& t, std::vector<uint64_t> x, Int e, uint64_t p) {
  const int n = static_cast<int>(x.size());
  std::vector<uint64_t> r(n, 0);
  r[0] = 1;  // omega_0 = 1
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t b = bits; b-- > 0;) {
    r = tab_mul_mod(t, r, r, p);
    if (mpz_tstbit(e.get_mpz_t(), b)) r = tab_mul_mod(t, r, x, p);
  }
  return r;
}

// One Round 2 enlargement step at p. Returns false if o is already p-maximal.
bool round2_step(Order& o, const IntPoly& f, uint64_t p) {
  const int n = o.B.rows;
  Table t = order_table(o, f);
  // Frobenius x -> x^p on O/pO; radical = kernel of its j-th power, p^j >= n.
  int j = 1;
  for (uint64_t q = p; q < static_cast<uint64_t>(n); q *= p) ++j;
  FpMat frob(p, n, n);
  for (int i = 0; i < n; ++i) {
    std::vector<uint64_t> e(n, 0);
    e[i] = 1;
    auto img = tab_pow_mod(t, e, Int(static_cast<unsigned long>(p)), p);
    for (int k = 0; k < n; ++k) frob(k, i) = img[k];
  }
  FpMat fj = frob;
  for (int s = 1; s < j; ++s) {
    FpMat nx(p, n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        u128 acc = 0;
        for (int c = 0; c < n; ++c) acc += static_cast<u128>(fj(a, c)) * frob(c, b) % p;
        nx(a, b) = static_cast<uint64_t>(acc % p);
      }
    }
    fj = nx;
  }
  auto rad = fp_kernel(fj);
  const Int P(static_cast<unsigned long>(p));
  IntMat gens(n, static_cast<int>(rad.size()) + n);
  for (size_t c = 0; c < rad.size(); ++c) {
    for (int r = 0; r < n; ++r) gens(r, static_cast<int>(c)) = Int(static_cast<unsigned long>(rad[c][r]));
  }
  for (int r = 0; r < n; ++r) gens(r, static_cast<int>(rad.size()) + r) = P;
  IntMat I = hnf_columns(gens, P);
  // Matrix of a -> (y -> a y) on I/pI, flattened: column k describes omega_k.
  FpMat big(p, n * n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      // w_k * v_i in O coordinates.
      std::vector<Int> prod(n, Int(0));
      for (int a = 0; a < n; ++a) {
        if (I(a, i) == 0) continue;
        for (int c = 0; c < n; ++c) prod[c] += I(a, i) * t[k][a][c];
      }
      // Solve I y = prod (upper triangular).
      std::vector<Int> y(n);
      for (int r = n - 1; r >= 0; --r) {
        Int s = prod[r];
        for (int c = r + 1; c < n; ++c) s -= I(r, c) * y[c];
        if (!mpz_divisible_p(s.get_mpz_t(), I(r, r).get_mpz_t())) throw IntegrityError("radical is not an ideal");
        mpz_divexact(y[r].get_mpz_t(), s.get_mpz_t(), I(r, r).get_mpz_t());
      }
      for (int r = 0; r < n; ++r) {
        Int m;
        mpz_fdiv_r(m.get_mpz_t(), y[r].get_mpz_t(), P.get_mpz_t());
        big(i * n + r, k) = m.get_ui();
      }
    }
  }
  auto ker = fp_kernel(big);
  if (ker.empty()) return false;
  IntMat ug(n, static_cast<int>(ker.size()) + n);
  for (size_t c = 0; c < ker.size(); ++c) {
    for (int r = 0; r < n; ++r) ug(r, static_cast<int>(c)) = Int(static_cast<unsigned long>(ker[c][r]));
  }
  for (int r = 0; r < n; ++r) ug(r, static_cast<int>(ker.size()) + r) = P;
  IntMat U = hnf_columns(ug, P);
  Int det = 1;
  for (int r = 0; r < n; ++r) det *= U(r, r);
  Int pn;
  mpz_pow_ui(pn.get_mpz_t(), P.get_mpz_t(), n);
  if (det == pn) return false;
  // New order (1/p) U in power coordinates.
  IntMat nb = o.B * U;
  Int nden = o.den * P;
  Int g = nden;
  for (auto& x : nb.a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  for (auto& x : nb.a) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(nden.get_mpz_t(), nden.get_mpz_t(), g.get_mpz_t());
  o.B = hnf_columns(nb);
  o.den = nden;
  return true;
}

bool certify_irreducible(const IntPoly& f) {
  const int n = f.degree();
  if (n <= 1) return n == 1;
  if (!is_squarefree(f)) return false;
  // Possible degrees of a proper factor, intersected over primes.
  std::vector<bool> possible(n + 1, true);
  Int lead = f.lead();
  Int d = poly_discriminant(f);
  int tried = 0;
  for (uint32_t p : primes_up_to(400)) {
    if (mpz_divisible_ui_p(d.get_mpz_t(), p) || mpz_divisible_ui_p(lead.get_mpz_t(), p)) continue;
    auto degs = factor_degrees_mod_p(f, p);
    std::vector<bool> sums(n + 1, false);
    sums[0] = true;
    for (int dg : degs) {
      for (int s = n; s >= dg; --s) sums[s] = sums[s] || sums[s - dg];
    }
    for (int s = 0; s <= n; ++s) possible[s] = possible[s] && sums[s];
    ++tried;
    bool only_trivial = true;
    for (int s = 1; s < n; ++s) only_trivial = only_trivial && !possible[s];
    if (only_trivial) return true;
    if (tried > 40) break;
  }
  // Exhaustive search over root subsets for the remaining degrees.
  if (!f.is_monic()) throw UnsupportedError("irreducibility certification needs a monic polynomial");
  RootSet rs = polynomial_roots(f);
  const BigReal tol("1e-40");
  for (int dg = 1; dg <= n / 2; ++dg) {
    if (!possible[dg]) continue;
    std::vector<int> idx(dg);
    std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
      if (pos == dg) {
        std::vector<BigComplex> c{BigComplex(1)};
        for (int i : idx) {
          std::vector<BigComplex> nc(c.size() + 1, BigComplex(0));
          for (size_t k = 0; k < c.size(); ++k) {
            nc[k + 1] += c[k];
            nc[k] -= c[k] * rs.z[i];
          }
          c = nc;
        }
        std::vector<Int> coef;
        for (auto& z : c) {
          if (abs(z.imag()) > tol * (1 + abs(z))) return false;
          BigReal r = round(z.real());
          if (abs(z.real() - r) > BigReal("1e-30") * (1 + abs(r))) return false;
          coef.push_back(round_to_int(r));
        }
        RatPoly rem = rat_mod(to_rat(f), to_rat(IntPoly(coef)));
        return rem.empty();
      }
      for (int i = start; i < n; ++i) {
        idx[pos] = i;
        if (rec(pos + 1, i + 1)) return true;
      }
      return false;
    };
    if (rec(0, 0)) return false;
  }
  return true;
}

}  // namespace

bool is_irreducible(const IntPoly& f) { return certify_irreducible(make_monic(f.primitive_part())); }

NumberField NumberField::create(const IntPoly& f0, const FieldOptions& opt) {
  if (f0.degree() < 1) throw DomainError("field polynomial must have positive degree");
  IntPoly f = make_monic(f0.primitive_part());
  if (!opt.assume_irreducible && !certify_irreducible(f)) throw DomainError("polynomial is reducible over Q");
  if (opt.assume_irreducible && !is_squarefree(f)) throw DomainError("polynomial is not squarefree");
  auto d = std::make_shared<FieldData>();
  d->f = f;
  d->n = f.degree();
  d->label = opt.label;
  d->abelian = opt.abelian;
  const int n = d->n;
  d->roots = polynomial_roots(f);

  Order o{IntMat::identity(n), Int(1)};
  Int pd = poly_discriminant(f);
  std::vector<Int> primes;
  if (!opt.maximal_at.empty()) {
    primes = opt.maximal_at;
    d->maximal = opt.maximal_at_complete;
    d->maximal_at = opt.maximal_at;
  } else {
    for (auto& [p, e] : factor_integer(pd).factors) {
      if (e >= 2) primes.push_back(p);
    }
  }
  for (auto& p : primes) {
    if (!mpz_fits_ulong_p(p.get_mpz_t()) || p > Int("4611686018427387903")) {
      throw UnsupportedError("Round 2 at a prime above 2^62");
    }
    while (round2_step(o, f, p.get_ui())) {
    }
  }
  d->B = o.B;
  d->den = o.den;
  Int detB = determinant(o.B);
  Int dn;
  mpz_pow_ui(dn.get_mpz_t(), o.den.get_mpz_t(), n);
  if (!mpz_divisible_p(dn.get_mpz_t(), detB.get_mpz_t())) throw IntegrityError("order index is not an integer");
  d->index = dn / detB;
  d->poly_disc = pd;
  d->disc = pd / (d->index * d->index);
  if (d->maximal) d->disc_fac = factor_integer(d->disc);

  Table t = order_table(o, f);
  d->M.assign(n, IntMat(n, n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) d->M[i](k, j) = t[i][j][k];
    }
  }
  // Embeddings of the basis.
  const long double scale = 1.0L / static_cast<long double>(BigReal(o.den.get_str()));
  d->emb.assign(n, std::vector<std::complex<long double>>(n));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      BigComplex s(0), p(1);
      for (int i = 0; i < n; ++i) {
        if (o.B(i, j) != 0) s += p * BigReal(o.B(i, j).get_str());
        p *= d->roots.z[k];
      }
      d->emb[k][j] = std::complex<long double>(static_cast<long double>(s.real()) * scale,
                                               static_cast<long double>(s.imag()) * scale);
    }
  }
  NumberField K;
  K.d_ = d;
  return K;
}

const IntPoly& NumberField::poly() const { return d_->f; }
int NumberField::degree() const { return d_->n; }
int NumberField::r1() const { return d_->roots.r1; }
int NumberField::r2() const { return (d_->n - d_->roots.r1) / 2; }
const Int& NumberField::disc() const { return d_->disc; }
const Factorization& NumberField::disc_factorization() const {
  if (!d_->maximal) throw UnsupportedError("field discriminant unknown for a non-maximal order");
  return d_->disc_fac;
}
const Int& NumberField::index() const { return d_->index; }
bool NumberField::maximal() const { return d_->maximal; }
const Int& NumberField::poly_disc() const { return d_->poly_disc; }

bool NumberField::is_p_maximal(const Int& p) const {
  if (d_->maximal) return true;
  for (auto& q : d_->maximal_at) {
    if (q == p) return true;
  }
  Int p2 = p * p;
  return !mpz_divisible_p(d_->poly_disc.get_mpz_t(), p2.get_mpz_t());
}
const std::optional<AbelianData>& NumberField::abelian() const { return d_->abelian; }
const std::string& NumberField::label() const { return d_->label; }
const RootSet& NumberField::roots() const { return d_->roots; }
const IntMat& NumberField::basis() const { return d_->B; }
const Int& NumberField::basis_den() const { return d_->den; }

RatPoly NumberField::to_power(const Elt& x) const {
  const int n = d_->n;
  RatPoly v(n, Rat(0));
  for (int j = 0; j < n; ++j) {
    if (x[j] == 0) continue;
    for (int i = 0; i <= j; ++i) v[i] += Rat(x[j] * d_->B(i, j));
  }
  for (auto& c : v) c /= Rat(d_->den);
  trim(v);
  return v;
}

std::vector<Rat> NumberField::coords_rational(const RatPoly& v1) const {
  const int n = d_->n;
  RatPoly v0 = static_cast<int>(v1.size()) > n ? rat_mod(v1, to_rat(d_->f)) : v1;
  std::vector<Rat> v(n, Rat(0));
  for (int i = 0; i < n && i < static_cast<int>(v0.size()); ++i) v[i] = v0[i] * d_->den;
  std::vector<Rat> c(n);
  for (int i = n - 1; i >= 0; --i) {
    Rat s = v[i];
    for (int j = i + 1; j < n; ++j) s -= Rat(d_->B(i, j)) * c[j];
    c[i] = s / Rat(d_->B(i, i));
  }
  return c;
}

Elt NumberField::from_power(const RatPoly& v) const {
  auto c = coords_rational(v);
  Elt e(c.size());
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].get_den() != 1) throw DomainError("element is not integral");
    e[i] = c[i].get_num();
  }
  return e;
}

Elt NumberField::one() const {
  Elt e(d_->n, Int(0));
  e[0] = 1;
  return e;
}

Elt NumberField::from_int(const Int& a) const {
  Elt e(d_->n, Int(0));
  e[0] = a;
  return e;
}

Elt NumberField::theta() const { return from_power(RatPoly{Rat(0), Rat(1)}); }

Elt NumberField::mul(const Elt& x, const Elt& y) const {
  const int n = d_->n;
  Elt r(n, Int(0));
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    const IntMat& M = d_->M[i];
    for (int k = 0; k < n; ++k) {
      Int s = 0;
      for (int j = 0; j < n; ++j) {
        if (y[j] != 0 && M(k, j) != 0) s += M(k, j) * y[j];
      }
      r[k] += x[i] * s;
    }
  }
  return r;
}

Elt NumberField::add(const Elt& x, const Elt& y) const {
  Elt r(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

Elt NumberField::sub(const Elt& x, const Elt& y) const {
  Elt r(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

Elt NumberField::scale(const Elt& x, const Int& s) const {
  Elt r(x);
  for (auto& c : r) c *= s;
  return r;
}

Elt NumberField::pow(Elt x, unsigned long e) const {
  Elt r = one();
  while (e) {
    if (e & 1) r = mul(r, x);
    e >>= 1;
    if (e) x = mul(x, x);
  }
  return r;
}

bool NumberField::is_zero(const Elt& x) const {
  for (auto& c : x) {
    if (c != 0) return false;
  }
  return true;
}

IntMat NumberField::mult_matrix(const Elt& x) const {
  const int n = d_->n;
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (size_t k = 0; k < m.a.size(); ++k) {
      if (d_->M[i].a[k] != 0) m.a[k] += x[i] * d_->M[i].a[k];
    }
  }
  return m;
}

const IntMat& NumberField::mult_matrix_basis(int i) const { return d_->M[i]; }

Int NumberField::norm(const Elt& x) const { return determinant(mult_matrix(x)); }

Int NumberField::trace(const Elt& x) const {
  IntMat m = mult_matrix(x);
  Int t = 0;
  for (int i = 0; i < d_->n; ++i) t += m(i, i);
  return t;
}

std::vector<Rat> NumberField::div_rational(const Elt& x, const Elt& y) const {
  std::vector<Rat> b(x.begin(), x.end());
  return solve_rational(mult_matrix(y), b);
}

Elt NumberField::div_exact(const Elt& x, const Elt& y) const {
  auto q = div_rational(x, y);
  Elt r(q.size());
  for (size_t i = 0; i < q.size(); ++i) {
    if (q[i].get_den() != 1) throw DomainError("quotient is not integral");
    r[i] = q[i].get_num();
  }
  return r;
}

std::vector<std::complex<long double>> NumberField::embed(const Elt& x) const {
  const int n = d_->n;
  std::vector<std::complex<long double>> v(n);
  for (int k = 0; k < n; ++k) {
    std::complex<long double> s = 0;
    for (int i = 0; i < n; ++i) {
      if (x[i] != 0) s += static_cast<long double>(x[i].get_d()) * d_->emb[k][i];
    }
    v[k] = s;
  }
  return v;
}

std::vector<long double> NumberField::embed_real(const Elt& x) const {
  auto c = embed(x);
  std::vector<long double> v(c.size());
  for (size_t i = 0; i < c.size(); ++i) v[i] = c[i].real();
  return v;
}

const std::vector<std::vector<std::complex<long double>>>& NumberField::basis_embeddings() const {
  return d_->emb;
}

long double NumberField::t2(const Elt& x) const {
  long double s = 0;
  for (auto& z : embed(x)) s += std::norm(z);
  return s;
}

const std::vector<IntMat>& NumberField::automorphisms() const {
  std::call_once(d_->aut_once, [this]() {
    const int n = d_->n;
    auto hs = roots_in_field(d_->f, d_->roots, d_->den, d_->f, true);
    std::vector<RatPoly> w(n);
    for (int j = 0; j < n; ++j) w[j] = to_power(Elt([&] {
      Elt e(n, Int(0));
      e[j] = 1;
      return e;
    }()));
    RatPoly ident{Rat(0), Rat(1)};
    std::stable_partition(hs.begin(), hs.end(), [&](const RatPoly& h) { return h == ident; });
    for (auto& h : hs) {
      IntMat m(n, n);
      for (int j = 0; j < n; ++j) {
        Elt img = from_power(compose_mod(w[j], h, d_->f));
        for (int i = 0; i < n; ++i) m(i, j) = img[i];
      }
      d_->auts.push_back(std::move(m));
    }
  });
  return d_->auts;
}

Elt NumberField::apply(const IntMat& aut, const Elt& x) const { return mat_vec(aut, x); }

std::vector<RatPoly> NumberField::roots_of(const IntPoly& g) const {
  return roots_in_field(d_->f, d_->roots, d_->den, g, false);
}

const std::vector<Elt>& NumberField::lll_basis() const {
  std::call_once(d_->lll_once, [this]() {
    const int n = d_->n;
    const int r1 = d_->roots.r1;
    std::vector<std::vector<long double>> b(n, std::vector<long double>(n));
    for (int i = 0; i < n; ++i) {
      int c = 0;
      for (int k = 0; k < n; ++k) {
        if (k < r1) {
          b[i][c++] = d_->emb[k][i].real();
        } else if ((k - r1) % 2 == 0) {
          b[i][c++] = std::sqrt(2.0L) * d_->emb[k][i].real();
          b[i][c++] = std::sqrt(2.0L) * d_->emb[k][i].imag();
        }
      }
    }
    auto T = lll_reduce(b);
    for (int i = 0; i < n; ++i) {
      Elt e(n);
      for (int j = 0; j < n; ++j) e[j] = Int(static_cast<long>(T[i][j]));
      d_->lll.push_back(std::move(e));
    }
  });
  return d_->lll;
}

std::string NumberField::describe() const {
  std::ostringstream os;
  os << "Q[x]/(" << d_->f.to_string() << "), degree " << d_->n << ", signature (" << r1() << "," << r2()
     << "), disc " << d_->disc.get_str();
  return os.str();
}

bool fields_isomorphic(const NumberField& k1, const NumberField& k2) {
  if (k1.degree() != k2.degree() || k1.r1() != k2.r1()) return false;
  if (k1.maximal() && k2.maximal() && k1.disc() != k2.disc()) return false;
  return !k1.roots_of(k2.poly()).empty();
}

}  // namespace maass
