#include "maass/class_group.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "maass/poly_fp.hpp"

namespace maass {

namespace {

using Clock = std::chrono::steady_clock;

// Primitive vectors of [-B, B]^n with max |c_i| = B and first nonzero entry positive.
std::vector<std::vector<int>> shell(int n, int B) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(n, -B);
  while (true) {
    int mx = 0, g = 0, first = 0;
    for (int x : c) {
      mx = std::max(mx, std::abs(x));
      g = std::gcd(g, std::abs(x));
      if (first == 0) first = x;
    }
    if (mx == B && g == 1 && first > 0) out.push_back(c);
    int i = 0;
    while (i < n && c[i] == B) c[i++] = -B;
    if (i == n) break;
    ++c[i];
  }
  return out;
}

bool bareiss_i128(std::vector<i128>& A, int n, i128* det) {
  int sign = 1;
  i128 prev = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (A[k * n + k] == 0) {
      int r = -1;
      for (int i = k + 1; i < n && r < 0; ++i) {
        if (A[i * n + k] != 0) r = i;
      }
      if (r < 0) {
        *det = 0;
        return true;
      }
      for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[r * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        i128 t1, t2, t;
        if (__builtin_mul_overflow(A[i * n + j], A[k * n + k], &t1)) return false;
        if (__builtin_mul_overflow(A[i * n + k], A[k * n + j], &t2)) return false;
        if (__builtin_sub_overflow(t1, t2, &t)) return false;
        A[i * n + j] = t / prev;
      }
    }
    prev = A[k * n + k];
  }
  *det = sign * A[n * n - 1];
  return true;
}

// Exact norms of small combinations of fixed generators.
class NormEngine {
 public:
  NormEngine(const NumberField& K, std::vector<Elt> gens) : K_(K), gens_(std::move(gens)), n_(K.degree()) {
    for (auto& g : gens_) {
      IntMat M = K.mult_matrix(g);
      std::vector<long long> m(M.a.size());
      for (size_t i = 0; i < M.a.size(); ++i) {
        if (!fits_i64(M.a[i])) {
          ok_ = false;
          break;
        }
        m[i] = to_i64(M.a[i]);
      }
      mats_.push_back(std::move(m));
    }
  }

  Elt element(const std::vector<int>& c) const {
    Elt x(n_, Int(0));
    for (int i = 0; i < n_; ++i) {
      if (c[i] == 0) continue;
      for (int j = 0; j < n_; ++j) x[j] += gens_[i][j] * static_cast<long>(c[i]);
    }
    return x;
  }

  Int norm(const std::vector<int>& c) const {
    if (ok_) {
      std::vector<i128> A(static_cast<size_t>(n_) * n_, 0);
      bool of = false;
      for (int i = 0; i < n_ && !of; ++i) {
        if (c[i] == 0) continue;
        for (size_t t = 0; t < A.size(); ++t) {
          i128 v;
          if (__builtin_mul_overflow(static_cast<i128>(mats_[i][t]), static_cast<i128>(c[i]), &v) ||
              __builtin_add_overflow(A[t], v, &A[t])) {
            of = true;
            break;
          }
        }
      }
      i128 d;
      if (!of && bareiss_i128(A, n_, &d)) return from_i128(d);
    }
    return K_.norm(element(c));
  }

 private:
  const NumberField& K_;
  std::vector<Elt> gens_;
  int n_;
  bool ok_ = true;
  std::vector<std::vector<long long>> mats_;
};

// S-unit as an integer combination of relations.
struct Combo {
  std::vector<Int> row;  // exponents on the core columns
  std::map<int, Int> factors;
  std::vector<long double> logs;
  std::vector<uint8_t> neg;
  long double err = 0;
};

Combo lin(const Int& x, const Combo& a, const Int& y, const Combo& b) {
  Combo c;
  c.row.resize(a.row.size());
  for (size_t i = 0; i < a.row.size(); ++i) c.row[i] = x * a.row[i] + y * b.row[i];
  c.factors = a.factors;
  for (auto& [k, v] : c.factors) v *= x;
  for (auto& [k, v] : b.factors) c.factors[k] += y * v;
  for (auto it = c.factors.begin(); it != c.factors.end();) {
    it = (it->second == 0) ? c.factors.erase(it) : std::next(it);
  }
  const long double xd = x.get_d(), yd = y.get_d();
  c.logs.resize(a.logs.size());
  for (size_t i = 0; i < a.logs.size(); ++i) c.logs[i] = xd * a.logs[i] + yd * b.logs[i];
  c.neg.resize(a.neg.size());
  const bool xo = mpz_odd_p(x.get_mpz_t()), yo = mpz_odd_p(y.get_mpz_t());
  for (size_t i = 0; i < a.neg.size(); ++i) c.neg[i] = static_cast<uint8_t>((xo && a.neg[i]) ^ (yo && b.neg[i]));
  c.err = std::fabs(xd) * a.err + std::fabs(yd) * b.err;
  return c;
}

Combo zero_combo(int csz, int n) {
  Combo c;
  c.row.assign(csz, Int(0));
  c.logs.assign(n, 0);
  c.neg.assign(n, 0);
  return c;
}


// Dense solve in long double with partial pivoting; false if singular.
bool solve_ld(std::vector<std::vector<long double>> A, std::vector<long double> b, std::vector<long double>* x) {
  const int n = static_cast<int>(A.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
    }
    if (std::fabs(A[piv][k]) < 1e-30L) return false;
    std::swap(A[k], A[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < n; ++i) {
      long double f = A[i][k] / A[k][k];
      for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
      b[i] -= f * b[k];
    }
  }
  x->assign(n, 0);
  for (int i = n - 1; i >= 0; --i) {
    long double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A[i][j] * (*x)[j];
    (*x)[i] = s / A[i][i];
  }
  return true;
}

long double det_ld(std::vector<std::vector<long double>> A) {
  const int n = static_cast<int>(A.size());
  long double d = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::fabs(A[i][k]) > std::fabs(A[piv][k])) piv = i;
    }
    if (A[piv][k] == 0) return 0;
    if (piv != k) {
      std::swap(A[k], A[piv]);
      d = -d;
    }
    d *= A[k][k];
    for (int i = k + 1; i < n; ++i) {
      long double f = A[i][k] / A[k][k];
      for (int j = k; j < n; ++j) A[i][j] -= f * A[k][j];
    }
  }
  return d;
}

// Denominator of the best rational approximation of x within tol, or 0.
long long rational_denominator(long double x, long double tol, long long max_den) {
  long double frac = x - std::floor(x);
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;  // convergents of frac
  long double y = frac;
  for (int it = 0; it < 60; ++it) {
    long long a = static_cast<long long>(std::floor(y));
    long long h2 = a * h1 + h0, k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (k1 > max_den) return 0;
    if (std::fabs(frac * static_cast<long double>(k1) - static_cast<long double>(h1)) <= tol) return k1;
    long double r = y - static_cast<long double>(a);
    if (r < 1e-30L) return k1;
    y = 1 / r;
  }
  return 0;
}

// Unimodular T with T * A in row echelon form; A is (k+1) x k of full column rank.
IntMat echelon_transform(IntMat A) {
  const int m = A.rows, k = A.cols;
  IntMat T = IntMat::identity(m);
  for (int j = 0; j < k; ++j) {
    for (int i = j + 1; i < m; ++i) {
      if (A(i, j) == 0) continue;
      Int g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), A(j, j).get_mpz_t(), A(i, j).get_mpz_t());
      Int u = A(j, j) / g, v = A(i, j) / g;
      for (IntMat* M : {&A, &T}) {
        for (int c = 0; c < M->cols; ++c) {
          Int rj = (*M)(j, c), ri = (*M)(i, c);
          (*M)(j, c) = x * rj + y * ri;
          (*M)(i, c) = v * rj - u * ri;
        }
      }
    }
  }
  return T;
}

// Lattice of units found so far, kept LLL-reduced on the log embedding.
class UnitLattice {
 public:
  explicit UnitLattice(int n) : n_(n) {}
  int rank() const { return static_cast<int>(basis_.size()); }
  const std::vector<Combo>& basis() const { return basis_; }

  bool insert(const Combo& u) {
    long double mx = 0;
    for (auto x : u.logs) mx = std::max(mx, std::fabs(x));
    if (mx < 1e-7L) return false;  // torsion
    if (u.err > 1e-8L) return false;
    const int k = rank();
    std::vector<long double> c;
    if (k > 0) {
      std::vector<std::vector<long double>> G(k, std::vector<long double>(k, 0));
      std::vector<long double> rhs(k, 0);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) G[i][j] = dot(basis_[i].logs, basis_[j].logs);
        rhs[i] = dot(basis_[i].logs, u.logs);
      }
      if (!solve_ld(G, rhs, &c)) return false;
    }
    // Size-reduce against the current basis so that recognition sees a small vector.
    Combo w = u;
    for (int i = 0; i < k; ++i) {
      long double r = std::round(c[i]);
      if (r != 0) {
        w = lin(1, w, to_int(static_cast<long>(-r)), basis_[i]);
        c[i] -= r;
      }
    }
    if (k > 0) {
      mx = 0;
      for (auto x : w.logs) mx = std::max(mx, std::fabs(x));
      if (mx < 1e-7L) return false;
    }
    return insert_reduced(w, c, mx);
  }

  bool insert_reduced(const Combo& u, std::vector<long double> c, long double mx) {
    const int k = rank();
    std::vector<long double> res = u.logs;
    for (int i = 0; i < k; ++i) {
      for (int t = 0; t < n_; ++t) res[t] -= c[i] * basis_[i].logs[t];
    }
    long double rn = std::sqrt(dot(res, res));
    if (rn > 1e-6L * std::max<long double>(1, mx)) {
      if (k >= n_ - 1) return false;  // numerically inconsistent, drop it
      basis_.push_back(u);
      reduce();
      return true;
    }
    long long q = 1;
    for (auto ci : c) {
      long long d = rational_denominator(ci, 1e-9L, 1000000);
      if (d == 0) return false;
      q = std::lcm(q, d);
      if (q > 1000000) return false;
    }
    if (q == 1) return false;
    IntMat A(k + 1, k);
    for (int i = 0; i < k; ++i) {
      A(i, i) = to_int(q);
      A(k, i) = to_int(std::llround(c[i] * static_cast<long double>(q)));
    }
    IntMat T = echelon_transform(A);
    std::vector<Combo> gens = basis_;
    gens.push_back(u);
    std::vector<Combo> nb;
    for (int i = 0; i < k; ++i) {
      Combo acc = lin(T(i, 0), gens[0], 0, gens[0]);
      for (int j = 1; j <= k; ++j) {
        if (T(i, j) != 0) acc = lin(1, acc, T(i, j), gens[j]);
      }
      nb.push_back(std::move(acc));
    }
    basis_ = std::move(nb);
    reduce();
    return true;
  }

  long double regulator() const {
    const int r = n_ - 1;
    if (rank() != r) return 0;
    if (r == 0) return 1;
    std::vector<std::vector<long double>> M(r, std::vector<long double>(r));
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) M[i][j] = basis_[i].logs[j];
    }
    return std::fabs(det_ld(M));
  }

 private:
  static long double dot(const std::vector<long double>& a, const std::vector<long double>& b) {
    long double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  void reduce() {
    if (basis_.size() < 2) return;
    std::vector<std::vector<long double>> b;
    for (auto& u : basis_) b.push_back(u.logs);
    auto T = lll_reduce(b);
    std::vector<Combo> nb;
    for (size_t i = 0; i < T.size(); ++i) {
      Combo acc = lin(to_int(T[i][0]), basis_[0], 0, basis_[0]);
      for (size_t j = 1; j < basis_.size(); ++j) {
        if (T[i][j] != 0) acc = lin(1, acc, to_int(T[i][j]), basis_[j]);
      }
      nb.push_back(std::move(acc));
    }
    basis_ = std::move(nb);
  }

  int n_;
  std::vector<Combo> basis_;
};

struct PInfo {
  std::vector<PrimeIdeal> dec;
  std::vector<int> fb;  // factor-base index of dec[i], or -1
};

class Engine {
 public:
  Engine(const NumberField& K, const ClassGroupOptions& opt) : K_(K), opt_(opt), n_(K.degree()), units_(K.degree()) {}

  ClassGroupResult run();

 private:
  void check_budget(const char* what) {
    if (opt_.budget_seconds <= 0) return;
    if ((++ticks_ & 31) != 0) return;
    double el = std::chrono::duration<double>(Clock::now() - start_).count();
    if (el > opt_.budget_seconds) throw IncompleteError(std::string("class group budget exhausted while ") + what);
  }

  void build_factor_base();
  std::optional<Relation> try_relation(const Elt& a, Int N, int limit);
  Relation image(const Relation& r, int a) const;
  void fill_logs(Relation* r) const;
  int add_relation(Relation r);
  void targeted_phase();
  bool process(int rel_index);  // true if the certified state might have changed
  void kernel_units();
  Combo reduce_to_core(int rel_index) const;
  long double current_ratio();
  bool done();
  void generic_relations(int fb_idx, int B);
  ClassGroupResult finish();

  const NumberField& K_;
  ClassGroupOptions opt_;
  int n_;
  Clock::time_point start_ = Clock::now();
  unsigned long ticks_ = 0;

  long double bound_ = 0;
  std::map<uint64_t, PInfo> info_;
  std::vector<uint32_t> trial_;
  std::vector<PrimeIdeal> fb_;
  std::vector<uint64_t> fb_p_;
  std::vector<IntMat> auts_;              // non-identity automorphisms
  std::vector<std::vector<int>> perms_;   // factor-base permutation per automorphism

  std::vector<Relation> rels_;
  std::vector<long double> rel_err_;
  std::vector<int> pivot_rel_;
  std::map<std::vector<std::pair<int, int>>, int> by_ideal_;  // first relation per ideal
  std::vector<int> core_;
  std::vector<int> core_pos_;
  std::vector<std::optional<Combo>> ech_;
  std::vector<Combo> pool_;  // core rows awaiting kernel_units
  int ech_rank_ = 0;
  UnitLattice units_;
  AnalyticHR analytic_;
  long double ratio_ = 0;
  int targeted_ = 0;
};

void Engine::build_factor_base() {
  const long double mink = minkowski_bound(K_);
  bound_ = mink;
  if (opt_.grh) bound_ = std::min(mink, bach_bound(K_));
  // Extra small primes cost little and make unit finding easier in tiny fields.
  const long double eff = std::max<long double>(bound_, 30);
  struct Cand {
    Int norm;
    uint64_t p;
    int pos;
  };
  std::vector<Cand> cands;
  auto add_prime = [&](uint64_t p, bool extra) {
    if (info_.count(p)) return;
    PInfo pi;
    pi.dec = prime_decomposition(K_, Int(static_cast<unsigned long>(p)));
    pi.fb.assign(pi.dec.size(), -1);
    for (size_t i = 0; i < pi.dec.size(); ++i) {
      Int N = pi.dec[i].norm();
      if (extra || N.get_d() <= static_cast<double>(eff)) cands.push_back({N, p, static_cast<int>(i)});
    }
    info_[p] = std::move(pi);
  };
  const Int& pd = K_.poly_disc();
  for (uint32_t p : primes_up_to(static_cast<uint32_t>(std::floor(eff)))) {
    if (!mpz_divisible_ui_p(pd.get_mpz_t(), p)) {
      auto deg = factor_degrees_mod_p(K_.poly(), p);
      int d = *std::min_element(deg.begin(), deg.end());
      if (std::pow(static_cast<long double>(p), d) > eff) continue;
    }
    add_prime(p, false);
  }
  for (auto& q : opt_.extra_primes) {
    if (!mpz_fits_ulong_p(q.get_mpz_t()) || q.get_ui() > 0xffffffffUL) {
      throw UnsupportedError("extra factor-base prime too large");
    }
    const uint64_t qq = q.get_ui();
    cands.erase(std::remove_if(cands.begin(), cands.end(), [&](const Cand& c) { return c.p == qq; }), cands.end());
    info_.erase(qq);
    add_prime(qq, true);
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    if (a.p != b.p) return a.p < b.p;
    return a.pos < b.pos;
  });
  for (auto& c : cands) {
    info_[c.p].fb[c.pos] = static_cast<int>(fb_.size());
    fb_.push_back(info_[c.p].dec[c.pos]);
    fb_p_.push_back(c.p);
  }
  for (auto& [p, pi] : info_) {
    bool any = std::any_of(pi.fb.begin(), pi.fb.end(), [](int x) { return x >= 0; });
    if (any) trial_.push_back(static_cast<uint32_t>(p));
  }
  const auto& all = K_.automorphisms();
  for (size_t a = 1; a < all.size(); ++a) {
    auts_.push_back(all[a]);
    std::vector<int> perm(fb_.size());
    for (size_t i = 0; i < fb_.size(); ++i) {
      const PInfo& pi = info_.at(fb_p_[i]);
      int pos = apply_aut_prime(K_, fb_[i], pi.dec, all[a]);
      if (pi.fb[pos] < 0) throw IntegrityError("automorphism moves a factor-base prime outside the base");
      perm[i] = pi.fb[pos];
    }
    perms_.push_back(std::move(perm));
  }
  pivot_rel_.assign(fb_.size(), -1);
}

void Engine::fill_logs(Relation* r) const {
  auto e = K_.embed_real(r->elt);
  r->logs.resize(n_);
  r->neg.resize(n_);
  for (int i = 0; i < n_; ++i) {
    r->logs[i] = std::log(std::fabs(e[i]));
    r->neg[i] = e[i] < 0 ? 1 : 0;
  }
}

// Factorisation of (a) over the factor base using only primes of index < limit
// (limit < 0: no restriction).
std::optional<Relation> Engine::try_relation(const Elt& a, Int N, int limit) {
  if (N == 0) return std::nullopt;
  if (N < 0) N = -N;
  std::vector<std::pair<uint64_t, int>> fac;
  for (uint32_t p : trial_) {
    if (N == 1) break;
    if (N < static_cast<unsigned long>(p) * p) break;
    if (mpz_divisible_ui_p(N.get_mpz_t(), p)) {
      int e = 0;
      while (mpz_divisible_ui_p(N.get_mpz_t(), p)) {
        mpz_divexact_ui(N.get_mpz_t(), N.get_mpz_t(), p);
        ++e;
      }
      fac.emplace_back(p, e);
    }
  }
  if (N > 1) {
    if (!mpz_fits_ulong_p(N.get_mpz_t())) return std::nullopt;
    uint64_t q = N.get_ui();
    if (!std::binary_search(trial_.begin(), trial_.end(), static_cast<uint32_t>(q)) || q > 0xffffffffULL) {
      return std::nullopt;
    }
    fac.emplace_back(q, 1);
  }
  Relation r;
  r.elt = a;
  for (auto& [p, k] : fac) {
    const PInfo& pi = info_.at(p);
    int acc = 0;
    for (size_t i = 0; i < pi.dec.size() && acc < k; ++i) {
      int v;
      if (pi.dec.size() == 1) {
        if (k % pi.dec[0].f != 0) throw IntegrityError("norm not a power of the residue degree");
        v = k / pi.dec[0].f;
      } else {
        v = prime_valuation(K_, pi.dec[i], a);
      }
      if (v == 0) continue;
      if (pi.fb[i] < 0) return std::nullopt;
      if (limit >= 0 && pi.fb[i] >= limit) return std::nullopt;
      r.vals.emplace_back(pi.fb[i], v);
      acc += pi.dec[i].f * v;
    }
    if (acc != k) throw IntegrityError("prime valuations do not account for the norm");
  }
  std::sort(r.vals.begin(), r.vals.end());
  fill_logs(&r);
  return r;
}

Relation Engine::image(const Relation& r, int a) const {
  Relation s;
  s.elt = K_.apply(auts_[a], r.elt);
  for (auto& [i, e] : r.vals) s.vals.emplace_back(perms_[a][i], e);
  std::sort(s.vals.begin(), s.vals.end());
  fill_logs(&s);
  return s;
}

int Engine::add_relation(Relation r) {
  long double s = n_;
  for (auto x : r.logs) s += std::fabs(x);
  rel_err_.push_back(4e-19L * s);
  rels_.push_back(std::move(r));
  const int j = static_cast<int>(rels_.size()) - 1;
  // Two generators of the same ideal differ by a unit with a two-term
  // factorization; these units stay small where echelon combinations do not.
  {
    auto [it, fresh] = by_ideal_.emplace(rels_[j].vals, j);
    if (!fresh) {
      const int k = it->second;
      Combo u = zero_combo(0, n_);
      u.factors[j] = 1;
      u.factors[k] = -1;
      for (int i = 0; i < n_; ++i) {
        u.logs[i] = rels_[j].logs[i] - rels_[k].logs[i];
        u.neg[i] = rels_[j].neg[i] ^ rels_[k].neg[i];
      }
      u.err = rel_err_[j] + rel_err_[k];
      units_.insert(u);
    }
  }
  return j;
}

void Engine::targeted_phase() {
  // expand[i]: total exponent mass introduced by fully substituting one copy
  // of prime i; chains of heavy substitutions blow up unit sizes.
  std::vector<long double> expand(fb_.size(), 0);
  auto mass = [&](const Relation& r, int skip) {
    long double m = 0;
    for (auto& [q, e] : r.vals) {
      if (q != skip) m += e * (1 + expand[q]);
    }
    return m;
  };
  for (size_t idx = 1; idx < fb_.size(); ++idx) {
    if (pivot_rel_[idx] >= 0) continue;
    const PrimeIdeal& P = fb_[idx];
    const Int NP = P.norm();
    const unsigned long p = P.p.get_ui();
    NormEngine ne(K_, reduced_ideal_basis(K_, P.ideal));
    const int max_tries = NP < 100 ? 150 : 600;
    int tries = 0, found = 0;
    std::optional<Relation> best;
    long double best_mass = 0;
    for (int B = 1; found < 4 && tries < max_tries; ++B) {
      for (auto& c : shell(n_, B)) {
        if (++tries > max_tries || found >= 4) break;
        check_budget("collecting targeted relations");
        Int N = ne.norm(c);
        if (N == 0) continue;
        Int cof = abs(N) / NP;
        if (mpz_divisible_ui_p(cof.get_mpz_t(), p)) continue;
        auto rel = try_relation(ne.element(c), N, static_cast<int>(idx) + 1);
        if (!rel) continue;
        if (rel->vals.empty() || rel->vals.back() != std::make_pair(static_cast<int>(idx), 1)) {
          throw IntegrityError("targeted relation lost its pivot prime");
        }
        ++found;
        long double m = mass(*rel, static_cast<int>(idx));
        if (!best || m < best_mass) {
          best = std::move(rel);
          best_mass = m;
        }
      }
    }
    if (!best) continue;
    std::vector<Relation> imgs;
    for (size_t a = 0; a < auts_.size(); ++a) imgs.push_back(image(*best, static_cast<int>(a)));
    expand[idx] = best_mass;
    pivot_rel_[idx] = add_relation(std::move(*best));
    ++targeted_;
    for (size_t a = 0; a < imgs.size(); ++a) {
      int j = perms_[a][idx];
      if (pivot_rel_[j] >= 0) continue;
      if (imgs[a].vals.back() != std::make_pair(j, 1)) throw IntegrityError("automorphism image lost its pivot");
      expand[j] = mass(imgs[a], j);
      pivot_rel_[j] = add_relation(std::move(imgs[a]));
      ++targeted_;
    }
  }
  core_pos_.assign(fb_.size(), -1);
  for (size_t i = 0; i < fb_.size(); ++i) {
    if (pivot_rel_[i] < 0) {
      core_pos_[i] = static_cast<int>(core_.size());
      core_.push_back(static_cast<int>(i));
    }
  }
  ech_.assign(core_.size(), std::nullopt);
}

Combo Engine::reduce_to_core(int j) const {
  std::map<int, Int> v;
  for (auto& [i, e] : rels_[j].vals) v[i] += e;
  Combo c = zero_combo(static_cast<int>(core_.size()), n_);
  c.factors[j] = 1;
  c.logs = rels_[j].logs;
  c.neg = rels_[j].neg;
  c.err = rel_err_[j];
  int top = INT_MAX;
  while (true) {
    auto it = v.lower_bound(top);
    if (it == v.begin()) break;
    --it;
    const int key = it->first;
    top = key;
    if (pivot_rel_[key] < 0) continue;
    const Int k = it->second;
    const int t = pivot_rel_[key];
    for (auto& [i, e] : rels_[t].vals) {
      Int& x = v[i];
      x -= k * e;
      if (x == 0) v.erase(i);
    }
    Int& f = c.factors[t];
    f -= k;
    if (f == 0) c.factors.erase(t);
    const long double kd = k.get_d();
    for (int i = 0; i < n_; ++i) c.logs[i] -= kd * rels_[t].logs[i];
    if (mpz_odd_p(k.get_mpz_t())) {
      for (int i = 0; i < n_; ++i) c.neg[i] ^= rels_[t].neg[i];
    }
    c.err += std::fabs(kd) * rel_err_[t];
  }
  for (auto& [i, e] : v) {
    if (core_pos_[i] < 0) throw IntegrityError("reduction left a non-core prime");
    c.row[core_pos_[i]] = e;
  }
  return c;
}

// Units as short kernel vectors of a batch of core rows. The echelon alone
// produces units with enormous exponents whose logs are numerically useless.
void Engine::kernel_units() {
  const int csz = static_cast<int>(core_.size());
  const int m = static_cast<int>(pool_.size());
  if (m == 0) return;
  const long double W = 1e6L;
  std::vector<std::vector<long double>> b(m, std::vector<long double>(csz + n_ + m, 0));
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < csz; ++t) b[i][t] = W * pool_[i].row[t].get_d();
    for (int t = 0; t < n_; ++t) b[i][csz + t] = pool_[i].logs[t];
    b[i][csz + n_ + i] = 1e-2L;  // keeps the rows independent
  }
  auto T = lll_reduce(b);
  for (int i = 0; i < m; ++i) {
    bool zero = true;
    for (int t = 0; t < csz && zero; ++t) zero = std::fabs(b[i][t]) < 0.5L;
    if (!zero) continue;
    Combo u = zero_combo(csz, n_);
    for (int t = 0; t < m; ++t) {
      if (T[i][t] != 0) u = lin(1, u, to_int(T[i][t]), pool_[t]);
    }
    // Floating LLL can misjudge a row as zero; only exact kernel vectors count.
    if (std::any_of(u.row.begin(), u.row.end(), [](const Int& x) { return x != 0; })) continue;
    u.row.clear();
    units_.insert(u);
  }
  pool_.clear();
}

bool Engine::process(int j) {
  Combo c = reduce_to_core(j);
  const int csz = static_cast<int>(core_.size());
  pool_.push_back(c);
  if (static_cast<int>(pool_.size()) >= csz + n_ + 8) kernel_units();
  for (int i = 0; i < csz; ++i) {
    if (c.row[i] == 0) continue;
    if (!ech_[i]) {
      if (c.row[i] < 0) c = lin(-1, c, 0, c);
      ech_[i] = std::move(c);
      ++ech_rank_;
      return true;
    }
    Combo& b = *ech_[i];
    if (mpz_divisible_p(c.row[i].get_mpz_t(), b.row[i].get_mpz_t())) {
      c = lin(1, c, -(c.row[i] / b.row[i]), b);
    } else {
      Int g, x, y;
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), b.row[i].get_mpz_t(), c.row[i].get_mpz_t());
      Combo nb = lin(x, b, y, c);
      Combo nc = lin(c.row[i] / g, b, -(b.row[i] / g), c);
      b = std::move(nb);
      c = std::move(nc);
    }
  }
  long double s = 0;
  for (auto x : c.logs) s += x;
  if (std::fabs(s) > 1e-6L + 1e3L * c.err) throw IntegrityError("unit from relations has nonzero log norm");
  c.row.clear();
  units_.insert(c);
  return true;
}

long double Engine::current_ratio() {
  Int h = 1;
  for (size_t i = 0; i < ech_.size(); ++i) h *= ech_[i]->row[i];
  return h.get_d() * units_.regulator() / analytic_.value;
}

bool Engine::done() {
  if (ech_rank_ != static_cast<int>(core_.size())) return false;
  ratio_ = 0;
  if (units_.rank() != n_ - 1) return false;
  ratio_ = current_ratio();
  const long double hi = analytic_.exact ? 1.5L : std::sqrt(2.0L);
  const long double lo = analytic_.exact ? 0.75L : 1 / std::sqrt(2.0L);
  if (ratio_ < lo) {
    throw IntegrityError("relation lattice gives h R " + std::to_string(static_cast<double>(ratio_)) +
                         " times the analytic value");
  }
  return ratio_ < hi;
}

void Engine::generic_relations(int idx, int B) {
  NormEngine ne(K_, reduced_ideal_basis(K_, fb_[idx].ideal));
  for (auto& c : shell(n_, B)) {
    check_budget("collecting relations for a stubborn prime");
    Int N = ne.norm(c);
    auto rel = try_relation(ne.element(c), N, -1);
    if (!rel) continue;
    std::vector<Relation> imgs;
    for (size_t a = 0; a < auts_.size(); ++a) imgs.push_back(image(*rel, static_cast<int>(a)));
    process(add_relation(std::move(*rel)));
    for (auto& r : imgs) process(add_relation(std::move(r)));
    if (ech_[core_pos_[idx]]) return;
  }
}

ClassGroupResult Engine::run() {
  if (!K_.totally_real()) throw UnsupportedError("class group engine needs a totally real field");
  if (!K_.maximal()) throw DomainError("class group needs the full ring of integers");
  analytic_ = analytic_hR(K_, opt_.euler_bound);
  build_factor_base();
  {
    Relation m1;
    m1.elt = K_.from_int(-1);
    m1.logs.assign(n_, 0);
    m1.neg.assign(n_, 1);
    add_relation(std::move(m1));
  }
  targeted_phase();
  // Rational primes: the shells below skip non-primitive vectors.
  for (auto& [p, pi] : info_) {
    if (!std::all_of(pi.fb.begin(), pi.fb.end(), [](int x) { return x >= 0; })) continue;
    Int N;
    mpz_ui_pow_ui(N.get_mpz_t(), p, static_cast<unsigned long>(n_));
    if (auto rel = try_relation(K_.from_int(static_cast<long>(p)), N, -1)) process(add_relation(std::move(*rel)));
  }
  NormEngine ne(K_, K_.lll_basis());
  std::mt19937_64 rng(opt_.seed * 0x9e3779b97f4a7c15ULL + 17);
  for (int B = 1; B <= 60; ++B) {
    auto sh = shell(n_, B);
    std::shuffle(sh.begin(), sh.end(), rng);
    for (auto& c : sh) {
      check_budget("collecting relations");
      Int N = ne.norm(c);
      auto rel = try_relation(ne.element(c), N, -1);
      if (!rel) continue;
      std::vector<Relation> imgs;
      for (size_t a = 0; a < auts_.size(); ++a) imgs.push_back(image(*rel, static_cast<int>(a)));
      process(add_relation(std::move(*rel)));
      for (auto& r : imgs) process(add_relation(std::move(r)));
      if (done()) return finish();
    }
    // Core primes that small elements never reach get relations from their own lattice.
    for (size_t i = 0; i < core_.size(); ++i) {
      if (!ech_[i]) generic_relations(core_[i], std::min(B, 4));
    }
    if (done()) return finish();
  }
  throw IncompleteError("relation search exhausted without certification (core rank " + std::to_string(ech_rank_) + "/" +
                        std::to_string(core_.size()) + ", unit rank " + std::to_string(units_.rank()) + ", ratio " +
                        std::to_string(static_cast<double>(ratio_)) + ")");
}

ClassGroupResult Engine::finish() {
  ClassGroupResult R;
  R.field = K_;
  R.fb_bound = bound_;
  R.conditional = opt_.grh && bound_ < minkowski_bound(K_);
  R.factor_base = fb_;
  R.relations = rels_;
  R.analytic = analytic_;
  R.ratio = ratio_;
  R.regulator = units_.regulator();
  R.targeted = targeted_;
  R.core_size = static_cast<int>(core_.size());
  const int csz = static_cast<int>(core_.size());

  Int h = 1;
  for (int i = 0; i < csz; ++i) h *= ech_[i]->row[i];
  std::vector<int> J, posJ(csz, -1);
  for (int i = 0; i < csz; ++i) {
    if (ech_[i]->row[i] != 1) {
      posJ[i] = static_cast<int>(J.size());
      J.push_back(i);
    }
  }
  const int m = static_cast<int>(J.size());
  auto modh = [&](Int x) {
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), h.get_mpz_t());
    return x;
  };
  std::vector<std::vector<Int>> vec(csz, std::vector<Int>(m, Int(0)));
  IntMat Rm(2 * m, m);
  for (int i = csz - 1; i >= 0; --i) {
    const auto& row = ech_[i]->row;
    std::vector<Int> acc(m, Int(0));
    for (int j = i + 1; j < csz; ++j) {
      if (row[j] == 0) continue;
      for (int t = 0; t < m; ++t) acc[t] += row[j] * vec[j][t];
    }
    if (posJ[i] < 0) {
      for (int t = 0; t < m; ++t) vec[i][t] = modh(-acc[t]);
    } else {
      vec[i][posJ[i]] = 1;
      for (int t = 0; t < m; ++t) Rm(posJ[i], t) = modh(acc[t]);
      Rm(posJ[i], posJ[i]) = modh(Rm(posJ[i], posJ[i]) + row[i]);
    }
  }
  for (int t = 0; t < m; ++t) Rm(m + t, t) = h;
  std::vector<int> nontriv;
  IntMat V;
  std::vector<Int> diag;
  if (m > 0) {
    IntMat U;
    diag = smith_normal_form(Rm, &U, &V);
    for (int t = 0; t < m; ++t) {
      if (diag[t] != 1) nontriv.push_back(t);
    }
  }
  Int prod = 1;
  for (int t : nontriv) {
    R.group.divisors.push_back(diag[t]);
    prod *= diag[t];
  }
  if (prod != h) throw IntegrityError("Smith form does not reproduce the class number");
  if (!nontriv.empty()) {
    std::vector<std::vector<Rat>> Vinv;
    if (!invert_rational(V, &Vinv)) throw IntegrityError("singular Smith transform");
    for (int t : nontriv) {
      std::string lab;
      for (int jj = 0; jj < m; ++jj) {
        Int e = modh(Vinv[t][jj].get_num());
        if (Vinv[t][jj].get_den() != 1) throw IntegrityError("non-integral inverse of a unimodular matrix");
        if (e == 0) continue;
        if (!lab.empty()) lab += "*";
        lab += "P" + std::to_string(core_[J[jj]]);
        if (e != 1) lab += "^" + e.get_str();
      }
      R.group.generators.push_back(lab);
    }
  }
  const int g = static_cast<int>(nontriv.size());
  R.dlog.assign(fb_.size(), std::vector<Int>(g, Int(0)));
  for (size_t idx = 0; idx < fb_.size(); ++idx) {
    std::vector<Int>& d = R.dlog[idx];
    if (core_pos_[idx] >= 0) {
      const auto& v = vec[core_pos_[idx]];
      for (int a = 0; a < g; ++a) {
        Int s = 0;
        for (int jj = 0; jj < m; ++jj) s += v[jj] * V(jj, nontriv[a]);
        d[a] = s;
      }
    } else {
      for (auto& [q, e] : rels_[pivot_rel_[idx]].vals) {
        if (q == static_cast<int>(idx)) continue;
        for (int a = 0; a < g; ++a) d[a] -= e * R.dlog[q][a];
      }
    }
    for (int a = 0; a < g; ++a) mpz_fdiv_r(d[a].get_mpz_t(), d[a].get_mpz_t(), R.group.divisors[a].get_mpz_t());
  }

  // Narrow group: core columns plus one order-2 sign column per real place.
  const auto& ub = units_.basis();
  IntMat N(csz + static_cast<int>(ub.size()) + 1 + n_, csz + n_);
  int row = 0;
  for (int i = 0; i < csz; ++i, ++row) {
    for (int j = 0; j < csz; ++j) N(row, j) = ech_[i]->row[j];
    for (int s = 0; s < n_; ++s) N(row, csz + s) = ech_[i]->neg[s];
  }
  for (auto& u : ub) {
    for (int s = 0; s < n_; ++s) N(row, csz + s) = u.neg[s];
    ++row;
  }
  for (int s = 0; s < n_; ++s) N(row, csz + s) = 1;  // -1
  ++row;
  for (int s = 0; s < n_; ++s, ++row) N(row, csz + s) = 2;
  R.narrow = AbelianGroup::from_relations_mod(N, 2 * h);
  if (R.narrow.order() % h != 0) throw IntegrityError("narrow class number not a multiple of the class number");

  for (auto& u : ub) {
    CompactUnit cu;
    for (auto& [k, e] : u.factors) cu.factors.emplace_back(k, e);
    cu.logs = u.logs;
    cu.neg = u.neg;
    // Rebuild exactly when the product is of manageable size.
    double bits = 0;
    for (auto& [k, e] : u.factors) {
      double eb = 0;
      for (auto& x : rels_[k].elt) eb = std::max(eb, static_cast<double>(mpz_sizeinbase(x.get_mpz_t(), 2)));
      bits += std::fabs(e.get_d()) * (eb + 4);
    }
    if (bits < 200000) {
      Elt num = K_.one(), den = K_.one();
      for (auto& [k, e] : u.factors) {
        Elt pw = K_.pow(rels_[k].elt, Int(abs(e)).get_ui());
        if (e > 0) {
          num = K_.mul(num, pw);
        } else {
          den = K_.mul(den, pw);
        }
      }
      Elt x = K_.div_exact(num, den);
      Int nx = K_.norm(x);
      if (nx != 1 && nx != -1) throw IntegrityError("reconstructed unit has norm " + nx.get_str());
      auto e = K_.embed_real(x);
      // Conjugates far below the coefficient size lose all precision in long double.
      long double scale = 0;
      for (auto& c : x) scale = std::max<long double>(scale, mpz_sizeinbase(c.get_mpz_t(), 2) * std::log(2.0L));
      for (int s = 0; s < n_; ++s) {
        if (u.logs[s] < scale - 20) continue;
        if (std::fabs(std::log(std::fabs(e[s])) - u.logs[s]) > 1e-6L * (1 + std::fabs(u.logs[s])) ||
            (e[s] < 0) != (u.neg[s] != 0)) {
          throw IntegrityError("reconstructed unit disagrees with its log embedding");
        }
      }
      cu.elt = std::move(x);
    }
    R.units.push_back(std::move(cu));
  }
  return R;
}

}  // namespace

long double minkowski_bound(const NumberField& K) {
  const int n = K.degree();
  long double m = std::sqrt(std::fabs(static_cast<long double>(K.disc().get_d())));
  for (int i = 1; i <= n; ++i) m *= static_cast<long double>(i) / n;
  m *= std::pow(4 / M_PIl, K.r2());
  return m;
}

long double bach_bound(const NumberField& K) {
  long double l = std::log(std::fabs(static_cast<long double>(K.disc().get_d())));
  return 12 * l * l;
}

std::vector<Elt> reduced_ideal_basis(const NumberField& K, const Ideal& I) {
  const int n = K.degree();
  std::vector<Elt> cols;
  std::vector<std::vector<long double>> b;
  for (int j = 0; j < n; ++j) {
    cols.push_back(I.H.col(j));
    auto e = K.embed(cols.back());
    std::vector<long double> v;
    for (auto& z : e) {
      v.push_back(z.real());
      if (z.imag() != 0) v.push_back(z.imag());
    }
    b.push_back(std::move(v));
  }
  auto T = lll_reduce(b);
  std::vector<Elt> out;
  for (int i = 0; i < n; ++i) {
    Elt x(n, Int(0));
    for (int j = 0; j < n; ++j) {
      if (T[i][j] == 0) continue;
      for (int t = 0; t < n; ++t) x[t] += cols[j][t] * static_cast<long>(T[i][j]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::optional<Elt> find_generator(const NumberField& K, const Ideal& I, int coeff_bound) {
  const Int N = I.norm();
  NormEngine ne(K, reduced_ideal_basis(K, I));
  for (int B = 1; B <= coeff_bound; ++B) {
    for (auto& c : shell(K.degree(), B)) {
      if (abs(ne.norm(c)) == N) return ne.element(c);
    }
  }
  return std::nullopt;
}

int ClassGroupResult::fb_index(const Ideal& P) const {
  for (size_t i = 0; i < factor_base.size(); ++i) {
    if (factor_base[i].ideal == P) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::vector<uint8_t>> ClassGroupResult::signature_matrix() const {
  std::vector<std::vector<uint8_t>> m;
  for (auto& u : units) m.push_back(u.neg);
  return m;
}

std::vector<int> ClassGroupResult::fb_permutation(const IntMat& aut) const {
  std::vector<int> perm(factor_base.size(), -1);
  for (size_t i = 0; i < factor_base.size(); ++i) {
    Ideal img = ideal_apply(field, factor_base[i].ideal, aut);
    perm[i] = fb_index(img);
    if (perm[i] < 0) throw IntegrityError("automorphism moves a factor-base prime outside the base");
  }
  return perm;
}

ClassGroupResult compute_class_group(const NumberField& K, const ClassGroupOptions& opt) {
  Engine e(K, opt);
  return e.run();
}

}  // namespace maass
