#include "maass/a4_tower.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "maass/errors.hpp"
#include "maass/fields.hpp"
#include "maass/poly_fp.hpp"

namespace maass {

namespace {

// Ideal with every HNF entry divided by d (exact).
Ideal ideal_div_int(const Ideal& I, const Int& d) {
  Ideal r = I;
  for (auto& x : r.H.a) {
    if (!mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t())) throw IntegrityError("ideal is not divisible by the integer");
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  }
  return r;
}

Elt elt_div_int(const Elt& x, const Int& d) {
  Elt r = x;
  for (auto& c : r) {
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) throw IntegrityError("element is not divisible by the integer");
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
  }
  return r;
}

Ideal unit_ideal(const NumberField& K) { return principal_ideal(K, K.one()); }

// Small vectors with coefficients in [-B, B], first nonzero positive.
std::vector<std::vector<int>> small_combos(int n, int B) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(n, -B);
  while (true) {
    int first = 0;
    for (int x : c) {
      if (x != 0) {
        first = x;
        break;
      }
    }
    if (first > 0) out.push_back(c);
    int i = 0;
    while (i < n && c[i] == B) c[i++] = -B;
    if (i == n) break;
    ++c[i];
  }
  return out;
}

// Quadratic characters x -> (x mod Q / q) at degree-one primes Q outside a bound.
class Characters {
 public:
  Characters(const NumberField& K, uint64_t above, int count) : K_(K) {
    const int n = K.degree();
    const Int den = K.basis_den();
    Int bad = K.poly_disc() * den;
    for (uint64_t q = std::max<uint64_t>(above + 1, 5); static_cast<int>(maps_.size()) < count; ++q) {
      if (!is_prime(q) || mpz_divisible_ui_p(bad.get_mpz_t(), q)) continue;
      auto roots = roots_mod_p(K.poly(), q);
      uint64_t dinv = invmod(mpz_fdiv_ui(den.get_mpz_t(), q), q);
      for (uint64_t r : roots) {
        std::vector<uint64_t> img(n);
        for (int j = 0; j < n; ++j) {
          uint64_t s = 0, rp = 1;
          for (int i = 0; i < n; ++i) {
            uint64_t b = mpz_fdiv_ui(K.basis()(i, j).get_mpz_t(), q);
            s = (s + mulmod(b, rp, q)) % q;
            rp = mulmod(rp, r, q);
          }
          img[j] = mulmod(s, dinv, q);
        }
        qs_.push_back(q);
        maps_.push_back(std::move(img));
      }
    }
  }
  int size() const { return static_cast<int>(maps_.size()); }
  // -1 if x vanishes at the character's prime.
  int value(int c, const Elt& x) const {
    const uint64_t q = qs_[c];
    uint64_t s = 0;
    for (size_t j = 0; j < x.size(); ++j) s = (s + mulmod(mpz_fdiv_ui(x[j].get_mpz_t(), q), maps_[c][j], q)) % q;
    if (s == 0) return -1;
    return legendre(s, q) == 1 ? 0 : 1;
  }

 private:
  const NumberField& K_;
  std::vector<uint64_t> qs_;
  std::vector<std::vector<uint64_t>> maps_;
};

// (O/4O)^* modulo squares, as F_2 coordinates.
class ModFour {
 public:
  explicit ModFour(const NumberField& K) : K_(K), n_(K.degree()) {
    if (n_ > 4) throw UnsupportedError("mod-4 square classes are enumerated only in small degree");
    const int total = 1 << (2 * n_);
    std::vector<int> units;
    for (int code = 0; code < total; ++code) {
      if (mpz_odd_p(K_.norm(decode(code)).get_mpz_t())) units.push_back(code);
    }
    std::set<int> squares;
    for (int u : units) squares.insert(mul(u, u));
    // coset id = least code in u * squares
    std::map<int, int> coset;
    for (int u : units) {
      int m = total;
      for (int s : squares) m = std::min(m, mul(u, s));
      coset[u] = m;
    }
    coset_ = coset;
    std::map<int, uint64_t> vec{{coset[units.front() == 1 ? 1 : *squares.begin()], 0}};
    vec.clear();
    int one = encode(K_.one());
    vec[coset[one]] = 0;
    dim_ = 0;
    for (int u : units) {
      int c = coset[u];
      if (vec.count(c)) continue;
      std::map<int, uint64_t> add;
      for (auto& [d, v] : vec) add[coset[mul(c, d)]] = v | (1ULL << dim_);
      vec.insert(add.begin(), add.end());
      ++dim_;
    }
    vec_ = vec;
  }
  int dim() const { return dim_; }
  uint64_t coords(const Elt& x) const {
    int c = encode(x);
    auto it = coset_.find(c);
    if (it == coset_.end()) throw DomainError("element is not a unit at 2");
    return vec_.at(it->second);
  }

 private:
  Elt decode(int code) const {
    Elt x(n_);
    for (int i = 0; i < n_; ++i) x[i] = (code >> (2 * i)) & 3;
    return x;
  }
  int encode(const Elt& x) const {
    int code = 0;
    for (int i = 0; i < n_; ++i) code |= static_cast<int>(mpz_fdiv_ui(x[i].get_mpz_t(), 4)) << (2 * i);
    return code;
  }
  int mul(int a, int b) const { return encode(K_.mul(decode(a), decode(b))); }

  const NumberField& K_;
  int n_;
  int dim_ = 0;
  std::map<int, int> coset_;
  std::map<int, uint64_t> vec_;
};

// Tagged F_2 elimination: expresses targets in terms of the inserted vectors.
class TaggedSpan {
 public:
  TaggedSpan(int len, int tags) : len_(len), tags_(tags) {}
  bool add(const F2Vec& v, int tag) {
    F2Vec w(len_ + tags_);
    for (int i = 0; i < len_; ++i) w.set(i, v.get(i));
    w.set(len_ + tag, true);
    w = reduce(w);
    int p = -1;
    for (int i = 0; i < len_ && p < 0; ++i) {
      if (w.get(i)) p = i;
    }
    if (p < 0) return false;
    rows_.push_back(w);
    piv_.push_back(p);
    return true;
  }
  // Tag combination equal to v, or nullopt.
  std::optional<F2Vec> solve(const F2Vec& v) const {
    F2Vec w(len_ + tags_);
    for (int i = 0; i < len_; ++i) w.set(i, v.get(i));
    w = reduce(w);
    for (int i = 0; i < len_; ++i) {
      if (w.get(i)) return std::nullopt;
    }
    F2Vec t(tags_);
    for (int i = 0; i < tags_; ++i) t.set(i, w.get(len_ + i));
    return t;
  }
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  F2Vec reduce(F2Vec w) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      if (w.get(piv_[r])) w ^= rows_[r];
    }
    return w;
  }
  int len_, tags_;
  std::vector<F2Vec> rows_;
  std::vector<int> piv_;
};

// Running product of relation elements kept small modulo squares.
struct SquareAccumulator {
  const ClassGroupResult& cg;
  Elt x;
  Ideal C;
  std::set<int> odd;  // factor-base primes to an odd power in (x) / C^2

  explicit SquareAccumulator(const ClassGroupResult& g) : cg(g), x(g.field.one()), C(unit_ideal(g.field)) {}

  void mul_relation(const Relation& r) {
    const NumberField& K = cg.field;
    x = K.mul(x, r.elt);
    for (auto& [i, e] : r.vals) {
      int total = e + (odd.count(i) ? 1 : 0);
      const Ideal& P = cg.factor_base[i].ideal;
      if (total / 2 > 0) C = ideal_mul(K, C, ideal_pow(K, P, static_cast<unsigned>(total / 2)));
      if (total % 2) {
        odd.insert(i);
      } else {
        odd.erase(i);
      }
    }
    auto red = reduce_mod_squares(K, x, C);
    x = std::move(red.first);
    C = std::move(red.second);
  }
};

std::vector<Int> char_poly_cubic(const NumberField& K, const Elt& a) {
  Int e1 = K.trace(a);
  Int e2 = (e1 * e1 - K.trace(K.mul(a, a))) / 2;
  Int e3 = K.norm(a);
  return {e1, e2, e3};
}

std::vector<BigReal> real_values(const NumberField& K, const Elt& x) {
  RatPoly v = K.to_power(x);
  std::vector<BigReal> out;
  const auto& R = K.roots();
  for (int j = 0; j < R.r1; ++j) {
    BigReal t = R.z[j].real();
    BigReal s = 0, tp = 1;
    for (auto& c : v) {
      s += BigReal(c.get_num().get_str()) / BigReal(c.get_den().get_str()) * tp;
      tp *= t;
    }
    out.push_back(s);
  }
  return out;
}

IntPoly poly_from_real_roots(const std::vector<BigReal>& roots) {
  std::vector<BigReal> c{BigReal(1)};  // low degree first
  for (auto& r : roots) {
    std::vector<BigReal> d(c.size() + 1, BigReal(0));
    for (size_t i = 0; i < c.size(); ++i) {
      d[i + 1] += c[i];
      d[i] -= r * c[i];
    }
    c = std::move(d);
  }
  std::vector<Int> out;
  for (auto& x : c) {
    Int r = round_to_int(x);
    BigReal diff = abs(x - BigReal(r.get_str()));
    if (diff > BigReal("1e-30")) throw IntegrityError("polynomial from conjugates has non-integral coefficients");
    out.push_back(r);
  }
  return IntPoly(out);
}

std::vector<Int> primes_squared_dividing(const Int& d) {
  std::vector<Int> out;
  for (auto& [p, e] : factor_integer(d).factors) {
    if (e >= 2) out.push_back(p);
  }
  return out;
}

NumberField maximal_field(const IntPoly& f, const std::string& label) {
  FieldOptions o;
  o.maximal_at = primes_squared_dividing(poly_discriminant(f));
  if (o.maximal_at.empty()) o.maximal_at.push_back(2);
  o.maximal_at_complete = true;
  o.label = label;
  return NumberField::create(f, o);
}

}  // namespace

std::pair<Elt, Ideal> reduce_mod_squares(const NumberField& K, const Elt& x, const Ideal& C, bool odd_witness) {
  const int n = K.degree();
  const auto& auts = K.automorphisms();
  if (static_cast<int>(auts.size()) != n) throw DomainError("reduction modulo squares needs a Galois field");
  Ideal J = unit_ideal(K);
  for (int a = 1; a < n; ++a) J = ideal_mul(K, J, ideal_apply(K, C, auts[a]));
  const Int NC = C.norm();
  auto red = reduced_ideal_basis(K, J);
  auto ex = K.embed_real(x);
  std::vector<long double> lw(n);
  long double mean = 0;
  for (int i = 0; i < n; ++i) {
    if (ex[i] == 0) throw DomainError("cannot reduce zero");
    lw[i] = 0.5L * std::log(std::fabs(ex[i]));
    mean += lw[i] / n;
  }
  std::vector<std::vector<long double>> b;
  for (auto& e : red) {
    auto ee = K.embed_real(e);
    std::vector<long double> v(n);
    for (int i = 0; i < n; ++i) v[i] = ee[i] * std::exp(lw[i] - mean);
    b.push_back(std::move(v));
  }
  auto T = lll_reduce(b);
  std::vector<Elt> basis;
  for (int i = 0; i < n; ++i) {
    Elt d(n, Int(0));
    for (int j = 0; j < n; ++j) {
      if (T[i][j] == 0) continue;
      for (int t = 0; t < n; ++t) d[t] += red[j][t] * static_cast<long>(T[i][j]);
    }
    basis.push_back(std::move(d));
  }
  // Try the reduced vectors first, then small combinations in order of weighted length.
  std::vector<std::pair<long double, Elt>> cands;
  for (int B = 1; B <= 2 && (cands.empty() || B == 1); ++B) {
    for (auto& c : small_combos(n, B)) {
      Elt d(n, Int(0));
      std::vector<long double> v(n, 0);
      for (int i = 0; i < n; ++i) {
        if (c[i] == 0) continue;
        for (int t = 0; t < n; ++t) d[t] += basis[i][t] * c[i];
        for (int t = 0; t < n; ++t) v[t] += b[i][t] * c[i];
      }
      long double len = 0;
      for (auto z : v) len += z * z;
      cands.emplace_back(len, std::move(d));
    }
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Int NC2 = NC * NC;
  Int Nn = 1;
  for (int a = 1; a < n; ++a) Nn *= NC;  // N(J)
  for (auto& [len, d] : cands) {
    if (K.is_zero(d)) continue;
    if (odd_witness) {
      Int Nd = abs(K.norm(d));
      Int NE = Nd / Nn;
      if (mpz_even_p(NE.get_mpz_t())) continue;
    }
    Elt y = elt_div_int(K.mul(x, K.mul(d, d)), NC2);
    Ideal E = ideal_div_int(ideal_mul(K, C, principal_ideal(K, d)), NC);
    return {y, E};
  }
  throw IncompleteError("no reducing element with an odd witness among small combinations");
}

KummerData selmer_unramified_quadratics(const ClassGroupResult& cg) {
  const NumberField& K = cg.field;
  const int n = K.degree();
  const int sig = order_three_automorphism(K);
  if (n != 3 || sig < 0) throw DomainError("Selmer construction is implemented for cyclic cubic fields");
  const int rank2 = cg.group.p_rank(2);
  const int target = n + rank2;
  const int fbn = static_cast<int>(cg.factor_base.size());
  const int nrel = static_cast<int>(cg.relations.size());
  uint64_t maxp = 2;
  for (auto& P : cg.factor_base) maxp = std::max<uint64_t>(maxp, P.p.get_ui());
  Characters chars(K, maxp, std::max(48, 4 * target + 16));
  const int nc = chars.size();

  // Elimination on valuations mod 2; kernel combinations carry characters and signs.
  struct Row {
    F2Vec val, chr, sgn, combo;
  };
  std::vector<Row> ech;
  std::vector<int> piv;
  TaggedSpan sel_chars(nc, target);
  std::vector<Row> sel;
  for (int j = 0; j < nrel && static_cast<int>(sel.size()) < target; ++j) {
    const Relation& r = cg.relations[j];
    Row row{F2Vec(fbn), F2Vec(nc), F2Vec(n), F2Vec(nrel)};
    for (auto& [i, e] : r.vals) row.val.set(i, e & 1);
    for (int c = 0; c < nc; ++c) {
      int v = chars.value(c, r.elt);
      if (v < 0) throw IntegrityError("auxiliary character prime divides a relation");
      row.chr.set(c, v);
    }
    for (int s = 0; s < n; ++s) row.sgn.set(s, r.neg[s]);
    row.combo.set(j, true);
    for (size_t t = 0; t < ech.size(); ++t) {
      if (row.val.get(piv[t])) {
        row.val ^= ech[t].val;
        row.chr ^= ech[t].chr;
        row.sgn ^= ech[t].sgn;
        row.combo ^= ech[t].combo;
      }
    }
    if (!row.val.is_zero()) {
      piv.push_back(row.val.first_set());
      ech.push_back(std::move(row));
      continue;
    }
    if (sel_chars.add(row.chr, static_cast<int>(sel.size()))) sel.push_back(std::move(row));
  }
  if (static_cast<int>(sel.size()) != target) {
    throw IntegrityError("found " + std::to_string(sel.size()) + " independent ideal-square classes, expected " +
                         std::to_string(target));
  }
  KummerData kd;
  kd.sel_dim = target;
  kd.sigma_index = sig;

  // Totally positive part: kernel of the sign map.
  std::vector<F2Vec> plus;  // combinations of sel
  {
    std::vector<std::pair<F2Vec, F2Vec>> rows;  // (sign, tag)
    for (int i = 0; i < target; ++i) {
      F2Vec t(target);
      t.set(i, true);
      rows.emplace_back(sel[i].sgn, t);
    }
    std::vector<std::pair<F2Vec, F2Vec>> e2;
    std::vector<int> p2;
    for (auto& [s, t] : rows) {
      for (size_t k = 0; k < e2.size(); ++k) {
        if (s.get(p2[k])) {
          s ^= e2[k].first;
          t ^= e2[k].second;
        }
      }
      if (s.is_zero()) {
        plus.push_back(t);
      } else {
        p2.push_back(s.first_set());
        e2.emplace_back(s, t);
      }
    }
  }
  kd.sel_plus_dim = static_cast<int>(plus.size());

  auto build = [&](const F2Vec& rel_combo, bool odd) {
    SquareAccumulator acc(cg);
    for (int j = 0; j < nrel; ++j) {
      if (rel_combo.get(j)) acc.mul_relation(cg.relations[j]);
    }
    if (!acc.odd.empty()) throw IntegrityError("Selmer combination has an odd valuation");
    auto red = reduce_mod_squares(K, acc.x, acc.C, odd);
    return SelmerElement{red.first, red.second, false};
  };
  auto combo_of = [&](const F2Vec& t) {
    F2Vec c(nrel);
    for (int i = 0; i < target; ++i) {
      if (t.get(i)) c ^= sel[i].combo;
    }
    return c;
  };
  std::vector<SelmerElement> plus_elts;
  for (auto& t : plus) plus_elts.push_back(build(combo_of(t), true));

  // Unramified at 2: square modulo 4.
  ModFour m4(K);
  std::vector<F2Vec> wcomb;  // combinations of plus
  {
    std::vector<std::pair<uint64_t, F2Vec>> e2;
    for (size_t i = 0; i < plus_elts.size(); ++i) {
      uint64_t v = m4.coords(plus_elts[i].alpha);
      F2Vec t(static_cast<int>(plus.size()));
      t.set(static_cast<int>(i), true);
      for (auto& [pv, pt] : e2) {
        uint64_t lead = pv & (~pv + 1);
        if (v & lead) {
          v ^= pv;
          t ^= pt;
        }
      }
      if (v == 0) {
        wcomb.push_back(t);
      } else {
        // keep rows with distinct lowest bits
        for (auto& [pv, pt] : e2) {
          uint64_t lead = v & (~v + 1);
          if (pv & lead) {
            pv ^= v;
            pt ^= t;
          }
        }
        e2.emplace_back(v, t);
      }
    }
  }
  if (static_cast<int>(wcomb.size()) != rank2) {
    throw IntegrityError("unramified quadratic extensions have rank " + std::to_string(wcomb.size()) +
                         ", class group 2-rank is " + std::to_string(rank2));
  }
  for (auto& t : wcomb) {
    SquareAccumulator acc(cg);
    acc.x = K.one();
    acc.C = unit_ideal(K);
    Elt x = K.one();
    Ideal C = unit_ideal(K);
    for (size_t i = 0; i < plus_elts.size(); ++i) {
      if (!t.get(static_cast<int>(i))) continue;
      x = K.mul(x, plus_elts[i].alpha);
      C = ideal_mul(K, C, plus_elts[i].witness);
      auto red = reduce_mod_squares(K, x, C);
      x = red.first;
      C = red.second;
    }
    auto red = reduce_mod_squares(K, x, C, true);
    SelmerElement s{red.first, red.second, false};
    auto e = K.embed_real(s.alpha);
    s.totally_positive = std::all_of(e.begin(), e.end(), [](long double v) { return v > 0; });
    if (!s.totally_positive) throw IntegrityError("Kummer generator is not totally positive");
    if (!(principal_ideal(K, s.alpha) == ideal_mul(K, s.witness, s.witness))) {
      throw IntegrityError("Kummer generator is not an ideal square");
    }
    if (m4.coords(s.alpha) != 0) throw IntegrityError("Kummer generator is not a square modulo 4");
    kd.basis.push_back(std::move(s));
  }

  // sigma on W through characters at fresh primes.
  const int d = rank2;
  std::vector<F2Vec> cols;
  if (d > 0) {
    const IntMat& aut = K.automorphisms()[sig];
    std::vector<Elt> imgs;
    for (auto& s : kd.basis) imgs.push_back(K.apply(aut, s.alpha));
    uint64_t start = maxp;
    for (int attempt = 0; attempt < 8 && cols.empty(); ++attempt) {
      Characters ch(K, start, 4 * d + 32);
      start += 10000;
      std::vector<int> use;
      for (int c = 0; c < ch.size(); ++c) {
        bool ok = true;
        for (auto& s : kd.basis) ok = ok && ch.value(c, s.alpha) >= 0;
        for (auto& y : imgs) ok = ok && ch.value(c, y) >= 0;
        if (ok) use.push_back(c);
      }
      const int m = static_cast<int>(use.size());
      TaggedSpan span(m, d);
      for (int b = 0; b < d; ++b) {
        F2Vec v(m);
        for (int i = 0; i < m; ++i) v.set(i, ch.value(use[i], kd.basis[b].alpha));
        span.add(v, b);
      }
      if (span.rank() < d) continue;
      for (int b = 0; b < d; ++b) {
        F2Vec v(m);
        for (int i = 0; i < m; ++i) v.set(i, ch.value(use[i], imgs[b]));
        auto sol = span.solve(v);
        if (!sol) throw IntegrityError("sigma does not preserve the unramified Kummer group");
        cols.push_back(*sol);
      }
    }
    if (static_cast<int>(cols.size()) != d) throw IncompleteError("characters did not separate the Kummer group");
  }
  kd.module = make_module(d, cols);
  if (kd.module.m != 0) throw IntegrityError("sigma has fixed vectors on the unramified Kummer group");
  return kd;
}

std::vector<A4FieldData> a4_fields(const ClassGroupResult& cg, const KummerData& kd, long ell) {
  const NumberField& L = cg.field;
  const IntMat& aut = L.automorphisms()[kd.sigma_index];
  std::vector<A4FieldData> out;
  auto subs = u2_submodules(kd.module);
  for (size_t si = 0; si < subs.size(); ++si) {
    const F2Vec& v = subs[si].first;
    Elt x = L.one();
    Ideal C = unit_ideal(L);
    for (int b = 0; b < kd.module.dim; ++b) {
      if (!v.get(b)) continue;
      x = L.mul(x, kd.basis[b].alpha);
      C = ideal_mul(L, C, kd.basis[b].witness);
    }
    auto red = reduce_mod_squares(L, x, C, true);
    A4FieldData F;
    F.ell = ell;
    F.submodule = static_cast<int>(si);
    F.alpha = red.first;
    auto cp = char_poly_cubic(L, F.alpha);
    Int m;
    if (cp[2] <= 0 || !is_square(cp[2], &m)) throw IntegrityError("norm of the Kummer generator is not a square");
    const Int T = cp[0], T2 = cp[1];
    F.quartic = IntPoly({T * T - 4 * T2, -8 * m, -2 * T, Int(0), Int(1)});
    NumberField K4 = maximal_field(F.quartic, "A4 quartic");
    F.quartic_field_disc = K4.disc();
    if (F.quartic_field_disc != Int(ell) * Int(ell)) {
      throw IntegrityError("A4 quartic field has discriminant " + F.quartic_field_disc.get_str());
    }
    // Degree-12 field: roots e1 sqrt(alpha_j) + c e2 sqrt(sigma(alpha)_j).
    auto a = real_values(L, F.alpha);
    auto s = real_values(L, L.apply(aut, F.alpha));
    for (int c = 1; c <= 20; ++c) {
      std::vector<BigReal> roots;
      for (int j = 0; j < 3; ++j) {
        if (a[j] <= 0 || s[j] <= 0) throw IntegrityError("Kummer generator is not totally positive");
        BigReal ra = sqrt(a[j]), rs = sqrt(s[j]);
        for (int e1 : {1, -1}) {
          for (int e2 : {1, -1}) roots.push_back(e1 * ra + c * e2 * rs);
        }
      }
      IntPoly P = poly_from_real_roots(roots);
      if (!is_squarefree(P)) continue;
      F.degree12_poly = P;
      F.primitive_c = c;
      break;
    }
    if (F.degree12_poly.is_zero()) throw IncompleteError("no primitive element for the degree-12 field");
    FieldOptions o;
    o.assume_irreducible = true;  // squarefree orbit of a primitive element
    o.maximal_at = {Int(ell)};
    o.label = "A4 degree 12";
    NumberField K12 = NumberField::create(F.degree12_poly, o);
    auto dec = prime_decomposition(K12, Int(ell));
    F.at_ell = Splitting{dec.front().e, dec.front().f, static_cast<int>(dec.size())};
    for (auto& P : dec) {
      if (P.e != F.at_ell.e || P.f != F.at_ell.f) throw IntegrityError("non-uniform splitting in a Galois field");
    }
    if (F.at_ell.e != 3 || F.at_ell.f != 1 || F.at_ell.g != 4) {
      throw IntegrityError("ell does not split as (3,1,4) in the degree-12 field");
    }
    out.push_back(std::move(F));
  }
  return out;
}

std::string a4_class_name(A4Class c) {
  switch (c) {
    case A4Class::Identity:
      return "identity";
    case A4Class::DoubleTransposition:
      return "double-transposition";
    case A4Class::ThreeCycle:
      return "three-cycle";
  }
  return "?";
}

int sl2f3_trace_squared(A4Class cls) {
  // Orders in PSL(2,3) = A4: 1 identity, 2 double transposition, 3 three-cycle.
  static const std::map<int, int> table = [] {
    std::map<int, std::set<int>> seen;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < 3; ++c) {
          for (int d = 0; d < 3; ++d) {
            if ((a * d - b * c + 9) % 3 != 1) continue;
            // projective order: least k with M^k = +-I
            int m[4] = {a, b, c, d}, p[4] = {a, b, c, d};
            int k = 1;
            auto scalar = [](int* x) { return x[1] == 0 && x[2] == 0 && x[0] == x[3]; };
            while (!scalar(p)) {
              int q[4] = {(p[0] * m[0] + p[1] * m[2]) % 3, (p[0] * m[1] + p[1] * m[3]) % 3,
                          (p[2] * m[0] + p[3] * m[2]) % 3, (p[2] * m[1] + p[3] * m[3]) % 3};
              std::copy(q, q + 4, p);
              ++k;
            }
            int t = (a + d) % 3;
            seen[k].insert(t * t % 3);
          }
        }
      }
    }
    std::map<int, int> r;
    for (auto& [k, s] : seen) {
      if (s.size() != 1) throw IntegrityError("trace squared is not a class function");
      r[k] = *s.begin();
    }
    return r;
  }();
  int order = cls == A4Class::Identity ? 1 : cls == A4Class::DoubleTransposition ? 2 : 3;
  return table.at(order);
}

FrobeniusClassData frobenius_data(const A4FieldData& K, uint64_t p) {
  if (p == static_cast<uint64_t>(K.ell)) throw UnsupportedError("Frobenius at the ramified prime");
  FrobeniusClassData d;
  d.p = p;
  static thread_local std::map<std::string, Int> disc_cache;
  auto disc_of = [&](const IntPoly& f) {
    auto key = f.to_string();
    auto it = disc_cache.find(key);
    if (it != disc_cache.end()) return it->second;
    if (disc_cache.size() > 64) disc_cache.clear();
    return disc_cache[key] = poly_discriminant(f);
  };
  Int D12 = disc_of(K.degree12_poly);
  if (!mpz_divisible_ui_p(D12.get_mpz_t(), p)) {
    d.pattern = factor_degrees_mod_p(K.degree12_poly, p);
  } else {
    // residue degrees in the quartic field, from its maximal order at p
    FieldOptions o;
    o.maximal_at = {Int(p)};
    NumberField K4 = NumberField::create(K.quartic, o);
    std::vector<int> q;
    for (auto& P : prime_decomposition(K4, Int(p))) {
      if (P.e != 1) throw IntegrityError("p ramifies in the quartic field");
      q.push_back(P.f);
    }
    std::sort(q.begin(), q.end());
    int deg = q.back();
    d.pattern.assign(12 / deg, deg);
  }
  std::sort(d.pattern.begin(), d.pattern.end());
  const int f = d.pattern.front();
  for (int x : d.pattern) {
    if (x != f) throw IntegrityError("non-uniform residue degrees in a Galois field");
  }
  if (f == 1) {
    d.cls = A4Class::Identity;
  } else if (f == 2) {
    d.cls = A4Class::DoubleTransposition;
  } else if (f == 3) {
    d.cls = A4Class::ThreeCycle;
  } else {
    throw IntegrityError("residue degree " + std::to_string(f) + " impossible in A4");
  }
  d.trace_squared_mod3 = sl2f3_trace_squared(d.cls);
  return d;
}

int mod3_distinctness(const std::vector<A4FieldData>& fields) {
  std::vector<NumberField> reps;
  for (auto& F : fields) {
    FieldOptions o;
    o.maximal_at = {Int(2)};
    NumberField K = NumberField::create(F.quartic, o);
    bool dup = false;
    for (auto& R : reps) {
      if (R.disc() == K.disc() && fields_isomorphic(R, K)) {
        dup = true;
        break;
      }
    }
    if (!dup) reps.push_back(K);
  }
  return static_cast<int>(reps.size());
}

TowerCheck two_class_tower_check(const ClassGroupResult& cg, const KummerData& kd, const ClassGroupOptions& opt) {
  if (cg.group.p_rank(2) != 2 || cg.group.order() % 8 == 0) {
    throw DomainError("tower check needs a 2-class group (2,2)");
  }
  const NumberField& L = cg.field;
  auto cp = char_poly_cubic(L, kd.basis.front().alpha);
  // f(x^2) with f the characteristic polynomial of alpha.
  IntPoly g({-cp[2], Int(0), cp[1], Int(0), -cp[0], Int(0), Int(1)});
  NumberField M = maximal_field(g, "unramified quadratic over L");
  Int disc4 = L.disc() * L.disc();
  if (M.disc() != disc4) throw IntegrityError("unramified sextic has discriminant " + M.disc().get_str());
  auto r = compute_class_group(M, opt);
  TowerCheck t;
  t.sextic_h = r.h();
  t.sextic_two_part = valuation(t.sextic_h, Int(2));
  t.terminates = t.sextic_two_part == 1;
  t.conditional = r.conditional;
  return t;
}

}  // namespace maass
