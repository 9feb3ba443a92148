#include "maass/ray_class.hpp"

#include <algorithm>
#include <map>

#include "maass/errors.hpp"
#include "maass/fields.hpp"
#include "maass/quadratic_forms.hpp"

namespace maass {

namespace {

Elt reduce_coords(Elt x, const Int& p) {
  for (auto& c : x) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
  return x;
}

// Quadratic residue character at P, extended to elements divisible by P
// through the element beta / p of valuation -1 at P.
int residue_character(const NumberField& K, const PrimeIdeal& P, const Elt& x, int v) {
  Elt y = x;
  Int pv = 1;
  for (int i = 0; i < v; ++i) {
    y = K.mul(y, P.beta);
    pv *= P.p;
  }
  for (auto& c : y) {
    if (!mpz_divisible_p(c.get_mpz_t(), pv.get_mpz_t())) throw IntegrityError("residue normalisation is not integral");
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), pv.get_mpz_t());
  }
  y = reduce_coords(y, P.p);
  Int e = (P.norm() - 1) / 2;
  Elt z = K.one(), b = y;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) z = reduce_coords(K.mul(z, b), P.p);
    b = reduce_coords(K.mul(b, b), P.p);
    e /= 2;
  }
  if (ideal_contains(P.ideal, K.sub(z, K.one()))) return 0;
  if (ideal_contains(P.ideal, K.add(z, K.one()))) return 1;
  throw IntegrityError("residue character is not +-1");
}

// Rows over F_2 in reduced echelon form.
struct Rref {
  std::vector<F2Vec> rows;
  std::vector<int> piv;
  void add(F2Vec v) {
    v = reduce(v);
    if (v.is_zero()) return;
    int p = v.first_set();
    for (auto& r : rows) {
      if (r.get(p)) r ^= v;
    }
    rows.push_back(v);
    piv.push_back(p);
  }
  F2Vec reduce(F2Vec v) const {
    for (size_t i = 0; i < rows.size(); ++i) {
      if (v.get(piv[i])) v ^= rows[i];
    }
    return v;
  }
};

int find_involution(const NumberField& K) {
  const auto& auts = K.automorphisms();
  IntMat id = IntMat::identity(K.degree());
  for (size_t i = 0; i < auts.size(); ++i) {
    if (!(auts[i] == id) && auts[i] * auts[i] == id) return static_cast<int>(i);
  }
  return -1;
}

std::vector<F2Vec> transpose(const std::vector<F2Vec>& cols, int d) {
  std::vector<F2Vec> t(d, F2Vec(d));
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) t[i].set(j, cols[j].get(i));
  }
  return t;
}

F2Vec apply_cols(const std::vector<F2Vec>& cols, const F2Vec& v) {
  F2Vec r(v.size());
  for (int j = 0; j < v.size(); ++j) {
    if (v.get(j)) r ^= cols[j];
  }
  return r;
}

bool dot(const F2Vec& a, const F2Vec& b) {
  bool s = false;
  for (int i = 0; i < a.size(); ++i) s ^= a.get(i) && b.get(i);
  return s;
}

}  // namespace

ClassGroupResult class_group_with_ell(const NumberField& K, long ell, ClassGroupOptions opt) {
  opt.extra_primes.push_back(Int(ell));
  return compute_class_group(K, opt);
}

RayClass2Data ray_class_2_elementary(const ClassGroupResult& cg, long ell) {
  const NumberField& K = cg.field;
  const int nfb = static_cast<int>(cg.factor_base.size());
  std::vector<int> col(nfb, -1), tcols;
  std::vector<int> sprimes;
  for (int i = 0; i < nfb; ++i) {
    if (cg.factor_base[i].p == ell) {
      tcols.push_back(i);
    } else {
      sprimes.push_back(i);
    }
  }
  const int ns = static_cast<int>(sprimes.size()), nt = static_cast<int>(tcols.size());
  int ram = 0;
  for (int i : tcols) ram += cg.factor_base[i].e * cg.factor_base[i].f;
  if (ram != K.degree()) throw DomainError("class group was computed without all primes above ell");
  for (int j = 0; j < ns; ++j) col[sprimes[j]] = j;
  for (int j = 0; j < nt; ++j) col[tcols[j]] = ns + j;

  // The primes off ell must generate Cl.
  {
    const int r = cg.group.rank();
    IntMat R(r + ns, r);
    for (int i = 0; i < r; ++i) R(i, i) = cg.group.divisors[i];
    for (int j = 0; j < ns; ++j) {
      for (int i = 0; i < r; ++i) R(r + j, i) = cg.dlog[sprimes[j]][i];
    }
    if (r > 0 && AbelianGroup::from_relations(R).order() != 1) {
      throw IncompleteError("factor-base primes away from ell do not generate the class group");
    }
  }

  // Relations with their T-valuations; integer elimination on the T columns
  // keeps parities of everything else.
  struct Row {
    std::vector<Int> t;
    F2Vec s, chi, sgn;
  };
  const int r1 = K.roots().r1;
  std::vector<Row> rows;
  for (const Relation& rel : cg.relations) {
    Row row{std::vector<Int>(nt, Int(0)), F2Vec(ns), F2Vec(nt), F2Vec(r1)};
    for (auto& [i, e] : rel.vals) {
      int c = col[i];
      if (c < ns) {
        row.s.set(c, e & 1);
      } else {
        row.t[c - ns] = e;
      }
    }
    for (int j = 0; j < nt; ++j) {
      row.chi.set(j, residue_character(K, cg.factor_base[tcols[j]], rel.elt, row.t[j].get_si()));
    }
    for (int j = 0; j < r1; ++j) row.sgn.set(j, rel.neg[j]);
    rows.push_back(std::move(row));
  }
  auto sub = [](Row& a, const Row& b, const Int& q) {
    for (size_t c = 0; c < a.t.size(); ++c) a.t[c] -= q * b.t[c];
    if (mpz_odd_p(q.get_mpz_t())) {
      a.s ^= b.s;
      a.chi ^= b.chi;
      a.sgn ^= b.sgn;
    }
  };
  std::vector<Row> pivots;  // pivots[c] has t[c] > 0 and zeros before c
  std::vector<Row> active = rows;
  for (int c = 0; c < nt; ++c) {
    while (true) {
      int best = -1;
      for (size_t i = 0; i < active.size(); ++i) {
        if (active[i].t[c] == 0) continue;
        if (best < 0 || abs(active[i].t[c]) < abs(active[best].t[c])) best = static_cast<int>(i);
      }
      if (best < 0) throw IntegrityError("no relation involves a prime above ell");
      bool done = true;
      for (size_t i = 0; i < active.size(); ++i) {
        if (static_cast<int>(i) == best || active[i].t[c] == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), active[i].t[c].get_mpz_t(), active[best].t[c].get_mpz_t());
        sub(active[i], active[best], q);
        if (active[i].t[c] != 0) done = false;
      }
      if (done) {
        Row p = active[best];
        if (p.t[c] < 0) sub(p, p, Int(2));  // negate; parity unchanged
        pivots.push_back(p);
        active.erase(active.begin() + best);
        break;
      }
    }
  }

  RayClass2Data d;
  d.label = K.label();
  d.ell = ell;
  Rref R, Rinf;
  for (auto& row : active) {
    F2Vec v(ns + nt), w(ns + nt + r1);
    for (int j = 0; j < ns; ++j) {
      v.set(j, row.s.get(j));
      w.set(j, row.s.get(j));
    }
    for (int j = 0; j < nt; ++j) {
      v.set(ns + j, row.chi.get(j));
      w.set(ns + j, row.chi.get(j));
    }
    for (int j = 0; j < r1; ++j) w.set(ns + nt + j, row.sgn.get(j));
    R.add(v);
    Rinf.add(w);
  }
  const int N = ns + nt;
  d.quotient_dim = N - static_cast<int>(R.rows.size());
  d.quotient_dim_with_infinity = N + r1 - static_cast<int>(Rinf.rows.size());
  std::vector<int> np;
  {
    std::vector<bool> isp(N, false);
    for (int p : R.piv) isp[p] = true;
    for (int j = 0; j < N; ++j) {
      if (!isp[j]) np.push_back(j);
    }
  }
  const int dq = static_cast<int>(np.size());
  auto quot = [&](const F2Vec& v) {
    F2Vec r = R.reduce(v), q(dq);
    for (int j = 0; j < dq; ++j) q.set(j, r.get(np[j]));
    return q;
  };
  auto unit = [&](int c) {
    F2Vec v(N);
    v.set(c, true);
    return v;
  };
  for (int c : np) {
    d.generators.push_back(c < ns ? "[" + ideal_to_string(cg.factor_base[sprimes[c]].ideal) + "]"
                                  : "nonresidue at " + ideal_to_string(cg.factor_base[tcols[c - ns]].ideal));
  }
  Rref inert;
  for (int j = 0; j < nt; ++j) {
    d.inertia.push_back(quot(unit(ns + j)));
    inert.add(d.inertia.back());
  }
  if (d.quotient_dim - static_cast<int>(inert.rows.size()) != cg.group.p_rank(2)) {
    throw IntegrityError("ray class quotient modulo inertia differs from Cl / 2");
  }
  // First prime above ell: an S-unit combination with T-valuation (1, 0, ...).
  {
    std::vector<Int> target(nt, Int(0));
    target[0] = 1;
    F2Vec s(ns);
    for (int c = 0; c < nt; ++c) {
      if (target[c] == 0) continue;
      if (!mpz_divisible_p(target[c].get_mpz_t(), pivots[c].t[c].get_mpz_t())) {
        throw IntegrityError("prime above ell is not equivalent to a product of factor-base primes");
      }
      Int q = target[c] / pivots[c].t[c];
      for (int k = 0; k < nt; ++k) target[k] -= q * pivots[c].t[k];
      if (mpz_odd_p(q.get_mpz_t())) s ^= pivots[c].s;
    }
    F2Vec v(N);
    for (int j = 0; j < ns; ++j) v.set(j, s.get(j));
    d.frobenius_first_prime = inert.reduce(quot(v));
  }

  auto action = [&](int aut_index) {
    auto perm = cg.fb_permutation(K.automorphisms()[aut_index]);
    auto move = [&](const F2Vec& v) {
      F2Vec r(N);
      for (int c = 0; c < N; ++c) {
        if (!v.get(c)) continue;
        int fb = c < ns ? sprimes[c] : tcols[c - ns];
        r.set(col[perm[fb]], true);
      }
      return r;
    };
    for (auto& row : R.rows) {
      if (!R.reduce(move(row)).is_zero()) throw IntegrityError("automorphism does not preserve the ray class relations");
    }
    std::vector<F2Vec> cols;
    for (int c : np) cols.push_back(quot(move(unit(c))));
    return cols;
  };
  int s = order_three_automorphism(K);
  if (s >= 0) d.sigma = make_module(dq, action(s));
  int t = find_involution(K);
  if (t >= 0) d.tau = action(t);
  return d;
}

int k_L(const RayClass2Data& L, const RayClass2Data& F) {
  int diff = L.quotient_dim - F.quotient_dim;
  if (diff < 0 || diff % 2 != 0) {
    throw IntegrityError("ray class dimension difference " + std::to_string(diff) + " is not even and nonnegative");
  }
  if (!L.sigma) throw DomainError("k_L needs the order-3 action on the sextic");
  if (L.sigma->k != diff / 2 || L.sigma->m != F.quotient_dim) {
    throw IntegrityError("k_L from dimensions (" + std::to_string(diff / 2) + ") differs from the module decomposition (" +
                         std::to_string(L.sigma->k) + ")");
  }
  return diff / 2;
}

OctahedralData count_octahedral(long ell, const ClassGroupOptions& opt) {
  if (ell < 5 || ell % 4 != 1 || !is_prime(static_cast<uint64_t>(ell))) throw DomainError("need a prime = 1 mod 4");
  OctahedralData out;
  out.ell = ell;
  out.quadratic_class_group = form_class_group(ell);
  out.h_ell = three_rank(out.quadratic_class_group);
  NumberField F = quadratic_field(ell);
  auto cgF = class_group_with_ell(F, ell, opt);
  out.conditional = cgF.conditional;
  out.h_ell_engine = three_rank(cgF.group);
  if (cgF.group.order() != out.quadratic_class_group.order() || out.h_ell_engine != out.h_ell) {
    throw IntegrityError("quadratic class group from forms and from relations disagree");
  }
  auto fields = cubic_fields_of_discriminant(ell);
  out.card_L = static_cast<int>(fields.size());
  long expect = 1;
  for (int i = 0; i < out.h_ell; ++i) expect *= 3;
  if (out.card_L != (expect - 1) / 2) throw IntegrityError("number of cubic fields of discriminant ell is not (3^h - 1)/2");
  auto rayF = ray_class_2_elementary(cgF, ell);
  out.quotient_dim_F = rayF.quotient_dim;
  if (out.card_L == 0) return out;
  for (auto& C : fields) {
    OctahedralCubic oc;
    oc.cubic = C.poly();
    NumberField L = galois_closure_sextic(C);
    oc.sextic = L.poly();
    auto cgL = class_group_with_ell(L, ell, opt);
    out.conditional = out.conditional || cgL.conditional;
    oc.sextic_class_group = cgL.group;
    auto ray = ray_class_2_elementary(cgL, ell);
    oc.quotient_dim = ray.quotient_dim;
    oc.k = k_L(ray, rayF);
    if (!ray.tau) throw IntegrityError("sextic Galois closure has no involution");
    // S3-stable U_2 quotients: planes of functionals stable under sigma and tau.
    const int d = ray.quotient_dim;
    auto sigT = transpose(ray.sigma->sigma, d);
    auto tauT = transpose(*ray.tau, d);
    GaloisF2Module dual = make_module(d, sigT);
    for (auto& [phi, sphi] : u2_submodules(dual)) {
      F2Vec tp = apply_cols(tauT, phi);
      F2Vec both = phi;
      both ^= sphi;
      if (!(tp == phi || tp == sphi || tp == both)) continue;
      bool ramified = false;
      for (auto& in : ray.inertia) ramified = ramified || dot(phi, in) || dot(sphi, in);
      OctahedralForm form;
      RamificationProfile prof;
      if (ramified) {
        // cyclic tame inertia of order 4; the exponent does not depend on f
        form.e = 4;
        prof.p = static_cast<uint64_t>(ell);
        prof.e = 4;
        prof.type = ProjectiveType::S4;
      } else {
        // inertia is the transposition over the ramified quadratic subfield
        form.e = 2;
        form.f = (dot(phi, ray.frobenius_first_prime) || dot(sphi, ray.frobenius_first_prime)) ? 2 : 1;
        prof = ramification_profile_from_splitting(ProjectiveType::S4, static_cast<uint64_t>(ell), 2, form.f,
                                                   12 / form.f, 1);
      }
      form.conductor_exponent = projective_conductor_exponent(prof);
      oc.forms.push_back(form);
    }
    if (static_cast<long>(oc.forms.size()) != (1L << oc.k) - 1) {
      throw IntegrityError("S3-stable U_2 quotients number " + std::to_string(oc.forms.size()) + ", expected 2^k - 1");
    }
    out.n_forms += static_cast<long>(oc.forms.size());
    out.cubics.push_back(std::move(oc));
  }
  return out;
}

}  // namespace maass
