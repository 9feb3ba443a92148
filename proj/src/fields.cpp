#include "maass/fields.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "maass/errors.hpp"

namespace maass {

namespace {

long isqrt_exact(long v) {
  if (v < 0) return -1;
  long r = static_cast<long>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Discrete logs mod 3 for (Z/q)^*, q prime or 9, from a generator.
std::vector<int> dlog_mod3(long q) {
  long order = q == 9 ? 6 : q - 1;
  long g = 2;
  for (;; ++g) {
    if (std::gcd(g, q) != 1) continue;
    long x = 1;
    long k = 0;
    do {
      x = x * g % q;
      ++k;
    } while (x != 1);
    if (k == order) break;
  }
  std::vector<int> dl(q, -1);
  long x = 1;
  for (long k = 0; k < order; ++k) {
    dl[x] = static_cast<int>(k % 3);
    x = x * g % q;
  }
  return dl;
}

// Components of a cyclic cubic conductor: 9 and/or primes = 1 mod 3.
bool conductor_components(long n, std::vector<long>* comps) {
  if (n < 7) return false;
  comps->clear();
  long m = n;
  if (m % 3 == 0) {
    if (m % 9 != 0 || m % 27 == 0) return false;
    comps->push_back(9);
    m /= 9;
  }
  for (auto [p, e] : factor_u64(static_cast<uint64_t>(m))) {
    if (e != 1 || p % 3 != 1) return false;
    comps->push_back(static_cast<long>(p));
  }
  return !comps->empty();
}

}  // namespace

std::optional<ShanksWitness> shanks_check(long ell) {
  long disc = 4 * ell - 27;
  if (disc < 0) return std::nullopt;
  long s = isqrt_exact(disc);
  if (s * s != disc || (s - 3) % 2 != 0) return std::nullopt;
  long a = (s - 3) / 2;
  if (a < -1 || a * a + 3 * a + 9 != ell) return std::nullopt;
  return ShanksWitness{a, ell};
}

IntPoly shanks_polynomial(long a) {
  if (a < -1) throw DomainError("Shanks parameter must be >= -1");
  long ell = a * a + 3 * a + 9;
  if (!is_prime(static_cast<uint64_t>(ell))) throw DomainError("a^2 + 3a + 9 = " + std::to_string(ell) + " is not prime");
  return IntPoly::from_i64({-1, -(a + 3), -a, 1});
}

bool is_cyclic_cubic_conductor(long n) {
  std::vector<long> comps;
  return conductor_components(n, &comps);
}

IntPoly canonical_cubic(const IntPoly& f) {
  if (f.degree() != 3 || !f.is_monic()) throw DomainError("canonical_cubic needs a monic cubic");
  auto shift = [](const IntPoly& g, const Int& t) { return g.compose_linear(1, t); };
  auto negate = [](const IntPoly& g) {
    IntPoly h = g.compose_linear(-1, 0);
    return -h;
  };
  Int a = f[2];
  Int r = a % 3;
  if (r < 0) r += 3;
  std::vector<IntPoly> cands;
  if (r == 0) {
    IntPoly g = shift(f, -(a / 3));
    cands = {g, negate(g)};
  } else if (r == 1) {
    Int t = (a - 1) / 3;
    cands = {shift(f, -t)};
  } else {
    Int t = (a + 1) / 3;
    cands = {negate(shift(f, -t))};
  }
  auto key = [](const IntPoly& g) { return std::vector<Int>{g.coeff(2), g.coeff(1), g.coeff(0)}; };
  return *std::min_element(cands.begin(), cands.end(), [&](auto& x, auto& y) { return key(x) < key(y); });
}

IntPoly period_polynomial(long n, const std::vector<bool>& in_kernel) {
  if (static_cast<long>(in_kernel.size()) != n) throw DomainError("kernel table has the wrong size");
  std::vector<int> coset(n, -1);
  std::vector<long> H;
  for (long t = 1; t < n; ++t) {
    if (std::gcd(t, n) == 1 && in_kernel[t]) H.push_back(t);
  }
  if (H.empty() || !in_kernel[n - 1]) throw DomainError("subgroup must contain -1");
  std::vector<long> reps;
  for (long t = 1; t < n; ++t) {
    if (std::gcd(t, n) != 1 || coset[t] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(t);
    for (long h : H) {
      long u = static_cast<long>((static_cast<__int128>(t) * h) % n);
      if (coset[u] >= 0 && coset[u] != id) throw DomainError("kernel table is not a subgroup");
      coset[u] = id;
    }
  }
  const int k = static_cast<int>(reps.size());
  std::vector<long double> eta(k, 0.0L);
  for (long t = 1; t < n; ++t) {
    if (coset[t] < 0) continue;
    eta[coset[t]] += std::cos(2.0L * M_PIl * static_cast<long double>(t) / static_cast<long double>(n));
  }
  std::vector<long double> c{1.0L};
  for (int j = 0; j < k; ++j) {
    std::vector<long double> nc(c.size() + 1, 0.0L);
    for (size_t i = 0; i < c.size(); ++i) {
      nc[i + 1] += c[i];
      nc[i] -= c[i] * eta[j];
    }
    c = nc;
  }
  std::vector<Int> coef;
  for (auto v : c) {
    long double r = std::round(v);
    if (std::fabs(v - r) > 1e-3L) throw IntegrityError("period polynomial coefficients are not near integers");
    coef.push_back(to_int(static_cast<long long>(r)));
  }
  return IntPoly(coef);
}

std::vector<NumberField> cyclic_cubic_fields(long n) {
  std::vector<long> comps;
  if (!conductor_components(n, &comps)) {
    throw DomainError(std::to_string(n) + " is not the conductor of a cyclic cubic field");
  }
  std::vector<std::vector<int>> dl;
  for (long q : comps) dl.push_back(dlog_mod3(q));
  const int k = static_cast<int>(comps.size());
  std::vector<std::pair<IntPoly, AbelianData>> found;
  for (int mask = 0; mask < (1 << (k - 1)); ++mask) {
    std::vector<int> eps(k, 1);
    for (int i = 1; i < k; ++i) eps[i] = (mask >> (i - 1)) & 1 ? 2 : 1;
    AbelianData ab;
    ab.conductor = n;
    ab.in_kernel.assign(n, false);
    for (long a = 1; a < n; ++a) {
      if (std::gcd(a, n) != 1) continue;
      int s = 0;
      for (int i = 0; i < k; ++i) s += eps[i] * dl[i][a % comps[i]];
      ab.in_kernel[a] = s % 3 == 0;
    }
    found.emplace_back(canonical_cubic(period_polynomial(n, ab.in_kernel)), ab);
  }
  std::sort(found.begin(), found.end(), [](auto& x, auto& y) {
    return std::vector<Int>{x.first[2], x.first[1], x.first[0]} < std::vector<Int>{y.first[2], y.first[1], y.first[0]};
  });
  std::vector<NumberField> out;
  for (size_t i = 0; i < found.size(); ++i) {
    FieldOptions opt;
    opt.abelian = found[i].second;
    opt.label = "cyclic cubic, conductor " + std::to_string(n) + (found.size() > 1 ? " #" + std::to_string(i + 1) : "");
    NumberField K = NumberField::create(found[i].first, opt);
    if (K.disc() != Int(n) * Int(n)) throw IntegrityError("period field discriminant is not the conductor squared");
    if (K.r1() != 3) throw IntegrityError("period field is not totally real");
    out.push_back(K);
  }
  return out;
}

NumberField cubic_subfield_of_cyclotomic(long ell) {
  if (ell < 7 || ell % 3 != 1 || !is_prime(static_cast<uint64_t>(ell))) {
    throw DomainError("cubic subfield of Q(zeta_l) needs a prime l = 1 mod 3");
  }
  std::vector<int> dl = dlog_mod3(ell);
  AbelianData ab;
  ab.conductor = ell;
  ab.in_kernel.assign(ell, false);
  for (long a = 1; a < ell; ++a) ab.in_kernel[a] = dl[a] == 0;
  IntPoly f = period_polynomial(ell, ab.in_kernel);
  if (f[2] != 1) throw IntegrityError("period sum is not -1");
  FieldOptions opt;
  opt.abelian = ab;
  opt.label = "cubic subfield of Q(zeta_" + std::to_string(ell) + ")";
  NumberField K = NumberField::create(f, opt);
  if (K.disc() != Int(ell) * Int(ell)) throw IntegrityError("period field discriminant is not l^2");
  if (K.r1() != 3) throw IntegrityError("period field is not totally real");
  return K;
}

std::pair<NumberField, NumberField> diagonal_cubic_fields(long ell1, long ell2) {
  for (long l : {ell1, ell2}) {
    if (l < 7 || l % 3 != 1 || !is_prime(static_cast<uint64_t>(l))) {
      throw DomainError("diagonal fields need primes = 1 mod 3");
    }
  }
  if (ell1 == ell2) throw DomainError("diagonal fields need distinct primes");
  auto v = cyclic_cubic_fields(ell1 * ell2);
  if (v.size() != 2) throw IntegrityError("expected two cyclic cubic fields of conductor l1*l2");
  return {v[0], v[1]};
}

NumberField quadratic_field(long D) {
  long r = ((D % 4) + 4) % 4;
  if (D == 0 || D == 1 || (r != 0 && r != 1)) throw DomainError("not a discriminant");
  Int Dz = to_int(D);
  if (is_square(Dz)) throw DomainError("square discriminant");
  IntPoly f = r == 1 ? IntPoly::from_i64({-(D - 1) / 4, -1, 1}) : IntPoly::from_i64({-D / 4, 0, 1});
  AbelianData ab;
  long n = std::labs(D);
  ab.conductor = n;
  ab.in_kernel.assign(n, false);
  for (long a = 1; a < n; ++a) {
    if (std::gcd(a, n) == 1) ab.in_kernel[a] = kronecker(D, a) == 1;
  }
  FieldOptions opt;
  opt.abelian = ab;
  opt.label = "Q(sqrt(" + std::to_string(D) + "))";
  NumberField K = NumberField::create(f, opt);
  if (K.disc() != Dz) throw DomainError(std::to_string(D) + " is not a fundamental discriminant");
  return K;
}

std::vector<NumberField> cubic_fields_of_discriminant(long D) {
  if (D <= 0) throw UnsupportedError("cubic field enumeration is implemented for positive discriminants");
  if (is_square(to_int(D))) return {};
  std::vector<NumberField> out;
  const long amax = static_cast<long>(std::floor(std::pow(16.0L * D / 27.0L, 0.25L))) + 1;
  const long pmax = isqrt_exact(D);
  auto disc_of = [](const Int& a, const Int& b, const Int& c, const Int& d) -> Int {
    return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
  };
  const Int Dz = to_int(D);
  for (long a = 1; a <= amax; ++a) {
    for (long b = -(3 * a) / 2; b <= (3 * a) / 2; ++b) {
      for (long P = 1; P <= pmax; ++P) {
        long num_c = b * b - P;
        if (num_c % (3 * a) != 0) continue;
        Int A = to_int(a), B = to_int(b), C = to_int(num_c / (3 * a));
        Int S = 4 * Int(P) * P * P - 27 * A * A * Dz;
        Int s;
        if (S < 0 || !is_square(S, &s)) continue;
        for (int sg : {1, -1}) {
          if (sg == -1 && s == 0) break;
          Int num = -2 * B * B * B + 9 * A * B * C + sg * s;
          Int den = 27 * A * A;
          if (num % den != 0) continue;
          Int Dd = num / den;
          if (disc_of(A, B, C, Dd) != Dz) continue;
          // Translate x -> x + k y to reduce the Hessian P x^2 + Q xy + R y^2.
          Int Q = B * C - 9 * A * Dd;
          Int k = -Q / (2 * P);
          Int best_k = k;
          Int best_abs = -1;
          for (Int kk = k - 1; kk <= k + 1; ++kk) {
            Int q2 = Q + 2 * kk * P;
            Int aq = abs(q2);
            if (best_abs < 0 || aq < best_abs) {
              best_abs = aq;
              best_k = kk;
            }
          }
          Int b2 = B + 3 * A * best_k;
          Int c2 = C + 2 * B * best_k + 3 * A * best_k * best_k;
          Int d2 = Dd + C * best_k + B * best_k * best_k + A * best_k * best_k * best_k;
          Int R = c2 * c2 - 3 * b2 * d2;
          if (R < P) continue;
          IntPoly f(std::vector<Int>{d2, c2, b2, A});
          if (!is_irreducible(f)) continue;
          FieldOptions fo;
          fo.assume_irreducible = true;
          fo.label = "cubic field of discriminant " + std::to_string(D);
          NumberField K = NumberField::create(f, fo);
          if (K.disc() != Dz) continue;
          bool dup = false;
          for (auto& o : out) dup = dup || fields_isomorphic(o, K);
          if (!dup) out.push_back(K);
        }
      }
    }
  }
  return out;
}

// Characteristic polynomial of an integer matrix (Faddeev-LeVerrier).
IntPoly char_poly(const IntMat& M) {
  const int n = M.rows;
  std::vector<Int> c(n + 1);
  c[n] = 1;
  IntMat Mk = IntMat::identity(n);  // M_{k}
  IntMat AM(n, n);
  for (int k = 1; k <= n; ++k) {
    AM = M * Mk;
    Int tr = 0;
    for (int i = 0; i < n; ++i) tr += AM(i, i);
    if (tr % k != 0) throw IntegrityError("characteristic polynomial is not integral");
    c[n - k] = -tr / k;
    Mk = AM;
    for (int i = 0; i < n; ++i) Mk(i, i) += c[n - k];
  }
  return IntPoly(c);
}

NumberField polred(const NumberField& K) {
  const int n = K.degree();
  const auto& B = K.lll_basis();
  std::vector<std::pair<long double, Elt>> cands;
  for (int i = 0; i < n; ++i) {
    cands.emplace_back(K.t2(B[i]), B[i]);
    for (int j = i + 1; j < n; ++j) {
      for (int sgn : {1, -1}) {
        Elt x = sgn > 0 ? K.add(B[i], B[j]) : K.sub(B[i], B[j]);
        cands.emplace_back(K.t2(x), x);
      }
    }
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [t, x] : cands) {
    IntPoly g = char_poly(K.mult_matrix(x));
    if (!is_squarefree(g)) continue;
    Int pd = abs(poly_discriminant(g)), index;
    if (pd % abs(K.disc()) != 0 || !is_square(pd / abs(K.disc()), &index)) {
      throw IntegrityError("reduced polynomial has an inconsistent discriminant");
    }
    FieldOptions o;
    o.assume_irreducible = true;
    for (auto& [p, e] : factor_integer(index).factors) o.maximal_at.push_back(p);
    if (o.maximal_at.empty()) o.maximal_at.push_back(2);
    o.maximal_at_complete = true;
    o.label = K.label();
    NumberField R = NumberField::create(g, o);
    if (R.disc() != K.disc()) throw IntegrityError("reduced field has a different discriminant");
    return R;
  }
  return K;
}

NumberField galois_closure_sextic(const NumberField& cubic) {
  if (cubic.degree() != 3) throw DomainError("galois_closure_sextic needs a cubic field");
  const IntPoly& f = cubic.poly();
  const Int d = cubic.disc();
  if (is_square(abs(d)) && d > 0) throw DomainError("cubic field is Galois; its closure is itself");
  // gamma = theta + c sqrt(d): P(x) = A(x)^2 - c^2 d B(x)^2 with
  // f(x -+ y) = A -+ y B, y^2 = c^2 d.
  for (long c = 1; c < 50; ++c) {
    Int y2 = Int(c) * Int(c) * d;
    IntPoly fp = f.derivative();
    IntPoly f2 = fp.derivative();  // 6x + 2 a2
    IntPoly A = f + IntPoly(std::vector<Int>{y2 * f2.coeff(0) / 2, y2 * f2.coeff(1) / 2});
    IntPoly B = fp + IntPoly(std::vector<Int>{y2});
    IntPoly P = A * A - y2 * (B * B);
    if (!is_squarefree(P) || !is_irreducible(P)) continue;
    Int pd = poly_discriminant(P);
    Int rest = abs(pd);
    std::vector<Int> primes;
    for (auto& [p, e] : cubic.disc_factorization().factors) {
      primes.push_back(p);
      while (rest % p == 0) rest /= p;
    }
    bool complete = true;
    Int root;
    if (is_square(rest, &root)) {
      for (auto& [p, e] : factor_integer(root).factors) primes.push_back(p);
    } else {
      for (auto& [p, e] : factor_integer(rest).factors) {
        if (e >= 2) primes.push_back(p);
      }
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    FieldOptions opt;
    opt.assume_irreducible = true;
    opt.maximal_at = primes;
    opt.maximal_at_complete = complete;
    opt.label = "Galois closure of " + (cubic.label().empty() ? cubic.poly().to_string() : cubic.label());
    return polred(NumberField::create(P, opt));
  }
  throw IntegrityError("no primitive element found for the Galois closure");
}

const std::vector<IntMat>& galois_automorphisms(const NumberField& K) {
  const auto& auts = K.automorphisms();
  if (static_cast<int>(auts.size()) != K.degree()) throw DomainError("field is not Galois over Q");
  return auts;
}

int order_three_automorphism(const NumberField& K) {
  const auto& auts = K.automorphisms();
  const IntMat id = IntMat::identity(K.degree());
  for (size_t i = 1; i < auts.size(); ++i) {
    IntMat sq = auts[i] * auts[i];
    if (sq != id && sq * auts[i] == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace maass
