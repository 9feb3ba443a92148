#include "maass/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace maass {

namespace {

using LC = std::complex<long double>;

std::vector<LC> aberth(const IntPoly& f) {
  const int n = f.degree();
  std::vector<long double> c(n + 1);
  for (int i = 0; i <= n; ++i) c[i] = static_cast<long double>(f[i].get_d());
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::fabs(c[i] / c[n]));
  bound = 1 + bound;
  std::vector<LC> z(n);
  for (int k = 0; k < n; ++k) {
    long double ang = 2 * M_PIl * k / n + 0.4L;
    z[k] = std::polar(bound * 0.7L, ang);
  }
  auto eval = [&](LC x, LC* d) {
    LC p = c[n], dp = 0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * x + p;
      p = p * x + c[i];
    }
    *d = dp;
    return p;
  };
  for (int it = 0; it < 2000; ++it) {
    long double maxstep = 0;
    for (int k = 0; k < n; ++k) {
      LC d;
      LC p = eval(z[k], &d);
      if (std::abs(p) == 0) continue;
      LC ratio = p / d;
      LC s = 0;
      for (int j = 0; j < n; ++j) {
        if (j != k) s += 1.0L / (z[k] - z[j]);
      }
      LC w = ratio / (1.0L - ratio * s);
      z[k] -= w;
      maxstep = std::max(maxstep, std::abs(w) / (1 + std::abs(z[k])));
    }
    if (maxstep < 1e-17L) break;
  }
  return z;
}

}  // namespace

std::vector<std::complex<long double>> RootSet::approx() const {
  std::vector<std::complex<long double>> v;
  for (auto& x : z) {
    v.emplace_back(static_cast<long double>(x.real()), static_cast<long double>(x.imag()));
  }
  return v;
}

Int round_to_int(const BigReal& x) {
  std::string s = round(x).str(0, std::ios_base::fixed);
  auto dot = s.find('.');
  if (dot != std::string::npos) s.resize(dot);
  if (s == "-0" || s.empty() || s == "-") s = "0";
  return Int(s);
}

RootSet polynomial_roots(const IntPoly& f) {
  const int n = f.degree();
  if (n < 1) throw DomainError("roots of a constant polynomial");
  std::vector<LC> z0 = aberth(f);
  std::vector<BigComplex> z;
  std::vector<BigReal> coef(n + 1);
  for (int i = 0; i <= n; ++i) coef[i] = BigReal(f[i].get_str());
  for (auto& r : z0) {
    BigComplex x(BigReal(r.real()), BigReal(r.imag()));
    for (int it = 0; it < 12; ++it) {
      BigComplex p(coef[n]), dp(0);
      for (int i = n - 1; i >= 0; --i) {
        dp = dp * x + p;
        p = p * x + coef[i];
      }
      BigComplex step = p / dp;
      x -= step;
      if (abs(step) < BigReal("1e-95") * (1 + abs(x))) break;
    }
    z.push_back(x);
  }
  RootSet rs;
  std::vector<BigComplex> real, cplx;
  const BigReal tiny("1e-60");
  for (auto& x : z) {
    if (abs(x.imag()) < tiny * (1 + abs(x))) {
      real.emplace_back(x.real(), BigReal(0));
    } else if (x.imag() > 0) {
      cplx.push_back(x);
    }
  }
  std::sort(real.begin(), real.end(), [](auto& a, auto& b) { return a.real() < b.real(); });
  std::sort(cplx.begin(), cplx.end(), [](auto& a, auto& b) { return a.real() < b.real(); });
  rs.r1 = static_cast<int>(real.size());
  rs.z = real;
  for (auto& x : cplx) {
    rs.z.push_back(x);
    rs.z.push_back(conj(x));
  }
  if (static_cast<int>(rs.z.size()) != n) throw IntegrityError("root finder lost track of conjugate pairs");
  if (rs.r1 != count_real_roots(f)) throw IntegrityError("numerical real root count disagrees with Sturm");
  return rs;
}

RatPoly compose_mod(const RatPoly& h1, const RatPoly& h2, const IntPoly& f) {
  RatPoly F = to_rat(f);
  RatPoly r;
  for (size_t i = h1.size(); i-- > 0;) {
    r = rat_mod(rat_mul(r, h2), F);
    if (r.empty()) r.push_back(0);
    r[0] += h1[i];
    trim(r);
  }
  return r;
}

std::vector<RatPoly> roots_in_field(const IntPoly& f, const RootSet& fr, const Int& den, const IntPoly& g,
                                    bool injective) {
  const int n = f.degree();
  RootSet gr = polynomial_roots(g);
  const int m = g.degree();
  // Inverse Vandermonde V(i, j) = theta_i^j via Gauss-Jordan.
  std::vector<std::vector<BigComplex>> a(n, std::vector<BigComplex>(2 * n));
  for (int i = 0; i < n; ++i) {
    BigComplex p(1);
    for (int j = 0; j < n; ++j) {
      a[i][j] = p;
      p *= fr.z[i];
    }
    a[i][n + i] = BigComplex(1);
  }
  for (int c = 0; c < n; ++c) {
    int best = c;
    for (int r = c + 1; r < n; ++r) {
      if (abs(a[r][c]) > abs(a[best][c])) best = r;
    }
    std::swap(a[c], a[best]);
    BigComplex d = a[c][c];
    for (int j = 0; j < 2 * n; ++j) a[c][j] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      BigComplex q = a[r][c];
      for (int j = 0; j < 2 * n; ++j) a[r][j] -= q * a[c][j];
    }
  }
  std::vector<std::vector<BigComplex>> vinv(n, std::vector<BigComplex>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) vinv[i][j] = a[i][n + j];
  }
  const BigReal D(den.get_str());
  const BigReal tol("1e-30");
  // Index of the conjugate root of g.
  std::vector<int> gconj(m);
  for (int i = 0; i < m; ++i) gconj[i] = i < gr.r1 ? i : ((i - gr.r1) % 2 == 0 ? i + 1 : i - 1);

  std::vector<RatPoly> found;
  std::vector<int> pi(n, -1);
  std::vector<bool> used(m, false);
  const RatPoly G = to_rat(g);
  auto check = [&]() {
    std::vector<Int> num(n);
    for (int k = 0; k < n; ++k) {
      BigComplex s(0);
      for (int i = 0; i < n; ++i) s += vinv[k][i] * gr.z[pi[i]];
      if (abs(s.imag()) * D > tol * (1 + abs(s.real()) * D)) return;
      BigReal v = s.real() * D;
      BigReal r = round(v);
      if (abs(v - r) > tol * (1 + abs(v))) return;
      num[k] = round_to_int(r);
    }
    RatPoly h(n);
    for (int k = 0; k < n; ++k) h[k] = Rat(num[k], den);
    for (auto& x : h) x.canonicalize();
    trim(h);
    if (compose_mod(G, h, f).empty()) found.push_back(h);
  };
  // Real embeddings take real roots; conjugate embeddings take conjugate roots.
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      check();
      return;
    }
    const bool real = i < fr.r1;
    if (!real && (i - fr.r1) % 2 == 1) {
      pi[i] = gconj[pi[i - 1]];
      rec(i + 1);
      return;
    }
    for (int t = 0; t < m; ++t) {
      if (real && t >= gr.r1) continue;
      if (injective && used[t]) continue;
      if (injective && !real && (used[gconj[t]] || gconj[t] == t)) continue;
      pi[i] = t;
      used[t] = true;
      if (!real) used[gconj[t]] = true;
      rec(i + 1);
      used[t] = false;
      if (!real) used[gconj[t]] = false;
    }
  };
  rec(0);
  std::sort(found.begin(), found.end(), [](const RatPoly& x, const RatPoly& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    for (size_t i = x.size(); i-- > 0;) {
      if (x[i] != y[i]) return x[i] < y[i];
    }
    return false;
  });
  return found;
}

}  // namespace maass
