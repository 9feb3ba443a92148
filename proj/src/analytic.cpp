#include "maass/analytic.hpp"

#include <cmath>
#include <numeric>

#include "maass/ideals.hpp"
#include "maass/poly_fp.hpp"

namespace maass {

namespace {

using LC = std::complex<long double>;

}  // namespace

LC dirichlet_L1_even(long f, const std::vector<LC>& chi) {
  // L(1, chi) = -(tau(chi)/f) sum_a conj(chi(a)) log|1 - zeta_f^a|
  LC tau = 0;
  LC s = 0;
  for (long a = 1; a < f; ++a) {
    if (std::abs(chi[a]) == 0) continue;
    long double ang = 2 * M_PIl * static_cast<long double>(a) / static_cast<long double>(f);
    tau += chi[a] * LC(std::cos(ang), std::sin(ang));
    s += std::conj(chi[a]) * std::log(2 * std::fabs(std::sin(M_PIl * static_cast<long double>(a) / static_cast<long double>(f))));
  }
  return -(tau / static_cast<long double>(f)) * s;
}

long double euler_residue(const NumberField& K, uint32_t bound) {
  long double logres = 0;
  const Int& pd = K.poly_disc();
  for (uint32_t p : primes_up_to(bound)) {
    long double lp = std::log1p(-1.0L / p);
    logres += lp;
    std::vector<std::pair<int, int>> ef;  // (f, count)
    if (!mpz_divisible_ui_p(pd.get_mpz_t(), p)) {
      for (int d : factor_degrees_mod_p(K.poly(), p)) ef.emplace_back(d, 1);
    } else {
      for (auto& P : prime_decomposition(K, Int(static_cast<unsigned long>(p)))) ef.emplace_back(P.f, 1);
    }
    for (auto [f, c] : ef) logres -= c * std::log1p(-std::pow(static_cast<long double>(p), -f));
  }
  return std::exp(logres);
}

AnalyticHR analytic_hR(const NumberField& K, uint32_t euler_bound) {
  if (!K.totally_real()) throw UnsupportedError("analytic h R is implemented for totally real fields");
  const int n = K.degree();
  AnalyticHR out;
  const long double sqrtD = std::sqrt(static_cast<long double>(K.disc().get_d()));
  if (!K.abelian()) {
    out.value = euler_residue(K, euler_bound) * sqrtD / std::pow(2.0L, n - 1);
    out.euler_bound = euler_bound;
    return out;
  }
  const AbelianData& ab = *K.abelian();
  const long N = ab.conductor;
  // Coset of each unit residue in the cyclic quotient (Z/N)^* / H.
  long g = -1;
  std::vector<int> k(N, -1);
  for (long cand = 2; cand < N && g < 0; ++cand) {
    if (std::gcd(cand, N) != 1) continue;
    // order of cand modulo H
    long x = cand;
    int ord = 1;
    while (!ab.in_kernel[x]) {
      x = static_cast<long>(static_cast<__int128>(x) * cand % N);
      ++ord;
    }
    if (ord == n) g = cand;
  }
  if (g < 0) throw UnsupportedError("abelian field with non-cyclic Galois group");
  {
    long gp = 1;
    for (int j = 0; j < n; ++j) {
      for (long h = 1; h < N; ++h) {
        if (std::gcd(h, N) != 1 || !ab.in_kernel[h]) continue;
        k[static_cast<long>(static_cast<__int128>(gp) * h % N)] = j;
      }
      gp = static_cast<long>(static_cast<__int128>(gp) * g % N);
    }
  }
  long double res = 1;
  LC prod = 1;
  for (int j = 1; j < n; ++j) {
    auto chi_val = [&](long a) -> LC {
      long double ang = 2 * M_PIl * static_cast<long double>((static_cast<long>(j) * k[a]) % n) / n;
      return LC(std::cos(ang), std::sin(ang));
    };
    // conductor: least f | N with chi trivial on units = 1 mod f
    long fcond = N;
    for (long f = 1; f <= N; ++f) {
      if (N % f != 0) continue;
      bool triv = true;
      for (long a = 1 + f; a < N && triv; a += f) {
        if (std::gcd(a, N) != 1) continue;
        triv = (static_cast<long>(j) * k[a]) % n == 0;
      }
      if (triv) {
        fcond = f;
        break;
      }
    }
    std::vector<LC> chi(fcond, LC(0));
    for (long b = 1; b < fcond; ++b) {
      if (std::gcd(b, fcond) != 1) continue;
      long a = b;
      while (std::gcd(a, N) != 1) a += fcond;
      chi[b] = chi_val(a);
    }
    prod *= dirichlet_L1_even(fcond, chi);
  }
  res = std::abs(prod);
  out.value = res * sqrtD / std::pow(2.0L, n - 1);
  out.exact = true;
  return out;
}

}  // namespace maass
