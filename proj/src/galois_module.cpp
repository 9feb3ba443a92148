#include "maass/galois_module.hpp"

#include <algorithm>
#include <set>

#include "maass/errors.hpp"

namespace maass {

F2Vec GaloisF2Module::apply(const F2Vec& v) const {
  F2Vec r(dim);
  for (int j = 0; j < dim; ++j) {
    if (v.get(j)) r ^= sigma[j];
  }
  return r;
}

GaloisF2Module make_module(int dim, const std::vector<F2Vec>& sigma) {
  if (static_cast<int>(sigma.size()) != dim) throw DomainError("sigma must have dim columns");
  GaloisF2Module M;
  M.dim = dim;
  M.sigma = sigma;
  std::vector<F2Vec> fix;
  for (int j = 0; j < dim; ++j) {
    if (sigma[j].size() != dim) throw DomainError("sigma column has the wrong length");
    F2Vec e(dim);
    e.set(j, true);
    F2Vec s3 = M.apply(M.apply(sigma[j]));
    if (!(s3 == e)) throw DomainError("sigma^3 is not the identity");
    F2Vec d = sigma[j];
    d ^= e;
    fix.push_back(d);
  }
  M.m = dim - f2_rank(fix);
  if ((dim - M.m) % 2 != 0) throw IntegrityError("odd non-trivial part in an order-3 module");
  M.k = (dim - M.m) / 2;
  return M;
}

std::pair<int, int> decompose(int dim, const std::vector<F2Vec>& sigma) {
  auto M = make_module(dim, sigma);
  return {M.k, M.m};
}

Int projective_count(const Int& q, int k) {
  if (k < 0) throw DomainError("negative dimension");
  if (q < 2) throw DomainError("q must be at least 2");
  Int qk;
  mpz_pow_ui(qk.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(k));
  return (qk - 1) / (q - 1);
}

std::vector<std::pair<F2Vec, F2Vec>> u2_submodules(const GaloisF2Module& M) {
  if (M.dim > 24) throw UnsupportedError("module too large for exhaustive submodule search");
  std::vector<std::pair<F2Vec, F2Vec>> out;
  std::set<std::vector<F2Vec>> seen;
  for (uint64_t bits = 1; bits < (1ULL << M.dim); ++bits) {
    F2Vec v(M.dim);
    for (int i = 0; i < M.dim; ++i) v.set(i, (bits >> i) & 1);
    F2Vec s = M.apply(v);
    F2Vec s2 = M.apply(s);
    F2Vec t = v;
    t ^= s;
    t ^= s2;
    if (!t.is_zero() || s == v) continue;
    F2Vec w = v;
    w ^= s;  // = sigma^2 v
    std::vector<F2Vec> key{v, s, w};
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second) out.emplace_back(v, s);
  }
  return out;
}

}  // namespace maass
