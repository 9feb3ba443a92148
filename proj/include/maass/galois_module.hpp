#pragma once

#include <utility>
#include <vector>

#include "maass/arith.hpp"
#include "maass/linalg.hpp"

namespace maass {

// F_2-vector space with an operator sigma of order dividing 3. sigma is
// stored by columns: sigma[j] is the image of the j-th basis vector.
struct GaloisF2Module {
  int dim = 0;
  std::vector<F2Vec> sigma;
  int k = 0;  // multiplicity of U_2
  int m = 0;  // multiplicity of the trivial module

  F2Vec apply(const F2Vec& v) const;
};

// Checks sigma^3 = 1 and fills k, m (m = dim ker(sigma - 1)).
GaloisF2Module make_module(int dim, const std::vector<F2Vec>& sigma);
std::pair<int, int> decompose(int dim, const std::vector<F2Vec>& sigma);

// (q^k - 1)/(q - 1).
Int projective_count(const Int& q, int k);

// The sigma-stable planes on which sigma has no fixed vector, each returned
// as (v, sigma v). There are (4^k - 1)/3 of them.
std::vector<std::pair<F2Vec, F2Vec>> u2_submodules(const GaloisF2Module& M);

}  // namespace maass
