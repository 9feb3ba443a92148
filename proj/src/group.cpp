#include "maass/group.hpp"

#include <algorithm>

namespace maass {

Int AbelianGroup::order() const {
  Int o = 1;
  for (auto& d : divisors) o *= d;
  return o;
}

int AbelianGroup::p_rank(unsigned long p) const {
  int r = 0;
  for (auto& d : divisors) {
    if (d == 0 || mpz_divisible_ui_p(d.get_mpz_t(), p)) ++r;
  }
  return r;
}

std::string AbelianGroup::structure() const {
  if (divisors.empty()) return "trivial";
  std::string s = "(";
  for (size_t i = 0; i < divisors.size(); ++i) {
    if (i) s += ",";
    s += divisors[i] == 0 ? std::string("Z") : divisors[i].get_str();
  }
  return s + ")";
}

AbelianGroup AbelianGroup::from_relations(const IntMat& R) {
  // Columns are generators; the cokernel of R^T acting on Z^cols.
  std::vector<Int> d = smith_normal_form(R);
  AbelianGroup g;
  std::vector<Int> diag(R.cols, Int(0));
  for (size_t i = 0; i < d.size() && static_cast<int>(i) < R.cols; ++i) diag[i] = abs(d[i]);
  std::vector<Int> fin, inf;
  for (auto& x : diag) {
    if (x == 1) continue;
    if (x == 0) {
      inf.push_back(0);
    } else {
      fin.push_back(x);
    }
  }
  std::sort(fin.begin(), fin.end());
  g.divisors = fin;
  for (auto& z : inf) g.divisors.push_back(z);
  return g;
}

AbelianGroup AbelianGroup::from_relations_mod(const IntMat& R, const Int& modulus) {
  IntMat gens(R.cols, R.rows + R.cols);
  for (int i = 0; i < R.rows; ++i) {
    for (int j = 0; j < R.cols; ++j) {
      mpz_fdiv_r(gens(j, i).get_mpz_t(), R(i, j).get_mpz_t(), modulus.get_mpz_t());
    }
  }
  for (int j = 0; j < R.cols; ++j) gens(j, R.rows + j) = modulus;
  // Columns of H span the relation lattice; as rows they present the same group.
  return from_relations(hnf_columns(gens, modulus).transpose());
}

AbelianGroup AbelianGroup::from_cyclic_orders(const std::vector<Int>& orders) {
  IntMat R(static_cast<int>(orders.size()), static_cast<int>(orders.size()));
  for (size_t i = 0; i < orders.size(); ++i) R(static_cast<int>(i), static_cast<int>(i)) = orders[i];
  return from_relations(R);
}

int three_rank(const AbelianGroup& g) { return g.p_rank(3); }

}  // namespace maass
