#pragma once

#include <cstdint>
#include <vector>

#include "maass/arith.hpp"

namespace maass {

// Dense row-major integer matrix.
struct IntMat {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Int(0)) {}
  static IntMat identity(int n);
  Int& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Int& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
  std::vector<Int> row(int i) const;
  std::vector<Int> col(int j) const;
  IntMat transpose() const;
  bool operator==(const IntMat&) const = default;
};

IntMat operator*(const IntMat& x, const IntMat& y);
std::vector<Int> mat_vec(const IntMat& m, const std::vector<Int>& v);
Int determinant(const IntMat& m);

// Hermite normal form of the lattice spanned by the columns of `gens`
// (n rows, any number of columns, full rank n). Result is n x n upper
// triangular with positive diagonal and 0 <= H(i,j) < H(i,i) for j > i.
// If `modulus` is nonzero the lattice must contain modulus * Z^n.
IntMat hnf_columns(const IntMat& gens, const Int& modulus = 0);

// Smith normal form: U * A * V = diag(d_0, d_1, ...) with d_i | d_{i+1},
// U and V unimodular. Returns the diagonal (length min(rows, cols)).
std::vector<Int> smith_normal_form(const IntMat& A, IntMat* U = nullptr, IntMat* V = nullptr);

// Rational solve of M x = b for square nonsingular M.
std::vector<Rat> solve_rational(const IntMat& M, const std::vector<Rat>& b);
bool invert_rational(const IntMat& M, std::vector<std::vector<Rat>>* inv);

// Matrices over F_p, entries in [0, p).
struct FpMat {
  uint64_t p = 2;
  int rows = 0, cols = 0;
  std::vector<uint64_t> a;
  FpMat() = default;
  FpMat(uint64_t p_, int r, int c) : p(p_), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  uint64_t& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  uint64_t operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> fp_rref(FpMat& m);
int fp_rank(FpMat m);
// Basis of {x : m x = 0}.
std::vector<std::vector<uint64_t>> fp_kernel(const FpMat& m);

// Bit-packed F_2 vectors and row spaces.
class F2Vec {
 public:
  F2Vec() = default;
  explicit F2Vec(int n) : n_(n), w_((n + 63) / 64, 0) {}
  int size() const { return n_; }
  bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(int i, bool v) {
    if (v) {
      w_[i >> 6] |= (1ULL << (i & 63));
    } else {
      w_[i >> 6] &= ~(1ULL << (i & 63));
    }
  }
  void flip(int i) { w_[i >> 6] ^= (1ULL << (i & 63)); }
  F2Vec& operator^=(const F2Vec& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  bool is_zero() const {
    for (auto x : w_) {
      if (x) return false;
    }
    return true;
  }
  int first_set() const;
  bool operator==(const F2Vec& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator<(const F2Vec& o) const { return w_ < o.w_; }

 private:
  int n_ = 0;
  std::vector<uint64_t> w_;
};

// Incrementally maintained echelon basis of a subspace of F_2^n.
class F2Span {
 public:
  explicit F2Span(int n) : n_(n) {}
  bool add(F2Vec v);  // true if v was independent
  F2Vec reduce(F2Vec v) const;
  bool contains(const F2Vec& v) const { return reduce(v).is_zero(); }
  int rank() const { return static_cast<int>(basis_.size()); }
  int dim() const { return n_; }
  const std::vector<F2Vec>& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return piv_; }
  // Coordinates of v in the current basis; false if v is not in the span.
  bool coordinates(F2Vec v, std::vector<int>* coeffs) const;

 private:
  int n_;
  std::vector<F2Vec> basis_;
  std::vector<int> piv_;
};

int f2_rank(const std::vector<F2Vec>& rows);

// LLL reduction (delta = 0.99) of the row vectors b (any real dimension).
// Returns the unimodular integer transform T with reduced = T * b.
std::vector<std::vector<long long>> lll_reduce(std::vector<std::vector<long double>>& b);

}  // namespace maass
