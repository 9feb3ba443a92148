#include "maass/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace maass {

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Int> IntMat::row(int i) const {
  return std::vector<Int>(a.begin() + static_cast<long>(i) * cols, a.begin() + static_cast<long>(i + 1) * cols);
}

std::vector<Int> IntMat::col(int j) const {
  std::vector<Int> v(rows);
  for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

IntMat IntMat::transpose() const {
  IntMat t(cols, rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

IntMat operator*(const IntMat& x, const IntMat& y) {
  if (x.cols != y.rows) throw DomainError("matrix shape mismatch");
  IntMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      const Int& v = x(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  }
  return r;
}

std::vector<Int> mat_vec(const IntMat& m, const std::vector<Int>& v) {
  std::vector<Int> r(m.rows, Int(0));
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
  }
  return r;
}

Int determinant(const IntMat& m0) {
  if (m0.rows != m0.cols) throw DomainError("determinant of a non-square matrix");
  const int n = m0.rows;
  if (n == 0) return 1;
  IntMat a = m0;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      int r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMat hnf_columns(const IntMat& gens, const Int& modulus) {
  const int n = gens.rows;
  std::vector<std::vector<Int>> cols;
  for (int j = 0; j < gens.cols; ++j) cols.push_back(gens.col(j));
  const bool mod = modulus != 0;
  auto reduce = [&](std::vector<Int>& c, int upto) {
    if (!mod) return;
    for (int i = 0; i <= upto; ++i) mpz_fdiv_r(c[i].get_mpz_t(), c[i].get_mpz_t(), modulus.get_mpz_t());
  };
  if (mod) {
    for (auto& c : cols) reduce(c, n - 1);
  }
  std::vector<std::vector<Int>> done(n);
  Int g, u, v, a, b, t;
  for (int i = n - 1; i >= 0; --i) {
    if (mod) {
      std::vector<Int> e(n, Int(0));
      e[i] = modulus;
      cols.push_back(std::move(e));
    }
    // Collapse row i onto a single column.
    int piv = -1;
    for (size_t j = 0; j < cols.size(); ++j) {
      if (cols[j][i] == 0) continue;
      if (piv < 0) {
        piv = static_cast<int>(j);
        continue;
      }
      auto& P = cols[piv];
      auto& Q = cols[j];
      mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), P[i].get_mpz_t(), Q[i].get_mpz_t());
      mpz_divexact(a.get_mpz_t(), P[i].get_mpz_t(), g.get_mpz_t());
      mpz_divexact(b.get_mpz_t(), Q[i].get_mpz_t(), g.get_mpz_t());
      for (int r = 0; r <= i; ++r) {
        t = u * P[r] + v * Q[r];
        Q[r] = a * Q[r] - b * P[r];
        P[r] = t;
      }
      reduce(P, i - 1);
      reduce(Q, i - 1);
    }
    if (piv < 0) throw DomainError("HNF input does not have full rank");
    std::vector<Int> pc = std::move(cols[piv]);
    cols.erase(cols.begin() + piv);
    if (pc[i] < 0) {
      for (int r = 0; r <= i; ++r) pc[r] = -pc[r];
    }
    if (mod && pc[i] == 0) pc[i] = modulus;
    // Drop zero columns.
    std::vector<std::vector<Int>> keep;
    for (auto& c : cols) {
      bool z = true;
      for (int r = 0; r < i && z; ++r) z = c[r] == 0;
      if (!z) keep.push_back(std::move(c));
    }
    cols = std::move(keep);
    done[i] = std::move(pc);
  }
  IntMat H(n, n);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r <= j; ++r) H(r, j) = done[j][r];
  }
  // Reduce above the diagonal, right to left within each row.
  Int q;
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) {
      mpz_fdiv_q(q.get_mpz_t(), H(i, j).get_mpz_t(), H(i, i).get_mpz_t());
      if (q == 0) continue;
      for (int r = 0; r <= i; ++r) H(r, j) -= q * H(r, i);
    }
  }
  return H;
}

std::vector<Int> smith_normal_form(const IntMat& A, IntMat* Uo, IntMat* Vo) {
  const int m = A.rows, n = A.cols;
  IntMat B = A;
  IntMat U = Uo ? IntMat::identity(m) : IntMat();
  IntMat V = Vo ? IntMat::identity(n) : IntMat();
  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    for (int c = 0; c < n; ++c) std::swap(B(i, c), B(j, c));
    if (Uo) {
      for (int c = 0; c < m; ++c) std::swap(U(i, c), U(j, c));
    }
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m; ++r) std::swap(B(r, i), B(r, j));
    if (Vo) {
      for (int r = 0; r < n; ++r) std::swap(V(r, i), V(r, j));
    }
  };
  auto row_addmul = [&](int dst, int src, const Int& q) {  // row_dst -= q row_src
    for (int c = 0; c < n; ++c) {
      if (B(src, c) != 0) B(dst, c) -= q * B(src, c);
    }
    if (Uo) {
      for (int c = 0; c < m; ++c) {
        if (U(src, c) != 0) U(dst, c) -= q * U(src, c);
      }
    }
  };
  auto col_addmul = [&](int dst, int src, const Int& q) {
    for (int r = 0; r < m; ++r) {
      if (B(r, src) != 0) B(r, dst) -= q * B(r, src);
    }
    if (Vo) {
      for (int r = 0; r < n; ++r) {
        if (V(r, src) != 0) V(r, dst) -= q * V(r, src);
      }
    }
  };
  const int k = std::min(m, n);
  Int q;
  for (int t = 0; t < k; ++t) {
    int bi = -1, bj = -1;
    for (int i = t; i < m; ++i) {
      for (int j = t; j < n; ++j) {
        if (B(i, j) == 0) continue;
        if (bi < 0 || mpz_cmpabs(B(i, j).get_mpz_t(), B(bi, bj).get_mpz_t()) < 0) {
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    swap_rows(t, bi);
    swap_cols(t, bj);
    while (true) {
      bool clean = true;
      for (int i = t + 1; i < m; ++i) {
        if (B(i, t) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), B(i, t).get_mpz_t(), B(t, t).get_mpz_t());
        row_addmul(i, t, q);
        if (B(i, t) != 0) {
          swap_rows(t, i);
          clean = false;
        }
      }
      for (int j = t + 1; j < n; ++j) {
        if (B(t, j) == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), B(t, j).get_mpz_t(), B(t, t).get_mpz_t());
        col_addmul(j, t, q);
        if (B(t, j) != 0) {
          swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      int bad = -1;
      for (int i = t + 1; i < m && bad < 0; ++i) {
        for (int j = t + 1; j < n; ++j) {
          if (!mpz_divisible_p(B(i, j).get_mpz_t(), B(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
        }
      }
      if (bad < 0) break;
      row_addmul(t, bad, Int(-1));
    }
    if (B(t, t) < 0) {
      for (int c = 0; c < n; ++c) B(t, c) = -B(t, c);
      if (Uo) {
        for (int c = 0; c < m; ++c) U(t, c) = -U(t, c);
      }
    }
  }
  std::vector<Int> d(k);
  for (int i = 0; i < k; ++i) d[i] = B(i, i);
  if (Uo) *Uo = std::move(U);
  if (Vo) *Vo = std::move(V);
  return d;
}

std::vector<Rat> solve_rational(const IntMat& M, const std::vector<Rat>& b) {
  const int n = M.rows;
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n + 1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = M(i, j);
    a[i][n] = b[i];
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw DomainError("singular system");
    std::swap(a[p], a[c]);
    for (int i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c] / a[c][c];
      for (int j = c; j <= n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  std::vector<Rat> x(n);
  for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}

bool invert_rational(const IntMat& M, std::vector<std::vector<Rat>>* inv) {
  const int n = M.rows;
  std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = M(i, j);
    a[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    Rat d = a[c][c];
    for (int j = 0; j < 2 * n; ++j) a[c][j] /= d;
    for (int i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (int j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  inv->assign(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) (*inv)[i][j] = a[i][n + j];
  }
  return true;
}

std::vector<int> fp_rref(FpMat& m) {
  const uint64_t p = m.p;
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int s = r;
    while (s < m.rows && m(s, c) == 0) ++s;
    if (s == m.rows) continue;
    if (s != r) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(s, j), m(r, j));
    }
    uint64_t inv = invmod(m(r, c), p);
    for (int j = 0; j < m.cols; ++j) m(r, j) = mulmod(m(r, j), inv, p);
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      uint64_t f = m(i, c);
      for (int j = 0; j < m.cols; ++j) {
        if (m(r, j)) m(i, j) = (m(i, j) + p - mulmod(f, m(r, j), p)) % p;
      }
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

int fp_rank(FpMat m) { return static_cast<int>(fp_rref(m).size()); }

std::vector<std::vector<uint64_t>> fp_kernel(const FpMat& m0) {
  FpMat m = m0;
  std::vector<int> piv = fp_rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<uint64_t>> ker;
  for (int f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<uint64_t> v(m.cols, 0);
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = (m.p - m(static_cast<int>(r), f)) % m.p;
    ker.push_back(std::move(v));
  }
  return ker;
}

int F2Vec::first_set() const {
  for (size_t k = 0; k < w_.size(); ++k) {
    if (w_[k]) return static_cast<int>(k * 64 + __builtin_ctzll(w_[k]));
  }
  return -1;
}

F2Vec F2Span::reduce(F2Vec v) const {
  for (size_t i = 0; i < basis_.size(); ++i) {
    if (v.get(piv_[i])) v ^= basis_[i];
  }
  return v;
}

bool F2Span::add(F2Vec v) {
  v = reduce(std::move(v));
  int p = v.first_set();
  if (p < 0) return false;
  // Keep the basis fully reduced so that reduce() is a single pass.
  for (auto& b : basis_) {
    if (b.get(p)) b ^= v;
  }
  basis_.push_back(std::move(v));
  piv_.push_back(p);
  return true;
}

bool F2Span::coordinates(F2Vec v, std::vector<int>* coeffs) const {
  coeffs->assign(basis_.size(), 0);
  for (size_t i = 0; i < basis_.size(); ++i) {
    if (v.get(piv_[i])) {
      v ^= basis_[i];
      (*coeffs)[i] = 1;
    }
  }
  return v.is_zero();
}

int f2_rank(const std::vector<F2Vec>& rows) {
  if (rows.empty()) return 0;
  F2Span s(rows[0].size());
  for (auto& r : rows) s.add(r);
  return s.rank();
}

std::vector<std::vector<long long>> lll_reduce(std::vector<std::vector<long double>>& b) {
  const int n = static_cast<int>(b.size());
  std::vector<std::vector<long long>> T(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) T[i][i] = 1;
  if (n == 0) return T;
  const int dim = static_cast<int>(b[0].size());
  auto dot = [&](const std::vector<long double>& x, const std::vector<long double>& y) {
    long double s = 0;
    for (int i = 0; i < dim; ++i) s += x[i] * y[i];
    return s;
  };
  std::vector<std::vector<long double>> mu(n, std::vector<long double>(n, 0));
  std::vector<long double> B(n);
  std::vector<std::vector<long double>> bs(n);
  auto gso = [&]() {
    for (int i = 0; i < n; ++i) {
      bs[i] = b[i];
      for (int j = 0; j < i; ++j) {
        mu[i][j] = B[j] > 0 ? dot(b[i], bs[j]) / B[j] : 0;
        for (int k = 0; k < dim; ++k) bs[i][k] -= mu[i][j] * bs[j][k];
      }
      B[i] = dot(bs[i], bs[i]);
    }
  };
  gso();
  int k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      long double r = std::round(mu[k][j]);
      if (r == 0) continue;
      long long q = static_cast<long long>(r);
      for (int t = 0; t < dim; ++t) b[k][t] -= r * b[j][t];
      for (int t = 0; t < n; ++t) T[k][t] -= q * T[j][t];
      for (int t = 0; t <= j; ++t) mu[k][t] -= r * (t == j ? 1 : mu[j][t]);
    }
    if (B[k] < (0.99L - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
      std::swap(b[k], b[k - 1]);
      std::swap(T[k], T[k - 1]);
      gso();
      k = std::max(k - 1, 1);
    } else {
      ++k;
    }
  }
  return T;
}

}  // namespace maass
