#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxtorus/rational.hpp"

namespace coxtorus {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (const auto& row : rows) {
      if (row.size() != c_) throw MathError("ragged matrix literal");
      for (long v : row) a_.emplace_back(v);
    }
  }
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < m.r_; ++i) {
      if (rows[i].size() != m.c_) throw MathError("ragged matrix");
      for (std::size_t j = 0; j < m.c_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }
  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Integer& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  std::vector<long> row(std::size_t i) const {
    std::vector<long> v(c_);
    for (std::size_t j = 0; j < c_; ++j) v[j] = (*this)(i, j).get_si();
    return v;
  }

  IntMatrix transpose() const {
    IntMatrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.c_ != b.r_) throw MathError("matrix shape mismatch in product");
    IntMatrix p(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        if (sgn(a(i, k)) == 0) continue;
        for (std::size_t j = 0; j < b.c_; ++j) p(i, j) += a(i, k) * b(k, j);
      }
    return p;
  }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Integer& v) { return sgn(v) == 0; });
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }
  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < r_; ++i) std::swap((*this)(i, j), (*this)(i, k));
  }
  // row_i += q * row_k
  void add_row(std::size_t i, std::size_t k, const Integer& q) {
    for (std::size_t j = 0; j < c_; ++j) (*this)(i, j) += q * (*this)(k, j);
  }
  void add_col(std::size_t j, std::size_t k, const Integer& q) {
    for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) += q * (*this)(i, k);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < c_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < r_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < c_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Integer> a_;
};

struct SmithForm {
  IntMatrix U, D, V;  // U * A * V = D
  std::size_t rank = 0;
};

inline SmithForm smith_normal_form(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  SmithForm s{IntMatrix::identity(m), A, IntMatrix::identity(n), 0};
  IntMatrix& D = s.D;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (sgn(D(i, j)) != 0 && (!best || abs(D(i, j)) < abs(D(best->first, best->second))))
            best = {i, j};
      if (!best) return s;
      D.swap_rows(t, best->first);
      s.U.swap_rows(t, best->first);
      D.swap_cols(t, best->second);
      s.V.swap_cols(t, best->second);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(D(i, t)) == 0) continue;
        Integer q = floor_div(D(i, t), D(t, t));
        D.add_row(i, t, -q);
        s.U.add_row(i, t, -q);
        if (sgn(D(i, t)) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(D(t, j)) == 0) continue;
        Integer q = floor_div(D(t, j), D(t, t));
        D.add_col(j, t, -q);
        s.V.add_col(j, t, -q);
        if (sgn(D(t, j)) != 0) dirty = true;
      }
      if (dirty) continue;
      // divisibility: pull an offending row into row t
      bool fixed = true;
      for (std::size_t i = t + 1; i < m && fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(D(i, j) % D(t, t)) != 0) {
            D.add_row(t, i, 1);
            s.U.add_row(t, i, 1);
            fixed = false;
            break;
          }
      if (!fixed) continue;
      if (sgn(D(t, t)) < 0) {
        D.negate_row(t);
        s.U.negate_row(t);
      }
      ++s.rank;
      break;
    }
  }
  return s;
}

// Row-style Hermite normal form of the row lattice; zero rows dropped.
inline IntMatrix hermite_normal_form(const IntMatrix& A) {
  IntMatrix H = A;
  const std::size_t m = H.rows(), n = H.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (;;) {
      std::optional<std::size_t> piv;
      for (std::size_t i = r; i < m; ++i)
        if (sgn(H(i, c)) != 0 && (!piv || abs(H(i, c)) < abs(H(*piv, c)))) piv = i;
      if (!piv) break;
      H.swap_rows(r, *piv);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (sgn(H(i, c)) == 0) continue;
        H.add_row(i, r, -floor_div(H(i, c), H(r, c)));
        if (sgn(H(i, c)) != 0) done = false;
      }
      if (done) break;
    }
    if (r < m && sgn(H(r, c)) != 0) {
      if (sgn(H(r, c)) < 0) H.negate_row(r);
      for (std::size_t i = 0; i < r; ++i) H.add_row(i, r, -floor_div(H(i, c), H(r, c)));
      ++r;
    }
  }
  IntMatrix out(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = H(i, j);
  return out;
}

inline bool same_row_lattice(const IntMatrix& a, const IntMatrix& b) {
  return hermite_normal_form(a) == hermite_normal_form(b);
}

// Rows K with A * K^T = 0 spanning the integer kernel (saturated), in Hermite form.
inline IntMatrix kernel_basis(const IntMatrix& A) {
  SmithForm s = smith_normal_form(A);
  const std::size_t n = A.cols();
  IntMatrix K(n - s.rank, n);
  for (std::size_t k = s.rank; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) K(k - s.rank, j) = s.V(j, k);
  return hermite_normal_form(K);
}

inline Integer determinant(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw MathError("determinant of non-square matrix");
  SmithForm s = smith_normal_form(A);
  if (s.rank < A.rows()) return 0;
  // det(U) det(A) det(V) = prod d_i with det(U), det(V) = +-1
  auto unit_det = [](IntMatrix M) {
    // Bareiss on a unimodular matrix
    const std::size_t n = M.rows();
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      while (p < n && sgn(M(p, k)) == 0) ++p;
      if (p == n) return Integer(0);
      if (p != k) {
        M.swap_rows(p, k);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) M(i, j) = (M(k, k) * M(i, j) - M(i, k) * M(k, j)) / prev;
        M(i, k) = 0;
      }
      prev = M(k, k);
    }
    return Integer(sign * prev);
  };
  Integer d = 1;
  for (std::size_t i = 0; i < A.rows(); ++i) d *= s.D(i, i);
  return d * unit_det(s.U) * unit_det(s.V);
}

inline std::vector<Integer> smith_diagonal(const IntMatrix& A) {
  SmithForm s = smith_normal_form(A);
  std::vector<Integer> d;
  for (std::size_t i = 0; i < s.rank; ++i) d.push_back(s.D(i, i));
  return d;
}

// Integer inverse of a unimodular square matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& A) {
  const std::size_t n = A.rows();
  if (A.cols() != n) throw MathError("inverse of non-square matrix");
  std::vector<std::vector<Rational>> M(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = A(i, j);
    M[i][n + i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(M[p][c]) == 0) ++p;
    if (p == n) throw MathError("singular matrix has no inverse");
    std::swap(M[p], M[c]);
    Rational inv = 1 / M[c][c];
    for (auto& v : M[c]) v *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(M[i][c]) == 0) continue;
      Rational f = M[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) M[i][j] -= f * M[c][j];
    }
  }
  IntMatrix B(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (M[i][n + j].get_den() != 1) throw MathError("matrix is not unimodular");
      B(i, j) = M[i][n + j].get_num();
    }
  return B;
}

}  // namespace coxtorus
