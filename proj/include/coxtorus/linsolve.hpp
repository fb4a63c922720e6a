#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "coxtorus/cyclotomic.hpp"

namespace coxtorus {

template <class F>
using Matrix = std::vector<std::vector<F>>;

namespace detail {

template <class F>
bool is_zero(const F& x) {
  if constexpr (requires { x.is_zero(); }) {
    return x.is_zero();
  } else {
    return sgn(x) == 0;
  }
}

// Fraction-free forward elimination in place; pivot = first nonzero entry of the
// current column, columns scanned left to right. Returns pivot columns.
template <class F>
std::vector<std::size_t> bareiss_echelon(Matrix<F>& M, std::size_t ncols_pivot) {
  std::vector<std::size_t> pivots;
  if (M.empty()) return pivots;
  const std::size_t m = M.size(), n = M[0].size();
  F prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols_pivot && r < m; ++c) {
    std::size_t p = r;
    while (p < m && is_zero(M[p][c])) ++p;
    if (p == m) continue;
    std::swap(M[p], M[r]);
    for (std::size_t i = r + 1; i < m; ++i) {
      if (is_zero(M[i][c])) {
        // still rescale so all rows below share the same determinant scale
        for (std::size_t j = c + 1; j < n; ++j)
          if (!is_zero(M[i][j])) M[i][j] = (M[r][c] * M[i][j]) / prev;
        continue;
      }
      for (std::size_t j = c + 1; j < n; ++j) M[i][j] = (M[r][c] * M[i][j] - M[i][c] * M[r][j]) / prev;
      M[i][c] = F(0);
    }
    prev = M[r][c];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

template <class F>
std::size_t exact_rank(Matrix<F> M) {
  if (M.empty()) return 0;
  return detail::bareiss_echelon(M, M[0].size()).size();
}

template <class F>
struct LinSolveResult {
  bool consistent = false;
  std::size_t rank = 0;
  std::vector<F> x;        // a solution (free variables zero) when consistent
  std::vector<F> witness;  // y with y^T A = 0 and y^T b != 0 when inconsistent
};

template <class F>
LinSolveResult<F> solve_linear(const Matrix<F>& A, const std::vector<F>& b) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  LinSolveResult<F> res;
  Matrix<F> M(m, std::vector<F>(n + 1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
    M[i][n] = b[i];
  }
  auto piv = detail::bareiss_echelon(M, n);
  res.rank = piv.size();
  bool inconsistent = false;
  for (std::size_t i = res.rank; i < m; ++i)
    if (!detail::is_zero(M[i][n])) inconsistent = true;
  if (inconsistent) {
    // redo with an identity block to recover the row combination
    Matrix<F> W(m, std::vector<F>(n + 1 + m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) W[i][j] = A[i][j];
      W[i][n] = b[i];
      W[i][n + 1 + i] = F(1);
    }
    detail::bareiss_echelon(W, n);
    for (std::size_t i = res.rank; i < m; ++i)
      if (!detail::is_zero(W[i][n])) {
        res.witness.assign(W[i].begin() + static_cast<std::ptrdiff_t>(n + 1), W[i].end());
        break;
      }
    res.consistent = false;
    return res;
  }
  res.consistent = true;
  res.x.assign(n, F(0));
  for (std::size_t k = res.rank; k-- > 0;) {
    const std::size_t c = piv[k];
    F acc = M[k][n];
    for (std::size_t j = c + 1; j < n; ++j)
      if (!detail::is_zero(M[k][j]) && !detail::is_zero(res.x[j])) acc = acc - M[k][j] * res.x[j];
    res.x[c] = acc / M[k][c];
  }
  return res;
}

}  // namespace coxtorus
