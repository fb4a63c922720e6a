#pragma once

#include <cstdint>
#include <vector>

#include "coxtorus/cyclotomic.hpp"

namespace coxtorus {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return s >= p ? s - p : s;
}
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}
inline u64 invmod(u64 a, u64 p) {
  if (a % p == 0) throw MathError("inverse of zero mod p");
  return powmod(a, p - 2, p);
}

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool comp = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

inline u64 phi12_mod(u64 r, u64 p) {
  u64 r2 = mulmod(r, r, p);
  return addmod(submod(mulmod(r2, r2, p), r2, p), 1 % p, p);
}

// A prime p = 1 mod 12 with a chosen root of z^4 - z^2 + 1.
struct PrimeEmbedding {
  u64 p = 0;
  u64 root = 0;

  static PrimeEmbedding make(u64 p, u64 root) {
    if (!is_prime_u64(p) || p % 12 != 1) throw MathError("modulus must be a prime = 1 mod 12");
    if (phi12_mod(root % p, p) != 0) throw MathError("root is not a primitive 12th root of unity mod p");
    return {p, root % p};
  }

  static PrimeEmbedding for_prime(u64 p) {
    if (!is_prime_u64(p) || p % 12 != 1) throw MathError("modulus must be a prime = 1 mod 12");
    for (u64 g = 2;; ++g) {
      u64 r = powmod(g, (p - 1) / 12, p);
      if (phi12_mod(r, p) == 0) return {p, r};
    }
  }

  u64 reduce(const Rational& q) const {
    mpz_class pm = static_cast<unsigned long>(p);
    mpz_class n = q.get_num() % pm, d = q.get_den() % pm;
    if (n < 0) n += pm;
    if (d == 0) throw BadReduction("denominator divisible by p");
    u64 nn = n.get_ui(), dd = d.get_ui();
    return mulmod(nn, invmod(dd, p), p);
  }

  u64 embed(const CycNum& x) const {
    u64 acc = 0, pw = 1;
    for (std::size_t j = 0; j < 4; ++j) {
      if (sgn(x.coeff(j)) != 0) acc = addmod(acc, mulmod(reduce(x.coeff(j)), pw, p), p);
      pw = mulmod(pw, root, p);
    }
    return acc;
  }
};

// Largest primes below 2^61 with p = 1 mod 12, in decreasing order.
inline std::vector<PrimeEmbedding> default_primes(std::size_t k) {
  std::vector<PrimeEmbedding> out;
  u64 n = (1ULL << 61) - 1;
  n -= (n - 1) % 12;
  for (; out.size() < k; n -= 12)
    if (is_prime_u64(n)) out.push_back(PrimeEmbedding::for_prime(n));
  return out;
}

// Row-reduces in place; returns rank. Entries must already be < p.
inline std::size_t rank_mod_p(std::vector<std::vector<u64>> M, u64 p) {
  if (M.empty()) return 0;
  const std::size_t m = M.size(), n = M[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = r;
    while (piv < m && M[piv][c] == 0) ++piv;
    if (piv == m) continue;
    std::swap(M[piv], M[r]);
    u64 inv = invmod(M[r][c], p);
    for (std::size_t j = c; j < n; ++j) M[r][j] = mulmod(M[r][j], inv, p);
    for (std::size_t i = r + 1; i < m; ++i) {
      if (M[i][c] == 0) continue;
      u64 f = M[i][c];
      for (std::size_t j = c; j < n; ++j) M[i][j] = submod(M[i][j], mulmod(f, M[r][j], p), p);
    }
    ++r;
  }
  return r;
}

// Incremental echelon basis over F_p: add rows one at a time, learn whether each grew the rank.
class IncrementalRank {
 public:
  IncrementalRank(std::size_t ncols, u64 p) : n_(ncols), p_(p) {}

  bool add(std::vector<u64> v) {
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      u64 f = v[pivot_[k]];
      if (f == 0) continue;
      const auto& b = basis_[k];
      for (std::size_t j = pivot_[k]; j < n_; ++j)
        if (b[j]) v[j] = submod(v[j], mulmod(f, b[j], p_), p_);
    }
    std::size_t c = 0;
    while (c < n_ && v[c] == 0) ++c;
    if (c == n_) return false;
    u64 inv = invmod(v[c], p_);
    for (std::size_t j = c; j < n_; ++j) v[j] = mulmod(v[j], inv, p_);
    // keep fully reduced so the pivot lookups above stay valid
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      u64 f = basis_[k][c];
      if (f == 0) continue;
      for (std::size_t j = c; j < n_; ++j)
        if (v[j]) basis_[k][j] = submod(basis_[k][j], mulmod(f, v[j], p_), p_);
    }
    basis_.push_back(std::move(v));
    pivot_.push_back(c);
    return true;
  }

  std::size_t rank() const { return basis_.size(); }

 private:
  std::size_t n_;
  u64 p_;
  std::vector<std::vector<u64>> basis_;
  std::vector<std::size_t> pivot_;
};

}  // namespace coxtorus
