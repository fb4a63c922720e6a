#include <gtest/gtest.h>

#include <random>

#include "coxtorus/cyclotomic.hpp"
#include "coxtorus/intmatrix.hpp"
#include "coxtorus/linsolve.hpp"
#include "coxtorus/modular.hpp"

using namespace coxtorus;

TEST(CycNum, NamedConstants) {
  EXPECT_TRUE((CycNum::zeta(1) * CycNum::zeta(11)).is_one());
  EXPECT_EQ(CycNum::sqrt3() * CycNum::sqrt3(), CycNum(3));
  EXPECT_EQ(CycNum::i() * CycNum::i(), CycNum(-1));
  EXPECT_EQ(CycNum::zeta(1).pow(12), CycNum(1));
  EXPECT_EQ(CycNum::zeta(1).pow(6), CycNum(-1));
  EXPECT_EQ(CycNum::b().pow(6), CycNum(1));
  EXPECT_NE(CycNum::b().pow(3), CycNum(1));
  EXPECT_NE(CycNum::b().pow(2), CycNum(1));
  EXPECT_EQ(CycNum::zeta3().pow(3), CycNum(1));
  EXPECT_EQ(CycNum::zeta3(), CycNum::zeta(4));
}

TEST(CycNum, DivisionByZeroThrows) { EXPECT_THROW(CycNum(1) / CycNum(0), MathError); }

TEST(CycNum, ToStringRoundTripShape) {
  EXPECT_EQ(CycNum::zeta(2).to_string(), "z^2");
  EXPECT_EQ((CycNum(2) - CycNum::zeta(2).scaled(4)).to_string(), "2-4*z^2");
}

TEST(Smith, Identity) {
  auto s = smith_normal_form(IntMatrix::identity(2));
  EXPECT_EQ(s.D, IntMatrix::identity(2));
}

TEST(Smith, Diag23) {
  IntMatrix A{{2, 0}, {0, 3}};
  auto s = smith_normal_form(A);
  EXPECT_EQ(s.D, (IntMatrix{{1, 0}, {0, 6}}));
  EXPECT_EQ(s.U * A * s.V, s.D);
}

TEST(Smith, PicardKernelMatchesQ) {
  IntMatrix P{{1, 0, 0, 1}, {0, 1, 1, 1}};
  IntMatrix Q{{0, -1, 1, 0}, {-1, -1, 0, 1}};
  IntMatrix K = kernel_basis(P);
  EXPECT_TRUE((P * K.transpose()).is_zero());
  EXPECT_TRUE(same_row_lattice(K, Q));
}

TEST(Linsolve, IdentitySolve) {
  Matrix<CycNum> A{{1, 0}, {0, 1}};
  std::vector<CycNum> b{CycNum::zeta(1), CycNum(5)};
  auto r = solve_linear(A, b);
  ASSERT_TRUE(r.consistent);
  EXPECT_EQ(r.x, b);
}

TEST(Linsolve, InconsistentWitness) {
  Matrix<CycNum> A{{1, 1}, {2, 2}};
  std::vector<CycNum> b{1, 3};
  auto r = solve_linear(A, b);
  ASSERT_FALSE(r.consistent);
  EXPECT_EQ(r.rank, 1u);
  CycNum yb = r.witness[0] * b[0] + r.witness[1] * b[1];
  EXPECT_FALSE(yb.is_zero());
  for (int j = 0; j < 2; ++j) EXPECT_TRUE((r.witness[0] * A[0][j] + r.witness[1] * A[1][j]).is_zero());
}

TEST(Linsolve, ZeroMatrixRank) {
  Matrix<CycNum> Z(621, std::vector<CycNum>(7));
  EXPECT_EQ(exact_rank(Z), 0u);
}

TEST(Modular, Embedding) {
  EXPECT_THROW(PrimeEmbedding::make(13, 3), MathError);  // 81-9+1 is not 0 mod 13
  EXPECT_NO_THROW(PrimeEmbedding::make(13, 7));
  auto e = PrimeEmbedding::for_prime(13);
  EXPECT_EQ(phi12_mod(e.root, 13), 0u);
  EXPECT_EQ(e.embed(CycNum(1)), 1u);
  EXPECT_EQ(e.embed(CycNum::i() * CycNum::i()), 12u);
  EXPECT_THROW(e.embed(CycNum(make_rational(1, 13))), BadReduction);
  auto ps = default_primes(2);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_NE(ps[0].p, ps[1].p);
  EXPECT_EQ(ps[0].p % 12, 1u);
}

namespace {

CycNum random_cyc(std::mt19937_64& rng) {
  auto q = [&] { return make_rational(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 5) + 1); };
  return CycNum(q(), q(), q(), q());
}

IntMatrix random_int_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long range) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<long>(rng() % (2 * range + 1)) - range;
  return m;
}

// Cofactor expansion along the first row.
Integer laplace_det(const IntMatrix& A) {
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  if (n == 1) return A(0, 0);
  Integer d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix m(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) m(i - 1, c++) = A(i, k);
    d += (j % 2 ? -1 : 1) * A(0, j) * laplace_det(m);
  }
  return d;
}

}  // namespace

TEST(ExactmathProperty, FieldAxioms) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 200; ++it) {
    const CycNum a = random_cyc(rng), b = random_cyc(rng), c = random_cyc(rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + CycNum(0), a);
    EXPECT_EQ(a * CycNum(1), a);
    EXPECT_TRUE((a - a).is_zero());
    if (!a.is_zero()) {
      EXPECT_TRUE((a * a.inverse()).is_one());
      EXPECT_EQ((b / a) * a, b);
    }
    // Galois automorphisms are ring homomorphisms
    for (long k : {5L, 7L, 11L}) {
      EXPECT_EQ((a * b).galois(k), a.galois(k) * b.galois(k));
      EXPECT_EQ((a + b).galois(k), a.galois(k) + b.galois(k));
    }
    EXPECT_TRUE(a.norm() >= 0);
  }
}

TEST(ExactmathProperty, SmithContracts) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 150; ++it) {
    const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
    const IntMatrix A = random_int_matrix(rng, r, c, 6);
    const SmithForm s = smith_normal_form(A);
    EXPECT_EQ(s.U * A * s.V, s.D);
    EXPECT_EQ(s.U * unimodular_inverse(s.U), IntMatrix::identity(r));
    EXPECT_EQ(s.V * unimodular_inverse(s.V), IntMatrix::identity(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) EXPECT_EQ(s.D(i, j), 0);
    for (std::size_t i = 0; i < s.rank; ++i) {
      EXPECT_GT(s.D(i, i), 0);
      if (i + 1 < s.rank) EXPECT_EQ(s.D(i + 1, i + 1) % s.D(i, i), 0);
    }
    for (std::size_t i = s.rank; i < std::min(r, c); ++i) EXPECT_EQ(s.D(i, i), 0);
    Matrix<CycNum> Q(r, std::vector<CycNum>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) Q[i][j] = CycNum(Rational(A(i, j)));
    EXPECT_EQ(s.rank, exact_rank(Q));
    const IntMatrix K = kernel_basis(A);
    EXPECT_EQ(K.rows(), c - s.rank);
    if (K.rows()) EXPECT_TRUE((A * K.transpose()).is_zero());
  }
}

TEST(ExactmathProperty, DeterminantAgainstCofactors) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 120; ++it) {
    const std::size_t n = 1 + rng() % 4;
    const IntMatrix A = random_int_matrix(rng, n, n, 5);
    EXPECT_EQ(determinant(A), laplace_det(A));
  }
}

TEST(ExactmathProperty, ReductionModPrime) {
  std::mt19937_64 rng(4);
  const auto pe = default_primes(1)[0];
  for (int it = 0; it < 150; ++it) {
    const CycNum a = random_cyc(rng), b = random_cyc(rng);
    EXPECT_EQ(pe.embed(a * b), mulmod(pe.embed(a), pe.embed(b), pe.p));
    EXPECT_EQ(pe.embed(a + b), addmod(pe.embed(a), pe.embed(b), pe.p));
  }
  for (int it = 0; it < 100; ++it) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    Matrix<CycNum> M(r, std::vector<CycNum>(c));
    std::vector<std::vector<u64>> Mp(r, std::vector<u64>(c));
    // low-rank products so ranks vary
    const std::size_t k = 1 + rng() % 3;
    Matrix<CycNum> X(r, std::vector<CycNum>(k)), Y(k, std::vector<CycNum>(c));
    for (auto& row : X)
      for (auto& x : row) x = random_cyc(rng);
    for (auto& row : Y)
      for (auto& y : row) y = random_cyc(rng);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        for (std::size_t l = 0; l < k; ++l) M[i][j] += X[i][l] * Y[l][j];
        Mp[i][j] = pe.embed(M[i][j]);
      }
    const std::size_t ex = exact_rank(M), mp = rank_mod_p(Mp, pe.p);
    EXPECT_LE(mp, ex);
    EXPECT_EQ(mp, ex);  // a 61-bit prime misses a random minor with negligible probability
    IncrementalRank inc(c, pe.p);
    for (const auto& row : Mp) inc.add(row);
    EXPECT_EQ(inc.rank(), mp);
  }
}
