#include <gtest/gtest.h>

#include <random>

#include "coxtorus/fingroup.hpp"
#include "coxtorus/laurent.hpp"
#include "coxtorus/parse.hpp"
#include "coxtorus/seeddata.hpp"

using namespace coxtorus;

namespace {
const std::vector<std::string> kX{"x1", "y1", "x2", "y2"};

Matrix<CycNum> diag_i() {
  Matrix<CycNum> g(4, std::vector<CycNum>(4));
  g[0][0] = g[2][2] = CycNum::i();
  g[1][1] = g[3][3] = -CycNum::i();
  return g;
}
}  // namespace

TEST(Laurent, Arithmetic) {
  auto gens = load_generators(default_data_dir());
  EXPECT_EQ(gens["w01"] * LaurentPoly(1), gens["w01"]);
  EXPECT_TRUE((parse_poly("y1*x2 - x1*y2") + parse_poly("x1*y2 - y1*x2")).is_zero());
  EXPECT_EQ(gens["s"] * gens["t"], parse_poly("t1^-1*t2^-1"));
}

TEST(Laurent, Substitution) {
  EXPECT_EQ(apply_linear_substitution(parse_poly("x1"), kX, diag_i()), parse_poly("z^3*x1"));
  auto gens = load_generators(default_data_dir());
  EXPECT_EQ(apply_linear_substitution(gens["w04"], kX, diag_i()), gens["w04"]);
  Matrix<CycNum> id(4, std::vector<CycNum>(4));
  for (int i = 0; i < 4; ++i) id[i][i] = CycNum(1);
  EXPECT_EQ(apply_linear_substitution(parse_poly("x1"), kX, id), parse_poly("x1"));
}

TEST(Laurent, Weights) {
  auto gens = load_generators(default_data_dir());
  auto T = WeightAssignment::torus();
  auto P = WeightAssignment::picard();
  EXPECT_EQ(weight_of(gens["w01"], T), (Weight{1, 1}));
  EXPECT_EQ(weight_of(gens["w3"], P), (Weight{1, 1}));
  EXPECT_EQ(weight_of(gens["w3"], T), (Weight{3, 3}));
  EXPECT_EQ(weight_of(gens["s"], P), (Weight{-2, 1}));
  EXPECT_EQ(weight_of(gens["s"], T), (Weight{0, 0}));
  EXPECT_THROW(weight_of(parse_poly("x1 + x2"), T), InhomogeneousError);
}

TEST(Laurent, AllGeneratorsMatchDegreeMatrix) {
  auto gens = load_generators(default_data_dir());
  auto D = load_degree_matrix(default_data_dir());
  for (const auto& n : D.names) {
    EXPECT_EQ(weight_of(gens[n], WeightAssignment::picard()), D.pic.at(n)) << n;
    EXPECT_EQ(weight_of(gens[n], WeightAssignment::torus()), D.tw.at(n)) << n;
  }
}

TEST(Laurent, Jacobian) {
  Point pt{{"x1", CycNum(3)}, {"y1", CycNum(5)}};
  EXPECT_EQ(jacobian_rank_at_point({parse_poly("x1"), parse_poly("y1")}, {"x1", "y1"}, pt), 2u);
  Point zero{{"x1", CycNum(0)}};
  EXPECT_EQ(jacobian_rank_at_point({parse_poly("x1^2"), parse_poly("x1")}, {"x1"}, zero), 1u);
  PowerProduct inv{{{parse_poly("x1"), -1}}, CycNum(1)};
  EXPECT_THROW(jacobian_rank_at_point(std::vector<PowerProduct>{inv}, {"x1"}, zero), MathError);
}

TEST(Parser, RoundTripAndErrors) {
  auto gens = load_generators(default_data_dir());
  for (const auto& n : gens.names) EXPECT_EQ(parse_poly(gens[n].to_string()), gens[n]) << n;
  EXPECT_EQ(parse_cyc("1/2*z^3"), CycNum::i().scaled(make_rational(1, 2)));
  EXPECT_THROW(parse_poly("x1 +"), DataError);
  EXPECT_THROW(parse_poly("x1/(x1+1)"), DataError);
  EXPECT_THROW(parse_cyc("x1"), DataError);
}

// ---- property suites ----

namespace {
LaurentPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> e(0, 3), c(-3, 3), nt(1, 4), v(0, 3);
  LaurentPoly f;
  for (int k = nt(rng); k > 0; --k) {
    Monomial m;
    for (int j = 0; j < 2; ++j) m = m * Monomial::var(kX[v(rng)], e(rng));
    f.add_term(m, CycNum::zeta(static_cast<int>(rng() % 12)).scaled(c(rng)));
  }
  return f;
}

Matrix<CycNum> random_matrix(std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-2, 2);
  Matrix<CycNum> g(4, std::vector<CycNum>(4));
  for (auto& r : g)
    for (auto& x : r) x = CycNum(c(rng)) + CycNum::zeta(static_cast<int>(rng() % 12)).scaled(c(rng));
  return g;
}

Matrix<CycNum> mat_mul(const Matrix<CycNum>& a, const Matrix<CycNum>& b) {
  Matrix<CycNum> r(4, std::vector<CycNum>(4));
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}
}  // namespace

TEST(PolylaurentProperty, SubstitutionIsRingHomomorphism) {
  std::mt19937 rng(21);
  for (int c = 0; c < 100; ++c) {
    auto f = random_poly(rng), g = random_poly(rng);
    auto M = random_matrix(rng);
    EXPECT_EQ(apply_linear_substitution(f * g, kX, M),
              apply_linear_substitution(f, kX, M) * apply_linear_substitution(g, kX, M));
    EXPECT_EQ(apply_linear_substitution(f + g, kX, M),
              apply_linear_substitution(f, kX, M) + apply_linear_substitution(g, kX, M));
  }
}

TEST(PolylaurentProperty, ActionComposition) {
  // f o g1 o g2 = f o (g1 g2): substituting g1 first and then g2 equals substituting g1*g2
  std::mt19937 rng(22);
  for (int c = 0; c < 100; ++c) {
    auto f = random_poly(rng);
    auto a = random_matrix(rng), b = random_matrix(rng);
    EXPECT_EQ(apply_linear_substitution(apply_linear_substitution(f, kX, a), kX, b),
              apply_linear_substitution(f, kX, mat_mul(a, b)));
  }
}

TEST(PolylaurentProperty, ParserRoundTrip) {
  std::mt19937 rng(23);
  for (int c = 0; c < 150; ++c) {
    auto f = random_poly(rng) * LaurentPoly(Monomial::var("t1", static_cast<int>(rng() % 5) - 2));
    EXPECT_EQ(parse_poly(f.to_string()), f) << f.to_string();
  }
}
