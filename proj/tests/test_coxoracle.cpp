#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "coxtorus/coxoracle.hpp"
#include "coxtorus/parse.hpp"

using namespace coxtorus;

namespace {

const std::filesystem::path& dir() {
  static const std::filesystem::path d = default_data_dir();
  return d;
}

const GeneratorSet& gens() {
  static const auto g = load_generators(dir());
  return g;
}

const MatGroup& group() {
  static const auto G = load_group(dir());
  return G;
}

const std::vector<FixedPointDatum>& points() {
  static const auto p = load_fixed_point_data(dir());
  return p;
}

const GradedPieces& pieces() {
  static const GradedPieces gp(gens(), 60, 80);
  return gp;
}

const RankOracle& oracle() {
  static const RankOracle o(pieces(), 2, 120, 7);
  return o;
}

const DimensionTable& lrr(const Weight& L) {
  static std::map<Weight, DimensionTable> cache;
  auto it = cache.find(L);
  if (it == cache.end()) it = cache.emplace(L, hilbert_weight_table(L, points(), kDefaultEll, 130)).first;
  return it->second;
}

long at(const DimensionTable& t, const Weight& e) {
  auto it = t.find(e);
  return it == t.end() ? 0 : it->second.get_si();
}

void expect_pass(const Report& r) {
  for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
}

// Full rank of the piece over both primes, using every monomial.
std::vector<std::size_t> full_rank(const Weight& L, const Weight& w, long target) {
  RankOptions o;
  o.sample_floor = 0;
  o.sample_factor = 0;
  o.extra_rows = 1000000;
  auto c = oracle().rank(L, w, target, o);
  EXPECT_TRUE(c.complete || c.ranks.empty() || c.target == 0);
  return c.ranks;
}

// Reynolds average of every monomial of bidegree (a,b); the rank of the averages is dim C[x]^G_(a,b).
std::size_t reynolds_dim(long a, long b) {
  std::vector<LaurentPoly> avg;
  for (long i = 0; i <= a; ++i)
    for (long j = 0; j <= b; ++j) {
      Monomial m = Monomial::var("x1", static_cast<int>(i)) * Monomial::var("y1", static_cast<int>(a - i)) *
                   Monomial::var("x2", static_cast<int>(j)) * Monomial::var("y2", static_cast<int>(b - j));
      LaurentPoly f(m), s;
      for (const auto& g : group().elements()) s += apply_linear_substitution(f, kXVars, g.rows());
      avg.push_back(s);
    }
  std::map<Monomial, std::size_t> cols;
  for (const auto& f : avg)
    for (const auto& [m, c] : f.terms()) cols.emplace(m, cols.size());
  Matrix<CycNum> M(avg.size(), std::vector<CycNum>(cols.size()));
  for (std::size_t i = 0; i < avg.size(); ++i)
    for (const auto& [m, c] : avg[i].terms()) M[i][cols.at(m)] = c;
  return cols.empty() ? 0 : exact_rank(M);
}

}  // namespace

// --- generator table ---

TEST(Degrees, Examples) {
  const auto dm = load_degree_matrix(dir());
  EXPECT_EQ(gens()["w03"], parse_poly("x1^5*y1 - x1*y1^5"));
  EXPECT_EQ(weight_of(gens()["w03"], WeightAssignment::torus()), (Weight{6, 0}));
  EXPECT_EQ(weight_of(gens()["w24"], WeightAssignment::torus()), (Weight{1, 5}));
  EXPECT_EQ(weight_of(gens()["w24"], WeightAssignment::picard()), (Weight{0, 1}));
  EXPECT_EQ(weight_of(gens()["t"], WeightAssignment::picard()), (Weight{1, -2}));
  EXPECT_EQ(weight_of(gens()["t"], WeightAssignment::torus()), (Weight{0, 0}));
  EXPECT_EQ(dm.tw.at("w24"), (Weight{1, 5}));
}

TEST(Degrees, AllColumnsMatch) {
  const auto r = verify_degree_matrix(gens(), load_degree_matrix(dir()));
  expect_pass(r);
  EXPECT_EQ(r.checks.size(), 21u);
}

TEST(Degrees, CorruptedEntryNamesColumn) {
  auto dm = load_degree_matrix(dir());
  dm.tw["w14"][1] += 1;
  const auto r = verify_degree_matrix(gens(), dm);
  EXPECT_EQ(r.failures(), 2u);
  bool named = false;
  for (const auto& c : r.checks) named |= !c.pass && c.name == "column w14";
  EXPECT_TRUE(named);
}

TEST(Degrees, MissingColumn) {
  auto dm = load_degree_matrix(dir());
  dm.pic.erase("w3");
  EXPECT_FALSE(verify_degree_matrix(gens(), dm).ok());
}

// --- semi-invariance ---

TEST(SemiInvariance, AllGenerators) {
  const auto s = verify_semiinvariance(gens(), group());
  expect_pass(s.report);
  EXPECT_EQ(s.scalars.size(), 20u);
}

TEST(SemiInvariance, IdentityFixesEverything) {
  for (const auto& n : gens().names) {
    auto l = rescaling(gens()[n], Mat4::identity());
    ASSERT_TRUE(l);
    EXPECT_TRUE(l->is_one()) << n;
  }
}

TEST(SemiInvariance, Examples) {
  const auto s = verify_semiinvariance(gens(), group());
  for (const auto& l : s.scalars.at("w01")) EXPECT_TRUE(l.is_one());
  const CycNum c = s.scalars.at("w12")[1];
  EXPECT_FALSE(c.is_one());
  EXPECT_TRUE(c.pow(3).is_one());
  for (const auto* n : {"w13", "w14", "w15"}) EXPECT_EQ(s.scalars.at(n)[1], c) << n;
  EXPECT_EQ(s.scalars.at("w21")[1], c * c);
}

TEST(SemiInvariance, ColumnActionBreaksCharacterClasses) {
  const auto s = verify_semiinvariance(gens(), group(), Action::column);
  EXPECT_FALSE(s.report.ok());
  // every generator is still rescaled; only the class consistency fails
  for (const auto& c : s.report.checks)
    if (c.name.find("rescaled") != std::string::npos || c.name.find("[G,G]") != std::string::npos) EXPECT_TRUE(c.pass) << c.name;
}

TEST(SemiInvariance, NonScalarIsNamed) {
  GeneratorSet g = gens();
  g.poly["w04"] = g.poly["w04"] + parse_poly("x1^4");
  const auto s = verify_semiinvariance(g, group());
  bool named = false;
  for (const auto& c : s.report.checks) named |= !c.pass && c.name.rfind("w04", 0) == 0;
  EXPECT_TRUE(named);
}

TEST(SemiInvariance, PicardClass) {
  EXPECT_EQ(picard_class({0, 0}), 0);
  EXPECT_EQ(picard_class({-2, 1}), 0);
  EXPECT_EQ(picard_class({1, -2}), 0);
  EXPECT_EQ(picard_class({1, 0}), 1);
  EXPECT_EQ(picard_class({0, 1}), 2);
  EXPECT_EQ(picard_class({1, 1}), 0);
}

// --- invariant ring oracle ---

TEST(Molien, AgreesWithReynolds) {
  const MolienSeries mol(group(), 8, 8);
  for (long a = 0; a <= 6; ++a)
    for (long b = 0; a + b <= 6; ++b) EXPECT_EQ(mol.dim(a, b), static_cast<long>(reynolds_dim(a, b))) << a << "," << b;
}

TEST(Molien, AgreesWithTrivialBundleTable) {
  const MolienSeries mol(group(), 44, 66);
  const auto& t = lrr({0, 0});
  for (long a = 0; 3 * a <= 130; ++a)
    for (long b = 0; 3 * a + 2 * b <= 130; ++b) EXPECT_EQ(mol.dim(a, b), at(t, {a, b})) << a << "," << b;
  EXPECT_EQ(mol.dim(0, 0), 1);
  EXPECT_EQ(mol.dim(1, 1), 1);  // w01
  EXPECT_EQ(mol.dim(1, 0), 0);
}

// --- graded monomials ---

TEST(Enumerate, Examples) {
  const auto& gp = pieces();
  auto e = gp.enumerate({0, 0}, {0, 0});
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(gp.to_string(e[0]), "1");

  auto m = gp.enumerate({1, 1}, {3, 3});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(gp.to_string(m[0]), "w3");

  EXPECT_FALSE(gp.enumerate({2, 1}, {5, 5}).empty());
}

TEST(Enumerate, ProductsAtWeightFourFour) {
  const auto tw = WeightAssignment::torus(), pic = WeightAssignment::picard();
  EXPECT_EQ(weight_of(gens()["w07"] * gens()["w23"], tw), (Weight{4, 4}));
  EXPECT_EQ(weight_of(gens()["w06"] * gens()["w13"], tw), (Weight{4, 4}));
  EXPECT_FALSE(st_exponents(weight_of(gens()["w07"] * gens()["w23"], pic), {1, 1}));
  EXPECT_FALSE(st_exponents(weight_of(gens()["w06"] * gens()["w13"], pic), {1, 1}));
}

TEST(Enumerate, StExponents) {
  auto st = st_exponents({3, 3}, {1, 1});
  ASSERT_TRUE(st);
  EXPECT_EQ(*st, std::make_pair(2L, 2L));
  EXPECT_FALSE(st_exponents({0, 0}, {1, 0}));
  EXPECT_FALSE(st_exponents({0, 0}, {1, 1}));
  EXPECT_EQ(*st_exponents({0, 0}, {0, 0}), std::make_pair(0L, 0L));
}

TEST(Enumerate, SoundnessProperty) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 150; ++it) {
    const Weight L{static_cast<long>(rng() % 5), static_cast<long>(rng() % 5)};
    const Weight w{static_cast<long>(rng() % 13), static_cast<long>(rng() % 13)};
    const auto ms = pieces().enumerate(L, w);
    std::set<GradedMonomial> uniq(ms.begin(), ms.end());
    EXPECT_EQ(uniq.size(), ms.size());
    for (const auto& m : ms) {
      auto [t, p] = pieces().bidegree(m);
      EXPECT_EQ(t, w);
      EXPECT_EQ(p, L);
      EXPECT_GE(m.s, 0);
      EXPECT_GE(m.t, 0);
    }
    EXPECT_EQ(pieces().completable(w, {0, 0}, L), !ms.empty()) << w2s(L) << " " << w2s(w);
    // samples are members of the enumeration
    for (int k = 0; k < 3 && !ms.empty(); ++k) {
      auto s = pieces().sample(L, w, rng);
      ASSERT_TRUE(s);
      EXPECT_TRUE(uniq.count(*s));
    }
  }
}

TEST(Enumerate, BoxIsEnforced) {
  EXPECT_THROW(pieces().enumerate({0, 0}, {61, 0}), MathError);
}

// --- ranks ---

TEST(Rank, Examples) {
  EXPECT_EQ(oracle().rank({2, 1}, {0, 16}, 1).ranks, (std::vector<std::size_t>{1, 1}));
  const auto big = oracle().rank({2, 1}, {26, 22}, 50);
  EXPECT_TRUE(big.certified());
  EXPECT_FALSE(big.exceeds());
  EXPECT_EQ(big.ranks, (std::vector<std::size_t>{50, 50}));
  EXPECT_EQ(oracle().rank({0, 0}, {0, 0}, 1).ranks, (std::vector<std::size_t>{1, 1}));
  const auto w3 = oracle().rank({1, 1}, {3, 3}, 1);
  EXPECT_TRUE(w3.certified());
  EXPECT_EQ(w3.witness, "w3");
}

TEST(Rank, ShortfallIsReported) {
  // asking for more than the piece holds cannot be certified
  const auto c = oracle().rank({1, 1}, {3, 3}, 2);
  EXPECT_FALSE(c.certified());
  EXPECT_TRUE(c.complete);
}

TEST(Rank, ExactAuditProperty) {
  std::mt19937_64 rng(5);
  int nonzero = 0;
  for (int it = 0; it < 100; ++it) {
    const Weight L{static_cast<long>(rng() % 4), static_cast<long>(rng() % 3)};
    const Weight w{static_cast<long>(rng() % 9), static_cast<long>(rng() % 9)};
    const auto ms = pieces().enumerate(L, w);
    if (ms.size() > 12) continue;
    const auto ex = exact_piece_rank(pieces(), ms);
    const auto mod = full_rank(L, w, at(lrr(L), w));
    for (auto r : mod) EXPECT_EQ(r, ex) << w2s(L) << " " << w2s(w);
    nonzero += ex > 0;
  }
  EXPECT_GT(nonzero, 10);
}

TEST(Rank, ContainmentProperty) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 120; ++it) {
    const Weight L{static_cast<long>(rng() % 5), static_cast<long>(rng() % 5)};
    const Weight w{static_cast<long>(rng() % 11), static_cast<long>(rng() % 11)};
    const long t = at(lrr(L), w);
    for (auto r : full_rank(L, w, t)) EXPECT_LE(static_cast<long>(r), t) << w2s(L) << " " << w2s(w);
  }
}

TEST(Rank, MonotonicityProperty) {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int it = 0; checked < 100 && it < 5000; ++it) {
    const Weight L1{static_cast<long>(rng() % 4), static_cast<long>(rng() % 4)};
    const Weight L2{static_cast<long>(rng() % 4), static_cast<long>(rng() % 4)};
    const Weight w1{static_cast<long>(rng() % 15), static_cast<long>(rng() % 15)};
    const Weight w2{static_cast<long>(rng() % 15), static_cast<long>(rng() % 15)};
    if (!pieces().completable(w1, {0, 0}, L1) || !pieces().completable(w2, {0, 0}, L2)) continue;
    if (oracle().rank(L1, w1, 1).ranks[0] < 1 || oracle().rank(L2, w2, 1).ranks[0] < 1) continue;
    const auto c = oracle().rank(wadd(L1, L2), wadd(w1, w2), 1);
    EXPECT_TRUE(c.certified()) << w2s(L1) << w2s(w1) << " + " << w2s(L2) << w2s(w2);
    ++checked;
  }
  EXPECT_EQ(checked, 100);
}

TEST(Rank, MirroredTablesOutsideTheChamber) {
  // bundles with q > p: the graded pieces follow the mirrored table
  for (const Weight L : {Weight{0, 1}, Weight{1, 2}, Weight{0, 2}})
    for (const Weight w : {Weight{0, 4}, Weight{6, 6}, Weight{4, 8}, Weight{7, 3}}) {
      const long t = at(lrr(L), w);
      const auto r = full_rank(L, w, t);
      for (auto x : r) EXPECT_EQ(static_cast<long>(x), t) << w2s(L) << " " << w2s(w);
    }
}

// --- seeds and regularity ---

TEST(Seeds, LoadAndMirror) {
  const auto s = load_seeds(dir());
  EXPECT_EQ(s.S.size(), 9u);
  EXPECT_EQ(s.Sprime.size(), 6u);
  EXPECT_EQ(sorted_weights(mirror_seed_set(s.S)), sorted_weights(s.Sprime));
}

TEST(Seeds, BadFile) {
  const auto p = std::filesystem::temp_directory_path() / "coxtorus_bad_seeds";
  std::filesystem::create_directories(p);
  {
    std::ofstream(p / "seeds.txt") << "S 0 0 ; 1\n";
  }
  EXPECT_THROW(load_seeds(p), DataError);
  {
    std::ofstream(p / "seeds.txt") << "T 0 0\n";
  }
  EXPECT_THROW(load_seeds(p), DataError);
  EXPECT_THROW(load_seeds(p / "missing"), DataError);
}

TEST(Regularity, RuleRegions) {
  const auto r = regularity_rules();
  ASSERT_EQ(r.size(), 6u);
  EXPECT_TRUE(r[0].region(2, 0));
  EXPECT_TRUE(r[0].region(3, 1));
  EXPECT_FALSE(r[0].region(3, 2));
  EXPECT_FALSE(r[0].region(1, 0));
  EXPECT_TRUE(r[1].region(2, 2));
  EXPECT_TRUE(r[1].region(3, 2));
  EXPECT_FALSE(r[1].region(4, 2));
  EXPECT_FALSE(r[1].region(1, 1));
  EXPECT_TRUE(r[2].region(4, 2));
  EXPECT_FALSE(r[2].region(3, 2));
  EXPECT_EQ(r[2].family, (std::vector<Weight>{{1, 0}, {1, 1}}));
  EXPECT_TRUE(r[3].region(0, 2));
  EXPECT_EQ(r[3].family, (std::vector<Weight>{{0, 1}}));
}

TEST(Regularity, Examples) {
  const auto s = load_seeds(dir());
  const auto rules = regularity_rules();
  const auto full = regularity_closure(s.all(), rules, 50);
  EXPECT_TRUE(full.full());
  EXPECT_EQ(full.covered.size(), 51u * 51u);

  auto fewer = s.all();
  fewer.erase(std::find(fewer.begin(), fewer.end(), Weight{4, 2}));
  const auto c = regularity_closure(fewer, rules, 50);
  EXPECT_FALSE(c.full());
  EXPECT_TRUE(std::find(c.uncovered.begin(), c.uncovered.end(), Weight{4, 2}) != c.uncovered.end());

  EXPECT_TRUE(regularity_closure({{0, 0}}, rules, 0).full());
  expect_pass(regularity_report(s, 50));
}

TEST(Regularity, WitnessChainsEndInSeeds) {
  const auto s = load_seeds(dir());
  const auto all = s.all();
  const auto cl = regularity_closure(all, regularity_rules(), 30);
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    const Weight c{static_cast<long>(rng() % 31), static_cast<long>(rng() % 31)};
    const auto ch = cl.chain(c);
    EXPECT_TRUE(std::find(all.begin(), all.end(), ch.back()) != all.end()) << w2s(c);
    for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
      const auto& [L, B] = cl.witness.at(ch[k]);
      EXPECT_EQ(wadd(L, B), ch[k]);
    }
  }
}

TEST(Regularity, MonotoneProperty) {
  const auto s = load_seeds(dir());
  const auto all = s.all();
  const auto rules = regularity_rules();
  std::mt19937_64 rng(17);
  for (int it = 0; it < 100; ++it) {
    std::vector<Weight> sub;
    for (const auto& x : all)
      if (rng() % 3) sub.push_back(x);
    std::vector<Weight> more = sub;
    for (const auto& x : all)
      if (rng() % 2) more.push_back(x);
    std::vector<RegularityRule> rsub;
    for (const auto& r : rules)
      if (rng() % 2) rsub.push_back(r);
    const auto a = regularity_closure(sub, rsub, 20);
    const auto b = regularity_closure(more, rsub, 20);
    const auto c = regularity_closure(sub, rules, 20);
    for (const auto& x : a.covered) {
      EXPECT_TRUE(b.covered.count(x));
      EXPECT_TRUE(c.covered.count(x));
    }
  }
}

// --- verdict ---

TEST(Verdict, DiagramBundle) {
  VerdictOptions opt;
  opt.D = 3 * 26 + 2 * 22;
  const auto v = cox_equality_verdict({{2, 1}}, points(), gens(), opt);
  expect_pass(v.report);
  EXPECT_EQ(v.primes.size(), 2u);
  for (const auto& c : v.cells) {
    if (c.w == Weight{26, 22}) EXPECT_EQ(c.ranks[0], 50u);
    if (c.w == Weight{6, 10}) EXPECT_EQ(c.ranks[0], 5u);
  }
  // deterministic ordering
  for (std::size_t k = 1; k < v.cells.size(); ++k)
    EXPECT_LT(std::tie(v.cells[k - 1].L, v.cells[k - 1].w), std::tie(v.cells[k].L, v.cells[k].w));
}

TEST(Verdict, InvariantRingLowDegree) {
  const MolienSeries mol(group(), 12, 12);
  for (long a = 0; a <= 12; ++a)
    for (long b = 0; a + b <= 12; ++b) {
      const long t = mol.dim(a, b);
      const auto c = oracle().rank({0, 0}, {a, b}, t);
      EXPECT_TRUE(c.certified()) << a << "," << b;
      EXPECT_FALSE(c.exceeds()) << a << "," << b;
    }
}

TEST(Verdict, ThreadCountDoesNotChangeResults) {
  VerdictOptions one, many;
  one.D = many.D = 40;
  one.threads = 1;
  many.threads = 4;
  const auto a = cox_equality_verdict({{1, 0}, {2, 2}}, points(), gens(), one);
  const auto b = cox_equality_verdict({{1, 0}, {2, 2}}, points(), gens(), many);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    EXPECT_EQ(a.cells[k].w, b.cells[k].w);
    EXPECT_EQ(a.cells[k].ranks, b.cells[k].ranks);
    EXPECT_EQ(a.cells[k].witness, b.cells[k].witness);
  }
}
