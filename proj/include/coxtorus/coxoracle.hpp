#pragma once

#include <algorithm>
#include <atomic>
#include <bitset>
#include <climits>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "coxtorus/equivariant.hpp"
#include "coxtorus/fingroup.hpp"
#include "coxtorus/laurent.hpp"
#include "coxtorus/linsolve.hpp"
#include "coxtorus/modular.hpp"
#include "coxtorus/report.hpp"
#include "coxtorus/seeddata.hpp"

namespace coxtorus {

inline const std::vector<std::string> kXVars{"x1", "y1", "x2", "y2"};

// ---------------------------------------------------------------------------
// Generator table

inline Report verify_degree_matrix(const GeneratorSet& gens, const DegreeMatrix& dm) {
  Report r;
  const auto tw = WeightAssignment::torus(), pic = WeightAssignment::picard();
  std::size_t ok = 0;
  for (const auto& n : gens.names) {
    if (!dm.pic.count(n)) {
      r.add("degrees", "column " + n, false, "missing from the degree matrix");
      continue;
    }
    try {
      const Weight t = weight_of(gens[n], tw), p = weight_of(gens[n], pic);
      const bool pass = t == dm.tw.at(n) && p == dm.pic.at(n);
      ok += pass;
      r.add("degrees", "column " + n, pass,
            "polynomial T " + w2s(t) + " Pic " + w2s(p) + ", matrix T " + w2s(dm.tw.at(n)) + " Pic " + w2s(dm.pic.at(n)));
    } catch (const MathError& e) {
      r.add("degrees", "column " + n, false, e.what());
    }
  }
  for (const auto& n : dm.names)
    if (!gens.poly.count(n)) r.add("degrees", "column " + n, false, "no generator of this name");
  r.add("degrees", "generators matching the degree matrix", ok == 20 && gens.names.size() == 20,
        std::to_string(ok) + "/" + std::to_string(gens.names.size()));
  return r;
}

inline MatGroup load_group(const std::filesystem::path& dir) {
  std::vector<Mat4> g;
  for (const auto& [n, M] : load_matrices(dir / "group.txt")) g.push_back(Mat4::from(M));
  if (g.empty()) throw DataError("group.txt: no generators");
  return MatGroup(g);
}

inline Mat4 transpose(const Mat4& g) {
  Mat4 t;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) t(i, j) = g(j, i);
  return t;
}

// Row action: x -> x g on the row vector (x1,y1,x2,y2). Column action: x -> g x.
enum class Action { row, column };

// f(x.g) = lambda f(x), or nullopt when g does not rescale f.
inline std::optional<CycNum> rescaling(const LaurentPoly& f, const Mat4& g, Action act = Action::row) {
  const LaurentPoly h = apply_linear_substitution(f, kXVars, (act == Action::row ? transpose(g) : g).rows());
  if (f.is_zero()) return std::nullopt;
  const auto& [m, c] = *f.terms().begin();
  auto it = h.terms().find(m);
  if (it == h.terms().end()) return std::nullopt;
  const CycNum lambda = it->second / c;
  if (h != f.scaled(lambda)) return std::nullopt;
  return lambda;
}

// Picard degrees modulo the lattice spanned by the degrees of s and t.
inline long picard_class(const Weight& pic) { return ((pic[0] + 2 * pic[1]) % 3 + 3) % 3; }

struct SemiInvariance {
  Report report;
  std::map<std::string, std::vector<CycNum>> scalars;  // per generator, one per group generator
};

inline SemiInvariance verify_semiinvariance(const GeneratorSet& gens, const MatGroup& G, Action act = Action::row) {
  SemiInvariance out;
  Report& r = out.report;
  const auto ab = commutator_and_abelianization(G);
  const auto pic = WeightAssignment::picard();
  std::map<long, std::pair<std::string, std::vector<CycNum>>> by_class;
  for (const auto& n : gens.names) {
    const auto& f = gens[n];
    bool comm = true;
    std::string bad;
    for (auto k : ab.commutator)
      if (auto l = rescaling(f, G[k], act); !l || !l->is_one()) {
        comm = false;
        bad = "element " + std::to_string(k);
        break;
      }
    r.add("semi-invariance", n + " invariant under [G,G]", comm, comm ? std::to_string(ab.commutator.size()) + " elements" : bad);
    std::vector<CycNum> sc;
    bool scalar = true;
    std::string det;
    for (std::size_t j = 0; j < G.generators().size(); ++j) {
      auto l = rescaling(f, G.generators()[j], act);
      if (!l || !l->pow(12).is_one()) {
        scalar = false;
        det += "g" + std::to_string(j + 1) + " does not act by a root of unity; ";
        sc.push_back(CycNum(0));
      } else {
        sc.push_back(*l);
        det += "g" + std::to_string(j + 1) + " -> " + l->to_string() + "; ";
      }
    }
    r.add("semi-invariance", n + " rescaled by each group generator", scalar, det);
    out.scalars[n] = sc;
    if (!scalar) continue;
    Weight p;
    try {
      p = weight_of(f, pic);
    } catch (const MathError& e) {
      r.add("semi-invariance", n + " Picard degree", false, e.what());
      continue;
    }
    const long cls = picard_class(p);
    auto it = by_class.find(cls);
    if (it == by_class.end()) {
      by_class[cls] = {n, sc};
    } else {
      r.add("semi-invariance", n + " character agrees with " + it->second.first + " (class " + std::to_string(cls) + ")",
            it->second.second == sc, det);
    }
  }
  return out;
}

// dim C[x1,y1,x2,y2]^G in bidegree (a,b) by averaging products of complete symmetric
// functions of the two diagonal blocks over the group.
class MolienSeries {
 public:
  MolienSeries(const MatGroup& G, long amax, long bmax) : order_(G.order()) {
    if (!block_diagonal(G)) throw MathError("Molien oracle needs a block-diagonal group");
    for (const auto& g : G.elements()) {
      h1_.push_back(complete(g(0, 0), g(0, 1), g(1, 0), g(1, 1), amax));
      h2_.push_back(complete(g(2, 2), g(2, 3), g(3, 2), g(3, 3), bmax));
    }
  }

  long dim(long a, long b) const {
    CycNum s;
    for (std::size_t k = 0; k < h1_.size(); ++k) s += h1_[k].at(a) * h2_[k].at(b);
    s = s / CycNum(static_cast<long>(order_));
    if (!s.is_rational() || s.coeff(0).get_den() != 1) throw MathError("Molien average is not an integer");
    return s.coeff(0).get_num().get_si();
  }

 private:
  static std::vector<CycNum> complete(const CycNum& p, const CycNum& q, const CycNum& r, const CycNum& s, long n) {
    const CycNum tr = p + s, det = p * s - q * r;
    std::vector<CycNum> h{CycNum(1), tr};
    for (long k = 2; k <= n; ++k) h.push_back(tr * h[k - 1] - det * h[k - 2]);
    h.resize(n + 1);
    return h;
  }
  std::size_t order_;
  std::vector<std::vector<CycNum>> h1_, h2_;
};

// ---------------------------------------------------------------------------
// Graded monomials

struct GradedMonomial {
  std::vector<int> e;  // exponents of the generators with nonzero torus weight
  long s = 0, t = 0;
  friend bool operator<(const GradedMonomial& a, const GradedMonomial& b) {
    return std::tie(a.e, a.s, a.t) < std::tie(b.e, b.s, b.t);
  }
  friend bool operator==(const GradedMonomial& a, const GradedMonomial& b) {
    return a.e == b.e && a.s == b.s && a.t == b.t;
  }
};

struct CandidateGenerator {
  std::string name;
  Weight tw, pic;
  LaurentPoly xpart;  // the polynomial with t1 = t2 = 1
};

// s, t exponents completing Picard degree pw to L, if nonnegative integers exist.
inline std::optional<std::pair<long, long>> st_exponents(const Weight& pw, const Weight& L) {
  const long A = pw[0] - L[0], B = pw[1] - L[1];
  if ((2 * A + B) % 3 != 0) return std::nullopt;
  const long sig = (2 * A + B) / 3, tau = (A + 2 * B) / 3;
  if (sig < 0 || tau < 0) return std::nullopt;
  return std::make_pair(sig, tau);
}

class GradedPieces {
 public:
  static constexpr int kPicBits = 64;
  using PicSet = std::bitset<kPicBits * kPicBits>;

  GradedPieces(const GeneratorSet& gens, long amax, long bmax) : amax_(amax), bmax_(bmax) {
    const auto tw = WeightAssignment::torus(), pic = WeightAssignment::picard();
    for (const auto& n : gens.names) {
      const Weight t = weight_of(gens[n], tw);
      const Weight p = weight_of(gens[n], pic);
      if (t[0] == 0 && t[1] == 0) {
        st_pic_.push_back(p);
        continue;
      }
      if (t[0] < 0 || t[1] < 0) throw MathError(n + ": negative torus weight");
      if (p[0] < 0 || p[1] < 0) throw MathError(n + ": negative Picard degree on a torus-weighted generator");
      LaurentPoly x;
      for (const auto& [m, c] : gens[n].terms()) {
        Monomial mm;
        for (const auto& v : kXVars)
          if (int e = m.exponent(v)) mm = mm * Monomial::var(v, e);
        x.add_term(mm, c);
      }
      gens_.push_back({n, t, p, x});
    }
    if (st_pic_.size() != 2 || st_pic_[0] != Weight{-2, 1} || st_pic_[1] != Weight{1, -2})
      throw MathError("expected exactly the two torus-invariant generators s, t of Picard degrees (-2,1), (1,-2)");
    build_reach();
  }

  const std::vector<CandidateGenerator>& generators() const { return gens_; }
  long amax() const { return amax_; }
  long bmax() const { return bmax_; }

  // Can a product of generators of torus weight r, starting from Picard degree c, be completed to L?
  bool completable(const Weight& r, const Weight& c, const Weight& L) const {
    if (r[0] < 0 || r[1] < 0) return false;
    check_box(r);
    const long X = -(2 * (c[0] - L[0]) + (c[1] - L[1])), Y = -((c[0] - L[0]) + 2 * (c[1] - L[1]));
    const long cls = ((X % 3) + 3) % 3;
    for (const auto& [u, v] : pareto_[idx(r)][cls])
      if (u >= X && v >= Y) return true;
    return false;
  }

  Weight picard_of(const std::vector<int>& e) const {
    Weight p{0, 0};
    for (std::size_t j = 0; j < e.size(); ++j) p = wadd(p, wscale(e[j], gens_[j].pic));
    return p;
  }

  // Every graded monomial of Picard degree L and torus weight w, in DFS order. The
  // visitor returns false to stop early.
  void visit(const Weight& L, const Weight& w, const std::function<bool(const GradedMonomial&)>& f) const {
    if (w[0] < 0 || w[1] < 0) return;
    check_box(w);
    std::vector<int> e(gens_.size(), 0);
    bool stop = false;
    std::function<void(std::size_t, Weight, Weight)> rec = [&](std::size_t j, Weight rem, Weight c) {
      if (stop) return;
      if (rem[0] == 0 && rem[1] == 0) {
        if (auto st = st_exponents(c, L)) {
          GradedMonomial m{e, st->first, st->second};
          if (!f(m)) stop = true;
        }
        return;
      }
      if (j == gens_.size() || !completable(rem, c, L)) return;
      const auto& g = gens_[j];
      long bound = LONG_MAX;
      if (g.tw[0] > 0) bound = std::min(bound, rem[0] / g.tw[0]);
      if (g.tw[1] > 0) bound = std::min(bound, rem[1] / g.tw[1]);
      for (long k = bound; k >= 0 && !stop; --k) {
        e[j] = static_cast<int>(k);
        rec(j + 1, wsub(rem, wscale(k, g.tw)), wadd(c, wscale(k, g.pic)));
      }
      e[j] = 0;
    };
    rec(0, w, {0, 0});
  }

  std::vector<GradedMonomial> enumerate(const Weight& L, const Weight& w) const {
    std::vector<GradedMonomial> out;
    visit(L, w, [&](const GradedMonomial& m) {
      out.push_back(m);
      return true;
    });
    return out;
  }

  // A random monomial of degree (L, w) built by random descent through completable states.
  std::optional<GradedMonomial> sample(const Weight& L, const Weight& w, std::mt19937_64& rng) const {
    if (!completable(w, {0, 0}, L)) return std::nullopt;
    std::vector<int> e(gens_.size(), 0);
    Weight rem = w, c{0, 0};
    std::vector<std::size_t> opts;
    while (rem[0] != 0 || rem[1] != 0) {
      opts.clear();
      for (std::size_t j = 0; j < gens_.size(); ++j)
        if (completable(wsub(rem, gens_[j].tw), wadd(c, gens_[j].pic), L)) opts.push_back(j);
      if (opts.empty()) return std::nullopt;
      const std::size_t j = opts[rng() % opts.size()];
      ++e[j];
      rem = wsub(rem, gens_[j].tw);
      c = wadd(c, gens_[j].pic);
    }
    auto st = st_exponents(c, L);
    if (!st) return std::nullopt;
    return GradedMonomial{e, st->first, st->second};
  }

  // Torus weight and Picard degree recomputed from the exponents.
  std::pair<Weight, Weight> bidegree(const GradedMonomial& m) const {
    Weight t{0, 0}, p{0, 0};
    for (std::size_t j = 0; j < m.e.size(); ++j) {
      t = wadd(t, wscale(m.e[j], gens_[j].tw));
      p = wadd(p, wscale(m.e[j], gens_[j].pic));
    }
    p = wadd(p, wadd(wscale(m.s, st_pic_[0]), wscale(m.t, st_pic_[1])));
    return {t, p};
  }

  std::string to_string(const GradedMonomial& m) const {
    std::string s;
    for (std::size_t j = 0; j < m.e.size(); ++j)
      if (m.e[j]) s += (s.empty() ? "" : "*") + gens_[j].name + (m.e[j] > 1 ? "^" + std::to_string(m.e[j]) : "");
    if (m.s) s += (s.empty() ? "s" : "*s") + (m.s > 1 ? "^" + std::to_string(m.s) : std::string());
    if (m.t) s += (s.empty() ? "t" : "*t") + (m.t > 1 ? "^" + std::to_string(m.t) : std::string());
    return s.empty() ? "1" : s;
  }

  LaurentPoly xpart(const GradedMonomial& m) const {
    LaurentPoly f(1);
    for (std::size_t j = 0; j < m.e.size(); ++j)
      if (m.e[j]) f *= gens_[j].xpart.pow(m.e[j]);
    return f;
  }

 private:
  std::size_t idx(const Weight& r) const { return static_cast<std::size_t>(r[0] * (bmax_ + 1) + r[1]); }
  void check_box(const Weight& r) const {
    if (r[0] > amax_ || r[1] > bmax_) throw MathError("weight " + w2s(r) + " outside the precomputed box");
  }

  void build_reach() {
    if (amax_ < 0 || bmax_ < 0) throw MathError("empty weight box");
    const std::size_t n = static_cast<std::size_t>((amax_ + 1) * (bmax_ + 1));
    std::vector<PicSet> reach(n);
    pareto_.assign(n, {});
    reach[idx({0, 0})].set(0);
    for (long s = 1; s <= amax_ + bmax_; ++s)
      for (long a = std::max(0L, s - bmax_); a <= std::min(s, amax_); ++a) {
        const Weight r{a, s - a};
        PicSet& cur = reach[idx(r)];
        for (const auto& g : gens_) {
          const Weight q = wsub(r, g.tw);
          if (q[0] < 0 || q[1] < 0) continue;
          const PicSet& prev = reach[idx(q)];
          if (prev.none()) continue;
          cur |= prev << static_cast<std::size_t>(g.pic[0] * kPicBits + g.pic[1]);
        }
        for (long d1 = 0; d1 < kPicBits; ++d1)
          if (cur[static_cast<std::size_t>((kPicBits - 1) * kPicBits + d1)] || cur[static_cast<std::size_t>(d1 * kPicBits + kPicBits - 1)])
            throw MathError("Picard degree overflow in the reach table");
      }
    for (std::size_t k = 0; k < n; ++k) {
      std::array<std::vector<std::pair<long, long>>, 3> pts;
      for (std::size_t bit = reach[k]._Find_first(); bit < reach[k].size(); bit = reach[k]._Find_next(bit)) {
        const long d0 = static_cast<long>(bit) / kPicBits, d1 = static_cast<long>(bit) % kPicBits;
        const long u = 2 * d0 + d1, v = d0 + 2 * d1;
        pts[u % 3].push_back({u, v});
      }
      for (int c = 0; c < 3; ++c) {
        auto& p = pts[c];
        std::sort(p.begin(), p.end(), [](auto& x, auto& y) { return x.first > y.first || (x.first == y.first && x.second > y.second); });
        long best = LONG_MIN;
        for (const auto& q : p)
          if (q.second > best) {
            pareto_[k][c].push_back(q);
            best = q.second;
          }
      }
    }
  }

  long amax_, bmax_;
  std::vector<CandidateGenerator> gens_;
  std::vector<Weight> st_pic_;
  std::vector<std::array<std::vector<std::pair<long, long>>, 3>> pareto_;
};

// ---------------------------------------------------------------------------
// Ranks of graded pieces

// Values of the candidate generators at fixed random points modulo one prime.
struct PrimeEvaluation {
  PrimeEmbedding prime;
  std::size_t npoints = 0;
  std::vector<std::vector<u64>> values;  // per generator, per point

  PrimeEvaluation(const GradedPieces& gp, const PrimeEmbedding& pe, std::size_t npts, std::uint64_t seed)
      : prime(pe), npoints(npts) {
    std::mt19937_64 rng(seed ^ pe.p);
    std::vector<std::array<u64, 4>> pts(npts);
    for (auto& q : pts)
      for (auto& x : q) x = 1 + rng() % (pe.p - 1);
    for (const auto& g : gp.generators()) {
      std::vector<std::pair<u64, std::array<int, 4>>> terms;
      for (const auto& [m, c] : g.xpart.terms()) {
        std::array<int, 4> ex{};
        for (int i = 0; i < 4; ++i) ex[i] = m.exponent(kXVars[i]);
        terms.push_back({pe.embed(c), ex});
      }
      std::vector<u64> v(npts);
      for (std::size_t k = 0; k < npts; ++k) {
        u64 acc = 0;
        for (const auto& [c, ex] : terms) {
          u64 term = c;
          for (int i = 0; i < 4; ++i) term = mulmod(term, powmod(pts[k][i], ex[i], pe.p), pe.p);
          acc = addmod(acc, term, pe.p);
        }
        v[k] = acc;
      }
      values.push_back(std::move(v));
    }
  }

  std::vector<u64> row(const GradedMonomial& m, std::size_t ncols) const {
    std::vector<u64> r(ncols, 1);
    for (std::size_t j = 0; j < m.e.size(); ++j)
      if (m.e[j])
        for (std::size_t k = 0; k < ncols; ++k) r[k] = mulmod(r[k], powmod(values[j][k], m.e[j], prime.p), prime.p);
    return r;
  }
};

struct CellRank {
  Weight L{}, w{};
  long target = 0;                // the LRR value
  std::vector<std::size_t> ranks;  // one per prime
  std::size_t tried = 0;           // distinct monomials used
  bool exhaustive = false;         // sampling ran out and the DFS was used
  bool complete = false;           // every monomial of the piece was used
  std::string witness;             // one monomial of the piece, when nonempty

  bool certified() const {
    for (auto r : ranks)
      if (static_cast<long>(r) < target) return false;
    return !ranks.empty();
  }
  bool exceeds() const {
    for (auto r : ranks)
      if (static_cast<long>(r) > target) return true;
    return false;
  }
};

struct RankOptions {
  std::size_t extra_rows = 4;      // monomials added after the target is met, to watch for excess
  std::size_t sample_factor = 40;  // sampling budget per unit of target
  std::size_t sample_floor = 200;
  std::size_t dfs_cap = 200000;
  std::uint64_t seed = 1;
};

class RankOracle {
 public:
  RankOracle(const GradedPieces& gp, std::size_t nprimes, long max_target, std::uint64_t seed = 1) : gp_(gp) {
    if (nprimes < 1) throw MathError("need at least one prime");
    ncols_ = static_cast<std::size_t>(max_target) + 8;
    for (const auto& pe : default_primes(nprimes)) evals_.emplace_back(gp, pe, ncols_, seed);
  }

  const GradedPieces& pieces() const { return gp_; }
  std::vector<u64> primes() const {
    std::vector<u64> p;
    for (const auto& e : evals_) p.push_back(e.prime.p);
    return p;
  }

  CellRank rank(const Weight& L, const Weight& w, long target, const RankOptions& opt = {}) const {
    if (target + 2 > static_cast<long>(ncols_)) throw MathError("target exceeds the evaluation width");
    CellRank out;
    out.L = L;
    out.w = w;
    out.target = target;
    const std::size_t ncols = static_cast<std::size_t>(target) + 2;
    std::vector<IncrementalRank> basis;
    for (const auto& e : evals_) basis.emplace_back(ncols, e.prime.p);
    std::set<GradedMonomial> seen;
    std::size_t extra = 0;
    auto full = [&] {
      for (const auto& b : basis)
        if (static_cast<long>(b.rank()) < target) return false;
      return true;
    };
    auto add = [&](const GradedMonomial& m) {
      if (!seen.insert(m).second) return;
      if (out.witness.empty()) out.witness = gp_.to_string(m);
      const bool was_full = full();
      for (std::size_t i = 0; i < evals_.size(); ++i) basis[i].add(evals_[i].row(m, ncols));
      if (was_full) ++extra;
    };
    auto done = [&] { return full() && extra >= opt.extra_rows; };

    std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(L[0] * 1000003 + L[1]) * 0xBF58476D1CE4E5B9ULL ^
                        static_cast<std::uint64_t>(w[0] * 1009 + w[1]));
    const std::size_t budget = opt.sample_floor + opt.sample_factor * static_cast<std::size_t>(std::max(0L, target));
    if (gp_.completable(w, {0, 0}, L)) {
      for (std::size_t k = 0; k < budget && !done(); ++k)
        if (auto m = gp_.sample(L, w, rng)) add(*m);
      if (!full()) {
        out.exhaustive = true;
        std::size_t visited = 0;
        bool capped = false;
        gp_.visit(L, w, [&](const GradedMonomial& m) {
          add(m);
          if (++visited >= opt.dfs_cap) {
            capped = true;
            return false;
          }
          return !done();
        });
        out.complete = !capped;
      }
    } else {
      out.complete = true;
    }
    for (const auto& b : basis) out.ranks.push_back(b.rank());
    out.tried = seen.size();
    return out;
  }

 private:
  const GradedPieces& gp_;
  std::size_t ncols_ = 0;
  std::vector<PrimeEvaluation> evals_;
};

// Rank over Q(z) of the x-expansions, by exact elimination. For audits of small pieces.
inline std::size_t exact_piece_rank(const GradedPieces& gp, const std::vector<GradedMonomial>& ms) {
  std::vector<LaurentPoly> polys;
  std::map<Monomial, std::size_t> cols;
  for (const auto& m : ms) {
    polys.push_back(gp.xpart(m));
    for (const auto& [mm, c] : polys.back().terms()) cols.emplace(mm, cols.size());
  }
  if (polys.empty()) return 0;
  Matrix<CycNum> M(polys.size(), std::vector<CycNum>(cols.size()));
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (const auto& [mm, c] : polys[i].terms()) M[i][cols.at(mm)] = c;
  return exact_rank(M);
}

// ---------------------------------------------------------------------------
// Seeds and regularity

struct SeedSet {
  std::vector<Weight> S, Sprime;
  std::vector<Weight> all() const {
    std::vector<Weight> v = S;
    v.insert(v.end(), Sprime.begin(), Sprime.end());
    return v;
  }
};

inline SeedSet load_seeds(const std::filesystem::path& dir) {
  const auto p = dir / "seeds.txt";
  SeedSet s;
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    std::vector<Weight>* dst = tok[0] == "S" ? &s.S : tok[0] == "S'" ? &s.Sprime : nullptr;
    if (!dst) seed_fail(p, ln, "expected 'S' or \"S'\"");
    std::istringstream is(text.substr(tok[0].size()));
    std::string piece;
    while (std::getline(is, piece, ';')) {
      auto t = split_ws(piece);
      if (t.size() != 2) seed_fail(p, ln, "expected 'm n' pairs separated by ';'");
      try {
        dst->push_back({std::stol(t[0]), std::stol(t[1])});
      } catch (const std::exception&) {
        seed_fail(p, ln, "bad integer");
      }
    }
  }
  if (s.S.empty()) throw DataError("seeds.txt: no S line");
  return s;
}

inline std::vector<Weight> mirror_seed_set(const std::vector<Weight>& S) {
  std::vector<Weight> out;
  for (const auto& L : S)
    if (L[0] != L[1]) out.push_back(swapped(L));
  return out;
}

struct RegularityRule {
  std::string name;
  std::function<bool(long, long)> region;  // bundles mL1 + nL2 that are regular
  std::vector<Weight> family;              // the globally generated bundles B
};

inline std::vector<RegularityRule> regularity_rules() {
  std::vector<RegularityRule> r{
      {"m>=n+2, n in {0,1}; L1", [](long m, long n) { return m >= n + 2 && (n == 0 || n == 1); }, {{1, 0}}},
      {"n>=2, m in {n,n+1}; L1+L2", [](long m, long n) { return n >= 2 && (m == n || m == n + 1); }, {{1, 1}}},
      {"m>=n+2, n>=2; L1, L1+L2", [](long m, long n) { return m >= n + 2 && n >= 2; }, {{1, 0}, {1, 1}}},
  };
  const std::size_t k = r.size();
  for (std::size_t i = 0; i < k; ++i) {
    RegularityRule m;
    m.name = "mirror of " + r[i].name;
    auto f = r[i].region;
    m.region = [f](long a, long b) { return f(b, a); };
    for (const auto& B : r[i].family) m.family.push_back(swapped(B));
    r.push_back(m);
  }
  return r;
}

struct ClosureResult {
  std::set<Weight> covered;
  std::vector<Weight> uncovered;
  std::map<Weight, std::pair<Weight, Weight>> witness;  // cell -> (regular L, added B)
  std::map<Weight, std::string> rule;

  bool full() const { return uncovered.empty(); }
  // The chain of cells that generates `c`, back to a seed.
  std::vector<Weight> chain(Weight c) const {
    std::vector<Weight> out{c};
    for (auto it = witness.find(c); it != witness.end(); it = witness.find(c)) {
      c = it->second.first;
      out.push_back(c);
    }
    return out;
  }
};

// Sections of a cell are generated once it is a seed, or it is L + B with L marked and
// regular for a rule whose family contains B, and B marked.
inline ClosureResult regularity_closure(const std::vector<Weight>& seeds, const std::vector<RegularityRule>& rules, long N) {
  ClosureResult res;
  for (const auto& s : seeds)
    if (s[0] >= 0 && s[1] >= 0) res.covered.insert(s);
  for (bool grew = true; grew;) {
    grew = false;
    for (long m = 0; m <= N; ++m)
      for (long n = 0; n <= N; ++n) {
        const Weight c{m, n};
        if (res.covered.count(c)) continue;
        for (const auto& r : rules) {
          for (const auto& B : r.family) {
            const Weight L = wsub(c, B);
            if (L[0] < 0 || L[1] < 0 || !r.region(L[0], L[1])) continue;
            if (!res.covered.count(L) || !res.covered.count(B)) continue;
            res.covered.insert(c);
            res.witness[c] = {L, B};
            res.rule[c] = r.name;
            grew = true;
            break;
          }
          if (res.covered.count(c)) break;
        }
      }
  }
  for (long m = 0; m <= N; ++m)
    for (long n = 0; n <= N; ++n)
      if (!res.covered.count({m, n})) res.uncovered.push_back({m, n});
  return res;
}

inline Report regularity_report(const SeedSet& seeds, long N) {
  Report r;
  const auto mirrored = mirror_seed_set(seeds.S);
  r.add("regularity", "S' is the mirror of S without its symmetric members",
        sorted_weights(mirrored) == sorted_weights(seeds.Sprime), "mirror " + weights_to_string(mirrored));
  const auto rules = regularity_rules();
  const auto all = seeds.all();
  const auto cl = regularity_closure(all, rules, N);
  std::string det = std::to_string(cl.covered.size()) + " cells covered";
  if (!cl.full()) det += ", uncovered " + weights_to_string(std::vector<Weight>(cl.uncovered.begin(), cl.uncovered.begin() + std::min<std::size_t>(10, cl.uncovered.size())));
  r.add("regularity", "closure covers every (m,n) with 0 <= m,n <= " + std::to_string(N), cl.full(), det);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto fewer = all;
    fewer.erase(fewer.begin() + static_cast<long>(i));
    const auto c = regularity_closure(fewer, rules, N);
    r.add("regularity", "removing seed " + w2s(all[i]) + " breaks coverage", !c.full(),
          c.full() ? "still covered" : std::to_string(c.uncovered.size()) + " uncovered, first " + w2s(c.uncovered.front()));
  }
  return r;
}

// ---------------------------------------------------------------------------
// The equality verdict

struct VerdictOptions {
  Weight ell = kDefaultEll;
  long D = 130;
  std::size_t nprimes = 2;
  unsigned threads = 0;  // 0: hardware concurrency
  RankOptions rank;
};

struct Verdict {
  Report report;
  std::vector<CellRank> cells;  // ordered by (L, w)
  std::vector<u64> primes;
};

inline Verdict cox_equality_verdict(const std::vector<Weight>& S, const std::vector<FixedPointDatum>& pts,
                                    const GeneratorSet& gens, const VerdictOptions& opt = {}) {
  Verdict v;
  struct Job {
    Weight L, w;
    long target;
  };
  std::vector<Job> jobs;
  long amax = opt.D / opt.ell[0], bmax = opt.D / opt.ell[1], tmax = 0;
  std::map<Weight, DimensionTable> tables;
  for (const auto& L : S) {
    tables[L] = hilbert_weight_table(L, pts, opt.ell, opt.D);
    for (long a = 0; a <= amax; ++a)
      for (long b = 0; b <= bmax && pair_with(opt.ell, {a, b}) <= opt.D; ++b) {
        auto it = tables[L].find({a, b});
        const long t = it == tables[L].end() ? 0 : it->second.get_si();
        jobs.push_back({L, {a, b}, t});
        tmax = std::max(tmax, t);
      }
  }
  const GradedPieces gp(gens, amax, bmax);
  const RankOracle oracle(gp, opt.nprimes, tmax, opt.rank.seed);
  v.primes = oracle.primes();
  v.cells.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::string error;
  std::mutex mu;
  auto work = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      try {
        v.cells[i] = oracle.rank(jobs[i].L, jobs[i].w, jobs[i].target, opt.rank);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(mu);
        if (error.empty()) error = e.what();
      }
    }
  };
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < nt; ++k) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (!error.empty()) throw MathError(error);

  for (const auto& L : S) {
    std::size_t n = 0, nonzero = 0, short_cells = 0, excess = 0, dfs = 0;
    std::string first_short, first_excess;
    for (const auto& c : v.cells) {
      if (c.L != L) continue;
      ++n;
      nonzero += c.target > 0;
      dfs += c.exhaustive;
      if (!c.certified()) {
        if (!short_cells++) {
          first_short = w2s(c.w) + " lrr " + std::to_string(c.target) + " ranks";
          for (auto r : c.ranks) first_short += " " + std::to_string(r);
        }
      }
      if (c.exceeds()) {
        if (!excess++) first_excess = w2s(c.w) + " lrr " + std::to_string(c.target);
      }
    }
    const std::string nm = "L=" + w2s(L);
    v.report.add("cox", nm + " graded pieces reach the sections", short_cells == 0,
                 std::to_string(n) + " cells (" + std::to_string(nonzero) + " nonzero), " + std::to_string(short_cells) +
                     " short" + (first_short.empty() ? "" : ", first " + first_short) + ", " + std::to_string(dfs) +
                     " needed the exhaustive search");
    v.report.add("cox", nm + " no graded piece exceeds the sections", excess == 0,
                 excess ? std::to_string(excess) + " cells, first " + first_excess : "rank <= lrr on every cell");
  }
  return v;
}

}  // namespace coxtorus
