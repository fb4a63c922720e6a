#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxtorus/error.hpp"
#include "coxtorus/intmatrix.hpp"

namespace coxtorus {

using LVec = std::vector<long>;

inline long dot(const LVec& a, const LVec& b) {
  if (a.size() != b.size()) throw MathError("dimension mismatch in pairing");
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline LVec primitive(LVec v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, x);
  if (g > 1)
    for (long& x : v) x /= g;
  return v;
}

inline bool is_zero_vec(const LVec& v) {
  return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

inline std::string vec_to_string(const LVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

inline std::size_t lattice_rank(const std::vector<LVec>& vs) {
  if (vs.empty()) return 0;
  return smith_normal_form(IntMatrix::from_rows(vs)).rank;
}

// Integer vectors u with <u, v> = 0 for all v in vs, as a saturated basis.
inline std::vector<LVec> orthogonal_basis(const std::vector<LVec>& vs, std::size_t n) {
  if (vs.empty()) {
    std::vector<LVec> out;
    for (std::size_t i = 0; i < n; ++i) {
      LVec e(n, 0);
      e[i] = 1;
      out.push_back(e);
    }
    return out;
  }
  IntMatrix K = kernel_basis(IntMatrix::from_rows(vs));
  std::vector<LVec> out;
  for (std::size_t i = 0; i < K.rows(); ++i) out.push_back(K.row(i));
  return out;
}

// Pointed rational polyhedral cone given by generators. Facet normals are inward,
// primitive and determined up to the equations of the linear span.
class Cone {
 public:
  Cone() = default;
  Cone(std::size_t n, std::vector<LVec> gens) : n_(n) {
    std::set<LVec> uniq;
    for (auto& g : gens) {
      if (g.size() != n) throw MathError("generator of wrong dimension");
      if (!is_zero_vec(g)) uniq.insert(primitive(g));
    }
    std::vector<LVec> all(uniq.begin(), uniq.end());
    dim_ = lattice_rank(all);
    equations_ = dim_ ? orthogonal_basis(all, n) : orthogonal_basis({}, n);
    compute_facets(all);
    // extremal rays: those lying on enough facets to be pinned down
    for (const auto& g : all) {
      if (dim_ <= 1) {
        rays_.push_back(g);
        continue;
      }
      std::vector<LVec> tight = equations_;
      for (const auto& u : facets_)
        if (dot(u, g) == 0) tight.push_back(u);
      if (lattice_rank(tight) == n - 1) rays_.push_back(g);
    }
    if (dim_ == 1 && rays_.size() > 1) throw MathError("cone is not pointed: " + vec_to_string(rays_[0]));
    if (dim_ >= 2 && !is_pointed()) throw MathError("cone is not pointed");
  }

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return dim_; }
  const std::vector<LVec>& rays() const { return rays_; }
  const std::vector<LVec>& facets() const { return facets_; }
  const std::vector<LVec>& equations() const { return equations_; }
  bool full_dimensional() const { return dim_ == n_; }

  bool contains(const LVec& v) const {
    for (const auto& e : equations_)
      if (dot(e, v) != 0) return false;
    for (const auto& u : facets_)
      if (dot(u, v) < 0) return false;
    return true;
  }
  bool contains_interior(const LVec& v) const {
    if (!contains(v)) return false;
    for (const auto& u : facets_)
      if (dot(u, v) == 0) return false;
    return true;
  }

  // Functional positive on every nonzero point of the cone.
  LVec positive_functional() const {
    LVec l(n_, 0);
    for (const auto& u : facets_)
      for (std::size_t i = 0; i < n_; ++i) l[i] += u[i];
    if (dim_ == 1) l = rays_[0];
    return l;
  }

  std::set<LVec> ray_set() const { return {rays_.begin(), rays_.end()}; }
  friend bool operator==(const Cone& a, const Cone& b) { return a.n_ == b.n_ && a.ray_set() == b.ray_set(); }
  friend bool operator<(const Cone& a, const Cone& b) { return a.ray_set() < b.ray_set(); }

  std::string to_string() const {
    std::string s = "cone(";
    for (std::size_t i = 0; i < rays_.size(); ++i) s += (i ? "," : "") + vec_to_string(rays_[i]);
    return s + ")";
  }

 private:
  bool is_pointed() const {
    // pointed iff no nonzero combination of rays vanishes on all facets
    std::vector<LVec> tight = equations_;
    for (const auto& u : facets_) tight.push_back(u);
    return lattice_rank(tight) == n_;
  }

  void compute_facets(const std::vector<LVec>& all) {
    if (dim_ == 0) return;
    if (dim_ == 1) {
      facets_.push_back(all[0]);
      return;
    }
    // facets keyed by the generators they vanish on; for lower-dimensional cones
    // several normals represent the same facet
    std::map<std::vector<std::size_t>, LVec> found;
    const std::size_t k = dim_ - 1;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    auto visit = [&] {
      std::vector<LVec> rows = equations_;
      for (std::size_t i : idx) rows.push_back(all[i]);
      if (lattice_rank(rows) != n_ - 1) return;
      LVec u = orthogonal_basis(rows, n_).at(0);
      bool pos = true, neg = true;
      for (const auto& g : all) {
        long d = dot(u, g);
        if (d < 0) pos = false;
        if (d > 0) neg = false;
      }
      if (!pos && !neg) return;
      if (!pos)
        for (long& x : u) x = -x;
      std::vector<std::size_t> zero;
      for (std::size_t i = 0; i < all.size(); ++i)
        if (dot(u, all[i]) == 0) zero.push_back(i);
      found.emplace(zero, u);
    };
    if (all.size() >= k) {
      for (;;) {
        visit();
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == all.size() - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    for (const auto& [key, u] : found) facets_.push_back(u);
    std::sort(facets_.begin(), facets_.end());
  }

  std::size_t n_ = 0, dim_ = 0;
  std::vector<LVec> rays_, facets_, equations_;
};

inline Cone dual_cone(const Cone& c) {
  if (!c.full_dimensional()) throw MathError("dual of a lower-dimensional cone is not pointed");
  return Cone(c.ambient(), c.facets());
}

// All faces, from {0} up to c itself, each generated by a subset of the rays.
inline std::vector<Cone> faces(const Cone& c) {
  std::set<std::set<LVec>> seen;
  std::vector<Cone> out;
  const auto& F = c.facets();
  const std::size_t m = F.size();
  if (m > 20) throw MathError("too many facets for face enumeration");
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    std::vector<LVec> gens;
    for (const auto& r : c.rays()) {
      bool on = true;
      for (std::size_t i = 0; i < m && on; ++i)
        if ((mask >> i) & 1UL) on = dot(F[i], r) == 0;
      if (on) gens.push_back(r);
    }
    std::set<LVec> key(gens.begin(), gens.end());
    if (seen.insert(key).second) out.emplace_back(c.ambient(), gens);
  }
  if (seen.insert(std::set<LVec>{}).second) out.emplace_back(c.ambient(), std::vector<LVec>{});
  std::sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return a < b;
  });
  return out;
}

inline bool is_face_of(const Cone& f, const Cone& c) {
  for (const auto& g : faces(c))
    if (g == f) return true;
  return false;
}

namespace detail {

// Lattice points of the half-open parallelepiped spanned by linearly independent
// columns, found by box enumeration and exact barycentric test.
inline void parallelepiped_points(const std::vector<LVec>& basis, std::size_t n, std::set<LVec>& out) {
  const std::size_t d = basis.size();
  std::vector<long> lo(n, 0), hi(n, 0);
  for (const auto& b : basis)
    for (std::size_t i = 0; i < n; ++i) (b[i] < 0 ? lo[i] : hi[i]) += b[i];
  // solve v = sum lambda_j b_j using rational elimination on the n x d system
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) A[i][j] = basis[j][i];
  // left inverse via normal equations would lose exactness; use pivot rows instead
  std::vector<std::size_t> prow;
  {
    auto M = A;
    std::size_t r = 0;
    std::vector<std::size_t> rows_used(n);
    std::iota(rows_used.begin(), rows_used.end(), 0);
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t p = r;
      while (p < n && sgn(M[p][c]) == 0) ++p;
      if (p == n) throw MathError("parallelepiped basis is dependent");
      std::swap(M[p], M[r]);
      std::swap(rows_used[p], rows_used[r]);
      for (std::size_t i = r + 1; i < n; ++i) {
        if (sgn(M[i][c]) == 0) continue;
        Rational f = M[i][c] / M[r][c];
        for (std::size_t j = c; j < d; ++j) M[i][j] -= f * M[r][j];
      }
      ++r;
    }
    prow.assign(rows_used.begin(), rows_used.begin() + static_cast<std::ptrdiff_t>(d));
  }
  std::vector<std::vector<Rational>> B(d, std::vector<Rational>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) B[i][j] = A[prow[i]][j];
  // invert B
  std::vector<std::vector<Rational>> Binv(d, std::vector<Rational>(d));
  {
    auto M = B;
    for (std::size_t i = 0; i < d; ++i) Binv[i][i] = 1;
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t p = c;
      while (sgn(M[p][c]) == 0) ++p;
      std::swap(M[p], M[c]);
      std::swap(Binv[p], Binv[c]);
      Rational inv = 1 / M[c][c];
      for (auto& x : M[c]) x *= inv;
      for (auto& x : Binv[c]) x *= inv;
      for (std::size_t i = 0; i < d; ++i) {
        if (i == c || sgn(M[i][c]) == 0) continue;
        Rational f = M[i][c];
        for (std::size_t j = 0; j < d; ++j) {
          M[i][j] -= f * M[c][j];
          Binv[i][j] -= f * Binv[c][j];
        }
      }
    }
  }
  LVec v(lo);
  for (;;) {
    std::vector<Rational> lam(d);
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) {
      for (std::size_t i = 0; i < d; ++i) lam[j] += Binv[j][i] * v[prow[i]];
      ok = sgn(lam[j]) >= 0 && lam[j] < 1;
    }
    if (ok) {
      // confirm v really lies in the span
      for (std::size_t i = 0; i < n && ok; ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < d; ++j) s += lam[j] * basis[j][i];
        ok = s == v[i];
      }
      if (ok && !is_zero_vec(v)) out.insert(v);
    }
    std::size_t i = 0;
    while (i < n && v[i] == hi[i]) v[i] = lo[i], ++i;
    if (i == n) break;
    ++v[i];
  }
}

}  // namespace detail

// Minimal generating set of the lattice points of a pointed cone.
inline std::vector<LVec> hilbert_basis(const Cone& c) {
  const std::size_t n = c.ambient(), d = c.dim();
  if (d == 0) return {};
  const auto& R = c.rays();
  std::set<LVec> cand(R.begin(), R.end());
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    std::vector<LVec> basis;
    for (std::size_t i : idx) basis.push_back(R[i]);
    if (lattice_rank(basis) == d) detail::parallelepiped_points(basis, n, cand);
    std::size_t i = d;
    while (i > 0 && idx[i - 1] == R.size() - d + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  const LVec ell = c.positive_functional();
  std::vector<LVec> sorted(cand.begin(), cand.end());
  std::stable_sort(sorted.begin(), sorted.end(), [&](const LVec& a, const LVec& b) { return dot(ell, a) < dot(ell, b); });
  std::vector<LVec> H;
  for (const auto& p : sorted) {
    bool reducible = false;
    for (const auto& h : H) {
      LVec r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = p[i] - h[i];
      if (!is_zero_vec(r) && c.contains(r)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) H.push_back(p);
  }
  std::sort(H.begin(), H.end());
  return H;
}

// Finitely generated submonoid of a lattice.
struct AffineSemigroup {
  std::size_t n = 0;
  std::vector<LVec> gens;
  Cone cone() const { return Cone(n, gens); }
};

// Exact membership by depth-first search; a functional strictly positive on the
// nonzero generators bounds the depth.
inline bool semigroup_member(const AffineSemigroup& S, const LVec& m) {
  if (is_zero_vec(m)) return true;
  std::vector<LVec> gs;
  for (const auto& g : S.gens)
    if (!is_zero_vec(g)) gs.push_back(g);
  if (gs.empty()) return false;
  Cone c(S.n, gs);
  if (!c.contains(m)) return false;
  const LVec ell = c.positive_functional();
  std::map<std::pair<LVec, std::size_t>, bool> memo;
  auto rec = [&](auto&& self, const LVec& v, std::size_t maxg) -> bool {
    if (is_zero_vec(v)) return true;
    auto key = std::make_pair(v, maxg);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    for (std::size_t k = 0; k <= maxg && !ok; ++k) {
      LVec r(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - gs[k][i];
      if (dot(ell, r) < 0 || !c.contains(r)) continue;
      ok = self(self, r, k);
    }
    memo.emplace(key, ok);
    return ok;
  };
  return rec(rec, m, gs.size() - 1);
}

// The orbit attached to the face F of cone(S) is normal iff
// S + (M ∩ span F) equals (M ∩ cone S) + (M ∩ span F). Checked exactly by mapping
// to M / (M ∩ span F) and testing every Hilbert basis element of cone(S).
inline bool orbit_is_normal(const AffineSemigroup& S, const Cone& F) {
  const std::size_t n = S.n;
  Cone C = S.cone();
  if (!C.full_dimensional()) throw MathError("orbit normality test needs a full-dimensional semigroup cone");
  if (!is_face_of(F, C)) throw MathError("not a face of the semigroup cone: " + F.to_string());
  std::vector<LVec> phi = orthogonal_basis(F.rays(), n);
  auto image = [&](const LVec& m) {
    LVec r;
    for (const auto& u : phi) r.push_back(dot(u, m));
    return r;
  };
  AffineSemigroup Q{phi.size(), {}};
  for (const auto& s : S.gens) {
    LVec im = image(s);
    if (!is_zero_vec(im)) Q.gens.push_back(im);
  }
  if (Q.n == 0) return true;
  for (const auto& h : hilbert_basis(C))
    if (!semigroup_member(Q, image(h))) return false;
  return true;
}

// sigma^vee ∩ tau^perp
inline Cone face_duality(const Cone& sigma, const Cone& tau) {
  Cone dual = dual_cone(sigma);
  std::vector<LVec> gens;
  for (const auto& m : dual.rays()) {
    bool perp = true;
    for (const auto& r : tau.rays()) perp = perp && dot(m, r) == 0;
    if (perp) gens.push_back(m);
  }
  return Cone(sigma.ambient(), gens);
}

// Face tau of sigma whose orbit is cut out exactly by the given coordinates:
// u_m vanishes on O(tau) iff m is not in tau^perp.
inline std::set<std::string> vanishing_set(const std::vector<std::pair<std::string, LVec>>& dual_gens,
                                           const Cone& tau) {
  std::set<std::string> v;
  for (const auto& [name, m] : dual_gens)
    for (const auto& r : tau.rays())
      if (dot(m, r) != 0) {
        v.insert(name);
        break;
      }
  return v;
}

inline Cone orbit_face_of_vanishing(const std::vector<std::pair<std::string, LVec>>& dual_gens,
                                    const std::set<std::string>& vanishing, const Cone& sigma) {
  for (const auto& tau : faces(sigma))
    if (vanishing_set(dual_gens, tau) == vanishing) return tau;
  std::string names;
  for (const auto& s : vanishing) names += (names.empty() ? "" : ",") + s;
  throw MathError("no torus orbit has vanishing set {" + names + "}");
}

// Two-dimensional fans.
class Fan {
 public:
  Fan() = default;
  explicit Fan(std::vector<Cone> maximal) : cones_(std::move(maximal)) {
    for (const auto& c : cones_)
      if (c.ambient() != 2) throw MathError("only plane fans are supported");
    for (std::size_t i = 0; i < cones_.size(); ++i)
      for (std::size_t j = i + 1; j < cones_.size(); ++j)
        if (!meets_in_face(cones_[i], cones_[j]))
          throw MathError("cones " + cones_[i].to_string() + " and " + cones_[j].to_string() +
                          " do not meet in a common face");
  }
  static Fan from_pairs(const std::vector<std::vector<LVec>>& gens) {
    std::vector<Cone> cs;
    for (const auto& g : gens) cs.emplace_back(2, g);
    return Fan(std::move(cs));
  }

  const std::vector<Cone>& cones() const { return cones_; }
  std::set<LVec> rays() const {
    std::set<LVec> r;
    for (const auto& c : cones_)
      for (const auto& v : c.rays()) r.insert(v);
    return r;
  }
  std::set<std::set<LVec>> cone_keys() const {
    std::set<std::set<LVec>> k;
    for (const auto& c : cones_) k.insert(c.ray_set());
    return k;
  }
  friend bool operator==(const Fan& a, const Fan& b) { return a.cone_keys() == b.cone_keys(); }

  std::string to_string() const {
    std::string s;
    for (const auto& c : cones_) s += (s.empty() ? "" : " ") + c.to_string();
    return s;
  }

 private:
  static bool meets_in_face(const Cone& a, const Cone& b) {
    // in the plane the intersection is spanned by the rays of either cone lying in the other
    std::set<LVec> common;
    for (const auto& r : a.rays())
      if (b.contains(r)) common.insert(r);
    for (const auto& r : b.rays())
      if (a.contains(r)) common.insert(r);
    if (common.empty()) {
      // two 2-cones can still overlap without containing each other's rays only
      // if one lies inside the other, which puts its rays in the other
      return true;
    }
    auto ra = a.ray_set(), rb = b.ray_set();
    if (common.size() == 1) return ra.count(*common.begin()) && rb.count(*common.begin());
    return common == ra && common == rb;
  }

  std::vector<Cone> cones_;
};

using Mat2 = std::array<std::array<long, 2>, 2>;

inline LVec apply2(const Mat2& M, const LVec& v) {
  return {M[0][0] * v[0] + M[0][1] * v[1], M[1][0] * v[0] + M[1][1] * v[1]};
}

inline Fan transform_fan(const Mat2& M, const Fan& F) {
  std::vector<Cone> cs;
  for (const auto& c : F.cones()) {
    std::vector<LVec> g;
    for (const auto& r : c.rays()) g.push_back(apply2(M, r));
    cs.emplace_back(2, g);
  }
  return Fan(std::move(cs));
}

// Every M in GL2(Z) carrying F1 onto F2, found from the images of one independent ray pair.
inline std::vector<Mat2> fan_isomorphisms(const Fan& F1, const Fan& F2) {
  std::vector<Mat2> out;
  auto r1 = F1.rays();
  auto r2 = F2.rays();
  if (r1.size() != r2.size() || F1.cones().size() != F2.cones().size()) return out;
  std::vector<LVec> a(r1.begin(), r1.end()), b(r2.begin(), r2.end());
  std::optional<std::pair<LVec, LVec>> base;
  for (std::size_t i = 0; i < a.size() && !base; ++i)
    for (std::size_t j = 0; j < a.size() && !base; ++j)
      if (a[i][0] * a[j][1] - a[i][1] * a[j][0] != 0) base = {a[i], a[j]};
  if (!base) return out;
  const auto& [u, v] = *base;
  const long det = u[0] * v[1] - u[1] * v[0];
  std::set<std::set<LVec>> target = F2.cone_keys();
  for (const auto& c : b)
    for (const auto& d : b) {
      if (c == d) continue;
      // M [u v] = [c d]  =>  M = [c d] adj([u v]) / det
      long m00 = c[0] * v[1] - d[0] * u[1], m01 = -c[0] * v[0] + d[0] * u[0];
      long m10 = c[1] * v[1] - d[1] * u[1], m11 = -c[1] * v[0] + d[1] * u[0];
      if (m00 % det || m01 % det || m10 % det || m11 % det) continue;
      Mat2 M{{{m00 / det, m01 / det}, {m10 / det, m11 / det}}};
      long dm = M[0][0] * M[1][1] - M[0][1] * M[1][0];
      if (dm != 1 && dm != -1) continue;
      std::set<std::set<LVec>> img;
      for (const auto& cone : F1.cones()) {
        std::set<LVec> k;
        for (const auto& r : cone.rays()) k.insert(apply2(M, r));
        img.insert(k);
      }
      if (img == target) out.push_back(M);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::optional<Mat2> fan_isomorphism(const Fan& F1, const Fan& F2) {
  auto all = fan_isomorphisms(F1, F2);
  if (all.empty()) return std::nullopt;
  Mat2 id{{{1, 0}, {0, 1}}};
  for (const auto& M : all)
    if (M == id) return M;
  return all.front();
}

// Angular order in the plane starting from the positive x-axis, exact.
inline bool angle_less(const LVec& a, const LVec& b) {
  auto half = [](const LVec& v) { return (v[1] < 0 || (v[1] == 0 && v[0] < 0)) ? 1 : 0; };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return a[0] * b[1] - a[1] * b[0] > 0;
}

// Complete plane fan whose maximal cones join angularly consecutive rays.
inline Fan fan_from_rays(std::vector<LVec> rays) {
  for (auto& r : rays) r = primitive(r);
  std::sort(rays.begin(), rays.end(), angle_less);
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  if (rays.size() < 3) throw MathError("a complete plane fan needs at least three rays");
  std::vector<std::vector<LVec>> pairs;
  for (std::size_t i = 0; i < rays.size(); ++i) pairs.push_back({rays[i], rays[(i + 1) % rays.size()]});
  return Fan::from_pairs(pairs);
}

inline Fan hirzebruch_fan(long a) { return fan_from_rays({{1, 0}, {0, 1}, {-1, a}, {0, -1}}); }

}  // namespace coxtorus
