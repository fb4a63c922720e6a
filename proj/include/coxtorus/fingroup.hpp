#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxtorus/cyclotomic.hpp"
#include "coxtorus/intmatrix.hpp"
#include "coxtorus/linsolve.hpp"
#include "coxtorus/report.hpp"

namespace coxtorus {

// 4x4 matrix over Q(z), row-major.
struct Mat4 {
  std::array<CycNum, 16> a{};

  static Mat4 identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = CycNum(1);
    return m;
  }
  static Mat4 from(const Matrix<CycNum>& M) {
    if (M.size() != 4 || M[0].size() != 4) throw DataError("group generator is not 4x4");
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = M[i][j];
    return m;
  }
  Matrix<CycNum> rows() const {
    Matrix<CycNum> M(4, std::vector<CycNum>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) M[i][j] = (*this)(i, j);
    return M;
  }
  CycNum& operator()(int i, int j) { return a[i * 4 + j]; }
  const CycNum& operator()(int i, int j) const { return a[i * 4 + j]; }

  friend Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        if (x(i, k).is_zero()) continue;
        for (int j = 0; j < 4; ++j)
          if (!y(k, j).is_zero()) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  friend bool operator==(const Mat4& x, const Mat4& y) { return x.a == y.a; }
  friend bool operator!=(const Mat4& x, const Mat4& y) { return !(x == y); }
};

struct Mat4Hash {
  std::size_t operator()(const Mat4& m) const {
    std::size_t h = 0;
    for (const auto& c : m.a) h = h * 1000003u ^ c.hash();
    return h;
  }
};

inline CycNum det4(const Mat4& m) {
  Matrix<CycNum> M = m.rows();
  // Gaussian elimination over the field
  CycNum d(1);
  for (int c = 0; c < 4; ++c) {
    int p = c;
    while (p < 4 && M[p][c].is_zero()) ++p;
    if (p == 4) return CycNum(0);
    if (p != c) {
      std::swap(M[p], M[c]);
      d = -d;
    }
    d *= M[c][c];
    CycNum inv = M[c][c].inverse();
    for (int i = c + 1; i < 4; ++i) {
      if (M[i][c].is_zero()) continue;
      CycNum f = M[i][c] * inv;
      for (int j = c; j < 4; ++j) M[i][j] -= f * M[c][j];
    }
  }
  return d;
}

// Reduced row echelon form over the field; zero rows dropped.
inline Matrix<CycNum> rref(Matrix<CycNum> M) {
  if (M.empty()) return M;
  const std::size_t m = M.size(), n = M[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && M[p][c].is_zero()) ++p;
    if (p == m) continue;
    std::swap(M[p], M[r]);
    CycNum inv = M[r][c].inverse();
    for (auto& x : M[r]) x *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || M[i][c].is_zero()) continue;
      CycNum f = M[i][c];
      for (std::size_t j = 0; j < n; ++j) M[i][j] -= f * M[r][j];
    }
    ++r;
  }
  M.resize(r);
  return M;
}

// Basis (rows, in reduced echelon form) of the kernel of M acting on columns.
inline Matrix<CycNum> nullspace(const Matrix<CycNum>& M, std::size_t n) {
  Matrix<CycNum> R = rref(M);
  std::vector<std::size_t> piv;
  for (const auto& row : R) {
    std::size_t c = 0;
    while (row[c].is_zero()) ++c;
    piv.push_back(c);
  }
  Matrix<CycNum> K;
  for (std::size_t f = 0; f < n; ++f) {
    if (std::find(piv.begin(), piv.end(), f) != piv.end()) continue;
    std::vector<CycNum> v(n);
    v[f] = CycNum(1);
    for (std::size_t k = 0; k < R.size(); ++k) v[piv[k]] = -R[k][f];
    K.push_back(v);
  }
  return rref(K);
}

class MatGroup {
 public:
  MatGroup(std::vector<Mat4> gens, std::size_t cap = 10000) : gens_(std::move(gens)) {
    Mat4 e = Mat4::identity();
    elems_.push_back(e);
    index_.emplace(e, 0);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      std::size_t k = queue.front();
      queue.pop_front();
      for (const auto& g : gens_) {
        Mat4 h = elems_[k] * g;
        if (index_.count(h)) continue;
        if (elems_.size() >= cap) throw MathError("group enumeration exceeded the cap of " + std::to_string(cap));
        index_.emplace(h, elems_.size());
        elems_.push_back(h);
        queue.push_back(elems_.size() - 1);
      }
    }
    for (const auto& g : gens_) (void)index_of(g);
  }

  std::size_t order() const { return elems_.size(); }
  const std::vector<Mat4>& elements() const { return elems_; }
  const std::vector<Mat4>& generators() const { return gens_; }
  const Mat4& operator[](std::size_t i) const { return elems_[i]; }

  std::size_t index_of(const Mat4& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw MathError("matrix is not in the group");
    return it->second;
  }
  bool contains(const Mat4& m) const { return index_.count(m) > 0; }

  std::size_t mul(std::size_t i, std::size_t j) const { return index_of(elems_[i] * elems_[j]); }
  std::size_t inv(std::size_t i) const {
    if (inv_.empty()) {
      inv_.assign(order(), 0);
      for (std::size_t a = 0; a < order(); ++a)
        for (std::size_t b = 0; b < order(); ++b)
          if (elems_[a] * elems_[b] == elems_[0]) {
            inv_[a] = b;
            break;
          }
    }
    return inv_[i];
  }

  std::size_t element_order(std::size_t i) const {
    std::size_t k = 1, cur = i;
    while (cur != 0) {
      cur = mul(cur, i);
      ++k;
    }
    return k;
  }

 private:
  std::vector<Mat4> gens_;
  std::vector<Mat4> elems_;
  std::unordered_map<Mat4, std::size_t, Mat4Hash> index_;
  mutable std::vector<std::size_t> inv_;
};

inline std::vector<std::vector<std::size_t>> conjugacy_classes(const MatGroup& G) {
  std::vector<int> cls(G.order(), -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t x = 0; x < G.order(); ++x) {
    if (cls[x] >= 0) continue;
    std::set<std::size_t> orbit;
    for (std::size_t g = 0; g < G.order(); ++g) orbit.insert(G.mul(G.mul(g, x), G.inv(g)));
    for (auto y : orbit) cls[y] = static_cast<int>(out.size());
    out.emplace_back(orbit.begin(), orbit.end());
  }
  return out;
}

// Closure of a set of element indices under multiplication.
inline std::set<std::size_t> generated_subgroup(const MatGroup& G, const std::set<std::size_t>& gens) {
  std::set<std::size_t> H{0};
  std::deque<std::size_t> q{0};
  while (!q.empty()) {
    auto a = q.front();
    q.pop_front();
    for (auto g : gens) {
      auto b = G.mul(a, g);
      if (H.insert(b).second) q.push_back(b);
    }
  }
  return H;
}

struct Abelianization {
  std::set<std::size_t> commutator;        // element indices of [G,G]
  std::vector<Integer> invariant_factors;  // nontrivial ones only
  std::size_t order() const {
    std::size_t o = 1;
    for (const auto& d : invariant_factors) o *= d.get_ui();
    return o;
  }
};

// [G,G] by closure of commutators; G/[G,G] from the Smith form of the relations
// read off the coset graph of the generators.
inline Abelianization commutator_and_abelianization(const MatGroup& G) {
  Abelianization res;
  std::set<std::size_t> comms;
  for (std::size_t a = 0; a < G.order(); ++a)
    for (std::size_t b = 0; b < G.order(); ++b)
      comms.insert(G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)));
  res.commutator = generated_subgroup(G, comms);

  // coset of x = smallest element index in x[G,G]
  auto coset = [&](std::size_t x) {
    std::size_t m = G.order();
    for (auto c : res.commutator) m = std::min(m, G.mul(x, c));
    return m;
  };
  const std::size_t k = G.generators().size();
  std::vector<std::size_t> gidx;
  for (const auto& g : G.generators()) gidx.push_back(G.index_of(g));
  std::map<std::size_t, std::vector<long>> label{{coset(0), std::vector<long>(k, 0)}};
  std::deque<std::size_t> q{coset(0)};
  std::vector<std::vector<long>> rels;
  while (!q.empty()) {
    auto c = q.front();
    q.pop_front();
    for (std::size_t i = 0; i < k; ++i) {
      auto d = coset(G.mul(c, gidx[i]));
      std::vector<long> v = label[c];
      v[i] += 1;
      auto it = label.find(d);
      if (it == label.end()) {
        label.emplace(d, v);
        q.push_back(d);
      } else {
        for (std::size_t j = 0; j < k; ++j) v[j] -= it->second[j];
        rels.push_back(v);
      }
    }
  }
  for (const auto& d : smith_diagonal(IntMatrix::from_rows(rels)))
    if (d != 1) res.invariant_factors.push_back(d);
  return res;
}

// Order 8, a single involution, and every cyclic subgroup normal.
inline bool is_quaternion(const MatGroup& G, const std::set<std::size_t>& H) {
  if (H.size() != 8) return false;
  std::size_t invol = 0;
  bool abelian = true;
  for (auto a : H) {
    if (a != 0 && G.mul(a, a) == 0) ++invol;
    for (auto b : H)
      if (G.mul(a, b) != G.mul(b, a)) abelian = false;
  }
  if (invol != 1 || abelian) return false;
  for (auto a : H) {
    auto C = generated_subgroup(G, {a});
    for (auto g : H)
      for (auto c : C)
        if (!C.count(G.mul(G.mul(g, c), G.inv(g)))) return false;
  }
  return true;
}

struct Reflection {
  std::size_t element;
  std::size_t plane;  // index into ReflectionData::planes
};

struct ReflectionData {
  std::vector<Reflection> reflections;
  std::vector<Matrix<CycNum>> planes;            // each a 2x4 reduced basis
  std::vector<std::vector<std::size_t>> action;  // action[g][p] = image plane of p under element g
  bool transitive() const {
    if (planes.empty()) return true;
    std::set<std::size_t> orbit;
    for (const auto& row : action) orbit.insert(row[0]);
    return orbit.size() == planes.size();
  }
};

inline Matrix<CycNum> fixed_space(const Mat4& g) {
  Matrix<CycNum> M = g.rows();
  for (int i = 0; i < 4; ++i) M[i][i] -= CycNum(1);
  return nullspace(M, 4);
}

inline ReflectionData reflections_and_planes(const MatGroup& G) {
  ReflectionData R;
  for (std::size_t x = 1; x < G.order(); ++x) {
    Matrix<CycNum> F = fixed_space(G[x]);
    if (F.size() != 2) continue;
    std::size_t idx = 0;
    while (idx < R.planes.size() && R.planes[idx] != F) ++idx;
    if (idx == R.planes.size()) R.planes.push_back(F);
    R.reflections.push_back({x, idx});
  }
  R.action.assign(G.order(), std::vector<std::size_t>(R.planes.size()));
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t p = 0; p < R.planes.size(); ++p) {
      // image of the column vectors spanning the plane
      Matrix<CycNum> img;
      for (const auto& v : R.planes[p]) {
        std::vector<CycNum> w(4);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) w[i] += G[g](i, j) * v[j];
        img.push_back(w);
      }
      img = rref(img);
      std::size_t q = 0;
      while (q < R.planes.size() && R.planes[q] != img) ++q;
      if (q == R.planes.size()) throw MathError("group does not permute the reflection planes");
      R.action[g][p] = q;
    }
  return R;
}

// Both coordinate planes span(x1,y1) and span(x2,y2) are preserved by every element.
inline bool block_diagonal(const MatGroup& G) {
  for (const auto& g : G.elements())
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if ((i < 2) != (j < 2) && !g(i, j).is_zero()) return false;
  return true;
}

// Eigenvalues off the fixed plane multiply to det(g) since the fixed ones are 1.
inline bool reflection_is_symplectic(const Mat4& g) { return fixed_space(g).size() == 2 && det4(g).is_one(); }

inline Report group_report(const MatGroup& G) {
  Report r;
  const std::string tag = "group";
  r.add(tag, "order", G.order() == 24, std::to_string(G.order()));
  const auto cls = conjugacy_classes(G);
  r.add(tag, "conjugacy classes", cls.size() == 7, std::to_string(cls.size()));
  const auto R = reflections_and_planes(G);
  std::set<std::size_t> refl;
  for (const auto& x : R.reflections) refl.insert(x.element);
  std::size_t rc = 0;
  bool split = false;
  for (const auto& c : cls) {
    const auto k = std::count_if(c.begin(), c.end(), [&](std::size_t x) { return refl.count(x) > 0; });
    rc += k == static_cast<long>(c.size());
    split |= k > 0 && k < static_cast<long>(c.size());
  }
  r.add(tag, "classes of symplectic reflections", rc == 2 && !split,
        std::to_string(rc) + " classes, " + std::to_string(refl.size()) + " reflections");
  bool symp = true;
  for (auto x : refl) symp = symp && reflection_is_symplectic(G[x]);
  r.add(tag, "reflections fix a plane and have determinant 1", symp);
  const auto ab = commutator_and_abelianization(G);
  r.add(tag, "[G,G] is the quaternion group", ab.commutator.size() == 8 && is_quaternion(G, ab.commutator),
        "order " + std::to_string(ab.commutator.size()));
  std::string inv;
  for (const auto& d : ab.invariant_factors) inv += (inv.empty() ? "Z/" : " x Z/") + d.get_str();
  r.add(tag, "abelianization", ab.invariant_factors == std::vector<Integer>{3}, inv.empty() ? "trivial" : inv);
  r.add(tag, "fixed planes permuted transitively", R.planes.size() == 4 && R.transitive(),
        std::to_string(R.planes.size()) + " planes");
  return r;
}

}  // namespace coxtorus
