#pragma once

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "coxtorus/intmatrix.hpp"
#include "coxtorus/latgeom.hpp"
#include "coxtorus/laurent.hpp"
#include "coxtorus/linsolve.hpp"
#include "coxtorus/parse.hpp"
#include "coxtorus/report.hpp"
#include "coxtorus/seeddata.hpp"

namespace coxtorus {

// ---------------------------------------------------------------------------
// Semistability for the Picard torus

inline bool in_plane_cone(const std::vector<Weight>& ws, const Weight& chi) {
  if (chi[0] == 0 && chi[1] == 0) return true;
  for (const auto& a : ws)
    if (a[0] * chi[1] - a[1] * chi[0] == 0 && a[0] * chi[0] + a[1] * chi[1] > 0) return true;
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (std::size_t j = 0; j < ws.size(); ++j) {
      const auto &a = ws[i], &b = ws[j];
      long det = a[0] * b[1] - a[1] * b[0];
      if (det <= 0) continue;
      // chi = l a + m b
      long l = chi[0] * b[1] - chi[1] * b[0];
      long m = a[0] * chi[1] - a[1] * chi[0];
      if (l >= 0 && m >= 0) return true;
    }
  return false;
}

inline bool is_semistable_support(const std::set<std::string>& support, const Weight& chi, const DegreeMatrix& dm) {
  std::vector<Weight> ws;
  for (const auto& n : support) ws.push_back(dm.pic.at(n));
  return in_plane_cone(ws, chi);
}

// chi lies on a ray spanned by one of the Picard weights.
inline bool on_wall(const Weight& chi, const DegreeMatrix& dm) {
  if (chi[0] == 0 && chi[1] == 0) return true;
  for (const auto& [n, w] : dm.pic)
    if ((w[0] || w[1]) && w[0] * chi[1] - w[1] * chi[0] == 0 && w[0] * chi[0] + w[1] * chi[1] > 0) return true;
  return false;
}

inline std::set<std::string> support_of(const LaurentPoly& f) {
  std::set<std::string> s;
  for (const auto& [m, c] : f.terms())
    for (auto [id, e] : m.exponents())
      if (e != 0) s.insert(VarRegistry::name(id));
  return s;
}

inline std::string join(const std::set<std::string>& s, const char* sep = ",") {
  std::string r;
  for (const auto& x : s) r += (r.empty() ? "" : sep) + x;
  return r;
}

// ---------------------------------------------------------------------------
// Components of the central fibre

struct ExpectEntry {
  std::string key;  // "v w11", "P", "meet Z1", ...
  std::vector<LVec> rows;
};

struct ComponentData {
  std::string name, kind;
  std::vector<std::string> zeros, basis;
  std::vector<LaurentPoly> equations;
  std::vector<ExpectEntry> expect;

  // filled by prepare_toric / prepare_coords
  std::vector<std::string> coords;      // nonvanishing coordinates, degree-matrix order
  std::map<std::string, LVec> v;        // coordinate -> lattice point of M
  std::map<std::string, CycNum> scale;  // original coordinate = scale * toric coordinate
  IntMatrix lattice;                    // exponent differences of the binomials
  IntMatrix P, J;

  std::vector<std::pair<std::string, LVec>> labeled() const {
    std::vector<std::pair<std::string, LVec>> out;
    for (const auto& c : coords) out.emplace_back(c, v.at(c));
    return out;
  }
  std::vector<LVec> points() const {
    std::vector<LVec> out;
    for (const auto& c : coords) out.push_back(v.at(c));
    return out;
  }
  bool has_expect(const std::string& key) const {
    for (const auto& e : expect)
      if (e.key == key) return true;
    return false;
  }
  // All rows filed under key, in file order.
  std::vector<LVec> expect_rows(const std::string& key) const {
    std::vector<LVec> r;
    for (const auto& e : expect)
      if (e.key == key) r.insert(r.end(), e.rows.begin(), e.rows.end());
    return r;
  }
  std::vector<std::vector<LVec>> expect_entries(const std::string& key) const {
    std::vector<std::vector<LVec>> r;
    for (const auto& e : expect)
      if (e.key == key) r.push_back(e.rows);
    return r;
  }
};

inline std::vector<LVec> parse_rows(const std::vector<std::string>& tok, std::size_t from,
                                    const std::filesystem::path& p, std::size_t ln) {
  std::vector<LVec> rows(1);
  for (std::size_t i = from; i < tok.size(); ++i) {
    if (tok[i] == ";") {
      rows.emplace_back();
      continue;
    }
    try {
      std::size_t used = 0;
      rows.back().push_back(std::stol(tok[i], &used));
      if (used != tok[i].size()) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      seed_fail(p, ln, "bad integer '" + tok[i] + "'");
    }
  }
  for (const auto& r : rows)
    if (r.empty() || r.size() != rows[0].size()) seed_fail(p, ln, "ragged or empty row list");
  return rows;
}

inline std::vector<ComponentData> load_components(const std::filesystem::path& dir) {
  const auto p = dir / "components.txt";
  std::vector<ComponentData> out;
  ComponentData* cur = nullptr;
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    if (tok[0] == "component") {
      if (cur) seed_fail(p, ln, "nested component");
      if (tok.size() != 3) seed_fail(p, ln, "expected 'component NAME KIND'");
      out.push_back({});
      cur = &out.back();
      cur->name = tok[1];
      cur->kind = tok[2];
      if (cur->kind != "toric" && cur->kind != "hypersurface" && cur->kind != "coordinate")
        seed_fail(p, ln, "unknown component kind " + cur->kind);
      continue;
    }
    if (!cur) seed_fail(p, ln, "line outside a component block");
    if (tok[0] == "end") {
      cur = nullptr;
    } else if (tok[0] == "zeros") {
      cur->zeros.assign(tok.begin() + 1, tok.end());
    } else if (tok[0] == "basis") {
      cur->basis.assign(tok.begin() + 1, tok.end());
    } else if (tok[0] == "eq") {
      try {
        cur->equations.push_back(parse_poly(text.substr(2)));
      } catch (const DataError& e) {
        seed_fail(p, ln, e.what());
      }
    } else if (tok[0] == "expect") {
      if (tok.size() < 3) seed_fail(p, ln, "empty expectation");
      std::string key = tok[1];
      std::size_t from = 2;
      if (key == "v" || key == "meet") {
        key += " " + tok[2];
        from = 3;
      }
      // ';' may be glued to numbers
      std::vector<std::string> t2;
      for (std::size_t i = from; i < tok.size(); ++i) {
        std::string w = tok[i];
        std::size_t k;
        while ((k = w.find(';')) != std::string::npos) {
          if (k) t2.push_back(w.substr(0, k));
          t2.push_back(";");
          w.erase(0, k + 1);
        }
        if (!w.empty()) t2.push_back(w);
      }
      cur->expect.push_back({key, parse_rows(t2, 0, p, ln)});
    } else {
      seed_fail(p, ln, "unknown keyword " + tok[0]);
    }
  }
  if (cur) throw DataError("components.txt: unterminated component " + cur->name);
  return out;
}

inline ComponentData& find_component(std::vector<ComponentData>& cs, const std::string& name) {
  for (auto& c : cs)
    if (c.name == name) return c;
  throw DataError("no component named " + name);
}

inline const ComponentData& find_component(const std::vector<ComponentData>& cs, const std::string& name) {
  for (const auto& c : cs)
    if (c.name == name) return c;
  throw DataError("no component named " + name);
}

inline void prepare_coords(ComponentData& c, const DegreeMatrix& dm) {
  std::set<std::string> z(c.zeros.begin(), c.zeros.end());
  for (const auto& n : z)
    if (!dm.pic.count(n)) throw DataError(c.name + ": unknown coordinate " + n);
  c.coords.clear();
  for (const auto& n : dm.names)
    if (!z.count(n)) c.coords.push_back(n);
  for (const auto& f : c.equations)
    for (const auto& n : support_of(f))
      if (z.count(n) || !dm.pic.count(n))
        throw DataError(c.name + ": equation " + f.to_string() + " uses " + n + ", which is not a live coordinate");
}

struct RescaleResult {
  std::map<std::string, CycNum> a;  // a point of the torus on the variety
  bool verified = false;
};

// Binomials c1*m1 + c2*m2 in the coordinates `vars`: find a with m1(a)/m2(a) = -c2/c1 for all.
inline RescaleResult solve_binomial_point(const std::vector<LaurentPoly>& eqs, const std::vector<std::string>& vars) {
  const std::size_t n = vars.size(), k = eqs.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j) idx[vars[j]] = j;
  IntMatrix A(k, n);
  std::vector<CycNum> rho(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (eqs[i].size() != 2) throw DataError("not a binomial: " + eqs[i].to_string());
    auto it = eqs[i].terms().begin();
    const auto& [m1, c1] = *it;
    ++it;
    const auto& [m2, c2] = *it;
    for (auto [id, e] : m1.exponents()) A(i, idx.at(VarRegistry::name(id))) += e;
    for (auto [id, e] : m2.exponents()) A(i, idx.at(VarRegistry::name(id))) -= e;
    rho[i] = -c2 / c1;
  }
  SmithForm s = smith_normal_form(A);
  std::vector<CycNum> cvals(n, CycNum(1));
  for (std::size_t r = 0; r < k; ++r) {
    CycNum beta(1);
    for (std::size_t l = 0; l < k; ++l) beta *= rho[l].pow(s.U(r, l).get_si());
    if (r < s.rank) {
      if (s.D(r, r) != 1) throw MathError("binomial lattice has torsion; roots would be needed");
      cvals[r] = beta;
    } else if (!beta.is_one()) {
      throw MathError("binomial system has no point on the torus");
    }
  }
  RescaleResult res;
  for (std::size_t j = 0; j < n; ++j) {
    CycNum aj(1);
    for (std::size_t r = 0; r < s.rank; ++r) aj *= cvals[r].pow(s.V(j, r).get_si());
    res.a[vars[j]] = aj;
  }
  res.verified = true;
  for (const auto& f : eqs) res.verified = res.verified && evaluate(f, res.a).is_zero();
  return res;
}

// Rescale a binomial component to toric form and compute its lattice points in M,
// with coordinates `basis` sent to the standard basis.
inline void prepare_toric(ComponentData& c, const DegreeMatrix& dm) {
  prepare_coords(c, dm);
  if (c.kind != "toric") throw DataError(c.name + " is not a toric component");
  const auto& vars = c.coords;
  const std::size_t n = vars.size();
  RescaleResult rs = solve_binomial_point(c.equations, vars);
  if (!rs.verified) throw MathError(c.name + ": rescaling point does not satisfy the equations");
  c.scale = rs.a;

  std::map<std::string, std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j) idx[vars[j]] = j;
  IntMatrix A(c.equations.size(), n);
  for (std::size_t i = 0; i < c.equations.size(); ++i) {
    auto it = c.equations[i].terms().begin();
    const Monomial m1 = it->first;
    ++it;
    const Monomial m2 = it->first;
    for (auto [id, e] : m1.exponents()) A(i, idx.at(VarRegistry::name(id))) += e;
    for (auto [id, e] : m2.exponents()) A(i, idx.at(VarRegistry::name(id))) -= e;
  }
  c.lattice = A;
  SmithForm s = smith_normal_form(A);
  for (std::size_t r = 0; r < s.rank; ++r)
    if (s.D(r, r) != 1) throw MathError(c.name + ": character group has torsion");
  const std::size_t d = n - s.rank;
  if (c.basis.size() != d) throw DataError(c.name + ": basis must list " + std::to_string(d) + " coordinates");
  std::vector<LVec> v0(n, LVec(d));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < d; ++k) v0[j][k] = s.V(j, s.rank + k).get_si();
  IntMatrix B(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    auto it = idx.find(c.basis[k]);
    if (it == idx.end()) throw DataError(c.name + ": basis coordinate " + c.basis[k] + " is not live");
    for (std::size_t i = 0; i < d; ++i) B(i, k) = v0[it->second][i];
  }
  IntMatrix Binv;
  try {
    Binv = unimodular_inverse(B);
  } catch (const MathError&) {
    throw DataError(c.name + ": basis coordinates do not form a lattice basis of M");
  }
  c.v.clear();
  for (std::size_t j = 0; j < n; ++j) {
    LVec w(d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) w[i] += Binv(i, k).get_si() * v0[j][k];
    c.v[vars[j]] = w;
  }
  c.P = IntMatrix(2, d);
  c.J = IntMatrix(2, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < 2; ++i) {
      c.P(i, k) = dm.pic.at(c.basis[k])[i];
      c.J(i, k) = dm.tw.at(c.basis[k])[i];
    }
  for (const auto& name : vars)
    for (std::size_t i = 0; i < 2; ++i) {
      long p = 0, t = 0;
      for (std::size_t k = 0; k < d; ++k) {
        p += c.P(i, k).get_si() * c.v[name][k];
        t += c.J(i, k).get_si() * c.v[name][k];
      }
      if (p != dm.pic.at(name)[i] || t != dm.tw.at(name)[i])
        throw DataError(c.name + ": equations are not homogeneous for coordinate " + name);
    }
}

// ---------------------------------------------------------------------------
// Toric quotient by the Picard torus

struct ToricQuotient {
  Cone dual;   // cone generated by the lattice points
  Cone sigma;  // its dual in N
  std::vector<Cone> faces;
  std::vector<bool> semistable;
  std::vector<std::set<std::string>> support;  // coordinates not vanishing on O(face)
  std::vector<Cone> minimal_unstable;
  IntMatrix Q;
  Fan fan;
  Mat2 tmatrix{};  // Q*J^T: row i is the torus weight pairing of the i-th quotient lattice coordinate

  LVec image(const LVec& n) const {
    LVec r(Q.rows(), 0);
    for (std::size_t i = 0; i < Q.rows(); ++i)
      for (std::size_t k = 0; k < Q.cols(); ++k) r[i] += Q(i, k).get_si() * n[k];
    return r;
  }
  Cone image(const Cone& c) const {
    std::vector<LVec> g;
    for (const auto& r : c.rays()) g.push_back(image(r));
    return Cone(Q.rows(), g);
  }
  std::optional<std::size_t> index_of(const Cone& c) const {
    for (std::size_t i = 0; i < faces.size(); ++i)
      if (faces[i] == c) return i;
    return std::nullopt;
  }
};

inline std::set<std::string> face_support(const ComponentData& c, const Cone& tau) {
  std::set<std::string> s;
  for (const auto& [name, m] : c.labeled()) {
    bool perp = true;
    for (const auto& r : tau.rays()) perp = perp && dot(m, r) == 0;
    if (perp) s.insert(name);
  }
  return s;
}

inline ToricQuotient toric_quotient_pipeline(const ComponentData& c, const DegreeMatrix& dm, const Weight& chi) {
  if (c.v.empty()) throw DataError(c.name + ": toric data not prepared");
  ToricQuotient q;
  const std::size_t d = c.P.cols();
  q.dual = Cone(d, c.points());
  if (!q.dual.full_dimensional()) throw MathError(c.name + ": lattice points do not span M");
  q.sigma = dual_cone(q.dual);
  q.faces = faces(q.sigma);
  for (const auto& tau : q.faces) {
    auto sup = face_support(c, tau);
    q.support.push_back(sup);
    q.semistable.push_back(is_semistable_support(sup, chi, dm));
  }
  for (std::size_t i = 0; i < q.faces.size(); ++i) {
    if (q.semistable[i]) continue;
    bool minimal = true;
    for (std::size_t j = 0; j < q.faces.size() && minimal; ++j)
      if (j != i && !q.semistable[j] && q.faces[j].dim() < q.faces[i].dim() && is_face_of(q.faces[j], q.faces[i]))
        minimal = false;
    if (minimal) q.minimal_unstable.push_back(q.faces[i]);
  }
  q.Q = kernel_basis(c.P);
  if (q.Q.rows() != 2) throw MathError(c.name + ": Picard torus does not act with a two-dimensional quotient");
  auto diag = smith_diagonal(q.Q);
  if (diag.size() != 2 || diag[0] != 1 || diag[1] != 1) throw MathError(c.name + ": Q is not surjective onto Z^2");
  std::vector<Cone> imgs;
  for (std::size_t i = 0; i < q.faces.size(); ++i) {
    if (!q.semistable[i] || q.faces[i].dim() == 0) continue;
    Cone im = q.image(q.faces[i]);
    if (im.dim() != q.faces[i].dim())
      throw MathError(c.name + ": surviving face " + q.faces[i].to_string() + " collapses under Q");
    imgs.push_back(im);
  }
  std::vector<Cone> maximal;
  for (const auto& a : imgs) {
    bool inside = false;
    for (const auto& b : imgs)
      if (b.dim() > a.dim() && is_face_of(a, b)) inside = true;
    if (!inside && std::find(maximal.begin(), maximal.end(), a) == maximal.end()) maximal.push_back(a);
  }
  q.fan = Fan(maximal);
  IntMatrix T = q.Q * c.J.transpose();
  q.tmatrix = {{{T(0, 0).get_si(), T(0, 1).get_si()}, {T(1, 0).get_si(), T(1, 1).get_si()}}};
  return q;
}

// ---------------------------------------------------------------------------
// Non-normal locus

struct NonNormalLocus {
  std::set<LVec> rays;                // curves of non-normal points (images of rays)
  std::set<std::set<LVec>> points;    // isolated non-normal fixed points (images of 2-cones)
  std::vector<Cone> faces;            // all non-normal surviving faces, in N
};

// Orbit normality over all surviving faces. With generators_only the semigroup is
// replaced by the one spanned by the extremal rays of the cone alone.
inline NonNormalLocus nonnormal_locus(const ComponentData& c, const ToricQuotient& q, bool generators_only = false) {
  AffineSemigroup S{q.dual.ambient(), generators_only ? q.dual.rays() : c.points()};
  NonNormalLocus out;
  std::set<std::size_t> bad;
  for (std::size_t i = 0; i < q.faces.size(); ++i) {
    if (!q.semistable[i] || q.faces[i].dim() == 0) continue;
    Cone F = face_duality(q.sigma, q.faces[i]);
    if (!orbit_is_normal(S, F)) {
      bad.insert(i);
      out.faces.push_back(q.faces[i]);
    }
  }
  for (std::size_t i : bad) {
    const Cone& tau = q.faces[i];
    if (tau.dim() == 1) {
      out.rays.insert(q.image(tau.rays()[0]));
    } else if (tau.dim() == 2) {
      bool covered = false;
      for (std::size_t j : bad)
        if (q.faces[j].dim() == 1 && is_face_of(q.faces[j], tau)) covered = true;
      if (!covered) out.points.insert(q.image(tau).ray_set());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Intersections with other components

struct IntersectionOrbit {
  Cone face;       // in N
  bool surviving;  // semistable orbit
  Cone image;      // in the quotient fan
};

inline std::set<std::string> meet_vanishing(const ComponentData& self, const ComponentData& other) {
  std::set<std::string> z(other.zeros.begin(), other.zeros.end()), out;
  for (const auto& n : self.coords)
    if (z.count(n)) out.insert(n);
  return out;
}

// Dense orbit of {coordinates in `vanishing` = 0} on the toric component.
inline IntersectionOrbit component_intersection_orbit(const ComponentData& c, const ToricQuotient& q,
                                                      const std::set<std::string>& vanishing) {
  const auto gens = c.labeled();
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < q.faces.size(); ++i) {
    auto vs = vanishing_set(gens, q.faces[i]);
    if (std::includes(vs.begin(), vs.end(), vanishing.begin(), vanishing.end())) cand.push_back(i);
  }
  std::vector<std::size_t> minimal;
  for (std::size_t i : cand) {
    bool m = true;
    for (std::size_t j : cand)
      if (j != i && q.faces[j].dim() < q.faces[i].dim() && is_face_of(q.faces[j], q.faces[i])) m = false;
    if (m) minimal.push_back(i);
  }
  if (minimal.size() != 1)
    throw MathError(c.name + ": vanishing set {" + join(vanishing) + "} has " + std::to_string(minimal.size()) +
                    " dense orbits");
  const std::size_t i = minimal[0];
  return {q.faces[i], q.semistable[i], q.image(q.faces[i])};
}

// ---------------------------------------------------------------------------
// Graded pieces on a component

// Functional strictly positive on all given weights, from a small search.
inline std::optional<Weight> positive_weight_functional(const std::vector<Weight>& ws) {
  for (long r = 1; r <= 12; ++r)
    for (long a = -r; a <= r; ++a)
      for (long b = -r; b <= r; ++b) {
        if (std::max(std::labs(a), std::labs(b)) != r) continue;
        bool ok = true;
        for (const auto& w : ws) ok = ok && a * w[0] + b * w[1] > 0;
        if (ok) return Weight{a, b};
      }
  return std::nullopt;
}

// Exponent vectors over `vars` of total weight target, weights all positive under some functional.
inline std::vector<std::vector<long>> enumerate_weight_monomials(const std::vector<Weight>& ws, const Weight& target) {
  auto ell = positive_weight_functional(ws);
  if (!ell) throw MathError("no functional bounds the monomial enumeration");
  const long total = (*ell)[0] * target[0] + (*ell)[1] * target[1];
  std::vector<std::vector<long>> out;
  if (total < 0) return out;
  std::vector<long> e(ws.size(), 0);
  std::function<void(std::size_t, long, long, long)> rec = [&](std::size_t i, long rem, long x, long y) {
    if (i == ws.size()) {
      if (x == target[0] && y == target[1]) out.push_back(e);
      return;
    }
    const long l = (*ell)[0] * ws[i][0] + (*ell)[1] * ws[i][1];
    for (long k = 0; k * l <= rem; ++k) {
      e[i] = k;
      rec(i + 1, rem - k * l, x + k * ws[i][0], y + k * ws[i][1]);
    }
    e[i] = 0;
  };
  rec(0, total, 0, 0);
  return out;
}

// Exponent vectors of total degree at most max_degree and total weight target.
inline std::vector<std::vector<long>> enumerate_weight_monomials_upto(const std::vector<Weight>& ws, const Weight& target,
                                                                      long max_degree) {
  std::vector<std::vector<long>> out;
  std::vector<long> e(ws.size(), 0);
  std::function<void(std::size_t, long, long, long)> rec = [&](std::size_t i, long rem, long x, long y) {
    if (i == ws.size()) {
      if (x == target[0] && y == target[1]) out.push_back(e);
      return;
    }
    for (long k = 0; k <= rem; ++k) {
      e[i] = k;
      rec(i + 1, rem - k, x + k * ws[i][0], y + k * ws[i][1]);
    }
    e[i] = 0;
  };
  rec(0, max_degree, 0, 0);
  return out;
}

using WeightTable = std::map<LVec, long>;

// Distinct lattice points of M of Picard degree L (semigroup elements), each once.
inline std::set<LVec> degree_points(const ComponentData& c, const DegreeMatrix& dm, const Weight& L) {
  std::vector<Weight> ws;
  for (const auto& n : c.coords) ws.push_back(dm.pic.at(n));
  std::set<LVec> pts;
  for (const auto& e : enumerate_weight_monomials(ws, L)) {
    LVec m(c.P.cols(), 0);
    for (std::size_t j = 0; j < e.size(); ++j)
      for (std::size_t k = 0; k < m.size(); ++k) m[k] += e[j] * c.v.at(c.coords[j])[k];
    pts.insert(m);
  }
  return pts;
}

inline LVec apply_rows(const IntMatrix& A, const LVec& m) {
  LVec r(A.rows(), 0);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t k = 0; k < A.cols(); ++k) r[i] += A(i, k).get_si() * m[k];
  return r;
}

inline WeightTable monomial_weight_table(const std::vector<std::string>& vars, const DegreeMatrix& dm, const Weight& L) {
  std::vector<Weight> ws;
  for (const auto& n : vars) ws.push_back(dm.pic.at(n));
  WeightTable t;
  if (!positive_weight_functional(ws)) throw MathError("unbounded graded piece");
  for (const auto& e : enumerate_weight_monomials(ws, L)) {
    LVec w{0, 0};
    for (std::size_t j = 0; j < e.size(); ++j) {
      w[0] += e[j] * dm.tw.at(vars[j])[0];
      w[1] += e[j] * dm.tw.at(vars[j])[1];
    }
    ++t[w];
  }
  return t;
}

inline WeightTable component_weight_table(const Weight& L, const ComponentData& c, const DegreeMatrix& dm) {
  if (c.kind == "toric") {
    WeightTable t;
    for (const auto& m : degree_points(c, dm, L)) ++t[apply_rows(c.J, m)];
    return t;
  }
  if (c.kind == "hypersurface") {
    if (c.equations.size() != 1) throw DataError(c.name + ": hypersurface needs exactly one equation");
    WeightAssignment pic, tw;
    for (const auto& n : c.coords) {
      pic.w[n] = dm.pic.at(n);
      tw.w[n] = dm.tw.at(n);
    }
    const Weight rp = weight_of(c.equations[0], pic), rt = weight_of(c.equations[0], tw);
    WeightTable t = monomial_weight_table(c.coords, dm, L);
    WeightTable sub = monomial_weight_table(c.coords, dm, {L[0] - rp[0], L[1] - rp[1]});
    for (const auto& [w, k] : sub) {
      LVec sh{w[0] + rt[0], w[1] + rt[1]};
      t[sh] -= k;
      if (t[sh] < 0) throw MathError(c.name + ": negative dimension in hypersurface count");
      if (t[sh] == 0) t.erase(sh);
    }
    return t;
  }
  throw DataError(c.name + ": no weight table for a " + c.kind + " component");
}

// ---------------------------------------------------------------------------
// Base loci of |L| on a toric component

struct BaseLocusResult {
  std::vector<Cone> base_faces;  // faces whose orbit lies in the base locus
  std::vector<Cone> offending;   // of those, the ones with semistable support
  bool pass = false;
};

inline BaseLocusResult base_locus_on_component(const Weight& L, const ComponentData& c, const ToricQuotient& q,
                                               const DegreeMatrix& dm, const Weight& chi) {
  BaseLocusResult r;
  auto pts = degree_points(c, dm, L);
  for (std::size_t i = 0; i < q.faces.size(); ++i) {
    const Cone& tau = q.faces[i];
    bool all_vanish = true;
    for (const auto& m : pts) {
      bool perp = true;
      for (const auto& ray : tau.rays()) perp = perp && dot(m, ray) == 0;
      if (perp) {
        all_vanish = false;
        break;
      }
    }
    if (!all_vanish) continue;
    r.base_faces.push_back(tau);
    if (is_semistable_support(q.support[i], chi, dm)) r.offending.push_back(tau);
  }
  r.pass = r.offending.empty();
  return r;
}

// ---------------------------------------------------------------------------
// The P^2 component

struct HypersurfaceNormalization {
  std::map<std::string, CycNum> scale;  // w = scale * w'
  CycNum overall;                       // normalized = overall * substituted equation
  LaurentPoly normalized;
};

// Rescale x^3 + a*y*z^2 + b*w^2*t (times a constant) to x^3 - y*z^2 + w^2*t.
inline HypersurfaceNormalization normalize_cubic(const LaurentPoly& f, const std::string& x, const std::string& y,
                                                 const std::string& z, const std::string& w, const std::string& t) {
  auto coeff = [&](const Monomial& m) {
    auto it = f.terms().find(m);
    if (it == f.terms().end()) throw MathError("equation lacks the term " + m.to_string());
    return it->second;
  };
  const Monomial mx = Monomial::var(x, 3), myz = Monomial::var(y) * Monomial::var(z, 2),
                 mwt = Monomial::var(w, 2) * Monomial::var(t);
  if (f.size() != 3) throw MathError("expected a trinomial cubic");
  HypersurfaceNormalization h;
  h.overall = coeff(mx).inverse();
  h.scale = {{x, CycNum(1)}, {z, CycNum(1)}, {w, CycNum(1)}};
  h.scale[y] = -(h.overall * coeff(myz)).inverse();
  h.scale[t] = (h.overall * coeff(mwt)).inverse();
  LaurentPoly g;
  for (const auto& [m, c] : f.terms()) {
    CycNum k = c * h.overall;
    for (auto [id, e] : m.exponents()) k *= h.scale.at(VarRegistry::name(id)).pow(e);
    g.add_term(m, k);
  }
  h.normalized = g;
  return h;
}

inline LaurentPoly rename_vars(const LaurentPoly& f, const std::map<std::string, std::string>& ren) {
  LaurentPoly g;
  for (const auto& [m, c] : f.terms()) {
    Monomial r;
    for (auto [id, e] : m.exponents()) {
      auto name = VarRegistry::name(id);
      auto it = ren.find(name);
      r = r * Monomial::var(it == ren.end() ? name : it->second, e);
    }
    g.add_term(r, c);
  }
  return g;
}

inline LaurentPoly set_zero(const LaurentPoly& f, const std::string& var) {
  LaurentPoly g;
  const int id = VarRegistry::id(var);
  for (const auto& [m, c] : f.terms())
    if (m.exponent_id(id) == 0) g.add_term(m, c);
  return g;
}

inline Report zp_checks(const ComponentData& zp, const DegreeMatrix& dm, const std::vector<ComponentData>& all) {
  Report r;
  const std::string tag = "central-fibre/ZP";
  if (zp.equations.size() != 1) throw DataError("ZP needs one equation");
  auto h = normalize_cubic(zp.equations[0], "w11", "w12", "w13", "w3", "t");
  const std::map<std::string, std::string> ren{{"w11", "X"}, {"w12", "Y"}, {"w13", "Z"}, {"w3", "W"}};
  LaurentPoly cubic = rename_vars(h.normalized, ren);
  const LaurentPoly target = parse_poly("X^3 - Y*Z^2 + W^2*t");
  r.add(tag, "(i) rescales to X^3 - Y*Z^2 + W^2*t", cubic == target,
        "w12 -> " + h.scale.at("w12").to_string() + "*Y, t -> " + h.scale.at("t").to_string() + "*t, overall " +
            h.overall.to_string() + ": " + cubic.to_string());

  auto tm = zp.expect_rows("tmatrix");
  bool tw_ok = tm.size() == 2 && tm[0].size() == 3;
  std::string got;
  const char* names[3] = {"w11", "w12", "w13"};
  for (int k = 0; k < 3; ++k) {
    auto w = dm.tw.at(names[k]);
    got += (k ? " " : "") + vec_to_string({w[0], w[1]});
    if (tw_ok) tw_ok = tm[0][k] == w[0] && tm[1][k] == w[1];
  }
  r.add(tag, "(ii) T-weights of X,Y,Z", tw_ok, got);

  LaurentPoly restricted = set_zero(cubic, "t");
  r.add(tag, "(iii) t = 0 gives X^3 - Y*Z^2", restricted == parse_poly("X^3 - Y*Z^2"), restricted.to_string());

  const LaurentPoly C = parse_poly("X^3 - Y*Z^2");
  LaurentPoly on_line = set_zero(C, "Y");
  r.add(tag, "(iv) Y = 0 meets the cubic only at (0:0:1), with multiplicity 3", on_line == parse_poly("X^3"),
        on_line.to_string());
  Point cusp{{"X", CycNum(0)}, {"Y", CycNum(1)}, {"Z", CycNum(0)}};
  bool sing = evaluate(C, cusp).is_zero();
  for (const char* v : {"X", "Y", "Z"}) sing = sing && evaluate(C.derivative(v), cusp).is_zero();
  // tangent cone at the singular point in the chart y = 1: lowest form must be a square
  LaurentPoly quad;
  for (const auto& [m, c] : C.terms()) {
    if (m.exponent("X") + m.exponent("Z") == 2) quad.add_term(m.without(VarRegistry::id("Y")), c);
  }
  CycNum a = quad.terms().count(Monomial::var("X", 2)) ? quad.terms().at(Monomial::var("X", 2)) : CycNum(0);
  CycNum b = quad.terms().count(Monomial::var("X") * Monomial::var("Z"))
                 ? quad.terms().at(Monomial::var("X") * Monomial::var("Z"))
                 : CycNum(0);
  CycNum cc = quad.terms().count(Monomial::var("Z", 2)) ? quad.terms().at(Monomial::var("Z", 2)) : CycNum(0);
  bool cusp_ok = sing && !quad.is_zero() && (b * b - CycNum(4) * a * cc).is_zero();
  r.add(tag, "(iv) X = Z = 0 is a cusp of the cubic", cusp_ok, "tangent cone " + quad.to_string());

  // incidences read off the zero lists of the other components
  for (const auto& o : all) {
    if (o.name != "Z1" && o.name != "Z2") continue;
    std::set<std::string> z(o.zeros.begin(), o.zeros.end()), van;
    for (const char* v : names)
      if (z.count(v)) van.insert(ren.at(v));
    std::string what = van == std::set<std::string>{"Y"}               ? "the line Y = 0"
                       : van == std::set<std::string>{"X", "Z"}        ? "the point X = Z = 0"
                                                                       : "{" + join(van) + "} = 0";
    r.note("ZP meets " + o.name + " in " + what);
    if (o.name == "Z1") r.add(tag, "(iv) Z1 meets P in the flex line Y = 0", van == std::set<std::string>{"Y"}, what);
    if (o.name == "Z2")
      r.add(tag, "(iv) Z2 meets P in the cusp X = Z = 0", van == std::set<std::string>{"X", "Z"}, what);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Charts

struct ChartData {
  int id = 0;
  LaurentPoly localize;                 // monomial f
  std::vector<LaurentPoly> printed;     // coordinates as printed
  std::vector<LaurentPoly> coords;      // after the degree-zero correction
  std::vector<LaurentPoly> ambient;     // printed ambient invariant list, may be empty
};

inline std::vector<ChartData> load_charts(const std::filesystem::path& dir) {
  const auto p = dir / "charts.txt";
  std::vector<ChartData> out;
  ChartData* cur = nullptr;
  auto parse_list = [&](const std::string& s, std::size_t ln) {
    std::vector<LaurentPoly> v;
    std::size_t start = 0;
    while (start <= s.size()) {
      auto k = s.find(';', start);
      std::string piece = trim(s.substr(start, k == std::string::npos ? std::string::npos : k - start));
      if (!piece.empty()) {
        try {
          v.push_back(parse_poly(piece));
        } catch (const DataError& e) {
          seed_fail(p, ln, e.what());
        }
      }
      if (k == std::string::npos) break;
      start = k + 1;
    }
    return v;
  };
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    if (tok[0] == "chart") {
      if (cur) seed_fail(p, ln, "nested chart");
      out.push_back({});
      cur = &out.back();
      try {
        cur->id = std::stoi(tok.at(1));
      } catch (const std::exception&) {
        seed_fail(p, ln, "expected 'chart N'");
      }
      continue;
    }
    if (!cur) seed_fail(p, ln, "line outside a chart block");
    const std::string rest = trim(text.substr(tok[0].size()));
    if (tok[0] == "end") {
      if (cur->printed.size() != 4) seed_fail(p, ln, "chart needs four coordinates");
      cur = nullptr;
    } else if (tok[0] == "localize") {
      cur->localize = parse_list(rest, ln).at(0);
      if (!cur->localize.is_monomial()) seed_fail(p, ln, "localizing element must be a monomial");
    } else if (tok[0] == "coords") {
      cur->printed = parse_list(rest, ln);
    } else if (tok[0] == "ambient") {
      for (auto& f : parse_list(rest, ln))
        if (!f.is_constant()) cur->ambient.push_back(f);
    } else {
      seed_fail(p, ln, "unknown keyword " + tok[0]);
    }
  }
  if (cur) throw DataError("charts.txt: unterminated chart");
  return out;
}

inline Weight monomial_weight(const Monomial& m, const std::map<std::string, Weight>& w) {
  Weight r{0, 0};
  for (auto [id, e] : m.exponents()) {
    auto it = w.find(VarRegistry::name(id));
    if (it == w.end()) throw DataError("unknown generator " + VarRegistry::name(id));
    r[0] += e * it->second[0];
    r[1] += e * it->second[1];
  }
  return r;
}

inline const Monomial& only_monomial(const LaurentPoly& f) {
  if (!f.is_monomial()) throw MathError("expected a monomial: " + f.to_string());
  return f.terms().begin()->first;
}

struct LocalizationBasis {
  std::string a, b;  // the two localized generators
  long det = 0;
  Weight wa{}, wb{};
  // exponents (x, y) with x*wa + y*wb = -w, if integral
  std::optional<std::pair<long, long>> cancel(const Weight& w) const {
    long x = -(w[0] * wb[1] - w[1] * wb[0]), y = -(wa[0] * w[1] - wa[1] * w[0]);
    if (x % det || y % det) return std::nullopt;
    return std::make_pair(x / det, y / det);
  }
};

inline LocalizationBasis localization_basis(const LaurentPoly& f, const DegreeMatrix& dm) {
  const Monomial& m = only_monomial(f);
  if (m.exponents().size() != 2) throw MathError("localizing monomial must involve exactly two generators");
  LocalizationBasis B;
  B.a = VarRegistry::name(m.exponents()[0].first);
  B.b = VarRegistry::name(m.exponents()[1].first);
  if (B.b < B.a) std::swap(B.a, B.b);
  B.wa = dm.pic.at(B.a);
  B.wb = dm.pic.at(B.b);
  B.det = B.wa[0] * B.wb[1] - B.wa[1] * B.wb[0];
  if (B.det == 0) throw MathError("localized generators have dependent Picard weights");
  return B;
}

struct Correction {
  LaurentPoly corrected;
  bool changed = false;
  std::string note;
};

// Keep the part of a printed coordinate that lives outside the localized generators
// and solve (uniquely) for the powers of the localized ones that make it Picard-degree zero.
inline Correction degree_zero_correction(const LaurentPoly& printed, const LaurentPoly& f, const DegreeMatrix& dm) {
  auto B = localization_basis(f, dm);
  const Monomial& m = only_monomial(printed);
  Monomial keep;
  std::string dropped;
  for (auto [id, e] : m.exponents()) {
    auto n = VarRegistry::name(id);
    if (n == B.a || n == B.b) continue;
    if (e < 0) {
      dropped += (dropped.empty() ? "" : ",") + n;
      continue;
    }
    keep = keep * Monomial::var(n, e);
  }
  auto ex = B.cancel(monomial_weight(keep, dm.pic));
  if (!ex) throw MathError("no degree-zero completion of " + printed.to_string());
  Monomial fixed = keep * Monomial::var(B.a, static_cast<int>(ex->first)) * Monomial::var(B.b, static_cast<int>(ex->second));
  Correction c{LaurentPoly(fixed), !(fixed == m), {}};
  if (c.changed) {
    auto w = monomial_weight(m, dm.pic);
    c.note = printed.to_string() + " has Picard weight " + vec_to_string({w[0], w[1]}) + "; using " +
             c.corrected.to_string();
    if (!dropped.empty()) c.note += " (denominator " + dropped + " is not inverted on this chart)";
  }
  return c;
}

inline void apply_corrections(std::vector<ChartData>& charts, const DegreeMatrix& dm, Report* log = nullptr) {
  for (auto& ch : charts) {
    ch.coords.clear();
    for (const auto& p : ch.printed) {
      auto c = degree_zero_correction(p, ch.localize, dm);
      if (c.changed && log) log->note("chart " + std::to_string(ch.id) + ": " + c.note);
      ch.coords.push_back(c.corrected);
    }
  }
}

// A printed coordinate whose T-weight is not in the compass of the chart's fixed point is
// replaced by the ambient invariant of a missing weight nearest to it in exponents.
inline std::vector<LaurentPoly> chart_ambient_invariants(const LaurentPoly& f, const DegreeMatrix& dm);

inline void apply_compass_corrections(std::vector<ChartData>& charts, const std::vector<FixedPointData>& points,
                                      const DegreeMatrix& dm, Report* log = nullptr) {
  for (auto& ch : charts) {
    auto pt = std::find_if(points.begin(), points.end(), [&](const FixedPointData& p) { return p.id == ch.id; });
    if (pt == points.end()) throw DataError("no fixed point for chart " + std::to_string(ch.id));
    std::multiset<Weight> missing(pt->compass.begin(), pt->compass.end());
    std::vector<std::size_t> wrong;
    for (std::size_t i = 0; i < ch.coords.size(); ++i) {
      auto it = missing.find(monomial_weight(only_monomial(ch.coords[i]), dm.tw));
      if (it == missing.end()) {
        wrong.push_back(i);
      } else {
        missing.erase(it);
      }
    }
    if (wrong.empty()) continue;
    auto amb = chart_ambient_invariants(ch.localize, dm);
    auto dist = [](const Monomial& x, const Monomial& y) {
      std::map<int, int> d;
      for (auto [id, e] : x.exponents()) d[id] += e;
      for (auto [id, e] : y.exponents()) d[id] -= e;
      long r = 0;
      for (auto [id, e] : d) r += std::abs(e);
      return r;
    };
    // assign the missing weights to the wrong slots, each slot taking the nearest invariant of its weight
    std::vector<Weight> need(missing.begin(), missing.end());
    long best = -1;
    int ties = 0;
    std::vector<LaurentPoly> choice;
    do {
      long total = 0;
      std::vector<LaurentPoly> pick;
      for (std::size_t k = 0; k < wrong.size() && total >= 0; ++k) {
        const Monomial& old = only_monomial(ch.coords[wrong[k]]);
        long dk = -1;
        int nk = 0;
        LaurentPoly g;
        for (const auto& c : amb) {
          if (!(monomial_weight(only_monomial(c), dm.tw) == need[k])) continue;
          long dc = dist(old, only_monomial(c));
          if (dk < 0 || dc < dk) {
            dk = dc;
            nk = 1;
            g = c;
          } else if (dc == dk) {
            ++nk;
          }
        }
        if (dk < 0 || nk > 1) {
          total = -1;
        } else {
          total += dk;
          pick.push_back(g);
        }
      }
      if (total < 0) continue;
      if (best < 0 || total < best) {
        best = total;
        ties = 1;
        choice = pick;
      } else if (total == best) {
        ++ties;
      }
    } while (std::next_permutation(need.begin(), need.end()));
    if (best < 0 || ties != 1)
      throw MathError("chart " + std::to_string(ch.id) + ": no unique replacement for coordinates off the compass");
    for (std::size_t k = 0; k < wrong.size(); ++k) {
      auto old = ch.coords[wrong[k]];
      auto ow = monomial_weight(only_monomial(old), dm.tw);
      auto nw = monomial_weight(only_monomial(choice[k]), dm.tw);
      ch.coords[wrong[k]] = choice[k];
      if (log)
        log->note("chart " + std::to_string(ch.id) + ": " + old.to_string() + " has T-weight " +
                  vec_to_string({ow[0], ow[1]}) + ", not in the compass of point " + std::to_string(pt->id) +
                  "; using " + choice[k].to_string() + " of weight " + vec_to_string({nw[0], nw[1]}));
    }
  }
}

// Hilbert basis of the Picard-invariant monomials of C[w][1/f] (f a monomial in two
// generators with unimodular weights), or of C[w] itself when f = 1.
inline std::vector<LaurentPoly> chart_ambient_invariants(const LaurentPoly& f, const DegreeMatrix& dm) {
  std::vector<LaurentPoly> out;
  if (f.is_constant()) {
    // group generators by Picard weight; weight-zero ones are free
    std::map<Weight, std::vector<std::string>> cls;
    for (const auto& n : dm.names) cls[dm.pic.at(n)].push_back(n);
    std::vector<Weight> ws;
    std::vector<std::vector<std::string>> members;
    for (const auto& [w, ns] : cls) {
      if (w[0] == 0 && w[1] == 0) {
        for (const auto& n : ns) out.push_back(LaurentPoly::var(n));
        continue;
      }
      ws.push_back(w);
      members.push_back(ns);
    }
    const std::size_t k = ws.size();
    IntMatrix A(2, k);
    for (std::size_t j = 0; j < k; ++j) {
      A(0, j) = ws[j][0];
      A(1, j) = ws[j][1];
    }
    IntMatrix K = kernel_basis(A);
    const std::size_t d = K.rows();
    std::vector<LVec> cols;
    for (std::size_t j = 0; j < k; ++j) {
      LVec c(d);
      for (std::size_t i = 0; i < d; ++i) c[i] = K(i, j).get_si();
      cols.push_back(c);
    }
    Cone ineq(d, cols);
    if (!ineq.full_dimensional()) throw MathError("degenerate invariant cone");
    for (const auto& x : hilbert_basis(dual_cone(ineq))) {
      std::vector<long> u(k, 0);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < d; ++i) u[j] += x[i] * cols[j][i];
      // expand each class count into all multisets of its members
      std::vector<Monomial> acc{Monomial()};
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<Monomial> next;
        const auto& ns = members[j];
        std::function<void(std::size_t, long, const Monomial&)> rec = [&](std::size_t i, long left, const Monomial& m) {
          if (i + 1 == ns.size()) {
            next.push_back(m * Monomial::var(ns[i], static_cast<int>(left)));
            return;
          }
          for (long e = 0; e <= left; ++e) rec(i + 1, left - e, m * Monomial::var(ns[i], static_cast<int>(e)));
        };
        for (const auto& base : acc) rec(0, u[j], base);
        acc = std::move(next);
      }
      for (const auto& m : acc) out.push_back(LaurentPoly(m));
    }
    return out;
  }
  auto B = localization_basis(f, dm);
  if (B.det != 1 && B.det != -1) throw MathError("localization with non-unimodular weights is not supported");
  for (const auto& n : dm.names) {
    if (n == B.a || n == B.b) continue;
    auto ex = B.cancel(dm.pic.at(n));
    Monomial m = Monomial::var(n) * Monomial::var(B.a, static_cast<int>(ex->first)) *
                 Monomial::var(B.b, static_cast<int>(ex->second));
    out.push_back(LaurentPoly(m));
  }
  return out;
}

struct Expression {
  bool ok = false;
  std::vector<std::pair<std::vector<long>, CycNum>> terms;  // exponent of the coordinates, coefficient
  std::size_t candidates = 0;
  long degree_bound = -1;  // -1: the ansatz is complete (the coordinate weights lie in an open half-plane)
  std::string why;
};

// Generator monomial with integer exponents, expanded in the x-variables after
// multiplication by the given denominator powers.
inline LaurentPoly expand_generator_monomial(const Monomial& m, const GeneratorSet& gens,
                                             std::map<std::pair<std::string, int>, LaurentPoly>& cache) {
  LaurentPoly r(1);
  for (auto [id, e] : m.exponents()) {
    auto n = VarRegistry::name(id);
    if (e < 0) throw MathError("negative power of " + n + " left after clearing denominators");
    auto key = std::make_pair(n, e);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, gens[n].pow(e)).first;
    r = r * it->second;
  }
  return r;
}

// Solve target = sum c_alpha coords^alpha for the given exponent vectors, in the x-variables.
inline Expression solve_chart_expression(const Monomial& tm, const std::vector<Monomial>& cm,
                                         const std::vector<std::vector<long>>& alphas, const GeneratorSet& gens) {
  Expression ex;
  ex.candidates = alphas.size();
  if (alphas.empty()) {
    ex.why = "no exponent vector has the target T-weight";
    return ex;
  }
  std::vector<Monomial> terms;
  for (const auto& a : alphas) {
    Monomial m;
    for (std::size_t i = 0; i < a.size(); ++i) m = m * cm[i].pow(static_cast<int>(a[i]));
    terms.push_back(m);
  }
  // common denominator
  std::map<int, int> den;
  auto need = [&](const Monomial& m) {
    for (auto [id, e] : m.exponents())
      if (e < 0) den[id] = std::max(den[id], -e);
  };
  need(tm);
  for (const auto& m : terms) need(m);
  Monomial D;
  for (auto [id, e] : den) D = D * Monomial::var(VarRegistry::name(id), e);
  std::map<std::pair<std::string, int>, LaurentPoly> cache;
  LaurentPoly rhs = expand_generator_monomial(tm * D, gens, cache);
  std::vector<LaurentPoly> cols;
  for (const auto& m : terms) cols.push_back(expand_generator_monomial(m * D, gens, cache));
  std::map<Monomial, std::size_t> row;
  auto rows_of = [&](const LaurentPoly& p) {
    for (const auto& [m, c] : p.terms()) row.try_emplace(m, row.size());
  };
  rows_of(rhs);
  for (const auto& c : cols) rows_of(c);
  Matrix<CycNum> A(row.size(), std::vector<CycNum>(cols.size()));
  std::vector<CycNum> b(row.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [m, c] : cols[j].terms()) A[row.at(m)][j] = c;
  for (const auto& [m, c] : rhs.terms()) b[row.at(m)] = c;
  auto sol = solve_linear(A, b);
  if (!sol.consistent) {
    ex.why = "inconsistent linear system over " + std::to_string(alphas.size()) + " candidate products";
    return ex;
  }
  LaurentPoly check;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (sol.x[j].is_zero()) continue;
    ex.terms.emplace_back(alphas[j], sol.x[j]);
    check += cols[j].scaled(sol.x[j]);
  }
  ex.ok = check == rhs;
  if (!ex.ok) ex.why = "solution failed re-verification";
  return ex;
}

// When the coordinate weights admit a positive functional the ansatz is finite and a
// failure is a certificate. Otherwise products of weight zero exist and the ansatz is
// searched by total degree up to max_degree.
inline Expression express_in_chart_coordinates(const LaurentPoly& target, const std::vector<LaurentPoly>& coords,
                                               const GeneratorSet& gens, const DegreeMatrix& dm,
                                               long max_degree = 10) {
  const Monomial& tm = only_monomial(target);
  std::vector<Monomial> cm;
  for (const auto& c : coords) cm.push_back(only_monomial(c));
  auto zero = [](const Weight& w) { return w[0] == 0 && w[1] == 0; };
  if (!zero(monomial_weight(tm, dm.pic))) throw MathError("target is not Picard-invariant: " + target.to_string());
  for (const auto& m : cm)
    if (!zero(monomial_weight(m, dm.pic))) throw MathError("chart coordinate is not Picard-invariant: " + m.to_string());
  const Weight tw = monomial_weight(tm, dm.tw);
  std::vector<Weight> cw;
  for (const auto& m : cm) cw.push_back(monomial_weight(m, dm.tw));
  if (positive_weight_functional(cw)) return solve_chart_expression(tm, cm, enumerate_weight_monomials(cw, tw), gens);
  if (max_degree < 0) throw MathError("unbounded ansatz: no functional is positive on the coordinate weights");
  Expression last;
  std::size_t seen = 0;
  for (long d = 0; d <= max_degree; ++d) {
    auto alphas = enumerate_weight_monomials_upto(cw, tw, d);
    if (alphas.size() == seen) continue;
    seen = alphas.size();
    last = solve_chart_expression(tm, cm, alphas, gens);
    last.degree_bound = d;
    if (last.ok) return last;
  }
  last.degree_bound = max_degree;
  last.why = "no expression of degree at most " + std::to_string(max_degree) +
             (last.why.empty() ? "" : " (" + last.why + ")");
  return last;
}

inline PowerProduct chart_coordinate_function(const LaurentPoly& coord, const GeneratorSet& gens) {
  PowerProduct pp;
  for (auto [id, e] : only_monomial(coord).exponents()) pp.factors.push_back({gens[VarRegistry::name(id)], e});
  pp.scalar = coord.terms().begin()->second;
  return pp;
}

// ---------------------------------------------------------------------------
// Comparison of a toric quotient with reference values

inline std::string mat2_to_string(const Mat2& M) {
  return "[[" + std::to_string(M[0][0]) + "," + std::to_string(M[0][1]) + "],[" + std::to_string(M[1][0]) + "," +
         std::to_string(M[1][1]) + "]]";
}

inline std::string rays_to_string(const std::set<LVec>& rs) {
  std::string s = "{";
  for (const auto& r : rs) s += (s.size() > 1 ? "," : "") + vec_to_string(r);
  return s + "}";
}

inline std::set<LVec> map_rays(const Mat2& M, const std::set<LVec>& rs) {
  std::set<LVec> out;
  for (const auto& r : rs) out.insert(apply2(M, r));
  return out;
}

inline IntMatrix rows_matrix(const std::vector<LVec>& rows) {
  std::vector<std::vector<long>> r(rows.begin(), rows.end());
  return IntMatrix::from_rows(r);
}

struct ComponentQuotient {
  std::string name;
  ToricQuotient q;
  NonNormalLocus nonnormal, nonnormal_generators_only;
  std::map<std::string, IntersectionOrbit> meets;
  std::vector<Mat2> identifications;  // coordinate changes to the reference fan compatible with the T-matrix
};

inline ComponentQuotient analyse_component(const ComponentData& c, const std::vector<ComponentData>& all,
                                           const DegreeMatrix& dm, const Weight& chi) {
  ComponentQuotient r;
  r.name = c.name;
  r.q = toric_quotient_pipeline(c, dm, chi);
  r.nonnormal = nonnormal_locus(c, r.q, false);
  r.nonnormal_generators_only = nonnormal_locus(c, r.q, true);
  for (const auto& o : all) {
    if (o.name == c.name || o.kind == "coordinate") continue;
    r.meets.emplace(o.name, component_intersection_orbit(c, r.q, meet_vanishing(c, o)));
  }
  if (c.has_expect("rays") && c.has_expect("tmatrix")) {
    Fan ref = fan_from_rays(c.expect_rows("rays"));
    auto T = c.expect_rows("tmatrix");
    for (const auto& M : fan_isomorphisms(r.q.fan, ref)) {
      // moving lattice points by M replaces Q by M*Q
      bool ok = true;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          ok = ok && M[i][0] * r.q.tmatrix[0][j] + M[i][1] * r.q.tmatrix[1][j] == T[i][j];
      if (ok) r.identifications.push_back(M);
    }
  }
  return r;
}

inline Report central_fibre_report(const ComponentData& c, const ComponentQuotient& cq) {
  Report rep;
  const std::string tag = "central-fibre/" + c.name;
  const auto& q = cq.q;
  for (const auto& [name, v] : c.v) {
    if (!c.has_expect("v " + name)) continue;
    auto e = c.expect_rows("v " + name)[0];
    rep.add(tag, "lattice point of " + name, e == v, vec_to_string(v));
  }
  if (c.has_expect("P")) rep.add(tag, "Picard embedding", rows_matrix(c.expect_rows("P")) == c.P, c.P.to_string());
  if (c.has_expect("J")) rep.add(tag, "torus embedding", rows_matrix(c.expect_rows("J")) == c.J, c.J.to_string());
  if (c.has_expect("L"))
    rep.add(tag, "binomial lattice", same_row_lattice(rows_matrix(c.expect_rows("L")), c.lattice), c.lattice.to_string());
  if (c.has_expect("dualcone")) {
    Cone e(q.dual.ambient(), c.expect_rows("dualcone"));
    rep.add(tag, "cone of the semigroup", e == q.dual, q.dual.to_string());
  }
  if (c.has_expect("cone")) {
    Cone e(q.sigma.ambient(), c.expect_rows("cone"));
    rep.add(tag, "dual cone", e == q.sigma, q.sigma.to_string());
  }
  if (c.has_expect("unstable")) {
    std::set<std::set<LVec>> want, got;
    for (const auto& rows : c.expect_entries("unstable")) want.insert(Cone(q.sigma.ambient(), rows).ray_set());
    std::string s;
    for (const auto& u : q.minimal_unstable) {
      got.insert(u.ray_set());
      s += (s.empty() ? "" : " ") + u.to_string();
    }
    rep.add(tag, "unstable faces", want == got, s);
  }
  if (c.has_expect("Q")) {
    IntMatrix Qe = rows_matrix(c.expect_rows("Q"));
    rep.add(tag, "kernel of the Picard embedding", same_row_lattice(Qe, q.Q) && (c.P * Qe.transpose()).is_zero(),
            q.Q.to_string());
  }
  if (!c.has_expect("rays")) return rep;
  Fan ref = fan_from_rays(c.expect_rows("rays"));
  const bool iso = !fan_isomorphisms(q.fan, ref).empty();
  rep.add(tag, "quotient fan", iso, q.fan.to_string() + " vs " + ref.to_string());
  if (c.name == "Z0") {
    rep.add(tag, "normalization is the Hirzebruch surface H6", !fan_isomorphisms(q.fan, hirzebruch_fan(6)).empty(),
            q.fan.to_string());
  }
  std::string tm = mat2_to_string(q.tmatrix);
  rep.add(tag, "T-action matrix", !cq.identifications.empty(),
          cq.identifications.empty() ? "Q*J^T = " + tm + ", no fan identification matches"
                                     : "Q*J^T = " + tm + " becomes the reference under " +
                                           mat2_to_string(cq.identifications.front()));
  if (cq.identifications.empty()) return rep;

  // one identification for everything else; prefer one that agrees on the most checks
  auto score = [&](const Mat2& M) {
    int s = 0;
    if (c.has_expect("nonnormal")) {
      auto rows = c.expect_rows("nonnormal");
      std::set<LVec> e(rows.begin(), rows.end());
      s += map_rays(M, cq.nonnormal.rays) == e;
    }
    for (const auto& [other, io] : cq.meets) {
      if (!c.has_expect("meet " + other)) continue;
      auto rows = c.expect_rows("meet " + other);
      s += map_rays(M, io.image.ray_set()) == std::set<LVec>(rows.begin(), rows.end());
    }
    return s;
  };
  Mat2 M = cq.identifications.front();
  for (const auto& m : cq.identifications)
    if (score(m) > score(M)) M = m;

  if (c.has_expect("nonnormal")) {
    auto rows = c.expect_rows("nonnormal");
    std::set<LVec> want(rows.begin(), rows.end());
    auto got = map_rays(M, cq.nonnormal.rays);
    auto gens = map_rays(M, cq.nonnormal_generators_only.rays);
    std::string pts;
    for (const auto& p : cq.nonnormal.points) pts += " point " + rays_to_string(map_rays(M, p));
    rep.add(tag, "non-normal curves", got == want,
            "curves " + rays_to_string(got) + (pts.empty() ? "" : ";" + pts) + "; reference " + rays_to_string(want) +
                "; semigroup of extremal generators only gives " + rays_to_string(gens));
  }
  for (const auto& [other, io] : cq.meets) {
    if (!c.has_expect("meet " + other)) continue;
    auto rows = c.expect_rows("meet " + other);
    std::set<LVec> want(rows.begin(), rows.end());
    auto got = map_rays(M, io.image.ray_set());
    rep.add(tag, "meets " + other, got == want && io.surviving,
            rays_to_string(got) + (io.surviving ? "" : " (unstable orbit)"));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stability and chart reports

inline std::vector<LaurentPoly> load_products(const std::filesystem::path& dir) {
  const auto p = dir / "stability.txt";
  std::vector<LaurentPoly> out;
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    if (tok[0] != "products") seed_fail(p, ln, "unknown keyword " + tok[0]);
    std::istringstream is(text.substr(8));
    std::string piece;
    while (std::getline(is, piece, ';')) {
      try {
        out.push_back(parse_poly(trim(piece)));
      } catch (const DataError& e) {
        seed_fail(p, ln, e.what());
      }
      if (!out.back().is_monomial()) seed_fail(p, ln, "products must be monomials");
    }
  }
  if (out.empty()) throw DataError(p.string() + ": no products");
  return out;
}

inline bool nonvanishing_on(const LaurentPoly& f, const std::set<std::string>& support) {
  for (const auto& n : support_of(f))
    if (!support.count(n)) return false;
  return true;
}

// Generic support of a component: its coordinates that are not identically zero.
inline std::set<std::string> generic_support(const ComponentData& c, const DegreeMatrix& dm) {
  std::set<std::string> z(c.zeros.begin(), c.zeros.end()), s;
  for (const auto& n : dm.names)
    if (!z.count(n)) s.insert(n);
  return s;
}

inline Report semistability_report(const std::vector<ChartData>& charts, const std::vector<LaurentPoly>& products,
                                   const std::vector<ComponentData>& comps,
                                   const std::map<std::string, ToricQuotient>& quotients, const DegreeMatrix& dm,
                                   const Weight& chi) {
  Report r;
  const std::string tag = "semistability";
  const std::string chis = vec_to_string({chi[0], chi[1]});
  if (on_wall(chi, dm)) r.note("character " + chis + " lies on a wall spanned by a Picard weight");
  for (const auto& ch : charts) {
    auto sup = support_of(ch.localize);
    bool ss = is_semistable_support(sup, chi, dm);
    bool minimal = ss;
    for (const auto& n : sup) {
      auto smaller = sup;
      smaller.erase(n);
      minimal = minimal && !is_semistable_support(smaller, chi, dm);
    }
    r.add(tag, "chart " + std::to_string(ch.id) + " support {" + join(sup) + "} semistable for " + chis, ss,
          minimal ? "minimal" : "not minimal");
  }
  std::set<std::set<std::string>> chart_sups, prod_sups;
  for (const auto& ch : charts) chart_sups.insert(support_of(ch.localize));
  for (const auto& f : products) {
    auto sup = support_of(f);
    prod_sups.insert(sup);
    r.add(tag, "product " + f.to_string() + " is a chart support", chart_sups.count(sup) > 0,
          is_semistable_support(sup, chi, dm) ? "semistable" : "unstable");
  }
  r.add(tag, "charts and products agree", chart_sups == prod_sups,
        std::to_string(chart_sups.size()) + " chart supports, " + std::to_string(prod_sups.size()) + " products");
  // on every component the products cut out exactly the unstable orbits
  for (const auto& c : comps) {
    auto it = quotients.find(c.name);
    if (it == quotients.end()) {
      auto sup = generic_support(c, dm);
      bool ss = is_semistable_support(sup, chi, dm);
      bool hit = std::any_of(products.begin(), products.end(), [&](const LaurentPoly& f) { return nonvanishing_on(f, sup); });
      r.add(tag, c.name + " generic point", ss == hit,
            std::string(ss ? "semistable" : "unstable") + ", " + (hit ? "some product nonzero" : "all products vanish"));
      continue;
    }
    const auto& q = it->second;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < q.faces.size(); ++i) {
      bool hit = std::any_of(products.begin(), products.end(),
                             [&](const LaurentPoly& f) { return nonvanishing_on(f, q.support[i]); });
      bad += hit != static_cast<bool>(q.semistable[i]);
    }
    r.add(tag, c.name + " orbits: products vanish exactly on the unstable ones", bad == 0,
          std::to_string(q.faces.size()) + " orbits, " + std::to_string(bad) + " disagreements");
  }
  return r;
}

inline Report base_locus_report(const std::vector<ComponentData>& comps,
                                const std::map<std::string, ToricQuotient>& quotients, const DegreeMatrix& dm,
                                const Weight& chi) {
  Report r;
  const std::vector<std::pair<std::string, Weight>> bundles{{"L1", {1, 0}}, {"L1+L2", {1, 1}}};
  for (const auto& c : comps) {
    auto it = quotients.find(c.name);
    if (it == quotients.end()) continue;
    for (const auto& [bn, L] : bundles) {
      auto b = base_locus_on_component(L, c, it->second, dm, chi);
      std::string d = std::to_string(b.base_faces.size()) + " base orbits";
      for (const auto& f : b.offending) d += ", semistable base orbit " + f.to_string();
      r.add("base-locus", bn + " on " + c.name, b.pass, d);
    }
  }
  return r;
}

// Random point with all six x-variables nonzero and every coordinate defined.
inline Point random_chart_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(1, 97);
  Point p;
  for (const char* v : {"x1", "y1", "x2", "y2", "t1", "t2"}) p[v] = CycNum(d(rng) * (d(rng) % 2 ? 1 : -1));
  return p;
}

inline Report chart_report(const std::vector<ChartData>& charts, const GeneratorSet& gens, const DegreeMatrix& dm,
                           std::uint64_t seed) {
  Report r;
  std::mt19937_64 rng(seed);
  const std::vector<std::string> xs{"x1", "y1", "x2", "y2", "t1", "t2"};
  auto zero = [](const Weight& w) { return w[0] == 0 && w[1] == 0; };
  for (const auto& ch : charts) {
    const std::string tag = "charts/" + std::to_string(ch.id);
    auto amb = chart_ambient_invariants(ch.localize, dm);
    bool deg0 = true;
    for (const auto& c : ch.coords) deg0 = deg0 && zero(monomial_weight(only_monomial(c), dm.pic));
    for (const auto& a : amb) deg0 = deg0 && zero(monomial_weight(only_monomial(a), dm.pic));
    r.add(tag, "coordinates and ambient invariants have Picard weight 0", deg0);
    if (!ch.ambient.empty()) {
      std::set<Monomial> want, got;
      for (const auto& a : ch.ambient) want.insert(only_monomial(a));
      for (const auto& a : amb) got.insert(only_monomial(a));
      std::string d;
      for (const auto& m : got)
        if (!want.count(m)) d += " computed " + m.to_string();
      for (const auto& m : want)
        if (!got.count(m)) d += " printed " + m.to_string();
      r.add(tag, "ambient invariants match the printed list", want == got,
            std::to_string(got.size()) + " Hilbert basis elements" + (d.empty() ? "" : ";" + d));
    }
    // every invariant of the localized ambient ring, and every printed one, in the four coordinates
    std::vector<LaurentPoly> targets = amb;
    for (const auto& a : ch.ambient)
      if (std::find(targets.begin(), targets.end(), a) == targets.end()) targets.push_back(a);
    std::size_t ok = 0;
    std::string failed;
    for (const auto& t : targets) {
      Expression e;
      try {
        e = express_in_chart_coordinates(t, ch.coords, gens, dm);
      } catch (const MathError& x) {
        e.why = x.what();
      }
      if (e.ok) {
        ++ok;
      } else {
        failed += " " + t.to_string() + " (" + e.why + ")";
      }
    }
    r.add(tag, "ambient invariants are polynomials in the coordinates", ok == targets.size(),
          std::to_string(ok) + "/" + std::to_string(targets.size()) + failed);
    std::vector<PowerProduct> pp;
    for (const auto& c : ch.coords) pp.push_back(chart_coordinate_function(c, gens));
    std::size_t rank = 0;
    Point pt;
    for (int attempt = 0; attempt < 20 && rank == 0; ++attempt) {
      pt = random_chart_point(rng);
      try {
        rank = jacobian_rank_at_point(pp, xs, pt);
      } catch (const MathError&) {
        rank = 0;
      }
    }
    std::string at;
    for (const auto& v : xs) at += (at.empty() ? "" : ",") + pt.at(v).to_string();
    r.add(tag, "Jacobian of the coordinates has rank 4", rank == 4,
          "rank " + std::to_string(rank) + " at (" + at + ")");
  }
  return r;
}

// Seed data of the central fibre, prepared and pushed through the quotient pipeline.
struct CentralFibre {
  DegreeMatrix dm;
  std::vector<ComponentData> comps;
  std::map<std::string, ToricQuotient> quotients;

  const ComponentData& component(const std::string& name) const { return find_component(comps, name); }
};

inline CentralFibre load_central_fibre(const std::filesystem::path& dir, const Weight& chi) {
  CentralFibre cf;
  cf.dm = load_degree_matrix(dir);
  cf.comps = load_components(dir);
  for (auto& c : cf.comps) {
    if (c.kind == "toric") {
      prepare_toric(c, cf.dm);
      cf.quotients.emplace(c.name, toric_quotient_pipeline(c, cf.dm, chi));
    } else {
      prepare_coords(c, cf.dm);
    }
  }
  return cf;
}

// Chart seed data with both corrections applied.
inline std::vector<ChartData> load_corrected_charts(const std::filesystem::path& dir, const DegreeMatrix& dm,
                                                    Report* log = nullptr) {
  auto charts = load_charts(dir);
  apply_corrections(charts, dm, log);
  apply_compass_corrections(charts, load_fixed_points(dir), dm, log);
  return charts;
}

}  // namespace coxtorus
