#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxtorus/error.hpp"
#include "coxtorus/gitquot.hpp"
#include "coxtorus/rational.hpp"
#include "coxtorus/report.hpp"
#include "coxtorus/seeddata.hpp"

namespace coxtorus {

inline std::string w2s(const Weight& w) { return "(" + std::to_string(w[0]) + "," + std::to_string(w[1]) + ")"; }

inline std::string weights_to_string(const std::vector<Weight>& ws) {
  std::string s = "{";
  for (std::size_t i = 0; i < ws.size(); ++i) s += (i ? "," : "") + w2s(ws[i]);
  return s + "}";
}

inline long pair_with(const Weight& ell, const Weight& v) { return ell[0] * v[0] + ell[1] * v[1]; }
inline long homothety(const Weight& v) { return v[0] + v[1]; }
inline Weight wadd(const Weight& a, const Weight& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Weight wsub(const Weight& a, const Weight& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Weight wscale(long k, const Weight& a) { return {k * a[0], k * a[1]}; }

inline std::vector<Weight> sorted_weights(std::vector<Weight> ws) {
  std::sort(ws.begin(), ws.end());
  return ws;
}

// ---------------------------------------------------------------------------
// Fixed points

struct FixedPointDatum {
  int id = 0;
  Weight vertex{};
  Weight mu_L1{}, mu_L1L2{}, mu_L2{};
  std::vector<Weight> compass;

  Weight mu(const Weight& L) const { return wadd(wscale(L[0], mu_L1), wscale(L[1], mu_L2)); }
};

inline std::vector<FixedPointDatum> to_fixed_point_data(const std::vector<FixedPointData>& seed) {
  std::vector<FixedPointDatum> out;
  for (const auto& s : seed) {
    FixedPointDatum d;
    d.id = s.id;
    d.vertex = s.vertex;
    d.compass = s.compass;
    auto need = [&](const char* k) {
      auto it = s.mu.find(k);
      if (it == s.mu.end()) throw DataError("point " + std::to_string(s.id) + ": missing mu " + k);
      return it->second;
    };
    d.mu_L1 = need("L1");
    d.mu_L1L2 = need("L1+L2");
    d.mu_L2 = wsub(d.mu_L1L2, d.mu_L1);
    out.push_back(d);
  }
  if (out.size() != 7) throw DataError("expected 7 fixed points, found " + std::to_string(out.size()));
  return out;
}

inline std::vector<FixedPointDatum> load_fixed_point_data(const std::filesystem::path& dir) {
  return to_fixed_point_data(load_fixed_points(dir));
}

// Can the four weights be split into two pairs whose homothety weights sum to 2?
inline bool pairs_to_two(const std::vector<Weight>& c) {
  if (c.size() != 4) return false;
  static const int P[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  for (const auto& p : P)
    if (homothety(c[p[0]]) + homothety(c[p[1]]) == 2 && homothety(c[p[2]]) + homothety(c[p[3]]) == 2) return true;
  return false;
}

inline const Weight kEll0{1, -1};

inline bool sign_balanced(const std::vector<Weight>& c, const Weight& ell0 = kEll0) {
  int pos = 0, neg = 0;
  for (const auto& v : c) {
    long x = pair_with(ell0, v);
    pos += x > 0;
    neg += x < 0;
  }
  return pos == 2 && neg == 2;
}

inline bool axis_aligned(const Weight& v) { return (v[0] == 0) != (v[1] == 0); }

// ---------------------------------------------------------------------------
// Plane polygons

inline long cross3(const Weight& o, const Weight& a, const Weight& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline bool on_segment(const Weight& x, const Weight& a, const Weight& b) {
  return cross3(a, b, x) == 0 && std::min(a[0], b[0]) <= x[0] && x[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= x[1] && x[1] <= std::max(a[1], b[1]);
}

// Strict vertices of the convex hull, counterclockwise.
inline std::vector<Weight> convex_hull(std::vector<Weight> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Weight> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross3(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross3(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && h[0] == h[1]) h.resize(1);
  return h;
}

// Vertices of conv(pts) + positive quadrant: the lower-left chain from the
// leftmost-lowest point to the lowest-leftmost point.
inline std::vector<Weight> quadrant_hull_chain(std::vector<Weight> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.empty()) return {};
  long bmin = pts[0][1];
  for (const auto& p : pts) bmin = std::min(bmin, p[1]);
  std::vector<Weight> h;
  for (const auto& p : pts) {
    while (h.size() >= 2 && cross3(h[h.size() - 2], h.back(), p) <= 0) h.pop_back();
    h.push_back(p);
    if (p[1] == bmin) break;  // sorted, so this is the leftmost lowest point
  }
  return h;
}

// Points of pts lying on the bounded part of the boundary of conv(pts) + quadrant.
inline std::vector<Weight> quadrant_boundary_points(const std::vector<Weight>& pts) {
  const auto chain = quadrant_hull_chain(pts);
  std::set<Weight> out;
  for (const auto& p : pts) {
    if (chain.size() == 1 && p == chain[0]) out.insert(p);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      if (on_segment(p, chain[i], chain[i + 1])) out.insert(p);
  }
  return {out.begin(), out.end()};
}

inline std::vector<Weight> table_support(const WeightTable& t) {
  std::vector<Weight> out;
  for (const auto& [w, k] : t)
    if (k != 0) out.push_back({w.at(0), w.at(1)});
  return out;
}

// Tangent weights at `vertex` read off a polygon: along each edge, the nearest
// support point minus the vertex.
inline std::vector<Weight> polygon_edge_weights(const Weight& vertex, const std::vector<Weight>& pts) {
  const auto h = convex_hull(pts);
  auto it = std::find(h.begin(), h.end(), vertex);
  if (it == h.end() || h.size() < 2) return {};
  std::vector<Weight> nbrs;
  const std::size_t i = it - h.begin(), n = h.size();
  nbrs.push_back(h[(i + 1) % n]);
  if (n > 2) nbrs.push_back(h[(i + n - 1) % n]);
  auto dist = [&](const Weight& p) { return std::abs(p[0] - vertex[0]) + std::abs(p[1] - vertex[1]); };
  std::vector<Weight> out;
  for (const auto& y : nbrs) {
    Weight best = y;
    for (const auto& p : pts)
      if (p != vertex && on_segment(p, vertex, y) && dist(p) < dist(best)) best = p;
    out.push_back(wsub(best, vertex));
  }
  return out;
}

// Support of a weight table on one component. A projective plane also carries the
// weights of its three homogeneous coordinates; its fixed points sit at c + d*a_j.
struct ComponentPolytope {
  std::string name;
  std::vector<Weight> support;
  std::vector<Weight> plane;  // empty unless the component is a projective plane
  long degree = 0;            // d
  Weight offset{};            // c

  std::vector<Weight> fixed_points() const {
    if (plane.empty()) return convex_hull(support);
    std::vector<Weight> out;
    for (const auto& a : plane) out.push_back(wadd(offset, wscale(degree, a)));
    return out;
  }

  std::vector<Weight> tangent_weights(const Weight& v) const {
    if (plane.empty()) return polygon_edge_weights(v, support);
    std::vector<Weight> out;
    for (std::size_t j = 0; j < plane.size(); ++j) {
      if (wadd(offset, wscale(degree, plane[j])) != v) continue;
      for (std::size_t k = 0; k < plane.size(); ++k)
        if (k != j) out.push_back(wsub(plane[k], plane[j]));
    }
    return out;
  }
};

inline ComponentPolytope polygon_component(std::string name, std::vector<Weight> support) {
  ComponentPolytope p;
  p.name = std::move(name);
  p.support = std::move(support);
  return p;
}

// Locate the plane fixed points inside the support: the smallest d admitting
// exactly one c with c + d*a_j in the support for all j.
inline ComponentPolytope plane_component(std::string name, std::vector<Weight> support, std::vector<Weight> plane) {
  ComponentPolytope p = polygon_component(std::move(name), std::move(support));
  p.plane = std::move(plane);
  const std::set<Weight> S(p.support.begin(), p.support.end());
  for (long d = 1; d <= 64; ++d) {
    std::set<Weight> cs;
    for (const auto& s : S) {
      const Weight c = wsub(s, wscale(d, p.plane[0]));
      bool all = true;
      for (const auto& a : p.plane) all = all && S.count(wadd(c, wscale(d, a)));
      if (all) cs.insert(c);
    }
    if (cs.size() == 1) {
      p.degree = d;
      p.offset = *cs.begin();
      return p;
    }
    if (cs.size() > 1) break;
  }
  throw MathError(p.name + ": cannot place the plane fixed points in the weight table");
}

using ComponentTables = std::map<std::string, ComponentPolytope>;

// Three coordinates sharing one Picard degree are homogeneous coordinates of a plane.
inline std::vector<Weight> plane_coordinate_weights(const ComponentData& c, const DegreeMatrix& dm) {
  std::map<Weight, std::vector<std::string>> by_degree;
  for (const auto& n : c.coords) by_degree[dm.pic.at(n)].push_back(n);
  for (const auto& [deg, names] : by_degree)
    if (names.size() == 3) {
      std::vector<Weight> out;
      for (const auto& n : names) out.push_back(dm.tw.at(n));
      return out;
    }
  return {};
}

inline ComponentTables component_tables(const CentralFibre& cf, const Weight& L) {
  ComponentTables out;
  for (const auto& c : cf.comps) {
    if (c.kind == "coordinate") continue;
    auto s = table_support(component_weight_table(L, c, cf.dm));
    if (s.empty()) continue;
    if (c.kind == "hypersurface") {
      auto a = plane_coordinate_weights(c, cf.dm);
      if (a.size() != 3) throw DataError(c.name + ": no plane coordinates");
      out.emplace(c.name, plane_component(c.name, s, a));
    } else {
      out.emplace(c.name, polygon_component(c.name, s));
    }
  }
  return out;
}

// Marked vertices: boundary points of the union polyhedron that are fixed points of
// some component. A point inside an edge of the union can still be a vertex of a
// component, and then it is a fixed point.
inline std::vector<Weight> weight_hull_vertices(const ComponentTables& tables) {
  std::vector<Weight> all;
  std::set<Weight> fixed;
  for (const auto& [name, c] : tables) {
    all.insert(all.end(), c.support.begin(), c.support.end());
    for (const auto& v : c.fixed_points()) fixed.insert(v);
  }
  std::vector<Weight> out;
  for (const auto& p : quadrant_boundary_points(all))
    if (fixed.count(p)) out.push_back(p);
  return out;
}

inline std::vector<Weight> weight_hull_vertices(const std::vector<std::vector<Weight>>& supports) {
  ComponentTables t;
  for (std::size_t i = 0; i < supports.size(); ++i) t.emplace(std::to_string(i), polygon_component(std::to_string(i), supports[i]));
  return weight_hull_vertices(t);
}

inline std::vector<Weight> known_compass_weights(const Weight& vertex, const ComponentTables& tables) {
  std::set<Weight> s;
  for (const auto& [name, c] : tables)
    for (const auto& w : c.tangent_weights(vertex)) s.insert(w);
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// Compass completion

struct CompassError : MathError {
  std::vector<std::vector<Weight>> candidates;
  CompassError(const std::string& what, std::vector<std::vector<Weight>> c)
      : MathError(what), candidates(std::move(c)) {}
};

inline std::vector<Weight> assemble_compass(const std::vector<Weight>& known, const Weight& ell0 = kEll0) {
  if (known.size() > 4) throw CompassError("more than four known weights " + weights_to_string(known), {});
  for (const auto& v : known)
    if (pair_with(ell0, v) == 0) throw CompassError("known weight " + w2s(v) + " is orthogonal to " + w2s(ell0), {});
  const std::size_t k = 4 - known.size();
  long B = 4;
  for (const auto& v : known) B = std::max(B, 4 + 2 * std::abs(homothety(v)));
  std::vector<Weight> axis;
  for (long a = -B; a <= B; ++a)
    if (a != 0) {
      axis.push_back({a, 0});
      axis.push_back({0, a});
    }
  std::set<std::vector<Weight>> found;
  std::vector<std::size_t> idx(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t from) {
    if (pos == k) {
      std::vector<Weight> c = known, extra;
      for (auto i : idx) extra.push_back(axis[i]);
      c.insert(c.end(), extra.begin(), extra.end());
      if (sign_balanced(c, ell0) && pairs_to_two(c)) found.insert(sorted_weights(extra));
      return;
    }
    for (std::size_t i = from; i < axis.size(); ++i) {
      idx[pos] = i;
      rec(pos + 1, i);
    }
  };
  rec(0, 0);
  if (found.size() != 1) {
    std::vector<std::vector<Weight>> cands(found.begin(), found.end());
    std::string msg = found.empty() ? "no completion of " : std::to_string(found.size()) + " completions of ";
    msg += weights_to_string(known);
    for (std::size_t i = 0; i < cands.size() && i < 8; ++i) msg += (i ? " | " : ": ") + weights_to_string(cands[i]);
    throw CompassError(msg, std::move(cands));
  }
  std::vector<Weight> out = known;
  out.insert(out.end(), found.begin()->begin(), found.begin()->end());
  return out;
}

// ---------------------------------------------------------------------------
// Lefschetz-Riemann-Roch series

struct LaurentSeries {
  Weight ell{3, 2};
  long D = 0;
  std::map<Weight, Integer> terms;

  Integer coefficient(const Weight& e) const {
    auto it = terms.find(e);
    return it == terms.end() ? Integer(0) : it->second;
  }
};

using DimensionTable = std::map<Weight, Integer>;

inline const Weight kDefaultEll{3, 2};

inline void validate_functional(const std::vector<FixedPointDatum>& pts, const Weight& ell) {
  if (ell[0] <= 0 || ell[1] <= 0) throw MathError("functional " + w2s(ell) + " is not positive on the quadrant");
  for (const auto& p : pts)
    for (const auto& v : p.compass)
      if (pair_with(ell, v) == 0)
        throw MathError("functional " + w2s(ell) + " vanishes on compass weight " + w2s(v) + " of P" +
                        std::to_string(p.id));
}

inline bool admissible(const std::vector<FixedPointDatum>& pts, const Weight& ell) {
  try {
    validate_functional(pts, ell);
    return true;
  } catch (const MathError&) {
    return false;
  }
}

// Small admissible functionals ordered by a+b, skipping those listed.
inline Weight find_admissible_functional(const std::vector<FixedPointDatum>& pts, const std::set<Weight>& avoid = {}) {
  for (long s = 2; s <= 64; ++s)
    for (long a = 1; a < s; ++a) {
      Weight ell{a, s - a};
      if (std::gcd(a, s - a) == 1 && !avoid.count(ell) && admissible(pts, ell)) return ell;
    }
  throw MathError("no admissible functional found");
}

// t^mu / prod (1 - t^nu), expanded in the direction of ell and truncated at ell <= D.
inline std::map<Weight, Integer> fixed_point_expansion(const Weight& mu, const std::vector<Weight>& compass,
                                                       const Weight& ell, long D) {
  Weight shift = mu;
  int sign = 1;
  std::vector<Weight> dirs;
  for (const auto& v : compass) {
    if (pair_with(ell, v) < 0) {
      sign = -sign;
      shift = wsub(shift, v);
      dirs.push_back(wscale(-1, v));
    } else {
      dirs.push_back(v);
    }
  }
  std::map<Weight, Integer> cur;
  if (pair_with(ell, shift) > D) return cur;
  cur[shift] = sign;
  for (const auto& v : dirs) {
    const long lv = pair_with(ell, v);
    std::map<Weight, Integer> nxt;
    for (const auto& [e, c] : cur) {
      Weight f = e;
      for (long le = pair_with(ell, e); le <= D; le += lv, f = wadd(f, v)) nxt[f] += c;
    }
    cur = std::move(nxt);
  }
  return cur;
}

inline LaurentSeries lrr_character_series(const Weight& L, const std::vector<FixedPointDatum>& pts,
                                          const Weight& ell = kDefaultEll, long D = 130) {
  validate_functional(pts, ell);
  std::vector<std::future<std::map<Weight, Integer>>> parts;
  for (const auto& p : pts)
    parts.push_back(std::async(std::launch::async, [&, mu = p.mu(L)] { return fixed_point_expansion(mu, p.compass, ell, D); }));
  LaurentSeries s{ell, D, {}};
  for (auto& f : parts)
    for (const auto& [e, c] : f.get()) s.terms[e] += c;
  for (auto it = s.terms.begin(); it != s.terms.end();) it = it->second == 0 ? s.terms.erase(it) : std::next(it);
  return s;
}

// Exponents of the series that contradict a dimension count.
inline std::vector<std::string> series_violations(const LaurentSeries& s) {
  std::vector<std::string> bad;
  for (const auto& [e, c] : s.terms) {
    if (e[0] < 0 || e[1] < 0) bad.push_back("off-quadrant " + w2s(e) + " -> " + c.get_str());
    else if (c < 0) bad.push_back("negative " + w2s(e) + " -> " + c.get_str());
  }
  return bad;
}

// Fixed-point data of the other resolution, obtained by exchanging the two weight
// coordinates and the two bundles L1, L2.
inline Weight swapped(const Weight& w) { return {w[1], w[0]}; }

inline std::vector<FixedPointDatum> mirror_fixed_points(const std::vector<FixedPointDatum>& pts) {
  std::vector<FixedPointDatum> out;
  for (const auto& p : pts) {
    FixedPointDatum m;
    m.id = p.id;
    m.vertex = swapped(p.vertex);
    m.mu_L1 = swapped(p.mu_L2);
    m.mu_L2 = swapped(p.mu_L1);
    m.mu_L1L2 = swapped(p.mu_L1L2);
    for (const auto& v : p.compass) m.compass.push_back(swapped(v));
    out.push_back(m);
  }
  return out;
}

// Dimensions of the weight spaces of H^0(pL1 + qL2) for p, q >= 0. The series of
// `pts` counts sections only on its nef chamber p >= q; for q > p the mirrored data
// is used, since both resolutions have the same sections.
inline DimensionTable hilbert_weight_table(const Weight& L, const std::vector<FixedPointDatum>& pts,
                                           const Weight& ell = kDefaultEll, long D = 130) {
  if (L[0] < 0 || L[1] < 0) throw MathError("bundle " + w2s(L) + " is not movable");
  auto s = L[1] > L[0] ? lrr_character_series(L, mirror_fixed_points(pts), ell, D) : lrr_character_series(L, pts, ell, D);
  auto bad = series_violations(s);
  if (!bad.empty()) throw MathError("series for " + w2s(L) + " is not a dimension table: " + bad.front());
  return s.terms;
}

inline DimensionTable restrict_table(const DimensionTable& t, const Weight& ell, long D) {
  DimensionTable out;
  for (const auto& [e, c] : t)
    if (pair_with(ell, e) <= D) out[e] = c;
  return out;
}

using DoubleSeries = std::map<std::pair<long, long>, DimensionTable>;

inline DoubleSeries double_generating_series(long pmax, long qmax, const std::vector<FixedPointDatum>& pts,
                                             const Weight& ell = kDefaultEll, long D = 60) {
  if (pmax < 0 || qmax < 0) throw MathError("double series needs p, q >= 0");
  DoubleSeries out;
  for (long p = 0; p <= pmax; ++p)
    for (long q = 0; q <= qmax; ++q) out[{p, q}] = hilbert_weight_table({p, q}, pts, ell, D);
  return out;
}

// ---------------------------------------------------------------------------
// Walls

struct Wall {
  Weight ray;                           // primitive (p,q): the bundle pL1 + qL2
  std::vector<std::pair<int, int>> pairs;  // fixed points whose weights agree on it
};

// Rays in cone(L1, L1+L2) on which mu_i = mu_j for some pair of fixed points.
inline std::vector<Wall> movable_walls(const std::vector<FixedPointDatum>& pts) {
  std::map<Weight, std::vector<std::pair<int, int>>> rays;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Weight d1 = wsub(pts[i].mu_L1, pts[j].mu_L1), d2 = wsub(pts[i].mu_L2, pts[j].mu_L2);
      // p*d1 + q*d2 = 0
      if (d1[0] * d2[1] - d1[1] * d2[0] != 0) continue;
      Weight row = (d1[0] != 0 || d2[0] != 0) ? Weight{d1[0], d2[0]} : Weight{d1[1], d2[1]};
      if (row[0] == 0 && row[1] == 0) continue;  // identical weights everywhere
      Weight r{row[1], -row[0]};
      const long g = std::gcd(r[0], r[1]);
      r = {r[0] / g, r[1] / g};
      if (r[0] < 0 || (r[0] == 0 && r[1] < 0)) r = wscale(-1, r);
      if (r[0] >= r[1] && r[1] >= 0) rays[r].push_back({pts[i].id, pts[j].id});
    }
  std::vector<Wall> out;
  for (auto& [r, ps] : rays) out.push_back({r, ps});
  return out;
}

// ---------------------------------------------------------------------------
// Seed comparisons

inline std::map<std::string, std::vector<Weight>> load_component_weight_sets(const std::filesystem::path& dir) {
  const auto p = dir / "component_weights.txt";
  std::map<std::string, std::vector<Weight>> out;
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    std::istringstream is(text.substr(tok[0].size()));
    std::string piece;
    auto& v = out[tok[0]];
    while (std::getline(is, piece, ';')) {
      auto t = split_ws(piece);
      if (t.size() != 2) seed_fail(p, ln, "expected 'a b' pairs separated by ';'");
      try {
        v.push_back({std::stol(t[0]), std::stol(t[1])});
      } catch (const std::exception&) {
        seed_fail(p, ln, "bad integer");
      }
    }
  }
  return out;
}

struct Diagram {
  Weight bundle{};
  long amin = 0, amax = -1, bmin = 0, bmax = -1;
  std::map<Weight, long> dims;

  long at(const Weight& w) const {
    auto it = dims.find(w);
    return it == dims.end() ? 0 : it->second;
  }
};

inline Diagram load_diagram(const std::filesystem::path& p) {
  Diagram d;
  bool have_region = false;
  for (const auto& [ln, text] : read_seed_lines(p)) {
    auto tok = split_ws(text);
    try {
      if (tok[0] == "bundle" && tok.size() == 3) {
        d.bundle = {std::stol(tok[1]), std::stol(tok[2])};
      } else if (tok[0] == "region" && tok.size() == 5) {
        d.amin = std::stol(tok[1]), d.amax = std::stol(tok[2]), d.bmin = std::stol(tok[3]), d.bmax = std::stol(tok[4]);
        have_region = true;
      } else if (tok.size() == 3) {
        d.dims[{std::stol(tok[0]), std::stol(tok[1])}] = std::stol(tok[2]);
      } else {
        seed_fail(p, ln, "expected 'a b dim'");
      }
    } catch (const std::invalid_argument&) {
      seed_fail(p, ln, "bad integer");
    }
  }
  if (!have_region) throw DataError(p.filename().string() + ": missing region line");
  return d;
}

inline Report component_table_report(const ComponentTables& tables,
                                     const std::map<std::string, std::vector<Weight>>& expected) {
  Report r;
  for (const auto& [name, pts] : expected) {
    auto it = tables.find(name);
    std::vector<Weight> got = it == tables.end() ? std::vector<Weight>{} : sorted_weights(it->second.support);
    auto want = sorted_weights(pts);
    r.add("weights", name + " weight table support", got == want,
          "got " + weights_to_string(got) + " want " + weights_to_string(want));
  }
  return r;
}

inline Report fixed_point_report(const std::vector<FixedPointData>& seed, const std::vector<FixedPointDatum>& pts) {
  Report r;
  for (const auto& s : seed) {
    auto it = s.mu.find("L2");
    if (it == s.mu.end()) continue;
    const Weight derived = wsub(s.mu.at("L1+L2"), s.mu.at("L1"));
    r.add("mu", "P" + std::to_string(s.id) + " mu(L2) = mu(L1+L2) - mu(L1)", derived == it->second,
          w2s(derived) + " vs " + w2s(it->second));
  }
  for (const auto& p : pts) {
    const std::string n = "P" + std::to_string(p.id);
    const Weight v = wadd(wscale(2, p.mu_L1), p.mu_L2);
    r.add("mu", n + " vertex = mu(2L1+L2)", v == p.vertex, w2s(v) + " vs " + w2s(p.vertex));
    r.add("compass", n + " homothety weights pair to 2", pairs_to_two(p.compass), weights_to_string(p.compass));
    r.add("compass", n + " two weights positive, two negative under (1,-1)", sign_balanced(p.compass),
          weights_to_string(p.compass));
  }
  return r;
}

// Compasses rebuilt from the component polygons alone, then compared with the seed table.
inline Report compass_report(const std::vector<FixedPointDatum>& pts, const ComponentTables& tables) {
  Report r;
  const auto hull = weight_hull_vertices(tables);
  std::vector<Weight> seed_vertices;
  for (const auto& p : pts) seed_vertices.push_back(p.vertex);
  r.add("hull", "marked vertices of the weight polyhedron", sorted_weights(hull) == sorted_weights(seed_vertices),
        "got " + weights_to_string(hull) + " want " + weights_to_string(sorted_weights(seed_vertices)));
  for (const auto& p : pts) {
    const std::string n = "P" + std::to_string(p.id);
    const auto known = known_compass_weights(p.vertex, tables);
    try {
      const auto c = assemble_compass(known);
      r.add("compass", n + " assembled from components", sorted_weights(c) == sorted_weights(p.compass),
            "known " + weights_to_string(known) + " assembled " + weights_to_string(sorted_weights(c)) + " table " +
                weights_to_string(sorted_weights(p.compass)));
      bool axis = true;
      for (std::size_t i = known.size(); i < c.size(); ++i) axis = axis && axis_aligned(c[i]);
      r.add("compass", n + " completed weights axis-aligned", axis, weights_to_string(c));
    } catch (const CompassError& e) {
      r.add("compass", n + " assembled from components", false, e.what());
    }
  }
  // The first weight of P1 also appears with the opposite sign in the literature.
  for (const auto& p : pts) {
    if (p.id != 1) continue;
    auto alt = p.compass;
    for (auto& v : alt)
      if (v == Weight{1, -3}) v = {-1, 3};
    if (alt != p.compass)
      r.note("P1: weight (1,-3) used; the alternative (-1,3) " +
             std::string(pairs_to_two(alt) ? "also pairs to 2" : "breaks the pairing to 2") + " and " +
             (sign_balanced(alt) ? "keeps" : "breaks") + " the sign balance");
  }
  return r;
}

inline Report lrr_report(const std::vector<FixedPointDatum>& pts, const Diagram& dg, const Weight& ell, long D,
                         const Weight& ell2) {
  Report r;
  const auto s = lrr_character_series(dg.bundle, pts, ell, D);
  const auto bad = series_violations(s);
  std::string det = std::to_string(bad.size()) + " violations";
  if (!bad.empty()) det += ", first " + bad.front();
  r.add("lrr", "coefficients vanish off the quadrant and are nonnegative", bad.empty(), det);

  std::size_t mism = 0, cells = 0;
  std::string first;
  bool covered = true;
  for (long a = dg.amin; a <= dg.amax; ++a)
    for (long b = dg.bmin; b <= dg.bmax; ++b) {
      ++cells;
      if (pair_with(ell, {a, b}) > D) covered = false;
      if (s.coefficient({a, b}) != dg.at({a, b})) {
        if (!mism++) first = w2s({a, b}) + " got " + s.coefficient({a, b}).get_str() + " want " + std::to_string(dg.at({a, b}));
      }
    }
  r.add("lrr", "diagram region matches", mism == 0 && covered,
        std::to_string(cells) + " cells, " + std::to_string(mism) + " mismatches" + (first.empty() ? "" : ", first " + first) +
            (covered ? "" : ", region exceeds the truncation"));

  // Same series with a second functional, compared where both truncations are exact.
  const auto s2 = lrr_character_series(dg.bundle, pts, ell2, D);
  std::size_t diff = 0, common = 0;
  std::set<Weight> keys;
  for (const auto& [e, c] : s.terms) keys.insert(e);
  for (const auto& [e, c] : s2.terms) keys.insert(e);
  for (const auto& e : keys) {
    if (pair_with(ell, e) > D || pair_with(ell2, e) > D) continue;
    ++common;
    diff += s.coefficient(e) != s2.coefficient(e);
  }
  r.add("lrr", "independent of the functional " + w2s(ell) + " vs " + w2s(ell2), diff == 0 && common > 0,
        std::to_string(common) + " common exponents, " + std::to_string(diff) + " differ");
  return r;
}

inline Report walls_report(const std::vector<FixedPointDatum>& pts) {
  Report r;
  std::vector<Weight> rays;
  std::string det;
  for (const auto& w : movable_walls(pts)) {
    rays.push_back(w.ray);
    det += w2s(w.ray) + " from";
    for (const auto& [i, j] : w.pairs) det += " P" + std::to_string(i) + "P" + std::to_string(j);
    det += "; ";
  }
  r.add("walls", "walls in cone(L1, L1+L2) are the rays of L1 and L1+L2",
        rays == std::vector<Weight>{{1, 0}, {1, 1}}, det);
  return r;
}

}  // namespace coxtorus
