#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxtorus/cyclotomic.hpp"
#include "coxtorus/linsolve.hpp"

namespace coxtorus {

// Variable names are interned process-wide; ids are stable for the process lifetime.
class VarRegistry {
 public:
  static int id(const std::string& name) {
    auto& r = inst();
    std::lock_guard<std::mutex> lk(r.mu_);
    auto it = r.ids_.find(name);
    if (it != r.ids_.end()) return it->second;
    int k = static_cast<int>(r.names_.size());
    r.names_.push_back(name);
    r.ids_.emplace(name, k);
    return k;
  }
  static std::string name(int k) {
    auto& r = inst();
    std::lock_guard<std::mutex> lk(r.mu_);
    return r.names_.at(static_cast<std::size_t>(k));
  }

 private:
  static VarRegistry& inst() {
    static VarRegistry r;
    return r;
  }
  std::mutex mu_;
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
};

class Monomial {
 public:
  Monomial() = default;
  static Monomial var(const std::string& name, int e = 1) {
    Monomial m;
    if (e != 0) m.e_.push_back({VarRegistry::id(name), e});
    return m;
  }

  const std::vector<std::pair<int, int>>& exponents() const { return e_; }
  bool is_one() const { return e_.empty(); }

  int exponent(const std::string& name) const { return exponent_id(VarRegistry::id(name)); }
  int exponent_id(int id) const {
    for (auto [v, e] : e_)
      if (v == id) return e;
    return 0;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.e_.reserve(a.e_.size() + b.e_.size());
    std::size_t i = 0, j = 0;
    while (i < a.e_.size() || j < b.e_.size()) {
      if (j == b.e_.size() || (i < a.e_.size() && a.e_[i].first < b.e_[j].first)) {
        r.e_.push_back(a.e_[i++]);
      } else if (i == a.e_.size() || b.e_[j].first < a.e_[i].first) {
        r.e_.push_back(b.e_[j++]);
      } else {
        int s = a.e_[i].second + b.e_[j].second;
        if (s != 0) r.e_.push_back({a.e_[i].first, s});
        ++i;
        ++j;
      }
    }
    return r;
  }
  Monomial pow(int k) const {
    Monomial r;
    if (k == 0) return r;
    for (auto [v, e] : e_) r.e_.push_back({v, e * k});
    return r;
  }
  Monomial without(int id) const {
    Monomial r;
    for (auto p : e_)
      if (p.first != id) r.e_.push_back(p);
    return r;
  }

  friend bool operator<(const Monomial& a, const Monomial& b) { return a.e_ < b.e_; }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }

  int total_degree() const {
    int d = 0;
    for (auto [v, e] : e_) d += e;
    return d;
  }

  std::string to_string() const {
    if (e_.empty()) return "1";
    std::vector<std::pair<std::string, int>> named;
    for (auto [v, e] : e_) named.push_back({VarRegistry::name(v), e});
    std::sort(named.begin(), named.end());
    std::string s;
    for (const auto& [n, e] : named) {
      if (!s.empty()) s += '*';
      s += n;
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

 private:
  std::vector<std::pair<int, int>> e_;  // sorted by variable id, no zero exponents
};

// Per-variable Z^2 weights; unlisted variables have weight zero.
struct WeightAssignment {
  std::map<std::string, std::array<long, 2>> w;

  std::array<long, 2> of(const Monomial& m) const {
    std::array<long, 2> r{0, 0};
    for (auto [v, e] : m.exponents()) {
      auto it = w.find(VarRegistry::name(v));
      if (it == w.end()) continue;
      r[0] += e * it->second[0];
      r[1] += e * it->second[1];
    }
    return r;
  }

  static WeightAssignment torus() {
    return {{{"x1", {1, 0}}, {"y1", {1, 0}}, {"x2", {0, 1}}, {"y2", {0, 1}}}};
  }
  static WeightAssignment picard() { return {{{"t1", {1, 0}}, {"t2", {0, 1}}}}; }
};

struct InhomogeneousError : MathError {
  using MathError::MathError;
};

class LaurentPoly {
 public:
  using TermMap = std::map<Monomial, CycNum>;

  LaurentPoly() = default;
  LaurentPoly(const CycNum& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) t_.emplace(Monomial(), c);
  }
  LaurentPoly(long c) : LaurentPoly(CycNum(c)) {}  // NOLINT(google-explicit-constructor)
  LaurentPoly(const Monomial& m, const CycNum& c = CycNum(1)) {
    if (!c.is_zero()) t_.emplace(m, c);
  }
  static LaurentPoly var(const std::string& name) { return LaurentPoly(Monomial::var(name)); }

  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  bool is_monomial() const { return t_.size() == 1; }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one()); }
  CycNum constant_value() const {
    auto it = t_.find(Monomial());
    return it == t_.end() ? CycNum(0) : it->second;
  }

  void add_term(const Monomial& m, const CycNum& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.try_emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
    for (const auto& [m, c] : b.t_) a.add_term(m, c);
    return a;
  }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) {
    for (const auto& [m, c] : b.t_) a.add_term(m, -c);
    return a;
  }
  LaurentPoly operator-() const {
    LaurentPoly r;
    for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ma, ca] : a.t_)
      for (const auto& [mb, cb] : b.t_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  LaurentPoly scaled(const CycNum& c) const {
    LaurentPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : t_) r.t_.emplace(m, v * c);
    return r;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  // Negative powers only for monomials.
  LaurentPoly pow(int k) const {
    if (k < 0) {
      if (!is_monomial()) throw MathError("negative power of a non-monomial");
      const auto& [m, c] = *t_.begin();
      return LaurentPoly(m.pow(k), c.pow(k));
    }
    LaurentPoly r(1), b = *this;
    while (k > 0) {
      if (k & 1) r *= b;
      k >>= 1;
      if (k) b *= b;
    }
    return r;
  }

  LaurentPoly derivative(const std::string& name) const {
    const int id = VarRegistry::id(name);
    LaurentPoly r;
    for (const auto& [m, c] : t_) {
      int e = m.exponent_id(id);
      if (e == 0) continue;
      r.add_term(m * Monomial::var(name, -1), c * CycNum(static_cast<long>(e)));
    }
    return r;
  }

  // Display order: total degree descending, then lexicographic on the printed monomial.
  std::vector<std::pair<Monomial, CycNum>> display_terms() const {
    std::vector<std::pair<Monomial, CycNum>> v(t_.begin(), t_.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      int da = a.first.total_degree(), db = b.first.total_degree();
      if (da != db) return da > db;
      return a.first.to_string() < b.first.to_string();
    });
    return v;
  }

  std::string to_string() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : display_terms()) {
      std::string cs;
      if (c.is_rational()) {
        cs = c.coeff(0).get_str();
        if (m.is_one()) {
        } else if (cs == "1") {
          cs.clear();
        } else if (cs == "-1") {
          cs = "-";
        } else {
          cs += "*";
        }
      } else {
        cs = "(" + c.to_string() + ")";
        if (!m.is_one()) cs += "*";
      }
      std::string term = cs + (m.is_one() ? "" : m.to_string());
      if (!s.empty() && term[0] != '-') s += " + ";
      else if (!s.empty()) {
        s += " - ";
        term.erase(0, 1);
      }
      s += term;
    }
    return s;
  }

 private:
  TermMap t_;
};

inline std::array<long, 2> weight_of(const LaurentPoly& f, const WeightAssignment& wa) {
  if (f.is_zero()) throw InhomogeneousError("weight of the zero polynomial is undefined");
  auto it = f.terms().begin();
  const Monomial& first = it->first;
  auto w0 = wa.of(first);
  for (++it; it != f.terms().end(); ++it) {
    if (wa.of(it->first) != w0)
      throw InhomogeneousError("inhomogeneous terms " + first.to_string() + " and " + it->first.to_string());
  }
  return w0;
}

// x_i -> sum_j g(i,j) x_j over the listed variables (matrix acting on the coordinate column).
inline LaurentPoly apply_linear_substitution(const LaurentPoly& f, const std::vector<std::string>& vars,
                                             const Matrix<CycNum>& g) {
  const std::size_t n = vars.size();
  std::vector<int> ids(n);
  std::vector<LaurentPoly> image(n);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = VarRegistry::id(vars[i]);
    for (std::size_t j = 0; j < n; ++j) image[i] += LaurentPoly(Monomial::var(vars[j])).scaled(g[i][j]);
  }
  std::vector<std::map<int, LaurentPoly>> powcache(n);
  auto power = [&](std::size_t i, int e) -> const LaurentPoly& {
    auto it = powcache[i].find(e);
    if (it != powcache[i].end()) return it->second;
    return powcache[i].emplace(e, image[i].pow(e)).first->second;
  };
  LaurentPoly out;
  for (const auto& [m, c] : f.terms()) {
    LaurentPoly term(c);
    Monomial rest = m;
    for (std::size_t i = 0; i < n; ++i) {
      int e = m.exponent_id(ids[i]);
      if (e == 0) continue;
      if (e < 0) throw MathError("linear substitution into a negative power of " + vars[i]);
      rest = rest.without(ids[i]);
      term = term * power(i, e);
    }
    out += term * LaurentPoly(rest);
  }
  return out;
}

using Point = std::map<std::string, CycNum>;

inline CycNum evaluate(const LaurentPoly& f, const Point& pt) {
  CycNum acc(0);
  for (const auto& [m, c] : f.terms()) {
    CycNum v = c;
    for (auto [id, e] : m.exponents()) {
      auto it = pt.find(VarRegistry::name(id));
      if (it == pt.end()) throw MathError("point misses variable " + VarRegistry::name(id));
      if (e < 0 && it->second.is_zero()) throw MathError("pole at point in variable " + VarRegistry::name(id));
      v *= it->second.pow(e);
    }
    acc += v;
  }
  return acc;
}

// A product of polynomial factors with integer exponents, e.g. w23 * w12^-2 * s^-1.
struct PowerProduct {
  std::vector<std::pair<LaurentPoly, int>> factors;
  CycNum scalar = CycNum(1);

  static PowerProduct of(const LaurentPoly& f) { return {{{f, 1}}, CycNum(1)}; }

  CycNum evaluate_at(const Point& pt) const {
    CycNum v = scalar;
    for (const auto& [f, e] : factors) {
      CycNum fv = evaluate(f, pt);
      if (e < 0 && fv.is_zero()) throw MathError("pole at point");
      v *= fv.pow(e);
    }
    return v;
  }

  CycNum derivative_at(const std::string& var, const Point& pt) const {
    const std::size_t k = factors.size();
    std::vector<CycNum> vals(k);
    for (std::size_t j = 0; j < k; ++j) {
      vals[j] = evaluate(factors[j].first, pt);
      if (factors[j].second < 0 && vals[j].is_zero()) throw MathError("pole at point");
    }
    CycNum acc(0);
    for (std::size_t j = 0; j < k; ++j) {
      const int e = factors[j].second;
      CycNum d = evaluate(factors[j].first.derivative(var), pt);
      if (d.is_zero()) continue;
      CycNum term = d * CycNum(static_cast<long>(e)) * (e - 1 == 0 ? CycNum(1) : vals[j].pow(e - 1));
      for (std::size_t i = 0; i < k; ++i)
        if (i != j) term *= vals[i].pow(factors[i].second);
      acc += term;
    }
    return acc * scalar;
  }
};

inline std::size_t jacobian_rank_at_point(const std::vector<PowerProduct>& fs, const std::vector<std::string>& vars,
                                          const Point& pt) {
  Matrix<CycNum> J(fs.size(), std::vector<CycNum>(vars.size()));
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < vars.size(); ++j) J[i][j] = fs[i].derivative_at(vars[j], pt);
  return exact_rank(J);
}

inline std::size_t jacobian_rank_at_point(const std::vector<LaurentPoly>& fs, const std::vector<std::string>& vars,
                                          const Point& pt) {
  std::vector<PowerProduct> pp;
  for (const auto& f : fs) pp.push_back(PowerProduct::of(f));
  return jacobian_rank_at_point(pp, vars, pt);
}

}  // namespace coxtorus
