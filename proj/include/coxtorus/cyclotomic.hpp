#pragma once

#include <array>
#include <functional>
#include <ostream>
#include <string>

#include "coxtorus/rational.hpp"

namespace coxtorus {

// Element c0 + c1 z + c2 z^2 + c3 z^3 of Q(z), z a primitive 12th root of unity,
// reduced modulo z^4 - z^2 + 1.
class CycNum {
 public:
  CycNum() = default;
  CycNum(long v) { c_[0] = v; }  // NOLINT(google-explicit-constructor)
  CycNum(const Rational& q) { c_[0] = q; }  // NOLINT(google-explicit-constructor)
  CycNum(Rational c0, Rational c1, Rational c2, Rational c3)
      : c_{std::move(c0), std::move(c1), std::move(c2), std::move(c3)} {}

  static CycNum zeta(long k) {
    k %= 12;
    if (k < 0) k += 12;
    std::array<Rational, 12> d{};
    d[static_cast<std::size_t>(k)] = 1;
    return reduce(d);
  }
  static CycNum i() { return zeta(3); }
  static CycNum b() { return zeta(2); }  // primitive 6th root
  static CycNum zeta3() { return zeta(4); }
  static CycNum sqrt3() { return zeta(1) + zeta(11); }

  const Rational& coeff(std::size_t j) const { return c_[j]; }
  const std::array<Rational, 4>& coeffs() const { return c_; }

  bool is_zero() const { return sgn(c_[0]) == 0 && sgn(c_[1]) == 0 && sgn(c_[2]) == 0 && sgn(c_[3]) == 0; }
  bool is_rational() const { return sgn(c_[1]) == 0 && sgn(c_[2]) == 0 && sgn(c_[3]) == 0; }
  bool is_one() const { return is_rational() && c_[0] == 1; }

  friend CycNum operator+(const CycNum& a, const CycNum& b) {
    CycNum r;
    for (std::size_t j = 0; j < 4; ++j) r.c_[j] = a.c_[j] + b.c_[j];
    return r;
  }
  friend CycNum operator-(const CycNum& a, const CycNum& b) {
    CycNum r;
    for (std::size_t j = 0; j < 4; ++j) r.c_[j] = a.c_[j] - b.c_[j];
    return r;
  }
  CycNum operator-() const {
    CycNum r;
    for (std::size_t j = 0; j < 4; ++j) r.c_[j] = -c_[j];
    return r;
  }
  friend CycNum operator*(const CycNum& a, const CycNum& b) {
    if (a.is_rational()) return b.scaled(a.c_[0]);
    if (b.is_rational()) return a.scaled(b.c_[0]);
    std::array<Rational, 12> d{};
    for (std::size_t j = 0; j < 4; ++j) {
      if (sgn(a.c_[j]) == 0) continue;
      for (std::size_t k = 0; k < 4; ++k)
        if (sgn(b.c_[k]) != 0) d[j + k] += a.c_[j] * b.c_[k];
    }
    return reduce(d);
  }
  friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inverse(); }
  CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
  CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }
  CycNum& operator/=(const CycNum& o) { return *this = *this / o; }
  friend bool operator==(const CycNum& a, const CycNum& b) { return a.c_ == b.c_; }
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  CycNum scaled(const Rational& q) const {
    CycNum r;
    for (std::size_t j = 0; j < 4; ++j) r.c_[j] = c_[j] * q;
    return r;
  }

  // Galois automorphism z -> z^k, k coprime to 12.
  CycNum galois(long k) const {
    CycNum r;
    for (std::size_t j = 0; j < 4; ++j)
      if (sgn(c_[j]) != 0) r += zeta(k * static_cast<long>(j)).scaled(c_[j]);
    return r;
  }

  Rational norm() const {
    CycNum n = *this * galois(5) * galois(7) * galois(11);
    return n.c_[0];
  }

  CycNum inverse() const {
    if (is_zero()) throw MathError("CycNum division by zero");
    if (is_rational()) return CycNum(Rational(1) / c_[0]);
    CycNum y = galois(5) * galois(7) * galois(11);
    CycNum n = *this * y;
    return y.scaled(Rational(1) / n.c_[0]);
  }

  CycNum pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycNum r(1), b = *this;
    while (e > 0) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  // Seed-file format: c0+c1*z+c2*z^2+c3*z^3, zero terms dropped.
  std::string to_string() const {
    std::string out;
    for (std::size_t j = 0; j < 4; ++j) {
      if (sgn(c_[j]) == 0) continue;
      std::string v = c_[j].get_str();
      if (!out.empty() && v[0] != '-') out += '+';
      if (j == 0) {
        out += v;
        continue;
      }
      if (c_[j] == 1) {
      } else if (c_[j] == -1) {
        out += '-';
      } else {
        out += v + "*";
      }
      out += j == 1 ? "z" : "z^" + std::to_string(j);
    }
    return out.empty() ? "0" : out;
  }

  std::size_t hash() const {
    std::size_t h = 0;
    for (const auto& q : c_) {
      h = h * 1000003u ^ std::hash<std::string>{}(q.get_str());
    }
    return h;
  }

  friend std::ostream& operator<<(std::ostream& os, const CycNum& x) { return os << x.to_string(); }

 private:
  static CycNum reduce(std::array<Rational, 12>& d) {
    // z^k = z^(k-2) - z^(k-4) for k >= 4
    for (std::size_t k = 11; k >= 4; --k) {
      if (sgn(d[k]) == 0) continue;
      d[k - 2] += d[k];
      d[k - 4] -= d[k];
      d[k] = 0;
    }
    return CycNum(d[0], d[1], d[2], d[3]);
  }

  std::array<Rational, 4> c_{};
};

}  // namespace coxtorus

template <>
struct std::hash<coxtorus::CycNum> {
  std::size_t operator()(const coxtorus::CycNum& x) const noexcept { return x.hash(); }
};
