#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "coxtorus/laurent.hpp"

namespace coxtorus {

// Recursive-descent parser for the seed-data polynomial syntax. The identifier `z`
// denotes the field generator (primitive 12th root of unity), everything else is a variable.
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*      division only by monomials
//   unary := '-' unary | power
//   power := atom ('^' ['-'] digits)?
//   atom  := integer | identifier | '(' expr ')'
class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  LaurentPoly parse() {
    LaurentPoly r = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw DataError("polynomial parse error at offset " + std::to_string(pos_) + " (" + why + "): " +
                    std::string(s_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  LaurentPoly expr() {
    LaurentPoly r = term();
    for (;;) {
      if (eat('+')) {
        r += term();
      } else if (eat('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }
  LaurentPoly term() {
    LaurentPoly r = unary();
    for (;;) {
      if (eat('*')) {
        r *= unary();
      } else if (eat('/')) {
        LaurentPoly d = unary();
        if (!d.is_monomial()) fail("division by a non-monomial");
        r *= d.pow(-1);
      } else {
        return r;
      }
    }
  }
  LaurentPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  LaurentPoly power() {
    LaurentPoly base = atom();
    if (eat('^')) {
      skip();
      bool neg = false;
      if (eat('-')) neg = true;
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent expected");
      int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      return base.pow(neg ? -e : e);
    }
    return base;
  }
  LaurentPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      LaurentPoly r = expr();
      if (!eat(')')) fail("')' expected");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return LaurentPoly(CycNum(parse_rational(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "z") return LaurentPoly(CycNum::zeta(1));
      return LaurentPoly::var(name);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline LaurentPoly parse_poly(std::string_view s) { return PolyParser(s).parse(); }

inline CycNum parse_cyc(std::string_view s) {
  LaurentPoly p = parse_poly(s);
  if (!p.is_constant()) throw DataError("expected a field constant: " + std::string(s));
  return p.constant_value();
}

}  // namespace coxtorus
