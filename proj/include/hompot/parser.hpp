#pragma once

// Recursive-descent parser for potential expressions.
//
//   polynomial   q1^3 - 3*q1*q2^2, 2q1q2, (q1 + I*q2)^3
//   rational     (q1^3 + q2^3)/(q1^2 + q2^2)^2, 1/q1
//   radial       r^-3, -1/2*r^(-1)
//   polar        r^-3*(1 + 1/10*cos(2*theta)), cos(theta)*r^-1
//
// Whitespace is ignored and '*' may be omitted between factors. "p/q" between
// two integer literals is a rational coefficient; any other '/' divides the
// whole numerator by the following factor (at most one such '/').

#include "hompot/potential.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace hompot {

class ParseError : public std::invalid_argument {
 public:
  ParseError(size_t pos, const std::string& msg)
      : std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  size_t position() const { return pos_; }

 private:
  size_t pos_;
};

namespace detail {

struct Token {
  enum Kind { number, ident, symbol, end } kind;
  std::string text;
  size_t pos;
  bool is(char c) const { return kind == symbol && text[0] == c; }
  bool is(std::string_view name) const { return kind == ident && text == name; }
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::number, std::string(src.substr(i, j - i)), i});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      // identifiers are a letter run followed by an optional digit run (q1, q2)
      size_t j = i;
      while (j < src.size() && std::isalpha(static_cast<unsigned char>(src[j]))) ++j;
      std::string word(src.substr(i, j - i));
      if ((word == "q") && j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        word = std::string(src.substr(i, j - i));
      }
      out.push_back({Token::ident, word, i});
      i = j;
    } else if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      out.push_back({Token::symbol, std::string(1, c), i});
      ++i;
    } else {
      throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::end, "", src.size()});
  return out;
}

class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t ahead = 0) const {
    size_t k = std::min(idx_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  const Token& next() {
    const Token& t = toks_[idx_];
    if (idx_ + 1 < toks_.size()) ++idx_;
    return t;
  }
  bool accept(char c) {
    if (peek().is(c)) {
      next();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(peek().pos, std::string("expected '") + c + "'");
  }
  bool at_factor_start() const {
    const Token& t = peek();
    return t.kind == Token::number || t.kind == Token::ident || t.is('(');
  }

  /// '^' already consumed: INT, -INT, (INT) or (-INT).
  long signed_exponent() {
    bool paren = accept('(');
    bool neg = accept('-');
    const Token& t = next();
    if (t.kind != Token::number) throw ParseError(t.pos, "expected integer exponent");
    long e = std::stol(t.text);
    if (paren) expect(')');
    return neg ? -e : e;
  }

  /// INT or INT/INT literal at the cursor.
  Rational number_literal() {
    const Token& t = next();
    Integer p(t.text, 10);
    if (peek().is('/') && peek(1).kind == Token::number) {
      next();
      const Token& d = next();
      Integer q(d.text, 10);
      if (q == 0) throw ParseError(d.pos, "zero denominator in coefficient");
      return make_rational(p, q);
    }
    return Rational(p);
  }

 private:
  std::vector<Token> toks_;
  size_t idx_ = 0;
};

class PolyParser {
 public:
  explicit PolyParser(std::vector<Token> toks) : cur_(std::move(toks)) {}

  /// Returns (numerator, optional denominator).
  std::pair<BiPoly, std::optional<BiPoly>> parse_top() {
    BiPoly num = sum();
    std::optional<BiPoly> den;
    if (cur_.accept('/')) {
      den = product();
      if (cur_.peek().is('/')) throw ParseError(cur_.peek().pos, "only a single '/' is allowed");
    }
    if (cur_.peek().kind != Token::end) throw ParseError(cur_.peek().pos, "unexpected '" + cur_.peek().text + "'");
    return {std::move(num), std::move(den)};
  }

 private:
  BiPoly sum() {
    BiPoly acc;
    bool neg = false;
    if (cur_.accept('-')) neg = true;
    else cur_.accept('+');
    BiPoly t = product();
    acc = neg ? -t : t;
    while (cur_.peek().is('+') || cur_.peek().is('-')) {
      bool minus = cur_.next().is('-');
      BiPoly u = product();
      acc = minus ? acc - u : acc + u;
    }
    return acc;
  }

  BiPoly product() {
    BiPoly acc = power();
    while (true) {
      if (cur_.accept('*')) {
        acc = acc * power();
      } else if (cur_.at_factor_start()) {
        acc = acc * power();
      } else {
        return acc;
      }
    }
  }

  BiPoly power() {
    BiPoly base = atom();
    if (cur_.peek().is('^')) {
      size_t pos = cur_.next().pos;
      long e = cur_.signed_exponent();
      if (e < 0) throw ParseError(pos, "negative exponent; use '/' for rational potentials");
      return base.pow(static_cast<int>(e));
    }
    return base;
  }

  BiPoly atom() {
    const Token& t = cur_.peek();
    if (t.kind == Token::number) return BiPoly(GaussianRational(cur_.number_literal()));
    if (t.is('(')) {
      cur_.next();
      BiPoly inner = sum();
      cur_.expect(')');
      return inner;
    }
    if (t.is('-')) {
      cur_.next();
      return -power();
    }
    if (t.kind == Token::ident) {
      cur_.next();
      if (t.text == "q1") return BiPoly::variable(1);
      if (t.text == "q2") return BiPoly::variable(2);
      if (t.text == "I") return BiPoly(GaussianRational::I());
      throw ParseError(t.pos, "unknown identifier '" + t.text + "'");
    }
    if (t.kind == Token::end) throw ParseError(t.pos, "unexpected end of input");
    throw ParseError(t.pos, "unexpected '" + t.text + "'");
  }

  TokenCursor cur_;
};

/// Two-sided Fourier form F_m e^{i m theta}, m in [-M, M], used for products.
inline std::map<int, GaussianRational> to_fourier(const TrigPoly& u) {
  std::map<int, GaussianRational> f;
  if (u.cos_coef(0) != 0) f[0] = GaussianRational(u.cos_coef(0));
  GaussianRational half(make_rational(1, 2));
  for (int m = 1; m <= u.order(); ++m) {
    GaussianRational c = u.complex_coef(m);
    if (c.is_zero()) continue;
    f[m] = c * half;
    f[-m] = c.conj() * half;
  }
  return f;
}

inline TrigPoly from_fourier(const std::map<int, GaussianRational>& f) {
  int top = 0;
  for (const auto& [m, c] : f)
    if (!c.is_zero()) top = std::max(top, std::abs(m));
  std::vector<GaussianRational> c(static_cast<size_t>(top) + 1);
  for (const auto& [m, v] : f) {
    if (m == 0) c[0] = v;
    else if (m > 0) c[static_cast<size_t>(m)] = v * GaussianRational(2);
  }
  return TrigPoly::from_complex(c);
}

inline TrigPoly multiply(const TrigPoly& a, const TrigPoly& b) {
  auto fa = to_fourier(a), fb = to_fourier(b);
  std::map<int, GaussianRational> out;
  for (const auto& [m, x] : fa)
    for (const auto& [n, y] : fb) out[m + n] += x * y;
  return from_fourier(out);
}

class TrigParser {
 public:
  explicit TrigParser(std::vector<Token> toks) : cur_(std::move(toks)) {}

  TrigPoly parse_top() {
    TrigPoly u = sum();
    if (cur_.peek().kind != Token::end) throw ParseError(cur_.peek().pos, "unexpected '" + cur_.peek().text + "'");
    return u;
  }

 private:
  TrigPoly sum() {
    bool neg = false;
    if (cur_.accept('-')) neg = true;
    else cur_.accept('+');
    TrigPoly acc = product();
    if (neg) acc = acc.scaled(Rational(-1));
    while (cur_.peek().is('+') || cur_.peek().is('-')) {
      bool minus = cur_.next().is('-');
      TrigPoly u = product();
      acc = acc + (minus ? u.scaled(Rational(-1)) : u);
    }
    return acc;
  }

  TrigPoly product() {
    TrigPoly acc = power();
    while (true) {
      if (cur_.accept('*') || cur_.at_factor_start()) {
        acc = multiply(acc, power());
      } else if (cur_.peek().is('/')) {
        size_t pos = cur_.next().pos;
        if (cur_.peek().kind != Token::number) throw ParseError(pos, "angular part may only be divided by a number");
        Rational d = cur_.number_literal();
        if (d == 0) throw ParseError(pos, "division by zero");
        acc = acc.scaled(1 / d);
      } else {
        return acc;
      }
    }
  }

  TrigPoly power() {
    TrigPoly base = atom();
    if (cur_.peek().is('^')) {
      size_t pos = cur_.next().pos;
      long e = cur_.signed_exponent();
      if (e < 0) throw ParseError(pos, "negative exponent in angular part");
      TrigPoly out = TrigPoly::constant(1);
      for (long i = 0; i < e; ++i) out = multiply(out, base);
      return out;
    }
    return base;
  }

  int angle_multiple() {
    cur_.expect('(');
    long m = 1;
    if (cur_.peek().kind == Token::number) {
      m = std::stol(cur_.next().text);
      cur_.accept('*');
    }
    const Token& t = cur_.next();
    if (!t.is("theta")) throw ParseError(t.pos, "expected 'theta'");
    cur_.expect(')');
    return static_cast<int>(m);
  }

  TrigPoly atom() {
    const Token& t = cur_.peek();
    if (t.kind == Token::number) return TrigPoly::constant(cur_.number_literal());
    if (t.is('(')) {
      cur_.next();
      TrigPoly inner = sum();
      cur_.expect(')');
      return inner;
    }
    if (t.is('-')) {
      cur_.next();
      return power().scaled(Rational(-1));
    }
    if (t.is("cos") || t.is("sin")) {
      bool is_cos = t.is("cos");
      cur_.next();
      int m = angle_multiple();
      std::vector<Rational> a(static_cast<size_t>(m) + 1), b(static_cast<size_t>(m) + 1);
      if (is_cos) a[static_cast<size_t>(m)] = 1;
      else if (m > 0) b[static_cast<size_t>(m)] = 1;
      return TrigPoly(std::move(a), std::move(b));
    }
    if (t.kind == Token::end) throw ParseError(t.pos, "unexpected end of input");
    throw ParseError(t.pos, "unexpected '" + t.text + "' in angular part");
  }

  TokenCursor cur_;
};

/// Splits off the single top-level factor r^k. Returns k and the remaining
/// tokens (a bare sign becomes sign*1).
inline std::pair<long, std::vector<Token>> split_radial_factor(const std::vector<Token>& toks) {
  int depth = 0;
  std::optional<size_t> at;
  for (size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.is('(')) ++depth;
    else if (t.is(')')) --depth;
    else if (t.is("r")) {
      if (depth != 0 || at) throw ParseError(t.pos, "the factor r^k must appear exactly once, outside parentheses");
      at = i;
    } else if ((t.is('+') || t.is('-')) && depth == 0 && i > 0 && !toks[i - 1].is('^') && !toks[i - 1].is('*')) {
      throw ParseError(t.pos, "the factor r^k must multiply the whole expression");
    }
  }
  size_t begin = *at, end = *at + 1;
  long k = 1;
  if (toks[end].is('^')) {
    std::vector<Token> tail(toks.begin() + static_cast<long>(end) + 1, toks.end());
    TokenCursor cur(tail);
    k = cur.signed_exponent();
    // count consumed tokens
    size_t consumed = 0;
    while (tail[consumed].pos < cur.peek().pos) ++consumed;
    end += 1 + consumed;
  }
  if (begin > 0 && toks[begin - 1].is('*')) --begin;
  else if (toks[end].is('*')) ++end;
  std::vector<Token> rest;
  for (size_t i = 0; i < toks.size(); ++i)
    if (i < begin || i >= end) rest.push_back(toks[i]);
  size_t meaningful = rest.size() - 1;  // excluding end token
  if (meaningful == 0 || (meaningful == 1 && (rest[0].is('-') || rest[0].is('+')))) {
    rest.insert(rest.end() - 1, Token{Token::number, "1", rest.back().pos});
  }
  return {k, std::move(rest)};
}

}  // namespace detail

inline TrigPoly parse_trig_poly(std::string_view text) {
  auto toks = detail::tokenize(text);
  for (const auto& t : toks)
    if (t.is("q1") || t.is("q2") || t.is("r") || t.is("I"))
      throw ParseError(t.pos, "unexpected '" + t.text + "' in angular part");
  return detail::TrigParser(std::move(toks)).parse_top();
}

inline Potential parse_potential(std::string_view text) {
  auto toks = detail::tokenize(text);
  bool angular = false, radial = false;
  for (const auto& t : toks) {
    if (t.is("theta") || t.is("cos") || t.is("sin")) angular = true;
    if (t.is("r")) radial = true;
  }
  if (angular || radial) {
    if (!radial) throw ParseError(0, "angular expression needs a radial factor r^k");
    for (const auto& t : toks)
      if (t.is("q1") || t.is("q2")) throw ParseError(t.pos, "cannot mix r/theta with Cartesian variables");
    auto [k, rest] = detail::split_radial_factor(toks);
    if (k == 0) throw ParseError(0, "degree 0 potential");
    if (angular) {
      TrigPoly u = detail::TrigParser(rest).parse_top();
      if (u.is_zero()) throw ParseError(0, "zero potential");
      if (u.is_constant()) return Potential::radial(GaussianRational(u.cos_coef(0)), static_cast<int>(k));
      return Potential::polar(std::move(u), static_cast<int>(k));
    }
    auto [num, den] = detail::PolyParser(rest).parse_top();
    if (den || !num.is_constant()) throw ParseError(0, "radial coefficient must be a constant");
    if (num.is_zero()) throw ParseError(0, "zero potential");
    return Potential::radial(num.constant_value(), static_cast<int>(k));
  }

  auto [num, den] = detail::PolyParser(std::move(toks)).parse_top();
  auto homogeneous_degree = [](const BiPoly& p, const char* what) {
    auto degs = p.degrees();
    if (degs.size() > 1) {
      std::string msg = std::string("non-homogeneous ") + what + ": mixed degrees";
      for (int d : degs) msg += " " + std::to_string(d);
      throw ParseError(0, msg);
    }
    return degs.empty() ? 0 : degs.front();
  };
  if (num.is_zero()) throw ParseError(0, "zero potential");
  int dn = homogeneous_degree(num, "numerator");
  HomoPoly hn = HomoPoly::from_bipoly(num, dn);
  if (!den) {
    if (dn == 0) throw ParseError(0, "degree 0 potential");
    return Potential::polynomial(std::move(hn));
  }
  if (den->is_zero()) throw ParseError(0, "zero denominator");
  int dd = homogeneous_degree(*den, "denominator");
  try {
    return Potential::rational(std::move(hn), HomoPoly::from_bipoly(*den, dd));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace hompot
