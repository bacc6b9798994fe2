#pragma once

// Univariate and bivariate polynomials with Gaussian-rational coefficients.

#include "hompot/rational.hpp"

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

namespace hompot {

/// Dense univariate polynomial, coefficients stored lowest degree first.
/// The zero polynomial has no coefficients and degree -1.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<GaussianRational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UPoly monomial(int deg, GaussianRational coef = 1) {
    std::vector<GaussianRational> c(static_cast<size_t>(deg) + 1);
    c.back() = std::move(coef);
    return UPoly(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<GaussianRational>& coeffs() const { return c_; }
  GaussianRational coeff(int i) const {
    if (i < 0 || i > degree()) return {};
    return c_[static_cast<size_t>(i)];
  }
  const GaussianRational& leading() const { return c_.back(); }

  template <class T>
  T eval(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + from_gaussian<T>(*it);
    return acc;
  }

  UPoly derivative() const {
    std::vector<GaussianRational> d;
    for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * GaussianRational(static_cast<long>(i)));
    return UPoly(std::move(d));
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    GaussianRational inv = leading().inverse();
    std::vector<GaussianRational> c = c_;
    for (auto& x : c) x *= inv;
    return UPoly(std::move(c));
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<GaussianRational> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return UPoly(std::move(c));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<GaussianRational> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return UPoly(std::move(c));
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<GaussianRational> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return UPoly(std::move(c));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Euclidean division over Q(i): a = q*b + r with deg r < deg b.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<GaussianRational> r = a.c_;
    int db = b.degree();
    std::vector<GaussianRational> q(static_cast<size_t>(std::max(0, a.degree() - db + 1)));
    GaussianRational inv = b.leading().inverse();
    for (int i = a.degree(); i >= db; --i) {
      GaussianRational f = r[static_cast<size_t>(i)] * inv;
      if (f.is_zero()) continue;
      q[static_cast<size_t>(i - db)] = f;
      for (int j = 0; j <= db; ++j) r[static_cast<size_t>(i - db + j)] -= f * b.c_[static_cast<size_t>(j)];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }

  static UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
      UPoly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<GaussianRational> c_;
};

/// Sparse bivariate polynomial in (q1, q2), not necessarily homogeneous. Used
/// as the parser's working type.
class BiPoly {
 public:
  using Exponent = std::pair<int, int>;  // (power of q1, power of q2)

  BiPoly() = default;
  BiPoly(GaussianRational constant) {  // NOLINT
    if (!constant.is_zero()) terms_[{0, 0}] = std::move(constant);
  }
  static BiPoly variable(int which) {
    BiPoly p;
    p.terms_[which == 1 ? Exponent{1, 0} : Exponent{0, 1}] = GaussianRational(1);
    return p;
  }

  const std::map<Exponent, GaussianRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0}); }
  GaussianRational constant_value() const {
    auto it = terms_.find({0, 0});
    return it == terms_.end() ? GaussianRational() : it->second;
  }

  /// Total degrees appearing among the terms.
  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& [e, c] : terms_) out.push_back(e.first + e.second);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend BiPoly operator+(BiPoly a, const BiPoly& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
    return a;
  }
  friend BiPoly operator-(const BiPoly& a) { return BiPoly() - a; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) out.add_term({ea.first + eb.first, ea.second + eb.second}, ca * cb);
    return out;
  }
  BiPoly pow(int e) const {
    BiPoly out(GaussianRational(1));
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
  }

  void add_term(const Exponent& e, const GaussianRational& c) {
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

 private:
  std::map<Exponent, GaussianRational> terms_;
};

/// Homogeneous bivariate polynomial sum c_j q1^(deg-j) q2^j. Only nonzero
/// coefficients are stored; the zero polynomial keeps its declared degree.
class HomoPoly {
 public:
  HomoPoly() = default;
  explicit HomoPoly(int degree) : degree_(degree) {
    if (degree < 0) throw std::invalid_argument("homogeneous polynomial of negative degree");
  }

  static HomoPoly from_bipoly(const BiPoly& p, int degree) {
    HomoPoly h(degree);
    for (const auto& [e, c] : p.terms()) {
      if (e.first + e.second != degree) throw std::invalid_argument("term degree does not match declared degree");
      h.add(e.second, c);
    }
    return h;
  }

  /// Monomial c * q1^i * q2^j.
  static HomoPoly monomial(int i, int j, GaussianRational c = 1) {
    HomoPoly h(i + j);
    h.add(j, std::move(c));
    return h;
  }

  int degree() const { return degree_; }
  bool is_zero() const { return coef_.empty(); }
  /// Keyed by the power of q2.
  const std::map<int, GaussianRational>& coefficients() const { return coef_; }
  GaussianRational coeff(int q1_power, int q2_power) const {
    if (q1_power + q2_power != degree_) return {};
    auto it = coef_.find(q2_power);
    return it == coef_.end() ? GaussianRational() : it->second;
  }

  void add(int q2_power, const GaussianRational& c) {
    if (q2_power < 0 || q2_power > degree_) throw std::out_of_range("exponent outside homogeneous range");
    auto [it, inserted] = coef_.try_emplace(q2_power, c);
    if (!inserted) it->second += c;
    if (it->second.is_zero()) coef_.erase(it);
  }

  BiPoly to_bipoly() const {
    BiPoly p;
    for (const auto& [j, c] : coef_) p.add_term({degree_ - j, j}, c);
    return p;
  }

  template <class T>
  T eval(const T& x, const T& y) const {
    T acc(0);
    for (const auto& [j, c] : coef_) acc = acc + from_gaussian<T>(c) * pow_int(x, degree_ - j) * pow_int(y, j);
    return acc;
  }

  /// p(1, s) as a polynomial in s.
  UPoly at_direction() const {
    std::vector<GaussianRational> c(static_cast<size_t>(degree_) + 1);
    for (const auto& [j, v] : coef_) c[static_cast<size_t>(j)] = v;
    return UPoly(std::move(c));
  }

  HomoPoly d1() const {
    HomoPoly out(std::max(degree_ - 1, 0));
    if (degree_ == 0) return out;
    for (const auto& [j, c] : coef_)
      if (degree_ - j > 0) out.add(j, c * GaussianRational(static_cast<long>(degree_ - j)));
    return out;
  }
  HomoPoly d2() const {
    HomoPoly out(std::max(degree_ - 1, 0));
    if (degree_ == 0) return out;
    for (const auto& [j, c] : coef_)
      if (j > 0) out.add(j - 1, c * GaussianRational(static_cast<long>(j)));
    return out;
  }

  HomoPoly scaled(const GaussianRational& s) const {
    HomoPoly out(degree_);
    for (const auto& [j, c] : coef_) out.add(j, c * s);
    return out;
  }

  /// p(m11 q1 + m12 q2, m21 q1 + m22 q2).
  HomoPoly linear_substitute(const GaussianRational& m11, const GaussianRational& m12, const GaussianRational& m21,
                             const GaussianRational& m22) const {
    BiPoly x = BiPoly(m11) * BiPoly::variable(1) + BiPoly(m12) * BiPoly::variable(2);
    BiPoly y = BiPoly(m21) * BiPoly::variable(1) + BiPoly(m22) * BiPoly::variable(2);
    BiPoly acc;
    for (const auto& [j, c] : coef_) acc = acc + BiPoly(c) * x.pow(degree_ - j) * y.pow(j);
    return from_bipoly(acc, degree_);
  }

  friend HomoPoly operator+(const HomoPoly& a, const HomoPoly& b) {
    // the zero polynomial is homogeneous of every degree
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    if (a.degree_ != b.degree_) throw std::invalid_argument("adding homogeneous polynomials of different degree");
    HomoPoly out = a;
    for (const auto& [j, c] : b.coef_) out.add(j, c);
    return out;
  }
  friend HomoPoly operator-(const HomoPoly& a, const HomoPoly& b) { return a + b.scaled(GaussianRational(-1)); }
  friend HomoPoly operator*(const HomoPoly& a, const HomoPoly& b) {
    HomoPoly out(a.degree_ + b.degree_);
    for (const auto& [ja, ca] : a.coef_)
      for (const auto& [jb, cb] : b.coef_) out.add(ja + jb, ca * cb);
    return out;
  }
  friend bool operator==(const HomoPoly& a, const HomoPoly& b) {
    return a.degree_ == b.degree_ && a.coef_ == b.coef_;
  }

 private:
  int degree_ = 0;
  std::map<int, GaussianRational> coef_;
};

}  // namespace hompot
