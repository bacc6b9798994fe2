#pragma once

// Homogeneous planar potentials: polynomial, rational P/Q, radial a*r^k and
// polar r^k*U(theta). Values are immutable after construction.

#include "hompot/polynomial.hpp"

#include <json.hpp>

#include <cmath>
#include <string>
#include <variant>
#include <vector>

namespace hompot {

/// Real trigonometric polynomial sum_m A_m cos(m theta) + B_m sin(m theta).
class TrigPoly {
 public:
  TrigPoly() = default;
  TrigPoly(std::vector<Rational> cos_coef, std::vector<Rational> sin_coef)
      : cos_(std::move(cos_coef)), sin_(std::move(sin_coef)) {
    normalize();
  }
  static TrigPoly constant(Rational c) { return TrigPoly({std::move(c)}, {}); }

  int order() const { return static_cast<int>(std::max(cos_.size(), sin_.size())) - 1; }
  Rational cos_coef(int m) const { return m < static_cast<int>(cos_.size()) ? cos_[static_cast<size_t>(m)] : Rational(0); }
  Rational sin_coef(int m) const { return m < static_cast<int>(sin_.size()) ? sin_[static_cast<size_t>(m)] : Rational(0); }
  bool is_zero() const { return cos_.empty() && sin_.empty(); }
  bool is_constant() const { return order() <= 0; }

  /// C_m = A_m - i B_m, so that U = sum_m Re(C_m e^{i m theta}).
  GaussianRational complex_coef(int m) const { return {cos_coef(m), -sin_coef(m)}; }
  static TrigPoly from_complex(const std::vector<GaussianRational>& c) {
    std::vector<Rational> a, b;
    for (size_t m = 0; m < c.size(); ++m) {
      a.push_back(c[m].re);
      b.push_back(m == 0 ? Rational(0) : Rational(-c[m].im));
    }
    return TrigPoly(std::move(a), std::move(b));
  }

  /// n-th derivative evaluated at theta.
  double eval(double theta, int derivative = 0) const {
    double acc = 0.0;
    for (int m = 0; m <= order(); ++m) {
      double a = cos_coef(m).get_d(), b = sin_coef(m).get_d();
      double c = std::cos(m * theta), s = std::sin(m * theta);
      double f = std::pow(static_cast<double>(m), derivative);
      // d^n/dtheta^n of (a cos + b sin) cycles with period 4
      switch (derivative % 4) {
        case 0: acc += f * (a * c + b * s); break;
        case 1: acc += f * (-a * s + b * c); break;
        case 2: acc += f * (-a * c - b * s); break;
        default: acc += f * (a * s - b * c); break;
      }
    }
    return acc;
  }

  /// n-th derivative at the exact point z = e^{i theta} (|z| = 1 assumed).
  AlgNum eval_exact(const AlgNum& z, int derivative = 0) const {
    AlgNum acc(0);
    AlgNum zinv = z.inverse();
    AlgNum half_i = AlgNum(GaussianRational(Rational(0), make_rational(-1, 2)));  // 1/(2i)
    for (int m = 0; m <= order(); ++m) {
      AlgNum zm = pow_int(z, m), zmi = pow_int(zinv, m);
      AlgNum cosm = (zm + zmi) * AlgNum(make_rational(1, 2));
      AlgNum sinm = (zm - zmi) * half_i;
      AlgNum a(cos_coef(m)), b(sin_coef(m));
      AlgNum f(pow_int(Rational(m), derivative));
      switch (derivative % 4) {
        case 0: acc += f * (a * cosm + b * sinm); break;
        case 1: acc += f * (-a * sinm + b * cosm); break;
        case 2: acc += f * (-a * cosm - b * sinm); break;
        default: acc += f * (a * sinm - b * cosm); break;
      }
    }
    return acc;
  }

  TrigPoly derivative() const {
    std::vector<Rational> a(static_cast<size_t>(order() + 1)), b(static_cast<size_t>(order() + 1));
    for (int m = 1; m <= order(); ++m) {
      a[static_cast<size_t>(m)] = m * sin_coef(m);
      b[static_cast<size_t>(m)] = -m * cos_coef(m);
    }
    return TrigPoly(std::move(a), std::move(b));
  }

  friend TrigPoly operator+(const TrigPoly& x, const TrigPoly& y) {
    int n = std::max(x.order(), y.order()) + 1;
    std::vector<Rational> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
      a[static_cast<size_t>(m)] = x.cos_coef(m) + y.cos_coef(m);
      b[static_cast<size_t>(m)] = x.sin_coef(m) + y.sin_coef(m);
    }
    return TrigPoly(std::move(a), std::move(b));
  }
  TrigPoly scaled(const Rational& s) const {
    std::vector<Rational> a = cos_, b = sin_;
    for (auto& x : a) x *= s;
    for (auto& x : b) x *= s;
    return TrigPoly(std::move(a), std::move(b));
  }
  friend bool operator==(const TrigPoly& x, const TrigPoly& y) { return x.cos_ == y.cos_ && x.sin_ == y.sin_; }

 private:
  void normalize() {
    if (!sin_.empty()) sin_[0] = 0;
    while (!cos_.empty() && cos_.back() == 0) cos_.pop_back();
    while (!sin_.empty() && sin_.back() == 0) sin_.pop_back();
  }
  std::vector<Rational> cos_;
  std::vector<Rational> sin_;
};

struct PolynomialKind {
  HomoPoly poly;
};
struct RationalKind {
  HomoPoly numerator;
  HomoPoly denominator;
};
/// a * (q1^2 + q2^2)^(k/2)
struct RadialKind {
  GaussianRational a;
};
/// r^k * U(theta)
struct PolarKind {
  TrigPoly angular;
};

enum class PotentialKind { polynomial, rational, radial, polar };

inline const char* kind_name(PotentialKind k) {
  switch (k) {
    case PotentialKind::polynomial: return "polynomial";
    case PotentialKind::rational: return "rational";
    case PotentialKind::radial: return "radial";
    case PotentialKind::polar: return "polar";
  }
  return "?";
}

class Potential {
 public:
  using Data = std::variant<PolynomialKind, RationalKind, RadialKind, PolarKind>;

  static Potential polynomial(HomoPoly p) {
    if (p.is_zero()) throw std::invalid_argument("zero potential");
    if (p.degree() == 0) throw std::invalid_argument("degree 0 potential");
    int k = p.degree();
    return Potential(k, PolynomialKind{std::move(p)});
  }
  /// Cancels common factors; a constant denominator collapses to polynomial kind.
  static Potential rational(HomoPoly num, HomoPoly den);
  static Potential radial(GaussianRational a, int k) {
    if (a.is_zero()) throw std::invalid_argument("zero potential");
    if (k == 0) throw std::invalid_argument("degree 0 potential");
    return Potential(k, RadialKind{std::move(a)});
  }
  static Potential polar(TrigPoly u, int k) {
    if (u.is_zero()) throw std::invalid_argument("zero potential");
    if (k == 0) throw std::invalid_argument("degree 0 potential");
    return Potential(k, PolarKind{std::move(u)});
  }

  int degree() const { return degree_; }
  const Data& data() const { return data_; }
  PotentialKind kind() const { return static_cast<PotentialKind>(data_.index()); }

  template <class K>
  const K* as() const { return std::get_if<K>(&data_); }

  friend bool operator==(const Potential& a, const Potential& b);

 private:
  Potential(int k, Data d) : degree_(k), data_(std::move(d)) {}
  int degree_;
  Data data_;
};

// ---------------------------------------------------------------------------
// Canonical text
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_negative_coefficient(const GaussianRational& c) {
  return (c.im == 0 && c.re < 0) || (c.re == 0 && c.im < 0);
}

/// Appends "coef*monomial" with the sign handled by the caller's separator.
inline void append_term(std::string& out, const GaussianRational& coef, const std::string& monomial, bool first) {
  bool neg = is_negative_coefficient(coef);
  GaussianRational mag = neg ? -coef : coef;
  if (first) {
    if (neg) out += "-";
  } else {
    out += neg ? " - " : " + ";
  }
  if (monomial.empty()) {
    out += to_string(mag);
  } else if (mag == GaussianRational(1)) {
    out += monomial;
  } else {
    out += to_string(mag) + "*" + monomial;
  }
}

inline std::string power(const std::string& var, int e) {
  if (e == 1) return var;
  return var + "^" + std::to_string(e);
}

}  // namespace detail

inline std::string to_string(const HomoPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [j, c] : p.coefficients()) {
    int i = p.degree() - j;
    std::string mono;
    if (i > 0) mono = detail::power("q1", i);
    if (j > 0) mono += (mono.empty() ? "" : "*") + detail::power("q2", j);
    detail::append_term(out, c, mono, first);
    first = false;
  }
  return out;
}

inline std::string to_string(const TrigPoly& u) {
  if (u.is_zero()) return "0";
  std::string out;
  bool first = true;
  auto angle = [](int m) { return m == 1 ? std::string("theta") : std::to_string(m) + "*theta"; };
  for (int m = 0; m <= u.order(); ++m) {
    if (m == 0) {
      if (u.cos_coef(0) != 0) {
        detail::append_term(out, GaussianRational(u.cos_coef(0)), "", first);
        first = false;
      }
      continue;
    }
    if (u.cos_coef(m) != 0) {
      detail::append_term(out, GaussianRational(u.cos_coef(m)), "cos(" + angle(m) + ")", first);
      first = false;
    }
    if (u.sin_coef(m) != 0) {
      detail::append_term(out, GaussianRational(u.sin_coef(m)), "sin(" + angle(m) + ")", first);
      first = false;
    }
  }
  return out;
}

inline std::string to_string(const Potential& v) {
  int k = v.degree();
  std::string rk = k == 1 ? "r" : "r^" + std::to_string(k);
  if (const auto* p = v.as<PolynomialKind>()) return to_string(p->poly);
  if (const auto* r = v.as<RationalKind>()) return "(" + to_string(r->numerator) + ")/(" + to_string(r->denominator) + ")";
  if (const auto* r = v.as<RadialKind>()) {
    std::string out;
    detail::append_term(out, r->a, rk, true);
    return out;
  }
  const auto& u = std::get<PolarKind>(v.data()).angular;
  return rk + "*(" + to_string(u) + ")";
}

// ---------------------------------------------------------------------------
// Rational-kind canonicalization
// ---------------------------------------------------------------------------

namespace detail {

/// Largest power of q1 dividing p.
inline int q1_valuation(const HomoPoly& p) { return p.degree() - p.coefficients().rbegin()->first; }

inline HomoPoly homogenize(const UPoly& f, int degree) {
  HomoPoly h(degree);
  for (int j = 0; j <= f.degree(); ++j)
    if (!f.coeff(j).is_zero()) h.add(j, f.coeff(j));
  return h;
}

}  // namespace detail

inline Potential Potential::rational(HomoPoly num, HomoPoly den) {
  if (den.is_zero()) throw std::invalid_argument("zero denominator");
  if (num.is_zero()) throw std::invalid_argument("zero potential");
  // gcd in the dehomogenized variable plus the common power of q1
  UPoly g = UPoly::gcd(num.at_direction(), den.at_direction());
  int m = std::min(detail::q1_valuation(num), detail::q1_valuation(den));
  int gdeg = g.degree() + m;
  if (gdeg > 0) {
    auto reduce = [&](const HomoPoly& p) {
      auto [q, r] = UPoly::divmod(p.at_direction(), g);
      if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
      return detail::homogenize(q, p.degree() - gdeg);
    };
    num = reduce(num);
    den = reduce(den);
  }
  // denominator's lowest-q2-power coefficient normalized to 1
  GaussianRational lead = den.coefficients().begin()->second;
  GaussianRational inv = lead.inverse();
  num = num.scaled(inv);
  den = den.scaled(inv);
  int k = num.degree() - den.degree();
  if (k == 0) throw std::invalid_argument("degree 0 potential");
  if (den.degree() == 0) return polynomial(std::move(num));
  return Potential(k, RationalKind{std::move(num), std::move(den)});
}

inline bool operator==(const Potential& a, const Potential& b) {
  if (a.degree_ != b.degree_ || a.data_.index() != b.data_.index()) return false;
  if (const auto* p = a.as<PolynomialKind>()) return p->poly == b.as<PolynomialKind>()->poly;
  if (const auto* r = a.as<RationalKind>()) {
    const auto* s = b.as<RationalKind>();
    return r->numerator == s->numerator && r->denominator == s->denominator;
  }
  if (const auto* r = a.as<RadialKind>()) return r->a == b.as<RadialKind>()->a;
  return a.as<PolarKind>()->angular == b.as<PolarKind>()->angular;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const GaussianRational& g) { return {{"re", to_string(g.re)}, {"im", to_string(g.im)}}; }

inline GaussianRational gaussian_from_json(const nlohmann::json& j) {
  if (j.is_string()) return GaussianRational(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return GaussianRational(j.get<long>());
  return {parse_rational(j.at("re").get<std::string>()),
          j.contains("im") ? parse_rational(j.at("im").get<std::string>()) : Rational(0)};
}

inline nlohmann::json to_json(const HomoPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [j, c] : p.coefficients()) {
    nlohmann::json t = to_json(c);
    t["i"] = p.degree() - j;
    t["j"] = j;
    terms.push_back(t);
  }
  return {{"degree", p.degree()}, {"terms", terms}};
}

inline HomoPoly homopoly_from_json(const nlohmann::json& j) {
  HomoPoly p(j.at("degree").get<int>());
  for (const auto& t : j.at("terms")) {
    int i = t.at("i").get<int>(), jj = t.at("j").get<int>();
    if (i + jj != p.degree()) throw std::invalid_argument("term exponents do not sum to the declared degree");
    p.add(jj, gaussian_from_json(t));
  }
  return p;
}

inline nlohmann::json to_json(const TrigPoly& u) {
  nlohmann::json c = nlohmann::json::array(), s = nlohmann::json::array();
  for (int m = 0; m <= u.order(); ++m) {
    c.push_back(to_string(u.cos_coef(m)));
    s.push_back(to_string(u.sin_coef(m)));
  }
  return {{"cos", c}, {"sin", s}};
}

inline TrigPoly trigpoly_from_json(const nlohmann::json& j) {
  std::vector<Rational> a, b;
  for (const auto& x : j.at("cos")) a.push_back(parse_rational(x.get<std::string>()));
  for (const auto& x : j.at("sin")) b.push_back(parse_rational(x.get<std::string>()));
  return TrigPoly(std::move(a), std::move(b));
}

inline nlohmann::json to_json(const Potential& v) {
  nlohmann::json out{{"kind", kind_name(v.kind())}, {"degree", v.degree()}};
  if (const auto* p = v.as<PolynomialKind>()) out["terms"] = to_json(p->poly)["terms"];
  else if (const auto* r = v.as<RationalKind>()) {
    out["numerator"] = to_json(r->numerator);
    out["denominator"] = to_json(r->denominator);
  } else if (const auto* r = v.as<RadialKind>()) {
    out["a"] = to_json(r->a);
  } else {
    out["U"] = to_json(v.as<PolarKind>()->angular);
  }
  return out;
}

inline Potential potential_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  int k = j.at("degree").get<int>();
  if (kind == "polynomial") {
    nlohmann::json body{{"degree", k}, {"terms", j.at("terms")}};
    return Potential::polynomial(homopoly_from_json(body));
  }
  if (kind == "rational") {
    Potential v = Potential::rational(homopoly_from_json(j.at("numerator")), homopoly_from_json(j.at("denominator")));
    if (v.degree() != k) throw std::invalid_argument("declared degree does not match numerator/denominator");
    return v;
  }
  if (kind == "radial") return Potential::radial(gaussian_from_json(j.at("a")), k);
  if (kind == "polar") return Potential::polar(trigpoly_from_json(j.at("U")), k);
  throw std::invalid_argument("unknown potential kind '" + kind + "'");
}

}  // namespace hompot
