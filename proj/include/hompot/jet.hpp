#pragma once

// Taylor jets of potentials by truncated bivariate power-series arithmetic.
//
// The scalar type T is either AlgNum (exact) or Complex (floating). Every
// potential kind is expanded as a series in the displacement (x, y) from the
// base point: polynomials by binomial expansion, P/Q by series division and
// the radial factor (q1^2+q2^2)^e by the binomial series of (1+u)^e.

#include "hompot/potential.hpp"

#include <vector>

namespace hompot {

class SingularPointError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an exact jet would need a square root outside the scalar field.
class NotExactError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <class T>
struct Point2 {
  T q1;
  T q2;
};

template <class T>
T scalar(const Rational& r) {
  return from_gaussian<T>(GaussianRational(r));
}

/// Truncated series sum t[a][b] x^a y^b with a + b <= order.
template <class T>
class Series {
 public:
  explicit Series(int order) : order_(order), t_(static_cast<size_t>(order) + 1) {
    for (int a = 0; a <= order; ++a) t_[static_cast<size_t>(a)].assign(static_cast<size_t>(order - a) + 1, T(0));
  }
  static Series constant(int order, const T& c) {
    Series s(order);
    s.at(0, 0) = c;
    return s;
  }
  /// c + x (which = 1) or c + y (which = 2)
  static Series coordinate(int order, const T& c, int which) {
    Series s = constant(order, c);
    if (order >= 1) (which == 1 ? s.at(1, 0) : s.at(0, 1)) = T(1);
    return s;
  }

  int order() const { return order_; }
  T& at(int a, int b) { return t_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }
  const T& at(int a, int b) const { return t_[static_cast<size_t>(a)][static_cast<size_t>(b)]; }

  friend Series operator+(Series x, const Series& y) {
    for (int a = 0; a <= x.order_; ++a)
      for (int b = 0; a + b <= x.order_; ++b) x.at(a, b) = x.at(a, b) + y.at(a, b);
    return x;
  }
  friend Series operator-(Series x, const Series& y) {
    for (int a = 0; a <= x.order_; ++a)
      for (int b = 0; a + b <= x.order_; ++b) x.at(a, b) = x.at(a, b) - y.at(a, b);
    return x;
  }
  friend Series operator*(const Series& x, const Series& y) {
    Series out(x.order_);
    for (int a = 0; a <= x.order_; ++a)
      for (int b = 0; a + b <= x.order_; ++b) {
        if (is_exact_zero(x.at(a, b))) continue;
        for (int c = 0; a + c <= x.order_; ++c)
          for (int d = 0; a + b + c + d <= x.order_; ++d) out.at(a + c, b + d) = out.at(a + c, b + d) + x.at(a, b) * y.at(c, d);
      }
    return out;
  }
  Series scaled(const T& s) const {
    Series out = *this;
    for (int a = 0; a <= order_; ++a)
      for (int b = 0; a + b <= order_; ++b) out.at(a, b) = out.at(a, b) * s;
    return out;
  }

  /// x / y, requires y(0,0) != 0. Solved degree by degree from x = y*q.
  friend Series operator/(const Series& x, const Series& y) {
    if (is_exact_zero(y.at(0, 0))) throw SingularPointError("series division by a function vanishing at the base point");
    T inv = T(1) / y.at(0, 0);
    Series q(x.order_);
    for (int n = 0; n <= x.order_; ++n)
      for (int a = 0; a <= n; ++a) {
        int b = n - a;
        T acc = x.at(a, b);
        for (int c = 0; c <= a; ++c)
          for (int d = 0; d <= b; ++d) {
            if (c == 0 && d == 0) continue;
            acc = acc - y.at(c, d) * q.at(a - c, b - d);
          }
        q.at(a, b) = acc * inv;
      }
    return q;
  }

  /// (1 + u)^e for u = this series minus its constant term, which must be 1.
  Series binomial_power(const Rational& e) const {
    Series u = *this;
    u.at(0, 0) = T(0);
    Series out = constant(order_, T(1));
    Series un = constant(order_, T(1));
    Rational coef = 1;
    for (int n = 1; n <= order_; ++n) {
      coef = coef * (e - (n - 1)) / n;
      un = un * u;
      out = out + un.scaled(scalar<T>(coef));
    }
    return out;
  }

 private:
  int order_;
  std::vector<std::vector<T>> t_;
};

namespace detail {

template <class T>
Series<T> homopoly_series(const HomoPoly& p, const Series<T>& x, const Series<T>& y) {
  int n = x.order();
  std::vector<Series<T>> xp{Series<T>::constant(n, T(1))}, yp{Series<T>::constant(n, T(1))};
  for (int i = 1; i <= p.degree(); ++i) {
    xp.push_back(xp.back() * x);
    yp.push_back(yp.back() * y);
  }
  Series<T> acc(n);
  for (const auto& [j, c] : p.coefficients())
    acc = acc + (xp[static_cast<size_t>(p.degree() - j)] * yp[static_cast<size_t>(j)]).scaled(from_gaussian<T>(c));
  return acc;
}

inline AlgNum exact_sqrt_or_throw(const AlgNum& v) {
  if (v.in_base_field()) {
    if (auto s = exact_sqrt(v.a())) return AlgNum(*s);
  }
  throw NotExactError("q1^2 + q2^2 is not an exact square at this point; use a floating jet");
}
inline Complex exact_sqrt_or_throw(const Complex& v) { return std::sqrt(v); }

/// rho0^e for half-integer or integer e = num/2.
template <class T>
T rho_power(const T& rho0, long twice_e) {
  if (twice_e % 2 == 0) return pow_int(rho0, twice_e / 2);
  return pow_int(exact_sqrt_or_throw(rho0), twice_e);
}

/// (q1^2 + q2^2)^(twice_e/2) as a series.
template <class T>
Series<T> radial_series(const Series<T>& x, const Series<T>& y, long twice_e) {
  Series<T> rho = x * x + y * y;
  T rho0 = rho.at(0, 0);
  if (is_exact_zero(rho0) || std::abs(to_complex(rho0)) < 1e-300)
    throw SingularPointError("radial factor evaluated on the isotropic cone q1^2 + q2^2 = 0");
  Series<T> normalized = rho.scaled(T(1) / rho0);
  return normalized.binomial_power(make_rational(twice_e, 2)).scaled(rho_power(rho0, twice_e));
}

/// Re(C z^m) with z = q1 + i q2, as a homogeneous polynomial of degree m.
inline HomoPoly polar_harmonic(const GaussianRational& c, int m) {
  HomoPoly h(m);
  // z^m = sum_j binom(m, j) q1^(m-j) (i q2)^j
  GaussianRational ipow(1);
  Integer binom = 1;
  for (int j = 0; j <= m; ++j) {
    GaussianRational term = c * ipow * GaussianRational(Rational(binom));
    if (term.re != 0) h.add(j, GaussianRational(term.re));
    ipow *= GaussianRational::I();
    binom = binom * (m - j) / (j + 1);
  }
  return h;
}

}  // namespace detail

/// Series of V(x, y) for coordinate series x, y of equal order.
template <class T>
Series<T> potential_series(const Potential& v, const Series<T>& x, const Series<T>& y) {
  int n = x.order();
  if (const auto* p = v.as<PolynomialKind>()) return detail::homopoly_series(p->poly, x, y);
  if (const auto* r = v.as<RationalKind>()) {
    Series<T> den = detail::homopoly_series(r->denominator, x, y);
    if (is_exact_zero(den.at(0, 0)) || std::abs(to_complex(den.at(0, 0))) == 0.0)
      throw SingularPointError("denominator vanishes at the base point");
    return detail::homopoly_series(r->numerator, x, y) / den;
  }
  if (const auto* r = v.as<RadialKind>()) return detail::radial_series(x, y, v.degree()).scaled(from_gaussian<T>(r->a));
  const TrigPoly& u = v.as<PolarKind>()->angular;
  Series<T> acc(n);
  for (int m = 0; m <= u.order(); ++m) {
    GaussianRational cm = u.complex_coef(m);
    if (cm.is_zero()) continue;
    HomoPoly h = detail::polar_harmonic(cm, m);
    acc = acc + detail::radial_series(x, y, v.degree() - m) * detail::homopoly_series(h, x, y);
  }
  return acc;
}

/// Series of V(c + (x, y)) truncated at total order n.
template <class T>
Series<T> potential_series(const Potential& v, const Point2<T>& c, int n) {
  return potential_series(v, Series<T>::coordinate(n, c.q1, 1), Series<T>::coordinate(n, c.q2, 2));
}

/// Partial derivatives D(a, b) = d^(a+b) V / dq1^a dq2^b at the base point,
/// for a + b <= order + 1.
template <class T>
class TaylorJet {
 public:
  TaylorJet(Point2<T> c, int order, const Series<T>& s) : c_(std::move(c)), order_(order), s_(s) {
    // series coefficients -> derivatives
    for (int a = 0; a <= s_.order(); ++a)
      for (int b = 0; a + b <= s_.order(); ++b) s_.at(a, b) = s_.at(a, b) * scalar<T>(factorial(a) * factorial(b));
  }

  const Point2<T>& base() const { return c_; }
  int order() const { return order_; }
  const T& derivative(int a, int b) const {
    if (a < 0 || b < 0 || a + b > order_ + 1) throw std::out_of_range("jet entry outside its order");
    return s_.at(a, b);
  }
  const T& value() const { return s_.at(0, 0); }
  /// d_{i,j} = d^(i+1) V / dq1^(i-j+1) dq2^j, 0 <= j <= i+1.
  const T& d(int i, int j) const { return derivative(i - j + 1, j); }

  static Rational factorial(int n) {
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  }

 private:
  Point2<T> c_;
  int order_;
  Series<T> s_;
};

template <class T>
TaylorJet<T> jet_at(const Potential& v, const Point2<T>& c, int order) {
  if (order < 0) throw std::invalid_argument("jet order must be >= 0");
  return TaylorJet<T>(c, order, potential_series(v, c, order + 1));
}

/// Jet at (1,0) of V'(q) = V(q1 e + q2 e_perp) / V(e), e_perp = (-e2, e1).
/// For a Darboux direction e this is the normal form: V'(1,0) = 1,
/// grad V'(1,0) = (k, 0).
template <class T>
TaylorJet<T> normalized_jet(const Potential& v, const Point2<T>& e, int order) {
  if (order < 0) throw std::invalid_argument("jet order must be >= 0");
  int n = order + 1;
  Series<T> xs = Series<T>::coordinate(n, T(0), 1), ys = Series<T>::coordinate(n, T(0), 2);
  Series<T> one = Series<T>::constant(n, T(1));
  Series<T> x = (one + xs).scaled(e.q1) - ys.scaled(e.q2);
  Series<T> y = (one + xs).scaled(e.q2) + ys.scaled(e.q1);
  Series<T> s = potential_series(v, x, y);
  T ve = s.at(0, 0);
  if (is_exact_zero(ve) || std::abs(to_complex(ve)) < 1e-300) throw SingularPointError("potential vanishes on the direction");
  return TaylorJet<T>(Point2<T>{T(1), T(0)}, order, s.scaled(T(1) / ve));
}

template <class T>
T evaluate(const Potential& v, const Point2<T>& q) {
  return potential_series(v, q, 0).at(0, 0);
}

/// q1 dV/dq1 + q2 dV/dq2 - k V; identically zero for a homogeneous V.
template <class T>
T euler_defect(const Potential& v, const Point2<T>& q) {
  auto jet = jet_at(v, q, 0);
  return q.q1 * jet.derivative(1, 0) + q.q2 * jet.derivative(0, 1) - scalar<T>(Rational(v.degree())) * jet.value();
}

}  // namespace hompot
