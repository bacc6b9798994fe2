#pragma once

// Exact scalars: rationals (GMP backed), Gaussian rationals and elements of a
// quadratic extension Q(i)(sqrt d).

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hompot {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

inline Rational make_rational(long p, long q = 1) {
  if (q == 0) throw std::domain_error("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline Rational make_rational(const Integer& p, const Integer& q) {
  if (q == 0) throw std::domain_error("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Parses "p", "-p" or "p/q" (no whitespace).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  try {
    Integer p(s.substr(0, slash), 10);
    Integer q = 1;
    if (slash != std::string::npos) q = Integer(s.substr(slash + 1), 10);
    return make_rational(p, q);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational literal '" + s + "'");
  }
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer floor_of(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const Integer& p = r.get_num();
  const Integer& q = r.get_den();
  if (!mpz_perfect_square_p(p.get_mpz_t()) || !mpz_perfect_square_p(q.get_mpz_t())) return std::nullopt;
  Integer sp, sq;
  mpz_sqrt(sp.get_mpz_t(), p.get_mpz_t());
  mpz_sqrt(sq.get_mpz_t(), q.get_mpz_t());
  return make_rational(sp, sq);
}

inline Rational pow_int(Rational base, long e) {
  if (e < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    base = 1 / base;
    e = -e;
  }
  Rational out = 1;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian rationals
// ---------------------------------------------------------------------------

/// Best continued-fraction approximant p/q of x with q <= max_denominator
/// and |x - p/q| < tol, if any.
inline std::optional<Rational> rational_approximation(double x, long max_denominator, double tol) {
  if (!std::isfinite(x) || std::abs(x) > 1e15) return std::nullopt;
  // convergents h/k of the continued fraction of x
  Integer h_prev = 1, h = static_cast<long>(std::floor(x));
  Integer k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (k > max_denominator) break;
    if (std::abs(x - Rational(h, k).get_d()) < tol) return make_rational(h, k);
    if (frac < 1e-18) break;
    double inv = 1.0 / frac;
    double a = std::floor(inv);
    frac = inv - a;
    Integer ai = static_cast<long>(a);
    Integer hn = ai * h + h_prev, kn = ai * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = hn;
    k = kn;
  }
  return std::nullopt;
}

struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational I() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  GaussianRational conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }

  GaussianRational inverse() const {
    Rational n = norm();
    if (n == 0) throw std::domain_error("division by zero Gaussian rational");
    return {re / n, -im / n};
  }

  GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
  GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) { return *this *= o.inverse(); }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  Complex to_complex() const { return {re.get_d(), im.get_d()}; }
};

inline GaussianRational pow_int(GaussianRational base, long e) {
  if (e < 0) {
    base = base.inverse();
    e = -e;
  }
  GaussianRational out(1);
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

/// "3/2", "-1/2*I", "(1+2*I)". Parenthesized when both parts are nonzero.
inline std::string to_string(const GaussianRational& g) {
  if (g.im == 0) return to_string(g.re);
  std::string imag;
  if (g.im == 1) imag = "I";
  else if (g.im == -1) imag = "-I";
  else imag = to_string(g.im) + "*I";
  if (g.re == 0) return imag;
  std::string out = "(" + to_string(g.re);
  if (imag[0] != '-') out += "+";
  return out + imag + ")";
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& g) { return os << to_string(g); }

/// Exact square root in Q(i) when one exists.
inline std::optional<GaussianRational> exact_sqrt(const GaussianRational& g) {
  if (g.im == 0) {
    if (g.re >= 0) {
      if (auto r = exact_sqrt(g.re)) return GaussianRational(*r);
      return std::nullopt;
    }
    if (auto r = exact_sqrt(Rational(-g.re))) return GaussianRational(Rational(0), *r);
    return std::nullopt;
  }
  // (x + iy)^2 = re + i im  =>  x^2 = (re + |g|)/2
  auto modulus = exact_sqrt(g.norm());
  if (!modulus) return std::nullopt;
  auto x = exact_sqrt(Rational((g.re + *modulus) / 2));
  if (!x || *x == 0) return std::nullopt;
  Rational y = g.im / (2 * *x);
  return GaussianRational(*x, y);
}

// ---------------------------------------------------------------------------
// Quadratic extension Q(i)(sqrt d)
// ---------------------------------------------------------------------------

/// a + b*sqrt(d) with a, b, d Gaussian rationals. d is fixed per number field;
/// d == 0 means the element lives in Q(i) (b must then be zero). d is never an
/// exact square in Q(i), so a + b*sqrt(d) == 0 iff a == b == 0.
class AlgNum {
 public:
  AlgNum() = default;
  AlgNum(long v) : a_(v) {}  // NOLINT
  AlgNum(Rational v) : a_(std::move(v)) {}  // NOLINT
  AlgNum(GaussianRational v) : a_(std::move(v)) {}  // NOLINT
  AlgNum(GaussianRational a, GaussianRational b, GaussianRational d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
    if (d_.is_zero() && !b_.is_zero()) throw std::invalid_argument("sqrt(0) component must vanish");
    if (b_.is_zero()) d_ = GaussianRational();
  }

  /// sqrt(d) as a field element (d must not be an exact square).
  static AlgNum sqrt_of(const GaussianRational& d) { return AlgNum(GaussianRational(), GaussianRational(1), d); }

  const GaussianRational& a() const { return a_; }
  const GaussianRational& b() const { return b_; }
  const GaussianRational& d() const { return d_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool in_base_field() const { return b_.is_zero(); }
  bool is_rational() const { return b_.is_zero() && a_.im == 0; }
  std::optional<Rational> as_rational() const {
    if (!is_rational()) return std::nullopt;
    return a_.re;
  }

  AlgNum conj_sqrt() const { return make(a_, -b_, d_); }

  Complex to_complex() const {
    if (b_.is_zero()) return a_.to_complex();
    return a_.to_complex() + b_.to_complex() * std::sqrt(d_.to_complex());
  }

  AlgNum& operator+=(const AlgNum& o) {
    auto d = common_d(o);
    a_ += o.a_;
    b_ += o.b_;
    d_ = d;
    normalize();
    return *this;
  }
  AlgNum& operator-=(const AlgNum& o) {
    auto d = common_d(o);
    a_ -= o.a_;
    b_ -= o.b_;
    d_ = d;
    normalize();
    return *this;
  }
  AlgNum& operator*=(const AlgNum& o) {
    auto d = common_d(o);
    GaussianRational a = a_ * o.a_ + b_ * o.b_ * d;
    GaussianRational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    d_ = d;
    normalize();
    return *this;
  }
  AlgNum inverse() const {
    // (a + b s)^-1 = (a - b s) / (a^2 - b^2 d)
    GaussianRational n = a_ * a_ - b_ * b_ * d_;
    if (n.is_zero()) throw std::domain_error("division by zero algebraic number");
    GaussianRational ni = n.inverse();
    return make(a_ * ni, -b_ * ni, d_);
  }
  AlgNum& operator/=(const AlgNum& o) { return *this *= o.inverse(); }

  friend AlgNum operator+(AlgNum x, const AlgNum& y) { return x += y; }
  friend AlgNum operator-(AlgNum x, const AlgNum& y) { return x -= y; }
  friend AlgNum operator*(AlgNum x, const AlgNum& y) { return x *= y; }
  friend AlgNum operator/(AlgNum x, const AlgNum& y) { return x /= y; }
  friend AlgNum operator-(const AlgNum& x) { return make(-x.a_, -x.b_, x.d_); }
  friend bool operator==(const AlgNum& x, const AlgNum& y) { return (x - y).is_zero(); }
  friend bool operator!=(const AlgNum& x, const AlgNum& y) { return !(x == y); }

 private:
  static AlgNum make(GaussianRational a, GaussianRational b, GaussianRational d) {
    AlgNum out;
    out.a_ = std::move(a);
    out.b_ = std::move(b);
    out.d_ = std::move(d);
    out.normalize();
    return out;
  }
  GaussianRational common_d(const AlgNum& o) const {
    if (d_.is_zero()) return o.d_;
    if (o.d_.is_zero() || o.d_ == d_) return d_;
    throw std::invalid_argument("mixing elements of different quadratic fields");
  }
  void normalize() {
    if (b_.is_zero()) d_ = GaussianRational();
  }

  GaussianRational a_;
  GaussianRational b_;
  GaussianRational d_;
};

inline std::string to_string(const AlgNum& x) {
  if (x.in_base_field()) return to_string(x.a());
  std::string out = to_string(x.a()) + " + " + to_string(x.b()) + "*sqrt(" + to_string(x.d()) + ")";
  return out;
}

inline AlgNum pow_int(AlgNum base, long e) {
  if (e < 0) {
    base = base.inverse();
    e = -e;
  }
  AlgNum out(1);
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

inline Complex pow_int(Complex base, long e) {
  if (e < 0) {
    base = 1.0 / base;
    e = -e;
  }
  Complex out(1.0);
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

// Scalar traits shared by templated kernels (exact AlgNum or floating Complex).
inline bool is_exact_zero(const AlgNum& x) { return x.is_zero(); }
inline bool is_exact_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
inline Complex to_complex(const AlgNum& x) { return x.to_complex(); }
inline Complex to_complex(const Complex& x) { return x; }

template <class T>
T from_gaussian(const GaussianRational& g);
template <>
inline AlgNum from_gaussian<AlgNum>(const GaussianRational& g) { return AlgNum(g); }
template <>
inline Complex from_gaussian<Complex>(const GaussianRational& g) { return g.to_complex(); }
template <>
inline GaussianRational from_gaussian<GaussianRational>(const GaussianRational& g) { return g; }

}  // namespace hompot
