#pragma once

// q -> scale * V(R q) for complex-orthogonal R.

#include "hompot/potential.hpp"

#include <array>

namespace hompot {

/// Row-major 2x2 matrix.
struct Matrix2 {
  std::array<GaussianRational, 4> m{GaussianRational(1), GaussianRational(0), GaussianRational(0), GaussianRational(1)};

  const GaussianRational& operator()(int r, int c) const { return m[static_cast<size_t>(2 * r + c)]; }
  GaussianRational& operator()(int r, int c) { return m[static_cast<size_t>(2 * r + c)]; }

  static Matrix2 identity() { return {}; }
  static Matrix2 of(GaussianRational a, GaussianRational b, GaussianRational c, GaussianRational d) {
    Matrix2 r;
    r.m = {std::move(a), std::move(b), std::move(c), std::move(d)};
    return r;
  }
  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
    Matrix2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    return r;
  }
  Matrix2 transpose() const { return of(m[0], m[2], m[1], m[3]); }
  GaussianRational det() const { return m[0] * m[3] - m[1] * m[2]; }
  bool is_orthogonal() const {
    Matrix2 p = transpose() * *this;
    return p(0, 0) == GaussianRational(1) && p(1, 1) == GaussianRational(1) && p(0, 1).is_zero() && p(1, 0).is_zero();
  }
};

class NotOrthogonalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Potential transform(const Potential& v, const Matrix2& r, const GaussianRational& scale) {
  if (!r.is_orthogonal()) throw NotOrthogonalError("transform matrix does not satisfy R^T R = I");
  if (scale.is_zero()) throw std::invalid_argument("transform scale must be nonzero");
  if (const auto* p = v.as<PolynomialKind>())
    return Potential::polynomial(p->poly.linear_substitute(r(0, 0), r(0, 1), r(1, 0), r(1, 1)).scaled(scale));
  if (const auto* q = v.as<RationalKind>()) {
    return Potential::rational(q->numerator.linear_substitute(r(0, 0), r(0, 1), r(1, 0), r(1, 1)).scaled(scale),
                               q->denominator.linear_substitute(r(0, 0), r(0, 1), r(1, 0), r(1, 1)));
  }
  if (const auto* q = v.as<RadialKind>()) return Potential::radial(q->a * scale, v.degree());

  const TrigPoly& u = v.as<PolarKind>()->angular;
  for (const auto& e : r.m)
    if (!e.is_real()) throw std::invalid_argument("polar potentials only admit real rotations and reflections");
  if (!scale.is_real()) throw std::invalid_argument("polar potentials only admit real scale factors");
  // first column (cos psi, sin psi); det +1 rotates theta -> theta + psi,
  // det -1 reflects theta -> psi - theta
  GaussianRational w(r(0, 0).re, r(1, 0).re);
  bool reflection = r.det() == GaussianRational(-1);
  std::vector<GaussianRational> c;
  GaussianRational wm(1);
  for (int m = 0; m <= u.order(); ++m) {
    GaussianRational cm = u.complex_coef(m) * wm * GaussianRational(scale.re);
    c.push_back(reflection ? cm.conj() : cm);
    wm *= w;
  }
  return Potential::polar(TrigPoly::from_complex(c), v.degree());
}

}  // namespace hompot
