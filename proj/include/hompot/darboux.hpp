#pragma once

// Darboux points: nonzero c with grad V(c) = k c.
//
// Directions are found first as roots of W(s) = q2 dV/dq1 - q1 dV/dq2 at
// (1, s), plus the direction (0, 1) when W drops degree. Along a direction e
// with grad V(e) = nu e the point is c = gamma e with gamma^(k-2) = k / nu.
// The Hessian at c is exactly (k / nu) times the Hessian at e, so spectra and
// multiplicity tests stay exact whenever the direction is exact, even when
// gamma itself is irrational.

#include "hompot/jet.hpp"
#include "hompot/roots.hpp"

#include <json.hpp>

#include <array>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hompot {

class NotDarbouxError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

template <class T>
using Matrix2x2 = std::array<T, 4>;  // row-major

/// The three equivalent multiplicity tests.
struct MultiplicityTests {
  bool eigenvalue_equals_k = false;
  bool determinant_vanishes = false;
  bool jacobian_rank_deficient = false;
  bool agree() const {
    return eigenvalue_equals_k == determinant_vanishes && determinant_vanishes == jacobian_rank_deficient;
  }
};

struct DarbouxPoint {
  int degree = 0;
  Point2<Complex> c;
  std::optional<Point2<AlgNum>> c_exact;
  /// Direction e with c = gamma e; e = (1, s) or (0, 1).
  Point2<Complex> direction;
  std::optional<Point2<AlgNum>> direction_exact;
  Matrix2x2<Complex> hessian{};
  std::optional<Matrix2x2<AlgNum>> hessian_exact;
  Complex lambda;
  std::optional<AlgNum> lambda_exact;
  MultiplicityTests tests;
  bool multiple = false;
  bool isotropic = false;
  /// Root multiplicity in the direction polynomial (0 when not derived from it).
  int direction_multiplicity = 0;
  /// Lambda(c): lambda when real, otherwise -infinity.
  double lambda_cap = -std::numeric_limits<double>::infinity();
  double residual = 0.0;

  bool exact() const { return lambda_exact.has_value(); }
  /// k(k-1), the eigenvalue along c forced by the Euler identity.
  Rational radial_eigenvalue() const { return Rational(degree) * (degree - 1); }
};

struct DarbouxSet {
  int degree = 0;
  std::vector<DarbouxPoint> points;
  /// A whole circle of Darboux points; one representative is listed.
  bool continuum = false;
  /// W vanished identically: V is a multiple of (q1^2 + q2^2)^(k/2).
  bool rotation_invariant = false;
  /// Directions where grad V(e) = 0, so no finite scaling exists.
  std::vector<Point2<Complex>> degenerate_directions;
  /// Directions where the denominator of V vanishes.
  std::vector<Point2<Complex>> singular_directions;
};

namespace detail {

inline bool near_zero(const AlgNum& x, double) { return x.is_zero(); }
inline bool near_zero(const Complex& x, double tol) { return std::abs(x) <= tol; }

inline double magnitude(const AlgNum& x) { return std::abs(x.to_complex()); }
inline double magnitude(const Complex& x) { return std::abs(x); }

/// Rank of a 2x2 matrix by elimination.
template <class T>
int rank2(const Matrix2x2<T>& m, double tol) {
  int pr = -1, pc = -1;
  double best = -1;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const T& x = m[static_cast<size_t>(2 * r + c)];
      if (near_zero(x, tol)) continue;
      if (magnitude(x) > best) {
        best = magnitude(x);
        pr = r;
        pc = c;
      }
    }
  if (pr < 0) return 0;
  int orow = 1 - pr, ocol = 1 - pc;
  auto at = [&](int r, int c) -> const T& { return m[static_cast<size_t>(2 * r + c)]; };
  T rest = at(orow, ocol) - at(orow, pc) * at(pr, ocol) / at(pr, pc);
  return near_zero(rest, tol) ? 1 : 2;
}

template <class T>
void spectrum_tests(const Matrix2x2<T>& h, int k, T& lambda, MultiplicityTests& tests) {
  T kk = scalar<T>(Rational(k));
  T kk1 = scalar<T>(Rational(k) * (k - 1));
  lambda = h[0] + h[3] - kk1;
  double scale = 1.0;
  for (const auto& x : h) scale = std::max(scale, magnitude(x));
  double tol = 1e-9 * scale;
  tests.eigenvalue_equals_k = near_zero(T(lambda - kk), tol);
  Matrix2x2<T> m{h[0] - kk, h[1], h[2], h[3] - kk};
  tests.determinant_vanishes = near_zero(T(m[0] * m[3] - m[1] * m[2]), tol * scale);
  tests.jacobian_rank_deficient = rank2(m, tol) < 2;
}

template <class T>
Matrix2x2<T> hessian_of(const TaylorJet<T>& jet) {
  return {jet.derivative(2, 0), jet.derivative(1, 1), jet.derivative(1, 1), jet.derivative(0, 2)};
}

inline Point2<Complex> to_complex_point(const Point2<AlgNum>& p) { return {p.q1.to_complex(), p.q2.to_complex()}; }
inline Point2<Complex> to_complex_point(const Point2<Complex>& p) { return p; }

inline Matrix2x2<Complex> to_complex_matrix(const Matrix2x2<AlgNum>& m) {
  return {m[0].to_complex(), m[1].to_complex(), m[2].to_complex(), m[3].to_complex()};
}
inline Matrix2x2<Complex> to_complex_matrix(const Matrix2x2<Complex>& m) { return m; }

/// Fills spectrum, tests and flags of p from the Hessian at c.
template <class T>
void fill_spectrum(DarbouxPoint& p, const Matrix2x2<T>& h) {
  T lambda;
  detail::spectrum_tests(h, p.degree, lambda, p.tests);
  p.hessian = to_complex_matrix(h);
  p.lambda = to_complex(lambda);
  if constexpr (std::is_same_v<T, AlgNum>) {
    p.hessian_exact = h;
    p.lambda_exact = lambda;
    if (lambda.is_rational()) p.lambda_cap = lambda.as_rational()->get_d();
    else if (std::abs(p.lambda.imag()) == 0.0 && lambda.a().im == 0 && lambda.b().im == 0 && lambda.d().im == 0 && lambda.d().re > 0)
      p.lambda_cap = p.lambda.real();
  } else {
    if (std::abs(p.lambda.imag()) <= 1e-9 * (1 + std::abs(p.lambda))) p.lambda_cap = p.lambda.real();
  }
  p.multiple = p.tests.eigenvalue_equals_k;
}

/// Principal gamma with gamma^(k-2) = mu, exactly when it is easy to do so.
inline std::optional<AlgNum> exact_scaling(const AlgNum& mu, int k) {
  int n = k - 2;
  AlgNum base = n > 0 ? mu : mu.inverse();
  unsigned an = static_cast<unsigned>(std::abs(n));
  if (an == 1) return base;
  if (!base.in_base_field()) return std::nullopt;
  const GaussianRational& g = base.a();
  if (an == 2) {
    auto r = exact_sqrt(g);
    if (!r) return std::nullopt;
    // principal square root: Re > 0, or Re == 0 and Im >= 0
    if (r->re < 0 || (r->re == 0 && r->im < 0)) *r = -*r;
    return AlgNum(*r);
  }
  if (g.im != 0 || g.re <= 0) return std::nullopt;
  Integer pn = g.re.get_num(), pd = g.re.get_den(), rn, rd;
  if (!mpz_root(rn.get_mpz_t(), pn.get_mpz_t(), an) || !mpz_root(rd.get_mpz_t(), pd.get_mpz_t(), an)) return std::nullopt;
  return AlgNum(make_rational(rn, rd));
}

inline Complex principal_scaling(const Complex& mu, int k) { return std::exp(std::log(mu) / static_cast<double>(k - 2)); }

/// Residual |grad V(c) - k c| relative to |c|.
template <class T>
double darboux_residual(const Potential& v, const Point2<T>& c) {
  auto jet = jet_at(v, c, 0);
  T kk = scalar<T>(Rational(v.degree()));
  T r1 = jet.derivative(1, 0) - kk * c.q1, r2 = jet.derivative(0, 1) - kk * c.q2;
  if constexpr (std::is_same_v<T, AlgNum>) {
    if (r1.is_zero() && r2.is_zero()) return 0.0;
  }
  double scale = 1.0 + std::abs(to_complex(c.q1)) + std::abs(to_complex(c.q2));
  return (std::abs(to_complex(r1)) + std::abs(to_complex(r2))) / scale;
}

template <class T>
bool is_isotropic(const Point2<T>& e) {
  T n = e.q1 * e.q1 + e.q2 * e.q2;
  if constexpr (std::is_same_v<T, AlgNum>) return n.is_zero();
  else return std::abs(n) <= 1e-12 * (std::norm(e.q1) + std::norm(e.q2));
}

inline void require_analysis_degree(int k) {
  if (k == 0 || k == 2) throw std::invalid_argument("Darboux analysis requires degree k not in {0, 2}");
}

}  // namespace detail

/// Spectrum and multiplicity of V at a given Darboux point c.
template <class T>
DarbouxPoint classify(const Potential& v, const Point2<T>& c, double tol = 1e-10) {
  double res = detail::darboux_residual(v, c);
  if constexpr (std::is_same_v<T, AlgNum>) {
    if (res != 0.0) throw NotDarbouxError("point does not satisfy grad V(c) = k c");
  } else {
    if (res > tol) throw NotDarbouxError("point does not satisfy grad V(c) = k c (residual " + std::to_string(res) + ")");
  }
  DarbouxPoint p;
  p.degree = v.degree();
  p.c = detail::to_complex_point(c);
  p.direction = p.c;
  if constexpr (std::is_same_v<T, AlgNum>) {
    p.c_exact = c;
    p.direction_exact = c;
  }
  p.residual = res;
  p.isotropic = detail::is_isotropic(c);
  detail::fill_spectrum(p, detail::hessian_of(jet_at(v, c, 1)));
  return p;
}

namespace detail {

/// Darboux point on the direction e, given mu = k / nu.
template <class T>
DarbouxPoint point_on_direction(const Potential& v, const Point2<T>& e, const T& mu, int multiplicity) {
  int k = v.degree();
  DarbouxPoint p;
  p.degree = k;
  p.direction = to_complex_point(e);
  p.direction_multiplicity = multiplicity;
  p.isotropic = is_isotropic(e);

  Matrix2x2<T> he = hessian_of(jet_at(v, e, 1));
  Matrix2x2<T> h{mu * he[0], mu * he[1], mu * he[2], mu * he[3]};
  fill_spectrum(p, h);

  Complex gamma = principal_scaling(to_complex(mu), k);
  p.c = {gamma * p.direction.q1, gamma * p.direction.q2};
  if constexpr (std::is_same_v<T, AlgNum>) {
    p.direction_exact = e;
    if (auto g = exact_scaling(mu, k)) {
      // keep the exact root only when it is the principal one
      if (std::abs(g->to_complex() - gamma) <= 1e-9 * (1 + std::abs(gamma))) {
        try {
          p.c_exact = Point2<AlgNum>{*g * e.q1, *g * e.q2};
          p.c = to_complex_point(*p.c_exact);
        } catch (const std::invalid_argument&) {
          p.c_exact.reset();  // gamma and e live in different quadratic fields
        }
      }
    }
  }
  p.residual = p.c_exact ? darboux_residual(v, *p.c_exact) : darboux_residual(v, p.c);
  if (p.residual > 1e-10) throw std::runtime_error("Darboux point residual " + std::to_string(p.residual) + " above tolerance");
  return p;
}

/// Darboux set of the radial potential a r^k: a circle, represented by
/// c = (gamma, 0) with gamma^(k-2) = 1/a.
inline DarbouxSet radial_set(const Potential& radial, int k) {
  DarbouxSet set;
  set.degree = k;
  set.continuum = true;
  Point2<AlgNum> e{AlgNum(1), AlgNum(0)};
  GaussianRational a = radial.as<RadialKind>()->a;
  set.points.push_back(point_on_direction(radial, e, AlgNum(a.inverse()), 1));
  return set;
}

/// q2 dV/dq1 - q1 dV/dq2, up to the positive factor den^2 for rational V.
inline HomoPoly angular_numerator(const Potential& v) {
  HomoPoly q1 = HomoPoly::monomial(1, 0), q2 = HomoPoly::monomial(0, 1);
  if (const auto* p = v.as<PolynomialKind>()) return q2 * p->poly.d1() - q1 * p->poly.d2();
  const auto* r = v.as<RationalKind>();
  if (!r) throw std::invalid_argument("direction polynomial needs a polynomial or rational potential");
  const HomoPoly& n = r->numerator;
  const HomoPoly& d = r->denominator;
  return d * (q2 * n.d1() - q1 * n.d2()) - n * (q2 * d.d1() - q1 * d.d2());
}

template <class T>
void add_direction(const Potential& v, const Point2<T>& e, int multiplicity, DarbouxSet& set) {
  int k = v.degree();
  T nu;
  try {
    auto jet = jet_at(v, e, 0);
    // grad V(e) = nu e; read nu from the larger component of e
    bool first = std::abs(to_complex(e.q1)) >= std::abs(to_complex(e.q2));
    nu = first ? jet.derivative(1, 0) / e.q1 : jet.derivative(0, 1) / e.q2;
  } catch (const SingularPointError&) {
    set.singular_directions.push_back(to_complex_point(e));
    return;
  }
  double scale = 1.0;
  if (near_zero(nu, 1e-12 * scale)) {
    set.degenerate_directions.push_back(to_complex_point(e));
    return;
  }
  T mu = scalar<T>(Rational(k)) / nu;
  set.points.push_back(point_on_direction(v, e, mu, multiplicity));
}

}  // namespace detail

/// W(s) = q2 dV/dq1 - q1 dV/dq2 evaluated at (1, s), numerator only.
inline UPoly direction_polynomial(const Potential& v) {
  detail::require_analysis_degree(v.degree());
  HomoPoly w = detail::angular_numerator(v);
  if (w.is_zero()) throw std::domain_error("direction polynomial vanishes identically: every direction is a Darboux direction");
  return w.at_direction();
}

inline DarbouxSet find_darboux_points(const Potential& v) {
  int k = v.degree();
  detail::require_analysis_degree(k);
  if (v.kind() == PotentialKind::radial) return detail::radial_set(v, k);
  if (v.kind() == PotentialKind::polar) throw std::invalid_argument("polar potentials are analyzed through their angular critical points");

  HomoPoly wh = detail::angular_numerator(v);
  if (wh.is_zero()) {
    // rotation invariant, so V = a (q1^2 + q2^2)^(k/2) with a = V(1, 0)
    GaussianRational a = evaluate(v, Point2<AlgNum>{AlgNum(1), AlgNum(0)}).a();
    DarbouxSet set = detail::radial_set(Potential::radial(a, k), k);
    set.rotation_invariant = true;
    for (auto& p : set.points) p.residual = detail::darboux_residual(v, p.c);
    return set;
  }

  DarbouxSet set;
  set.degree = k;
  UPoly w = wh.at_direction();
  if (w.degree() >= 1) {
    for (const PolyRoot& root : solve_polynomial(w)) {
      if (root.exact) detail::add_direction(v, Point2<AlgNum>{AlgNum(1), *root.exact}, root.multiplicity, set);
      else detail::add_direction(v, Point2<Complex>{Complex(1), root.value}, root.multiplicity, set);
    }
  }
  // (0, 1) is a direction iff the q2^deg coefficient of W vanishes
  if (wh.coeff(0, wh.degree()).is_zero()) {
    int mult = wh.degree() - std::max(w.degree(), 0);
    detail::add_direction(v, Point2<AlgNum>{AlgNum(0), AlgNum(1)}, mult, set);
  }
  return set;
}

/// Normal form along a Darboux direction e: V'(q) = V(q1 e + q2 e_perp) / V(e),
/// so that c' = (1, 0), V'(c') = 1 and grad V'(c') = (k, 0). Any nonzero
/// multiple of the Darboux point may be passed as e.
inline std::pair<Potential, Point2<AlgNum>> normalize_direction(const Potential& v, const Point2<AlgNum>& e) {
  detail::require_analysis_degree(v.degree());
  if (detail::is_isotropic(e)) throw std::domain_error("isotropic Darboux point cannot be normalized");
  Point2<AlgNum> origin{AlgNum(1), AlgNum(0)};
  if (v.kind() == PotentialKind::radial) return {Potential::radial(GaussianRational(1), v.degree()), origin};
  if (v.kind() == PotentialKind::polar) throw std::invalid_argument("polar potentials are normalized through their jets");
  if (!e.q1.in_base_field() || !e.q2.in_base_field()) throw NotExactError("direction is not Gaussian rational; use normalized_jet");
  if (detail::darboux_residual(v, e) != 0.0) {
    // e must be proportional to grad V(e)
    auto jet = jet_at(v, e, 0);
    if (!(jet.derivative(1, 0) * e.q2 - jet.derivative(0, 1) * e.q1).is_zero())
      throw NotDarbouxError("point is not on a Darboux direction");
  }
  GaussianRational e1 = e.q1.a(), e2 = e.q2.a();
  GaussianRational ve = evaluate(v, e).a();
  if (ve.is_zero()) throw SingularPointError("potential vanishes on the direction");
  GaussianRational kappa = ve.inverse();
  auto sub = [&](const HomoPoly& h) { return h.linear_substitute(e1, -e2, e2, e1); };
  if (const auto* poly = v.as<PolynomialKind>()) return {Potential::polynomial(sub(poly->poly).scaled(kappa)), origin};
  const auto* r = v.as<RationalKind>();
  return {Potential::rational(sub(r->numerator).scaled(kappa), sub(r->denominator)), origin};
}

/// Normal form at a Darboux point; see normalize_direction.
inline std::pair<Potential, Point2<AlgNum>> normalize(const Potential& v, const DarbouxPoint& p) {
  if (p.isotropic) throw std::domain_error("isotropic Darboux point cannot be normalized");
  if (v.kind() == PotentialKind::radial) return normalize_direction(v, Point2<AlgNum>{AlgNum(1), AlgNum(0)});
  if (!p.direction_exact) throw NotExactError("direction is only known numerically; use normalized_jet");
  return normalize_direction(v, *p.direction_exact);
}

/// Normalized jet at (1, 0) for a Darboux point, exact when its direction is.
inline TaylorJet<AlgNum> normalized_jet_exact(const Potential& v, const DarbouxPoint& p, int order) {
  if (!p.direction_exact) throw NotExactError("direction is only known numerically");
  return normalized_jet(v, *p.direction_exact, order);
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json complex_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline nlohmann::json to_json(const DarbouxPoint& p) {
  nlohmann::json j;
  j["c"] = {complex_json(p.c.q1), complex_json(p.c.q2)};
  if (p.c_exact) j["c_exact"] = {to_string(p.c_exact->q1), to_string(p.c_exact->q2)};
  j["direction"] = {complex_json(p.direction.q1), complex_json(p.direction.q2)};
  if (p.direction_exact) j["direction_exact"] = {to_string(p.direction_exact->q1), to_string(p.direction_exact->q2)};
  j["exact"] = p.exact();
  j["spectrum"] = {to_string(p.radial_eigenvalue()),
                   p.lambda_exact ? nlohmann::json(to_string(*p.lambda_exact)) : nlohmann::json(complex_json(p.lambda))};
  j["lambda"] = complex_json(p.lambda);
  j["lambda_cap"] = std::isfinite(p.lambda_cap) ? nlohmann::json(p.lambda_cap) : nlohmann::json("-inf");
  j["multiple"] = p.multiple;
  j["isotropic"] = p.isotropic;
  j["direction_multiplicity"] = p.direction_multiplicity;
  j["tests"] = {{"eigenvalue_equals_k", p.tests.eigenvalue_equals_k},
                {"determinant_vanishes", p.tests.determinant_vanishes},
                {"jacobian_rank_deficient", p.tests.jacobian_rank_deficient}};
  return j;
}

inline nlohmann::json to_json(const DarbouxSet& s) {
  nlohmann::json j;
  j["degree"] = s.degree;
  j["continuum"] = s.continuum;
  j["rotation_invariant"] = s.rotation_invariant;
  j["points"] = nlohmann::json::array();
  for (const auto& p : s.points) j["points"].push_back(to_json(p));
  auto dirs = [](const std::vector<Point2<Complex>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : v) a.push_back({complex_json(e.q1), complex_json(e.q2)});
    return a;
  };
  j["degenerate_directions"] = dirs(s.degenerate_directions);
  j["singular_directions"] = dirs(s.singular_directions);
  return j;
}

}  // namespace hompot
