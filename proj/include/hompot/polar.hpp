#pragma once

// Polar potentials V = r^k U(theta) with k < 0: critical points of U, the
// extremum rule, lambda = U''/U + k at the chosen point and the verdict.

#include <algorithm>
#include <cmath>
#include <complex>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hompot/darboux.hpp"
#include "hompot/morales.hpp"
#include "hompot/potential.hpp"
#include "hompot/roots.hpp"

namespace hompot {

struct CriticalPoint {
  double theta = 0;                // in [0, 2 pi)
  std::optional<AlgNum> z_exact;   // e^{i theta} when recognized
  double value = 0;                // U(theta)
  double second = 0;               // U''(theta)
};

namespace detail {

inline double wrap_angle(double t) {
  const double two_pi = 2 * std::numbers::pi;
  t = std::fmod(t, two_pi);
  if (t < 0) t += two_pi;
  if (t >= two_pi) t -= two_pi;
  return t;
}

/// z^M U'(theta) as a polynomial in z = e^{i theta}.
inline UPoly critical_polynomial(const TrigPoly& du, int order) {
  std::vector<GaussianRational> c(static_cast<size_t>(2 * order + 1));
  GaussianRational half(make_rational(1, 2));
  for (int m = 0; m <= order; ++m) {
    GaussianRational cm = du.complex_coef(m);
    if (m == 0) {
      c[static_cast<size_t>(order)] += cm;
      continue;
    }
    c[static_cast<size_t>(order + m)] += half * cm;
    c[static_cast<size_t>(order - m)] += half * cm.conj();
  }
  return UPoly(std::move(c));
}

}  // namespace detail

/// Real zeros of U' in [0, 2 pi), ascending; throws std::domain_error if U is
/// constant.
inline std::vector<CriticalPoint> critical_points(const TrigPoly& u) {
  if (u.is_zero()) throw std::invalid_argument("angular factor is identically zero");
  if (u.is_constant()) throw std::domain_error("constant angular factor has no isolated critical points");
  TrigPoly du = u.derivative();
  auto roots = solve_polynomial(detail::critical_polynomial(du, u.order()));
  std::vector<CriticalPoint> out;
  for (const auto& r : roots) {
    if (std::abs(std::abs(r.value) - 1) > 1e-7) continue;
    double theta = std::arg(r.value);
    // Newton polish on U'(theta)
    for (int it = 0; it < 8; ++it) {
      double f = u.eval(theta, 1), df = u.eval(theta, 2);
      if (df == 0) break;
      double step = f / df;
      theta -= step;
      if (std::abs(step) < 1e-16) break;
    }
    theta = detail::wrap_angle(theta);
    double scale = 1;
    for (int m = 0; m <= u.order(); ++m) scale += m * (std::abs(u.cos_coef(m).get_d()) + std::abs(u.sin_coef(m).get_d()));
    if (std::abs(u.eval(theta, 1)) > 1e-10 * scale) continue;
    CriticalPoint cp{theta, r.exact, u.eval(theta, 0), u.eval(theta, 2)};
    if (r.exact) {
      cp.value = u.eval_exact(*r.exact, 0).to_complex().real();
      cp.second = u.eval_exact(*r.exact, 2).to_complex().real();
    }
    bool dup = false;
    for (const auto& o : out)
      if (std::abs(o.theta - theta) < 1e-9 || std::abs(std::abs(o.theta - theta) - 2 * std::numbers::pi) < 1e-9) dup = true;
    if (!dup) out.push_back(cp);
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) { return a.theta < b.theta; });
  return out;
}

/// Maximum of U if it is positive, otherwise the minimum; ties go to the
/// smallest theta. Guarantees U(theta0) != 0 and U''/U <= 0.
inline CriticalPoint select_extremum(const TrigPoly& u) {
  auto cps = critical_points(u);
  if (cps.empty()) throw std::logic_error("non-constant trigonometric polynomial without critical points");
  double hi = cps.front().value, lo = hi, scale = 0;
  for (const auto& c : cps) {
    hi = std::max(hi, c.value);
    lo = std::min(lo, c.value);
    scale = std::max(scale, std::abs(c.value));
  }
  double tie = 1e-12 * (1 + scale);
  double target = hi > 0 ? hi : lo;
  for (const auto& c : cps)
    if (std::abs(c.value - target) <= tie) return c;
  throw std::logic_error("extremum lost while scanning critical points");
}

enum class PolarClass { radial_integrable, degree_minus_two_integrable, non_integrable, multiple_point_found, indeterminate };

inline std::string to_string(PolarClass c) {
  switch (c) {
    case PolarClass::radial_integrable: return "radial_integrable";
    case PolarClass::degree_minus_two_integrable: return "degree_minus_two_integrable";
    case PolarClass::non_integrable: return "non_integrable";
    case PolarClass::multiple_point_found: return "multiple_point_found";
    case PolarClass::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct PolarOptions {
  long max_denominator = 64;
  double tol = 1e-9;
  K5Variant k5_variant = K5Variant::as_printed;
};

struct PolarVerdict {
  int k = 0;
  TrigPoly u;
  std::optional<CriticalPoint> theta0;
  std::vector<CriticalPoint> critical;
  double lambda = 0;
  std::optional<AlgNum> lambda_exact;       // from an exactly recognized critical point
  std::optional<Rational> lambda_rational;  // exact, or reconstructed for the table call
  bool lambda_reconstructed = false;
  std::optional<MoralesVerdict> morales;
  PolarClass classification = PolarClass::indeterminate;
  std::string reason;
};

/// Darboux point r0 (cos theta0, sin theta0) with r0^(k-2) U(theta0) = 1.
inline Point2<Complex> polar_darboux_point(int k, const CriticalPoint& cp) {
  Complex r0 = std::pow(Complex(cp.value), 1.0 / (2.0 - k));
  return {r0 * std::cos(cp.theta), r0 * std::sin(cp.theta)};
}

inline PolarVerdict analyze_polar(const TrigPoly& u, int k, const PolarOptions& opt = {}) {
  if (k >= 0) throw std::invalid_argument("polar analysis requires k < 0");
  if (u.is_zero()) throw std::invalid_argument("angular factor is identically zero");
  PolarVerdict out;
  out.k = k;
  out.u = u;
  if (k == -2) {
    out.classification = PolarClass::degree_minus_two_integrable;
    out.reason = "every planar homogeneous potential of degree -2 is integrable";
    return out;
  }
  if (u.is_constant()) {
    out.classification = PolarClass::radial_integrable;
    out.reason = "constant angular factor: angular momentum is a second first integral";
    return out;
  }
  out.critical = critical_points(u);
  CriticalPoint cp = select_extremum(u);
  out.theta0 = cp;
  out.lambda = cp.second / cp.value + k;
  if (cp.z_exact) {
    AlgNum lam = u.eval_exact(*cp.z_exact, 2) / u.eval_exact(*cp.z_exact, 0) + AlgNum(Rational(k));
    out.lambda_exact = lam;
    out.lambda_rational = lam.as_rational();
  } else if (auto r = reconstruct_rational(out.lambda, opt.max_denominator, opt.tol)) {
    out.lambda_rational = r;
    out.lambda_reconstructed = true;
  }
  if (!out.lambda_rational) {
    if (out.lambda_exact) {
      // table values are rational for k != +-2
      out.classification = PolarClass::non_integrable;
      out.reason = "exact irrational eigenvalue is not in the table";
    } else {
      out.classification = PolarClass::indeterminate;
      out.reason = "eigenvalue is neither exact nor a recognizable rational";
    }
    return out;
  }
  const Rational& lam = *out.lambda_rational;
  if (lam == k) {
    out.classification = PolarClass::multiple_point_found;
    out.reason = "lambda = k: multiple Darboux point on a non-radial potential, which forces non-integrability";
    out.morales = admissible(k, lam, opt.k5_variant);
    return out;
  }
  out.morales = admissible(k, lam, opt.k5_variant);
  if (!out.morales->admissible) {
    out.classification = PolarClass::non_integrable;
    out.reason = "(k, lambda) is not in the table";
  } else {
    out.classification = PolarClass::indeterminate;
    out.reason = "admissible eigenvalue below k";
  }
  return out;
}

inline nlohmann::json to_json(const CriticalPoint& c) {
  nlohmann::json j{{"theta", c.theta}, {"U", c.value}, {"U2", c.second}};
  if (c.z_exact) j["z"] = to_string(*c.z_exact);
  return j;
}

inline nlohmann::json to_json(const PolarVerdict& v) {
  nlohmann::json j{{"k", v.k}, {"U", to_json(v.u)}, {"classification", to_string(v.classification)}, {"reason", v.reason}};
  if (v.theta0) {
    j["theta0"] = to_json(*v.theta0);
    j["lambda_float"] = v.lambda;
    nlohmann::json crit = nlohmann::json::array();
    for (const auto& c : v.critical) crit.push_back(to_json(c));
    j["critical_points"] = crit;
  }
  if (v.lambda_exact) j["lambda_exact"] = to_string(*v.lambda_exact);
  if (v.lambda_rational) {
    j["lambda"] = to_string(*v.lambda_rational);
    j["lambda_reconstructed"] = v.lambda_reconstructed;
  }
  if (v.morales) j["morales"] = to_json(*v.morales);
  if (v.classification == PolarClass::non_integrable && v.lambda_rational)
    j["witness"] = {{"k", v.k}, {"lambda", to_string(*v.lambda_rational)}};
  return j;
}

}  // namespace hompot
