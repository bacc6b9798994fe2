#pragma once

// Periods P(alpha, j) of (t^2 - 1)^alpha along the loop that turns j times
// around 1 and then j times (in the opposite sense) around -1, and the
// determinant obstruction built from them.
//
// Closed form:
//   P(alpha, j) = (1 - e^{2 i pi j alpha}) e^{i pi alpha} Gamma(alpha + 1) sqrt(pi) / Gamma(alpha + 3/2).
// Roots of unity are carried as exact rational turns so that cancellations
// in the determinant are exact; only the final assembly is floating.

#include "hompot/gamma.hpp"
#include "hompot/quadrature.hpp"
#include "hompot/rational.hpp"

#include <json.hpp>

#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hompot {

enum class PeriodMethod { closed_form, quadrature };

struct PeriodValue {
  Rational alpha;
  long j = 0;
  Complex value;
  PeriodMethod method = PeriodMethod::closed_form;
  double error_bound = 0;  // quadrature only
  bool converged = true;   // quadrature only
  bool gamma_pole = false;
};

/// Geometry of the integration loop.
struct LoopSpec {
  long j = 1;
  double radius = 0.5;  // circles around +1 and -1; base point t = 0
};

namespace detail {

/// x reduced to [0, 1).
inline Rational frac_part(const Rational& x) { return x - Rational(floor_of(x)); }

/// e^{2 i pi x} for rational x, exact on quarter turns.
inline Complex unit_turn(const Rational& x) {
  Rational r = frac_part(x);
  if (r == 0) return {1, 0};
  if (r == make_rational(1, 4)) return {0, 1};
  if (r == make_rational(1, 2)) return {-1, 0};
  if (r == make_rational(3, 4)) return {0, -1};
  double t = 2 * std::numbers::pi * r.get_d();
  return {std::cos(t), std::sin(t)};
}

inline bool in_naturals(const Rational& x) { return is_integer(x) && x >= 0; }

inline void check_alpha(const Rational& alpha) {
  if (is_integer(alpha) && alpha < 0) throw std::domain_error("alpha at a pole of Gamma(alpha + 1) is not supported");
}

/// e^{i pi alpha} Gamma(alpha + 1) sqrt(pi) / Gamma(alpha + 3/2); zero at the
/// denominator poles alpha in {-3/2, -5/2, ...}.
inline Complex period_factor(const Rational& alpha) {
  check_alpha(alpha);
  double a = alpha.get_d();
  double r = rgamma(a + 1.5);
  if (r == 0.0) return 0.0;
  return unit_turn(alpha / 2) * gamma_fn(a + 1) * std::sqrt(std::numbers::pi) * r;
}

}  // namespace detail

inline bool gamma_pole(const Rational& alpha) { return detail::in_naturals(make_rational(-3, 2) - alpha); }

inline PeriodValue period_closed_form(const Rational& alpha, long j) {
  detail::check_alpha(alpha);
  PeriodValue p;
  p.alpha = alpha;
  p.j = j;
  p.method = PeriodMethod::closed_form;
  p.gamma_pole = gamma_pole(alpha);
  Rational turns = alpha * j;
  if (is_integer(turns) || p.gamma_pole) {
    p.value = 0.0;
    return p;
  }
  p.value = (Complex(1) - detail::unit_turn(turns)) * detail::period_factor(alpha);
  return p;
}

/// Numerical contour integral with continuous tracking of arg(t - 1) and
/// arg(t + 1); the branch is e^{i pi alpha} at t = 0.
inline PeriodValue period_quadrature(const LoopSpec& loop, const Rational& alpha, double tol = 1e-10) {
  if (tol < 1e-12) throw std::invalid_argument("quadrature tolerance must be >= 1e-12");
  PeriodValue p;
  p.alpha = alpha;
  p.j = loop.j;
  p.method = PeriodMethod::quadrature;
  p.gamma_pole = gamma_pole(alpha);
  if (loop.j == 0) return p;

  const double a = alpha.get_d(), pi = std::numbers::pi, r = loop.radius;
  const double wind = 2 * pi * static_cast<double>(loop.j);
  auto branch = [a](const Complex& t, double arg1, double arg2) {
    double logmod = std::log(std::abs(t - 1.0)) + std::log(std::abs(t + 1.0));
    return std::exp(Complex(a * logmod, a * (arg1 + arg2)));
  };

  const long turns = std::abs(loop.j);
  const int pieces = 4 + 2 * static_cast<int>(turns);
  const double share = tol / pieces;
  auto add = [&](const QuadratureResult& q, double sign) {
    p.value += sign * q.value;
    p.error_bound += q.error_bound;
    p.converged = p.converged && q.converged;
  };

  // 0 -> r on the real axis, initial branch
  add(integrate_adaptive([&](double t) { return branch(t, pi, 0.0); }, 0, r, share), 1);
  // j turns around +1: t = 1 + r e^{i theta}, theta from pi to pi + 2 pi j
  double dir = loop.j > 0 ? 1.0 : -1.0;
  for (long n = 0; n < turns; ++n) {
    double th0 = pi + dir * 2 * pi * static_cast<double>(n), th1 = th0 + dir * 2 * pi;
    add(integrate_adaptive(
            [&](double th) {
              Complex e = std::polar(1.0, th);
              Complex t = 1.0 + r * e;
              return branch(t, th, std::arg(t + 1.0)) * Complex(0, r) * e;
            },
            th0, th1, share),
        1);
  }
  // back r -> 0, then 0 -> -r, with arg(t - 1) advanced by 2 pi j
  add(integrate_adaptive([&](double t) { return branch(t, pi + wind, 0.0); }, 0, r, share), -1);
  add(integrate_adaptive([&](double t) { return branch(t, pi + wind, 0.0); }, -r, 0, share), -1);
  // j turns around -1 in the opposite sense: t = -1 + r e^{i theta}, theta from 0 to -2 pi j
  for (long n = 0; n < turns; ++n) {
    double th0 = -dir * 2 * pi * static_cast<double>(n), th1 = th0 - dir * 2 * pi;
    add(integrate_adaptive(
            [&](double th) {
              Complex e = std::polar(1.0, th);
              Complex t = -1.0 + r * e;
              return branch(t, pi + wind + std::arg(1.0 - t), th) * Complex(0, r) * e;
            },
            th0, th1, share),
        1);
  }
  // -r -> 0 with arg(t + 1) = -2 pi j
  add(integrate_adaptive([&](double t) { return branch(t, pi + wind, -wind); }, -r, 0, share), 1);
  return p;
}

inline PeriodValue period_quadrature(const Rational& alpha, long j, double tol = 1e-10) {
  return period_quadrature(LoopSpec{j, 0.5}, alpha, tol);
}

struct DetA {
  Complex value;
  Complex six_term;   // e^{2i pi j2 a} + e^{2i pi j1 b} - e^{2i pi j2 b} - e^{2i pi j1 a} + e^{2i pi (j1 a + j2 b)} - e^{2i pi (j1 b + j2 a)}
  Complex prefactor;  // product of the two Gamma factors
  bool exact_zero = false;
};

/// det [[P(a, j1), P(a, j2)], [P(b, j1), P(b, j2)]] from the closed form.
inline DetA det_A(const Rational& alpha, const Rational& beta, long j1, long j2) {
  DetA d;
  std::map<Rational, long> terms;  // turns mod 1 -> integer coefficient
  auto put = [&](const Rational& x, long s) { terms[detail::frac_part(x)] += s; };
  put(alpha * j2, 1);
  put(beta * j1, 1);
  put(beta * j2, -1);
  put(alpha * j1, -1);
  put(alpha * j1 + beta * j2, 1);
  put(beta * j1 + alpha * j2, -1);
  bool all_cancel = true;
  for (const auto& [x, c] : terms)
    if (c != 0) {
      all_cancel = false;
      d.six_term += static_cast<double>(c) * detail::unit_turn(x);
    }
  d.prefactor = detail::period_factor(alpha) * detail::period_factor(beta);
  d.exact_zero = all_cancel || d.prefactor == Complex(0);
  d.value = d.exact_zero ? Complex(0) : d.prefactor * d.six_term;
  return d;
}

/// 16 (cos^2(pi a) - 1)(cos^2(pi b) - 1)(cos^2(pi b) - cos^2(pi a)).
inline double trig_factorization(const Rational& alpha, const Rational& beta) {
  double ca = std::cos(std::numbers::pi * alpha.get_d()), cb = std::cos(std::numbers::pi * beta.get_d());
  return 16 * (ca * ca - 1) * (cb * cb - 1) * (cb * cb - ca * ca);
}

enum class CommutativityVerdict { commutative_possible, non_commutative };
enum class CommutativityReason { none, alpha_minus_beta_integer, gamma_pole_alpha, gamma_pole_beta };

struct CommutativityClass {
  CommutativityVerdict verdict = CommutativityVerdict::non_commutative;
  CommutativityReason reason = CommutativityReason::none;
};

inline const char* to_string(CommutativityVerdict v) {
  return v == CommutativityVerdict::commutative_possible ? "commutative_possible" : "non_commutative";
}
inline const char* to_string(CommutativityReason r) {
  switch (r) {
    case CommutativityReason::alpha_minus_beta_integer: return "alpha_minus_beta_integer";
    case CommutativityReason::gamma_pole_alpha: return "gamma_pole_alpha";
    case CommutativityReason::gamma_pole_beta: return "gamma_pole_beta";
    default: return "none";
  }
}

inline CommutativityClass commutativity_class(const Rational& alpha, const Rational& beta) {
  if (is_integer(alpha) || is_integer(beta)) throw std::invalid_argument("commutativity class needs non-integer exponents");
  CommutativityClass c;
  if (is_integer(alpha - beta)) c.reason = CommutativityReason::alpha_minus_beta_integer;
  else if (gamma_pole(alpha)) c.reason = CommutativityReason::gamma_pole_alpha;
  else if (gamma_pole(beta)) c.reason = CommutativityReason::gamma_pole_beta;
  if (c.reason != CommutativityReason::none) c.verdict = CommutativityVerdict::commutative_possible;
  return c;
}

struct GCondition {
  std::string name;
  Rational value;
  std::string requirement;  // "integer" or "natural"
  bool holds = false;
};

struct GVerdict {
  long l = 0;
  int k = 0;
  Rational alpha, beta;
  std::vector<GCondition> conditions;
  CommutativityVerdict verdict = CommutativityVerdict::non_commutative;
  std::string reason;
  /// det_A(alpha, beta, 1, -1); nonzero exactly when no condition holds.
  std::optional<Complex> beta_constant;
};

/// Commutativity verdict for alpha = 1/k, beta = -(k+1)/k at level l.
inline GVerdict g_verdict(long l, int k) {
  if (k == 0 || k == 2 || k == -2 || k == -1) throw std::invalid_argument("g_verdict needs k not in {-2, -1, 0, 2}");
  if (l < 0) throw std::invalid_argument("g_verdict needs l >= 0");
  if (k == 1 && l == 0) throw std::invalid_argument("g_verdict is undefined for (k, l) = (1, 0)");
  GVerdict g;
  g.l = l;
  g.k = k;
  g.alpha = make_rational(1, k);
  g.beta = make_rational(-(k + 1), k);
  Rational kk(k), half = make_rational(3, 2);
  auto cond = [&](std::string name, Rational v, bool natural) {
    bool holds = natural ? detail::in_naturals(v) : is_integer(v);
    g.conditions.push_back({std::move(name), v, natural ? "natural" : "integer", holds});
  };
  cond("1/k", g.alpha, false);
  cond("-(k+1)/k", g.beta, false);
  cond("(k+1)/k - 3/2", (kk + 1) / kk - half, true);
  cond("-3/2 - 1/k", -half - g.alpha, true);
  cond("1/k + (k+1)/k", g.alpha - g.beta, false);
  g.verdict = CommutativityVerdict::non_commutative;
  if (k == 1) {
    g.reason = "dilogarithm_case";
    return g;
  }
  bool any = false;
  for (const auto& c : g.conditions) any = any || c.holds;
  if (any) {
    g.verdict = CommutativityVerdict::commutative_possible;
    g.reason = "exclusion_condition_holds";
  } else {
    g.reason = "all_conditions_fail";
    g.beta_constant = det_A(g.alpha, g.beta, 1, -1).value;
  }
  return g;
}

inline nlohmann::json complex_to_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline nlohmann::json to_json(const PeriodValue& p) {
  nlohmann::json j{{"alpha", to_string(p.alpha)},
                   {"j", p.j},
                   {"method", p.method == PeriodMethod::closed_form ? "closed_form" : "quadrature"},
                   {"value", complex_to_json(p.value)},
                   {"gamma_pole", p.gamma_pole}};
  if (p.method == PeriodMethod::quadrature) {
    j["error_bound"] = p.error_bound;
    j["converged"] = p.converged;
  }
  return j;
}

inline nlohmann::json to_json(const GVerdict& g) {
  nlohmann::json j{{"l", g.l}, {"k", g.k}, {"alpha", to_string(g.alpha)}, {"beta", to_string(g.beta)},
                   {"verdict", to_string(g.verdict)}, {"reason", g.reason}};
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : g.conditions)
    cs.push_back({{"condition", c.name}, {"value", to_string(c.value)}, {"requirement", c.requirement}, {"holds", c.holds}});
  j["conditions"] = cs;
  if (g.beta_constant) j["beta_constant"] = complex_to_json(*g.beta_constant);
  return j;
}

}  // namespace hompot
