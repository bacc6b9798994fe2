#pragma once

// Gamma function on the real line: Lanczos (g = 7, n = 9) with reflection.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hompot {

namespace detail {

inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

/// sin(pi x) with exact zeros at the integers.
inline double sin_pi(double x) {
  double r = std::remainder(x, 2.0);  // in [-1, 1]
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(std::numbers::pi * r);
}

}  // namespace detail

inline bool is_nonpositive_integer(double x) { return x <= 0 && x == std::floor(x); }

/// Gamma(x) for real x; throws at the poles 0, -1, -2, ...
inline double gamma_fn(double x) {
  if (is_nonpositive_integer(x)) throw std::domain_error("Gamma has a pole at a nonpositive integer");
  if (x < 0.5) return std::numbers::pi / (detail::sin_pi(x) * gamma_fn(1.0 - x));
  x -= 1.0;
  double a = detail::lanczos_coef[0];
  double t = x + detail::lanczos_g + 0.5;
  for (size_t i = 1; i < detail::lanczos_coef.size(); ++i) a += detail::lanczos_coef[i] / (x + static_cast<double>(i));
  return std::sqrt(2 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

/// 1 / Gamma(x), zero at the poles.
inline double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_fn(x);
}

}  // namespace hompot
