#pragma once

// Roots of univariate polynomials over Q(i).
//
// Square-free decomposition is exact (Yun). Each square-free factor is solved
// numerically by Aberth iteration; Gaussian-rational roots and quadratic
// factors over Q(i) are then recognized from the floating roots and confirmed
// by exact division, so recognized roots are never approximations.

#include "hompot/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

namespace hompot {

struct PolyRoot {
  Complex value;
  std::optional<AlgNum> exact;  // a + b*sqrt(d) with d, a, b in Q(i)
  int multiplicity = 1;
};

/// Simple-root Aberth iteration on floating coefficients (low degree first).
inline std::vector<Complex> aberth_roots(const std::vector<Complex>& coeffs, double tol = 1e-14, int max_iter = 500) {
  int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  std::vector<Complex> a(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) a[i] = coeffs[i] / coeffs.back();

  auto eval = [&](const Complex& z, Complex& dp) {
    Complex p = a[static_cast<size_t>(n)];
    dp = 0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * z + p;
      p = p * z + a[static_cast<size_t>(i)];
    }
    return p;
  };

  // Fujiwara-style scale for the initial circle
  double radius = 0;
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::pow(std::abs(a[static_cast<size_t>(i)]), 1.0 / (n - i)));
  if (radius == 0) radius = 1;
  std::vector<Complex> z(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<size_t>(i)] = std::polar(radius, 2 * std::numbers::pi * i / n + 0.4);

  for (int iter = 0; iter < max_iter; ++iter) {
    double change = 0;
    for (int i = 0; i < n; ++i) {
      Complex& zi = z[static_cast<size_t>(i)];
      Complex dp;
      Complex p = eval(zi, dp);
      if (p == Complex(0)) continue;
      Complex ratio = p / dp;
      Complex sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (zi - z[static_cast<size_t>(j)]);
      Complex w = ratio / (1.0 - ratio * sum);
      zi -= w;
      change = std::max(change, std::abs(w) / (1.0 + std::abs(zi)));
    }
    if (change < tol) break;
  }
  // Newton polish
  for (auto& zi : z)
    for (int it = 0; it < 3; ++it) {
      Complex dp;
      Complex p = eval(zi, dp);
      if (dp == Complex(0)) break;
      zi -= p / dp;
    }
  return z;
}

/// Yun's square-free decomposition: factors[i] is the product of the monic
/// linear factors of multiplicity i + 1.
inline std::vector<UPoly> square_free_decomposition(const UPoly& f) {
  std::vector<UPoly> out;
  if (f.degree() < 1) return out;
  UPoly fp = f.derivative();
  UPoly b = UPoly::gcd(f, fp);
  UPoly c = UPoly::divmod(f, b).first;
  UPoly d = UPoly::divmod(fp, b).first - c.derivative();
  while (c.degree() >= 1) {
    UPoly a = UPoly::gcd(c, d);
    out.push_back(a);
    c = UPoly::divmod(c, a).first;
    d = UPoly::divmod(d, a).first - c.derivative();
  }
  return out;
}

namespace detail {

inline std::optional<GaussianRational> recognize_gaussian(const Complex& z, long max_den = 1000000) {
  double tol = 1e-9 * (1.0 + std::abs(z));
  auto re = rational_approximation(z.real(), max_den, tol);
  auto im = rational_approximation(z.imag(), max_den, tol);
  if (!re || !im) return std::nullopt;
  return GaussianRational(*re, *im);
}

inline bool divides(const UPoly& f, const UPoly& g, UPoly& quotient) {
  auto [q, r] = UPoly::divmod(f, g);
  if (!r.is_zero()) return false;
  quotient = std::move(q);
  return true;
}

/// Roots of a square-free factor, each tagged with the given multiplicity.
inline void solve_square_free(UPoly f, int multiplicity, std::vector<PolyRoot>& out) {
  if (f.degree() < 1) return;
  std::vector<Complex> fc;
  for (const auto& c : f.coeffs()) fc.push_back(c.to_complex());
  std::vector<Complex> approx = aberth_roots(fc);

  // Gaussian-rational roots
  std::vector<Complex> rest;
  for (const Complex& z : approx) {
    if (auto g = recognize_gaussian(z)) {
      UPoly lin(std::vector<GaussianRational>{-*g, GaussianRational(1)});
      UPoly q;
      if (divides(f, lin, q)) {
        f = q;
        out.push_back({g->to_complex(), AlgNum(*g), multiplicity});
        continue;
      }
    }
    rest.push_back(z);
  }

  // quadratic factors over Q(i)
  std::vector<bool> used(rest.size(), false);
  for (size_t i = 0; i < rest.size(); ++i) {
    if (used[i]) continue;
    for (size_t j = i + 1; j < rest.size(); ++j) {
      if (used[j]) continue;
      auto sum = recognize_gaussian(rest[i] + rest[j]);
      auto prod = recognize_gaussian(rest[i] * rest[j]);
      if (!sum || !prod) continue;
      UPoly quad(std::vector<GaussianRational>{*prod, -*sum, GaussianRational(1)});
      UPoly q;
      if (!divides(f, quad, q)) continue;
      f = q;
      used[i] = used[j] = true;
      GaussianRational disc = *sum * *sum - GaussianRational(4) * *prod;
      GaussianRational half(make_rational(1, 2));
      AlgNum r1(*sum * half, half, disc), r2(*sum * half, -half, disc);
      // match the exact conjugates to the floating roots
      if (std::abs(r1.to_complex() - rest[i]) > std::abs(r1.to_complex() - rest[j])) std::swap(r1, r2);
      out.push_back({r1.to_complex(), r1, multiplicity});
      out.push_back({r2.to_complex(), r2, multiplicity});
      break;
    }
  }
  for (size_t i = 0; i < rest.size(); ++i)
    if (!used[i]) out.push_back({rest[i], std::nullopt, multiplicity});
}

}  // namespace detail

inline bool root_order(const PolyRoot& a, const PolyRoot& b) {
  const double eps = 1e-12;
  if (std::abs(a.value.real() - b.value.real()) > eps) return a.value.real() < b.value.real();
  return a.value.imag() < b.value.imag();
}

/// All distinct roots of f with multiplicities, sorted by (Re, Im).
inline std::vector<PolyRoot> solve_polynomial(const UPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("cannot solve the zero polynomial");
  std::vector<PolyRoot> out;
  auto factors = square_free_decomposition(f);
  for (size_t i = 0; i < factors.size(); ++i) detail::solve_square_free(factors[i], static_cast<int>(i) + 1, out);
  std::sort(out.begin(), out.end(), root_order);
  return out;
}

}  // namespace hompot
