#pragma once

// Adaptive Gauss-Legendre quadrature for complex-valued integrands.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace hompot {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> x, w;

  explicit GaussLegendre(int n) : x(static_cast<size_t>(n)), w(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = z;
        for (int m = 2; m <= n; ++m) {
          double p2 = ((2 * m - 1) * z * p1 - (m - 1) * p0) / m;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[static_cast<size_t>(i)] = z;
      w[static_cast<size_t>(i)] = 2 / ((1 - z * z) * dp * dp);
    }
  }

  template <class F>
  auto apply(const F& f, double a, double b) const {
    double h = 0.5 * (b - a), m = 0.5 * (b + a);
    decltype(f(a)) acc{};
    for (size_t i = 0; i < x.size(); ++i) acc += w[i] * f(m + h * x[i]);
    return acc * h;
  }
};

struct QuadratureResult {
  std::complex<double> value;
  double error_bound = 0;
  bool converged = true;
  int intervals = 0;
};

/// Integral of f over [a, b]; intervals are bisected until the rule and its
/// two-halves refinement agree to within the local share of tol.
inline QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a, double b,
                                           double tol, int max_depth = 40) {
  static const GaussLegendre rule(20);
  QuadratureResult out;
  struct Task {
    double a, b;
    std::complex<double> whole;
    int depth;
  };
  std::vector<Task> stack{{a, b, rule.apply(f, a, b), 0}};
  double total = std::abs(b - a);
  while (!stack.empty()) {
    Task t = stack.back();
    stack.pop_back();
    double m = 0.5 * (t.a + t.b);
    auto left = rule.apply(f, t.a, m), right = rule.apply(f, m, t.b);
    double err = std::abs(left + right - t.whole);
    double share = tol * std::abs(t.b - t.a) / total;
    if (err <= share || t.depth >= max_depth) {
      if (err > share) out.converged = false;
      out.value += left + right;
      out.error_bound += err;
      ++out.intervals;
      continue;
    }
    stack.push_back({t.a, m, left, t.depth + 1});
    stack.push_back({m, t.b, right, t.depth + 1});
  }
  return out;
}

}  // namespace hompot
