#include "hompot/monodromy.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace hompot;

namespace {

const double pi = std::numbers::pi;

Rational q(long p, long d = 1) { return make_rational(p, d); }

bool close(const Complex& a, const Complex& b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("Lanczos Gamma agrees with the C library", "[monodromy][gamma]") {
  for (double x = -4.75; x < 12; x += 0.125) {
    if (is_nonpositive_integer(x)) {
      CHECK(rgamma(x) == 0.0);
      CHECK_THROWS_AS(gamma_fn(x), std::domain_error);
      continue;
    }
    double ref = std::tgamma(x);
    CHECK(std::abs(gamma_fn(x) - ref) <= 1e-13 * std::abs(ref));
  }
  CHECK(std::abs(gamma_fn(0.5) - std::sqrt(pi)) < 1e-15);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly", "[monodromy][quadrature]") {
  GaussLegendre g(20);
  double sum = 0;
  for (double w : g.w) sum += w;
  CHECK(std::abs(sum - 2) < 1e-14);
  CHECK(std::abs(g.apply([](double x) { return std::pow(x, 38); }, -1, 1) - 2.0 / 39) < 1e-14);
  auto r = integrate_adaptive([](double x) { return Complex(std::exp(x), std::sin(x)); }, 0, 3, 1e-12);
  CHECK(std::abs(r.value - Complex(std::exp(3) - 1, 1 - std::cos(3))) < 1e-12);
  CHECK(r.converged);
}

TEST_CASE("period_closed_form", "[monodromy]") {
  auto p = period_closed_form(q(-1, 2), 1);
  CHECK(close(p.value, Complex(0, -2 * pi), 1e-13));
  CHECK(period_closed_form(q(2), 5).value == Complex(0));
  CHECK(period_closed_form(q(0), 3).value == Complex(0));
  auto pole = period_closed_form(q(-5, 2), 1);
  CHECK(pole.value == Complex(0));
  CHECK(pole.gamma_pole);
  CHECK(period_closed_form(q(-3, 2), 2).gamma_pole);
  CHECK_FALSE(period_closed_form(q(-1, 2), 2).gamma_pole);
  CHECK_THROWS_AS(period_closed_form(q(-2), 1), std::domain_error);
  // j alpha integer kills the prefactor
  CHECK(period_closed_form(q(1, 2), 2).value == Complex(0));

  SECTION("beta-function oracle") {
    // P = (1 - e^{2 i pi j a}) e^{i pi a} B(1/2, a + 1) for a > -1
    for (auto a : {q(1, 3), q(2, 5), q(-1, 3), q(7, 4)}) {
      double ad = a.get_d();
      double beta = std::tgamma(0.5) * std::tgamma(ad + 1) / std::tgamma(ad + 1.5);
      for (long j : {-2L, 1L, 3L}) {
        Complex expect = (1.0 - std::exp(Complex(0, 2 * pi * j * ad))) * std::exp(Complex(0, pi * ad)) * beta;
        CHECK(close(period_closed_form(a, j).value, expect, 1e-12 * (1 + std::abs(expect))));
      }
    }
  }
  SECTION("vanishes continuously near integers") {
    for (long n : {0L, 1L, 3L}) {
      for (long s : {-1L, 1L}) {
        Rational a = Rational(n) + q(s, 1000);
        CHECK(std::abs(period_closed_form(a, 1).value) < 0.05);
        CHECK(std::abs(period_closed_form(a, 1).value) > 0);
      }
    }
  }
}

TEST_CASE("period_quadrature matches the closed form", "[monodromy][quadrature]") {
  auto p = period_quadrature(q(-1, 2), 1, 1e-10);
  CHECK(close(p.value, Complex(0, -2 * pi), 1e-9));
  CHECK(p.error_bound <= 1e-10);
  CHECK(p.converged);
  CHECK(std::abs(period_quadrature(q(0), 2, 1e-10).value) < 1e-12);
  CHECK(std::abs(period_quadrature(q(0), -1, 1e-10).value) < 1e-12);
  for (auto a : {q(1, 3), q(-1, 3), q(-6, 5), q(5, 2), q(-5, 2), q(-3, 2)})
    for (long j : {-2L, -1L, 1L, 2L}) {
      auto c = period_closed_form(a, j);
      auto n = period_quadrature(a, j, 1e-10);
      CHECK(std::abs(c.value - n.value) < 1e-8);
    }
  CHECK_THROWS_AS(period_quadrature(q(1, 3), 1, 1e-14), std::invalid_argument);
}

TEST_CASE("det_A", "[monodromy]") {
  CHECK(det_A(q(1, 3), q(4, 3), 1, -1).exact_zero);
  CHECK(std::abs(det_A(q(1, 3), q(4, 3), 1, -1).value) < 1e-12);
  CHECK(std::abs(det_A(q(1, 3), q(1, 2), 1, -1).value) > 1e-3);
  CHECK(det_A(q(1, 3), q(1, 2), 2, 2).value == Complex(0));

  SECTION("agrees with the determinant of closed-form periods") {
    for (auto [a, b] : {std::pair{q(1, 3), q(1, 2)}, {q(-2, 5), q(3, 4)}, {q(5, 6), q(-1, 6)}})
      for (auto [j1, j2] : {std::pair{1L, -1L}, {2L, 1L}, {-1L, 3L}}) {
        Complex m = period_closed_form(a, j1).value * period_closed_form(b, j2).value -
                    period_closed_form(a, j2).value * period_closed_form(b, j1).value;
        CHECK(close(det_A(a, b, j1, j2).value, m, 1e-11 * (1 + std::abs(m))));
        CHECK(close(det_A(a, b, j1, j2).value, -det_A(a, b, j2, j1).value, 1e-12));
        CHECK(det_A(a, a, j1, j2).value == Complex(0));
      }
  }
  SECTION("six-term sum at (1, -1) is 8i sin(pi a) sin(pi b) sin(pi (a - b))") {
    for (auto [a, b] : {std::pair{q(1, 3), q(1, 2)}, {q(-2, 5), q(3, 4)}, {q(5, 6), q(-7, 6)}}) {
      double ad = a.get_d(), bd = b.get_d();
      Complex expect(0, 8 * std::sin(pi * ad) * std::sin(pi * bd) * std::sin(pi * (ad - bd)));
      CHECK(close(det_A(a, b, 1, -1).six_term, expect, 1e-12));
      // |six-term|^2 differs from the cos^2 factorization by sin(pi(a+b)) / sin(pi(a-b))
      double f = trig_factorization(a, b);
      double ratio = std::sin(pi * (ad + bd)) / std::sin(pi * (ad - bd));
      CHECK(std::abs(std::norm(expect) / 4 * ratio - f) < 1e-10);
    }
  }
}

TEST_CASE("commutativity_class", "[monodromy]") {
  auto c = commutativity_class(q(1, 3), q(4, 3));
  CHECK(c.verdict == CommutativityVerdict::commutative_possible);
  CHECK(c.reason == CommutativityReason::alpha_minus_beta_integer);
  c = commutativity_class(q(-5, 2), q(1, 3));
  CHECK(c.verdict == CommutativityVerdict::commutative_possible);
  CHECK(c.reason == CommutativityReason::gamma_pole_alpha);
  c = commutativity_class(q(1, 3), q(-3, 2));
  CHECK(c.reason == CommutativityReason::gamma_pole_beta);
  c = commutativity_class(q(1, 3), q(1, 2));
  CHECK(c.verdict == CommutativityVerdict::non_commutative);
  CHECK_THROWS_AS(commutativity_class(q(1), q(1, 2)), std::invalid_argument);

  SECTION("class and determinant agree on a grid") {
    std::vector<Rational> grid;
    for (long d = 2; d <= 6; ++d)
      for (long n = -2 * d; n <= 2 * d; ++n)
        if (n % d != 0 && make_rational(n, d).get_den() == d) grid.push_back(make_rational(n, d));
    for (const auto& a : grid)
      for (const auto& b : grid) {
        auto cls = commutativity_class(a, b);
        double det = std::abs(det_A(a, b, 1, -1).value);
        CHECK((cls.verdict == CommutativityVerdict::commutative_possible) == (det < 1e-10));
        // the factorization vanishes whenever the class allows commutation through a - b
        if (cls.reason == CommutativityReason::alpha_minus_beta_integer) CHECK(std::abs(trig_factorization(a, b)) < 1e-10);
      }
  }
}

TEST_CASE("g_verdict", "[monodromy]") {
  auto g = g_verdict(0, 3);
  CHECK(g.verdict == CommutativityVerdict::non_commutative);
  REQUIRE(g.conditions.size() == 5);
  std::vector<Rational> expect{q(1, 3), q(-4, 3), q(-1, 6), q(-11, 6), q(5, 3)};
  for (size_t i = 0; i < 5; ++i) {
    CHECK(g.conditions[i].value == expect[i]);
    CHECK_FALSE(g.conditions[i].holds);
  }
  REQUIRE(g.beta_constant);
  CHECK(std::abs(*g.beta_constant) > 1e-6);

  CHECK(g_verdict(2, -5).verdict == CommutativityVerdict::non_commutative);
  auto one = g_verdict(1, 1);
  CHECK(one.verdict == CommutativityVerdict::non_commutative);
  CHECK(one.reason == "dilogarithm_case");
  for (int k : {-2, -1, 0, 2}) CHECK_THROWS_AS(g_verdict(1, k), std::invalid_argument);
  CHECK_THROWS_AS(g_verdict(0, 1), std::invalid_argument);

  for (int k = -12; k <= 12; ++k) {
    if (std::abs(k) < 3) continue;
    auto a = g_verdict(0, k), b = g_verdict(5, k);
    CHECK(a.verdict == b.verdict);
    CHECK(a.reason == b.reason);
  }
}

TEST_CASE("period JSON", "[monodromy][json]") {
  auto j = to_json(period_closed_form(q(-1, 2), 1));
  CHECK(j["alpha"] == "-1/2");
  CHECK(j["method"] == "closed_form");
  auto g = to_json(g_verdict(0, 3));
  CHECK(g["verdict"] == "non_commutative");
  CHECK(g["conditions"][2]["value"] == "-1/6");
}
