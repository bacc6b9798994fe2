#include "hompot/polar.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "hompot/parser.hpp"
#include "test_util.hpp"

using namespace hompot;
using hompot::testing::random_rational;

namespace {

const double pi = std::numbers::pi;

Rational q(long p, long d = 1) { return make_rational(p, d); }

std::vector<double> thetas(const std::vector<CriticalPoint>& c) {
  std::vector<double> out;
  for (const auto& x : c) out.push_back(x.theta);
  return out;
}

bool near(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("critical_points", "[polar]") {
  CHECK(near(thetas(critical_points(parse_trig_poly("1 + 1/10*cos(2*theta)"))), {0, pi / 2, pi, 3 * pi / 2}));
  CHECK(near(thetas(critical_points(parse_trig_poly("cos(theta)"))), {0, pi}));
  CHECK_THROWS_AS(critical_points(TrigPoly::constant(5)), std::domain_error);
  CHECK_THROWS_AS(critical_points(TrigPoly()), std::invalid_argument);
  // sin(theta) + cos(theta): extrema at pi/4 and 5 pi/4, not Gaussian-rational points
  auto c = critical_points(parse_trig_poly("sin(theta) + cos(theta)"));
  CHECK(near(thetas(c), {pi / 4, 5 * pi / 4}));
  // the roots z = (1 +- i)/sqrt(2) are recognized as quadratic irrationals
  for (const auto& x : c) CHECK(x.z_exact);
}

TEST_CASE("critical points agree with a dense sign-change scan", "[polar][property]") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int order = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<Rational> a, b;
    for (int m = 0; m <= order; ++m) {
      a.push_back(random_rational(rng));
      b.push_back(random_rational(rng));
    }
    if (a.back() == 0 && b.back() == 0) a.back() = 1;
    TrigPoly u(a, b);
    auto c = critical_points(u);
    for (const auto& x : c) {
      CHECK(std::abs(u.eval(x.theta, 1)) < 1e-9);
      CHECK(x.theta >= 0);
      CHECK(x.theta < 2 * pi);
    }
    // every sign change of U' on a fine grid is within one grid cell of a critical point
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      double t0 = 2 * pi * i / n, t1 = 2 * pi * (i + 1) / n;
      if (u.eval(t0, 1) * u.eval(t1, 1) < 0) {
        bool hit = false;
        for (const auto& x : c)
          if (x.theta >= t0 - 1e-9 && x.theta <= t1 + 1e-9) hit = true;
        if (t1 >= 2 * pi - 1e-12)
          for (const auto& x : c)
            if (x.theta < 1e-9) hit = true;
        CHECK(hit);
      }
    }
  }
}

TEST_CASE("select_extremum", "[polar]") {
  CHECK(select_extremum(parse_trig_poly("1 + 1/10*cos(2*theta)")).theta == 0);
  CHECK(std::abs(select_extremum(parse_trig_poly("-1 + 1/10*cos(2*theta)")).theta - pi / 2) < 1e-12);
  CHECK(select_extremum(parse_trig_poly("cos(theta)")).theta == 0);
  // max = 0 at pi: the minimum -2 at 0 is chosen so that U(theta0) != 0
  auto c = select_extremum(parse_trig_poly("-1 - cos(theta)"));
  CHECK(c.theta == 0);
  CHECK(c.value == -2);
}

TEST_CASE("extremum guarantees on random angular factors", "[polar][property]") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    int order = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<Rational> a, b;
    for (int m = 0; m <= order; ++m) {
      a.push_back(random_rational(rng));
      b.push_back(random_rational(rng));
    }
    a.back() += 1;
    TrigPoly u(a, b);
    if (u.is_constant()) continue;
    auto c = select_extremum(u);
    CHECK(c.value != 0);
    CHECK(std::abs(u.eval(c.theta, 1)) < 1e-9);
    CHECK(c.second / c.value <= 1e-9);
    // the chosen value is the sampled max (if positive) or min
    double hi = -1e300, lo = 1e300;
    for (int i = 0; i < 4000; ++i) {
      double v = u.eval(2 * pi * i / 4000);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    double target = hi > 0 ? hi : lo;
    CHECK(std::abs(c.value - target) < 1e-3 * (1 + std::abs(target)));
  }
}

TEST_CASE("analyze_polar reference cases", "[polar]") {
  auto v = analyze_polar(parse_trig_poly("1 + 1/10*cos(2*theta)"), -3);
  CHECK(v.classification == PolarClass::non_integrable);
  REQUIRE(v.lambda_rational);
  CHECK(*v.lambda_rational == q(-37, 11));
  CHECK_FALSE(v.lambda_reconstructed);
  REQUIRE(v.lambda_exact);
  CHECK(*v.lambda_exact == AlgNum(q(-37, 11)));
  CHECK_FALSE(v.morales->admissible);

  CHECK(analyze_polar(TrigPoly::constant(5), -3).classification == PolarClass::radial_integrable);
  CHECK(analyze_polar(parse_trig_poly("1 + 1/10*cos(2*theta)"), -2).classification ==
        PolarClass::degree_minus_two_integrable);
  CHECK_THROWS_AS(analyze_polar(TrigPoly::constant(1), 3), std::invalid_argument);
  CHECK_THROWS_AS(analyze_polar(TrigPoly(), -3), std::invalid_argument);
}

TEST_CASE("lambda = k is a multiple point", "[polar]") {
  // U = 1 - (1 - cos theta)^2 has a flat maximum at theta = 0
  auto u = parse_trig_poly("-1/2 + 2*cos(theta) - 1/2*cos(2*theta)");
  auto v = analyze_polar(u, -3);
  CHECK(v.theta0->theta == 0);
  CHECK(*v.lambda_rational == -3);
  CHECK(v.classification == PolarClass::multiple_point_found);
}

TEST_CASE("polar Darboux point passes classify", "[polar][darboux]") {
  std::mt19937 rng(53);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int k = -std::uniform_int_distribution<int>(1, 7)(rng);
    if (k == -2) continue;
    std::vector<Rational> a{random_rational(rng) + 12}, b{0};
    for (int m = 1; m <= 3; ++m) {
      a.push_back(random_rational(rng));
      b.push_back(random_rational(rng));
    }
    TrigPoly u(a, b);
    auto v = analyze_polar(u, k);
    REQUIRE(v.theta0);
    REQUIRE(v.theta0->value > 0);
    Potential pot = Potential::polar(u, k);
    auto c = polar_darboux_point(k, *v.theta0);
    auto p = classify(pot, c);
    CHECK(std::abs(p.lambda - Complex(v.lambda)) < 1e-8 * (1 + std::abs(v.lambda)));
    // the other eigenvalue is k(k-1)
    Complex tr = p.hessian[0] + p.hessian[3];
    CHECK(std::abs(tr - p.lambda - Complex(k * (k - 1.0))) < 1e-8 * k * k);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("polar verdict JSON", "[polar][json]") {
  auto j = to_json(analyze_polar(parse_trig_poly("1 + 1/10*cos(2*theta)"), -3));
  CHECK(j["classification"] == "non_integrable");
  CHECK(j["lambda"] == "-37/11");
  CHECK(j["witness"]["lambda"] == "-37/11");
  CHECK(j["critical_points"].size() == 4);
}
