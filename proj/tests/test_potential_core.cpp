#include "hompot/jet.hpp"
#include "hompot/parser.hpp"
#include "hompot/transform.hpp"
#include "test_util.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace hompot;
using hompot::testing::random_gaussian;
using hompot::testing::random_rational;

namespace {

Point2<AlgNum> pt(const Rational& a, const Rational& b) { return {AlgNum(a), AlgNum(b)}; }
Point2<Complex> cpt(double a, double b) { return {Complex(a, 0), Complex(b, 0)}; }

// Symbolic oracle: differentiate the homogeneous polynomial term by term.
GaussianRational direct_derivative(const HomoPoly& p, int a, int b, const GaussianRational& x, const GaussianRational& y) {
  HomoPoly d = p;
  for (int i = 0; i < a; ++i) d = d.d1();
  for (int i = 0; i < b; ++i) d = d.d2();
  return d.eval(x, y);
}

}  // namespace

TEST_CASE("parse_potential recognizes each kind", "[potential][parser]") {
  SECTION("polynomial") {
    Potential v = parse_potential("q1^2 + q2^2");
    CHECK(v.kind() == PotentialKind::polynomial);
    CHECK(v.degree() == 2);
    Potential w = parse_potential("q1^3 - 3*q1*q2^2");
    CHECK(w.kind() == PotentialKind::polynomial);
    CHECK(w.degree() == 3);
    CHECK(to_string(w) == "q1^3 - 3*q1*q2^2");
  }
  SECTION("implicit multiplication and whitespace") {
    CHECK(parse_potential(" 2q1 q2 ") == parse_potential("2*q1*q2"));
    CHECK(parse_potential("(q1+I*q2)^2") == parse_potential("q1^2 + 2*I*q1*q2 - q2^2"));
  }
  SECTION("rational") {
    Potential v = parse_potential("(q1^3 + q2^3)/(q1^2 + q2^2)^2");
    CHECK(v.kind() == PotentialKind::rational);
    CHECK(v.degree() == -1);
    CHECK(parse_potential("1/q1").degree() == -1);
    // common factors cancel; constant denominators collapse
    CHECK(parse_potential("q1^3/q1") == parse_potential("q1^2"));
    CHECK(parse_potential("q1^3/2") == parse_potential("1/2*q1^3"));
  }
  SECTION("radial and polar") {
    Potential v = parse_potential("r^-3");
    CHECK(v.kind() == PotentialKind::radial);
    CHECK(v.degree() == -3);
    CHECK(parse_potential("-1/2*r^(-1)").as<RadialKind>()->a == GaussianRational(make_rational(-1, 2)));
    Potential p = parse_potential("r^-3*(1 + 1/10*cos(2*theta))");
    CHECK(p.kind() == PotentialKind::polar);
    CHECK(p.as<PolarKind>()->angular.cos_coef(2) == make_rational(1, 10));
    CHECK(parse_potential("cos(theta)*r^-1").kind() == PotentialKind::polar);
    CHECK(parse_potential("r^2*(5)").kind() == PotentialKind::radial);
  }
}

TEST_CASE("parse_potential errors", "[potential][parser]") {
  CHECK_THROWS_WITH(parse_potential("q1^2 + q2"), Catch::Matchers::ContainsSubstring("non-homogeneous"));
  CHECK_THROWS_AS(parse_potential("q1^2/0"), ParseError);
  CHECK_THROWS_AS(parse_potential("q1^2 +"), ParseError);
  CHECK_THROWS_AS(parse_potential("q3"), ParseError);
  CHECK_THROWS_AS(parse_potential("r^-3 + q1"), ParseError);
  CHECK_THROWS_AS(parse_potential("r^-3 + cos(theta)"), ParseError);
  CHECK_THROWS_AS(parse_potential("q1 q2 / q1 / q2"), ParseError);
  try {
    parse_potential("q1^2 + $");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 7);
  }
}

TEST_CASE("parse and print are inverse on canonical forms", "[potential][parser][property]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    int deg = 1 + trial % 5;
    HomoPoly p(deg);
    for (int j = 0; j <= deg; ++j) p.add(j, random_gaussian(rng, trial % 3 == 0));
    if (p.is_zero()) continue;
    Potential v = Potential::polynomial(p);
    CHECK(parse_potential(to_string(v)) == v);
    if (trial % 2 == 0) {
      HomoPoly q(1 + trial % 3);
      for (int j = 0; j <= q.degree(); ++j) q.add(j, random_gaussian(rng, false));
      if (q.is_zero() || q.degree() == deg) continue;
      Potential w = Potential::rational(p, q);
      CHECK(parse_potential(to_string(w)) == w);
    }
  }
  for (const char* s : {"r^-3", "-2*r^5", "1/3*I*r^-1", "r^-3*(1 + 1/10*cos(2*theta))", "r^4*(cos(theta) - 2/3*sin(3*theta))"}) {
    Potential v = parse_potential(s);
    CHECK(parse_potential(to_string(v)) == v);
  }
}

TEST_CASE("potentials serialize to JSON and back", "[potential][json]") {
  for (const char* s : {"q1^3 - 3*q1*q2^2", "(q1^3 + q2^3)/(q1^2 + q2^2)^2", "r^-3", "r^-3*(1 + 1/10*cos(2*theta))",
                        "(1+2*I)*q1^2*q2"}) {
    Potential v = parse_potential(s);
    nlohmann::json j = to_json(v);
    CHECK(j.at("kind") == kind_name(v.kind()));
    CHECK(potential_from_json(nlohmann::json::parse(j.dump())) == v);
  }
  nlohmann::json bad = to_json(parse_potential("q1^3"));
  bad["terms"][0]["i"] = 2;
  CHECK_THROWS(potential_from_json(bad));
}

TEST_CASE("jet_at reproduces hand derivatives", "[potential][jet]") {
  SECTION("q1^3 at (1,0)") {
    auto jet = jet_at(parse_potential("q1^3"), pt(1, 0), 2);
    CHECK(jet.value() == AlgNum(1));
    CHECK(jet.d(0, 0) == AlgNum(3));
    CHECK(jet.d(1, 0) == AlgNum(6));
    CHECK(jet.d(1, 1) == AlgNum(0));
    CHECK(jet.d(1, 2) == AlgNum(0));
    CHECK(jet.d(2, 0) == AlgNum(6));
  }
  SECTION("r^-3 at (1,0)") {
    auto jet = jet_at(parse_potential("r^-3"), pt(1, 0), 2);
    CHECK(jet.derivative(1, 0) == AlgNum(-3));
    CHECK(jet.derivative(2, 0) == AlgNum(12));
    CHECK(jet.derivative(0, 2) == AlgNum(-3));
    CHECK(jet.derivative(1, 1) == AlgNum(0));
  }
  SECTION("q1^2 q2 at (1,1)") {
    auto jet = jet_at(parse_potential("q1^2*q2"), pt(1, 1), 1);
    CHECK(jet.derivative(1, 0) == AlgNum(2));
    CHECK(jet.derivative(0, 1) == AlgNum(1));
  }
  SECTION("radial derivatives match the closed-form oracle away from the axis") {
    // d1 = k q1 rho^(k/2-1), d11 = k rho^(k/2-1) + k(k-2) q1^2 rho^(k/2-2), d12 = k(k-2) q1 q2 rho^(k/2-2)
    for (int k : {-5, -3, -1, 1, 3, 5}) {
      Potential v = Potential::radial(GaussianRational(1), k);
      double q1 = 0.7, q2 = -1.3, rho = q1 * q1 + q2 * q2;
      auto jet = jet_at(v, cpt(q1, q2), 1);
      double e1 = k * q1 * std::pow(rho, k / 2.0 - 1);
      double e11 = k * std::pow(rho, k / 2.0 - 1) + k * (k - 2) * q1 * q1 * std::pow(rho, k / 2.0 - 2);
      double e12 = k * (k - 2) * q1 * q2 * std::pow(rho, k / 2.0 - 2);
      double e22 = k * std::pow(rho, k / 2.0 - 1) + k * (k - 2) * q2 * q2 * std::pow(rho, k / 2.0 - 2);
      CHECK(std::abs(jet.derivative(1, 0) - e1) < 1e-12);
      CHECK(std::abs(jet.derivative(2, 0) - e11) < 1e-12);
      CHECK(std::abs(jet.derivative(1, 1) - e12) < 1e-12);
      CHECK(std::abs(jet.derivative(0, 2) - e22) < 1e-12);
    }
  }
  SECTION("exact radial jet at a Pythagorean point") {
    auto jet = jet_at(parse_potential("r^-3"), pt(3, 4), 1);
    CHECK(jet.value() == AlgNum(make_rational(1, 125)));
    CHECK(jet.derivative(1, 0) == AlgNum(make_rational(-9, 3125)));
  }
  SECTION("polynomial series matches symbolic differentiation") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      HomoPoly p(2 + trial % 4);
      for (int j = 0; j <= p.degree(); ++j) p.add(j, random_gaussian(rng));
      if (p.is_zero()) continue;
      Potential v = Potential::polynomial(p);
      GaussianRational x = random_gaussian(rng), y = random_gaussian(rng);
      auto jet = jet_at(v, Point2<AlgNum>{AlgNum(x), AlgNum(y)}, p.degree());
      for (int a = 0; a <= p.degree() + 1; ++a)
        for (int b = 0; a + b <= p.degree() + 1; ++b) CHECK(jet.derivative(a, b) == AlgNum(direct_derivative(p, a, b, x, y)));
    }
  }
}

TEST_CASE("jet_at errors at singular points", "[potential][jet]") {
  CHECK_THROWS_AS(jet_at(parse_potential("1/q1"), pt(0, 1), 1), SingularPointError);
  CHECK_THROWS_AS(jet_at(parse_potential("r^-3"), Point2<AlgNum>{AlgNum(1), AlgNum(GaussianRational::I())}, 1),
                  SingularPointError);
  CHECK_THROWS_AS(jet_at(parse_potential("r^-3"), pt(1, 1), 1), NotExactError);
}

TEST_CASE("Euler recurrence ties consecutive jet orders", "[potential][jet][property]") {
  // differentiating q1 V_1 + q2 V_2 = k V:  c1 D(a+1,b) + c2 D(a,b+1) = (k-a-b) D(a,b)
  std::mt19937 rng(3);
  std::vector<Potential> pots = {parse_potential("q1^3 - 3*q1*q2^2"), parse_potential("(q1^3 + 2*q2^3)/(q1^2 + q2^2)^2"),
                                 parse_potential("q1^4 + 1/3*q1*q2^3 - 5*q2^4"), parse_potential("(q1 - q2)/(q1*q2^2 + 3*q1^3)")};
  for (const auto& v : pots) {
    for (int trial = 0; trial < 5; ++trial) {
      Point2<AlgNum> c{AlgNum(random_rational(rng)), AlgNum(random_rational(rng) + 7)};
      auto jet = jet_at(v, c, 5);
      for (int n = 0; n <= 5; ++n)
        for (int a = 0; a <= n; ++a) {
          int b = n - a;
          AlgNum lhs = c.q1 * jet.derivative(a + 1, b) + c.q2 * jet.derivative(a, b + 1);
          CHECK(lhs == AlgNum(Rational(v.degree() - n)) * jet.derivative(a, b));
        }
    }
  }
  SECTION("at (1,0) only d_{l,l+1} is free") {
    auto jet = jet_at(parse_potential("q1^5 + 2*q1^3*q2^2 - 7*q2^5"), pt(1, 0), 5);
    for (int l = 1; l <= 5; ++l)
      for (int j = 0; j <= l; ++j) CHECK(jet.d(l, j) == AlgNum(Rational(5 - l)) * jet.d(l - 1, j));
  }
}

TEST_CASE("euler_defect vanishes", "[potential][property]") {
  CHECK(euler_defect(parse_potential("q1^3 - 3*q1*q2^2"), pt(2, 1)) == AlgNum(0));
  CHECK(std::abs(euler_defect(parse_potential("r^-3"), cpt(3, 4))) < 1e-12);
  // a point on the zero set
  CHECK(euler_defect(parse_potential("q1^2 - q2^2"), pt(1, 1)) == AlgNum(0));

  std::mt19937 rng(5);
  std::vector<Potential> exact = {parse_potential("q1^3 - 3*q1*q2^2"), parse_potential("(1+I)*q1^2*q2 + q2^3/7"),
                                  parse_potential("(q1^3 + q2^3)/(q1^2 + 4*q2^2)^2")};
  std::vector<Potential> floating = {parse_potential("r^-3"), parse_potential("2*r^5"),
                                     parse_potential("r^-3*(1 + 1/10*cos(2*theta) - sin(theta))")};
  for (int i = 0; i < 100; ++i) {
    Rational a = random_rational(rng), b = random_rational(rng) + make_rational(1, 3);
    for (const auto& v : exact) CHECK(euler_defect(v, pt(a, b)) == AlgNum(0));
    for (const auto& v : floating) {
      Point2<Complex> q = cpt(a.get_d(), b.get_d());
      double scale = std::abs(evaluate(v, q)) + 1.0;
      CHECK(std::abs(euler_defect(v, q)) / scale < 1e-12);
    }
  }
}

TEST_CASE("transform rotates and scales", "[potential][transform]") {
  Matrix2 quarter = Matrix2::of(0, -1, 1, 0);  // q -> (-q2, q1)
  CHECK(transform(parse_potential("q1^2"), quarter, 1) == parse_potential("q2^2"));
  CHECK(transform(parse_potential("r^-3"), quarter, 1) == parse_potential("r^-3"));
  CHECK(transform(parse_potential("q1^3"), Matrix2::identity(), make_rational(1, 8)) == parse_potential("1/8*q1^3"));
  CHECK_THROWS_AS(transform(parse_potential("q1^3"), Matrix2::of(1, 1, 0, 1), 1), NotOrthogonalError);

  SECTION("polar rotation agrees with pointwise evaluation") {
    Potential v = parse_potential("r^-3*(1 + 1/10*cos(2*theta) - 3*sin(theta))");
    Matrix2 r = Matrix2::of(make_rational(3, 5), make_rational(-4, 5), make_rational(4, 5), make_rational(3, 5));
    Matrix2 f = Matrix2::of(make_rational(3, 5), make_rational(4, 5), make_rational(4, 5), make_rational(-3, 5));
    for (const Matrix2& m : {r, f}) {
      Potential w = transform(v, m, 2);
      Point2<Complex> q = cpt(0.3, 1.7);
      Point2<Complex> rq = cpt(m(0, 0).re.get_d() * 0.3 + m(0, 1).re.get_d() * 1.7, m(1, 0).re.get_d() * 0.3 + m(1, 1).re.get_d() * 1.7);
      CHECK(std::abs(evaluate(w, q) - 2.0 * evaluate(v, rq)) < 1e-12);
    }
  }

  SECTION("composition") {
    std::mt19937 rng(13);
    // complex-orthogonal matrices [[a, b], [-b, a]] with a^2 + b^2 = 1
    std::vector<Matrix2> rots = {
        Matrix2::of(make_rational(3, 5), make_rational(4, 5), make_rational(-4, 5), make_rational(3, 5)),
        Matrix2::of(make_rational(5, 3), GaussianRational(0, make_rational(4, 3)), GaussianRational(0, make_rational(-4, 3)), make_rational(5, 3)),
        Matrix2::of(make_rational(5, 13), make_rational(12, 13), make_rational(12, 13), make_rational(-5, 13))};
    std::vector<Potential> pots = {parse_potential("q1^3 - 3*q1*q2^2 + I*q2^3"), parse_potential("(q1^3 + q2^3)/(q1^2 + 4*q2^2)^2"),
                                   parse_potential("2*r^-3")};
    for (const auto& v : pots)
      for (const auto& r1 : rots)
        for (const auto& r2 : rots) {
          GaussianRational s1 = make_rational(2, 3), s2(make_rational(-5), Rational(1));
          Potential lhs = transform(transform(v, r1, s1), r2, s2);
          Potential rhs = transform(v, r1 * r2, s1 * s2);
          for (int i = 0; i < 3; ++i) {
            Point2<Complex> q = cpt(random_rational(rng).get_d() + 0.1, random_rational(rng).get_d() + 2.0);
            Complex a = evaluate(lhs, q), b = evaluate(rhs, q);
            CHECK(std::abs(a - b) <= 1e-12 * (1 + std::abs(a)));
          }
        }
  }
}
