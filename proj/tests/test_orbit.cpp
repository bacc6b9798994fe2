#include "hompot/orbit.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "hompot/parser.hpp"

using namespace hompot;

namespace {

OrbitParams scenario(const std::string& name) {
  for (const auto& p : shipped_scenarios())
    if (p.name == name) return p;
  throw std::logic_error("no scenario " + name);
}

}  // namespace

TEST_CASE("shipped orbit scenarios conserve the first integral", "[orbit]") {
  auto results = run_scenarios(shipped_scenarios());
  REQUIRE(results.size() == 3);
  for (const auto& r : results) {
    INFO(r.name);
    CHECK(r.max_drift < 1e-9);
    CHECK(r.time_change_defect < 1e-9);
  }
  // the quartic oscillator stays in [-1, 1] and reaches both turning points
  CHECK(results[2].max_phi <= 1 + 1e-9);
  CHECK(results[2].min_phi >= -1 - 1e-9);
  CHECK(results[2].max_phi > 0.999);
  CHECK(results[2].min_phi < -0.999);
}

TEST_CASE("integrate_orbit for k = -3", "[orbit]") {
  auto p = scenario("k-3_escape");
  auto t = integrate_orbit(p);
  CHECK(t.samples.front().drift == 0);
  CHECK(t.samples.front().phi == 2);
  CHECK(std::abs(t.samples.front().dphi - std::sqrt(7.0 / 4)) < 1e-15);
  CHECK(std::abs(t.samples.back().t - 5) < 1e-12);
  CHECK(t.max_drift < 1e-9);
  // phi'' = 3 phi^-4 > 0: the escape speed increases towards sqrt(2)
  for (size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].dphi >= t.samples[i - 1].dphi);
  CHECK(t.samples.back().dphi < std::sqrt(2.0));
}

TEST_CASE("k = 3 from the turning point", "[orbit]") {
  OrbitParams p = scenario("k3_arc");
  p.phi0 = 1;  // phi' = 0: s = 0 and phi^k = 1
  auto t = integrate_orbit(p);
  CHECK(t.samples.front().dphi == 0);
  CHECK(time_change_check(t) < 1e-9);
  CHECK(t.samples.back().phi < 1);
}

TEST_CASE("integrate_orbit error paths", "[orbit]") {
  OrbitParams p;
  p.k = -3;
  p.phi0 = 0.5;  // 1 - phi^-3 < 0
  CHECK_THROWS_AS(integrate_orbit(p), std::invalid_argument);
  p.phi0 = 1.01;
  p.direction = -1;
  p.alpha = -3.0;  // attractive energy surface: falls into the collision
  p.t_end = 10;
  CHECK_THROWS_AS(integrate_orbit(p), OrbitError);
  p.k = 0;
  CHECK_THROWS_AS(integrate_orbit(p), std::invalid_argument);
}

TEST_CASE("weighted orbit keeps its first integral", "[orbit]") {
  OrbitParams p;
  p.k = -3;
  p.k0 = 2;
  p.phi0 = 1.5;
  p.t_end = 3;
  auto t = integrate_orbit(p);
  CHECK(t.max_drift < 1e-9);
  CHECK(time_change_check(t) < 1e-9);
  // the weighted orbit is the plain one reparametrized: phi^k0 solves the k0 = 1 equation
  OrbitParams plain;
  plain.k = -3;
  plain.phi0 = std::pow(1.5, 2);
  plain.t_end = 3;
  auto u = integrate_orbit(plain);
  REQUIRE(u.samples.size() == t.samples.size());
  for (size_t i = 0; i < t.samples.size(); i += 50)
    CHECK(std::abs(t.samples[i].phi * t.samples[i].phi - u.samples[i].phi) < 1e-9);
}

TEST_CASE("level-1 VE follows P_k", "[orbit][varequ]") {
  for (const auto& name : {"k-3_escape", "k3_arc", "k4_oscillator"}) {
    auto p = scenario(name);
    if (p.k == 4) p.t_end = 0.5;  // stay away from phi = 0 where P_k loses smoothness
    INFO(name);
    auto sys = build_higher_ve(1, p.k, AlgNum(p.k));
    auto sol = integrate_ve(sys, p, pk_initial_conditions(p));
    CHECK(sol.max_residual < 1e-7);
    CHECK(pk_deviation(sol, p.k) < 1e-6);
  }
}

TEST_CASE("integrate_ve is linear in the initial data", "[orbit][varequ]") {
  auto p = scenario("k-3_escape");
  auto sys = build_higher_ve(1, -3, AlgNum(-3));
  auto zero = integrate_ve(sys, p, {0, 0, 0, 0});
  for (const auto& s : zero.samples)
    for (double v : s.y) CHECK(v == 0);
  std::vector<double> y0{0.2, -0.4, 1.0, 0.3}, y1{0.6, -1.2, 3.0, 0.9};
  auto a = integrate_ve(sys, p, y0), b = integrate_ve(sys, p, y1);
  REQUIRE(a.samples.size() == b.samples.size());
  for (size_t i = 0; i < a.samples.size(); ++i)
    for (size_t c = 0; c < 4; ++c)
      CHECK(std::abs(3 * a.samples[i].y[c] - b.samples[i].y[c]) < 1e-9 * (1 + std::abs(b.samples[i].y[c])));
}

TEST_CASE("level-2 radial system integrates with small residual", "[orbit][varequ]") {
  auto jet = jet_at(parse_potential("r^-3"), Point2<AlgNum>{AlgNum(1), AlgNum(0)}, 2);
  auto sys = build_higher_ve(jet, 2, -3);
  auto p = scenario("k-3_escape");
  std::vector<double> y0(sys.indices.size(), 0.0);
  for (size_t i = 0; i < y0.size(); ++i) y0[i] = 0.1 * static_cast<double>(i % 5) - 0.2;
  auto sol = integrate_ve(sys, p, y0);
  CHECK(sol.max_residual < 1e-7);
  // the order-2 block with y = products of level-1 solutions: y_{0,0,2,0} = X1^2
  auto lvl1 = build_higher_ve(1, -3, AlgNum(-3));
  auto s1 = integrate_ve(lvl1, p, {0.5, 0.0, 1.0, 0.0});
  std::vector<double> sq(sys.indices.size(), 0.0);
  sq[sys.position({{2, 0, 0, 0}})] = 0.25;
  sq[sys.position({{1, 0, 1, 0}})] = 0.5;
  sq[sys.position({{0, 0, 2, 0}})] = 1.0;
  // the order-1 slots also carry X1 so the tail feeds it consistently
  sq[sys.position({{1, 0, 0, 0}})] = 0.5;
  sq[sys.position({{0, 0, 1, 0}})] = 1.0;
  auto s2 = integrate_ve(sys, p, sq);
  size_t x1 = sys.position({{0, 0, 1, 0}}), x11 = sys.position({{0, 0, 2, 0}});
  for (size_t i = 0; i < s2.samples.size(); i += 100) {
    double X1 = s1.samples[i].y[2];
    // order-2 block is closed, so y_{0,0,2,0} stays equal to X1^2
    CHECK(std::abs(s2.samples[i].y[x11] - X1 * X1) < 1e-8 * (1 + X1 * X1));
    CHECK(std::isfinite(s2.samples[i].y[x1]));
  }
}

TEST_CASE("integrate_ve preconditions", "[orbit][varequ]") {
  auto p = scenario("k-3_escape");
  CHECK_THROWS_AS(integrate_ve(build_higher_ve(2, -3, AlgNum(-3)), p, std::vector<double>(14)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_ve(build_higher_ve(1, -3, AlgNum(-3)), p, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(integrate_ve(build_higher_ve(1, 3, AlgNum(3)), p, {0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("orbit CSV", "[orbit]") {
  auto p = scenario("k3_arc");
  p.t_end = 0.02;
  std::ostringstream os;
  write_csv(os, integrate_orbit(p));
  std::string s = os.str();
  CHECK(s.rfind("t,phi,dphi,drift\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 6);
  std::ostringstream ve;
  write_csv(ve, integrate_ve(build_higher_ve(1, 3, AlgNum(3)), p, {0, 0, 1, 0}));
  CHECK(ve.str().rfind("t,phi,dphi,y_1_0_0_0,y_0_1_0_0,y_0_0_1_0,y_0_0_0_1\n", 0) == 0);
}
