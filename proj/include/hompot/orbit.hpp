#pragma once

// Numerical homothetic orbit and variational systems along it.
//
// The orbit q(t) = phi(t)^k0 c of a normalized Darboux point obeys the first
// integral 1/2 k0^2 phi^(2(k0-1)) phi'^2 - (alpha/k) phi^(k0 k) = 1; alpha = -k
// makes s = k0 phi' phi^(k0-1) / sqrt(2) satisfy s^2 = 1 - phi^(k0 k).

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <future>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hompot/varequ.hpp"

namespace hompot {

struct OrbitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OrbitParams {
  std::string name;
  int k = -3;
  int k0 = 1;
  std::optional<double> alpha;  // defaults to -k
  double phi0 = 2;
  int direction = 1;  // sign of phi'(0)
  double t_end = 5;
  double sample_dt = 0.005;
  double abs_tol = 1e-14;
  double rel_tol = 1e-14;
  double guard = 1e-6;  // minimal |phi| when k0 k < 0

  double alpha_value() const { return alpha ? *alpha : -static_cast<double>(k); }
};

struct OrbitSample {
  double t = 0;
  double phi = 0;
  double dphi = 0;
  double drift = 0;
};

struct Trajectory {
  OrbitParams params;
  std::vector<OrbitSample> samples;
  double max_drift = 0;
};

namespace detail {

inline void check_orbit_params(const OrbitParams& p) {
  if (p.k == 0) throw std::invalid_argument("degree 0 has no homothetic orbit");
  if (p.k0 < 1) throw std::invalid_argument("orbit weight must be >= 1");
  if (!(p.t_end > 0) || !(p.sample_dt > 0)) throw std::invalid_argument("time span and sampling step must be positive");
  if (p.phi0 <= 0) throw std::invalid_argument("phi(0) must be positive");
}

inline double orbit_energy(const OrbitParams& p, double phi, double dphi) {
  double k0 = p.k0;
  return 0.5 * k0 * k0 * std::pow(phi, 2 * (p.k0 - 1)) * dphi * dphi -
         p.alpha_value() / p.k * std::pow(phi, p.k0 * p.k);
}

/// phi'' from the Euler-Lagrange equation of the first integral.
inline double orbit_acceleration(const OrbitParams& p, double phi, double dphi) {
  double k0 = p.k0;
  double num = p.alpha_value() * k0 * std::pow(phi, p.k0 * p.k - 1) -
               k0 * k0 * (k0 - 1) * std::pow(phi, 2 * p.k0 - 3) * dphi * dphi;
  return num / (k0 * k0 * std::pow(phi, 2 * p.k0 - 2));
}

inline void guard_phi(const OrbitParams& p, double phi, double t) {
  bool singular = p.k0 * p.k < 0 || p.k0 > 1;
  if (!std::isfinite(phi)) throw OrbitError("orbit left the finite range at t = " + std::to_string(t));
  if (singular && std::abs(phi) < p.guard) throw OrbitError("orbit approached the collision phi = 0 at t = " + std::to_string(t));
}

using State = std::vector<double>;

template <class System, class Observer>
void integrate_sampled(System sys, State x, const OrbitParams& p, Observer obs) {
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(p.abs_tol, p.rel_tol, ode::runge_kutta_dopri5<State>());
  size_t steps = static_cast<size_t>(std::llround(p.t_end / p.sample_dt));
  std::vector<double> times;
  for (size_t i = 0; i <= steps; ++i) times.push_back(std::min(p.t_end, static_cast<double>(i) * p.sample_dt));
  try {
    ode::integrate_times(stepper, sys, x, times.begin(), times.end(), p.sample_dt, obs,
                         ode::max_step_checker(100000));
  } catch (const ode::step_adjustment_error& e) {
    throw OrbitError(std::string("step size underflow: ") + e.what());
  } catch (const ode::no_progress_error& e) {
    throw OrbitError(std::string("integrator made no progress: ") + e.what());
  }
}

}  // namespace detail

/// phi'(0) from the first integral at energy 1.
inline double initial_velocity(const OrbitParams& p) {
  detail::check_orbit_params(p);
  double k0 = p.k0;
  double rhs = 2 * (1 + p.alpha_value() / p.k * std::pow(p.phi0, p.k0 * p.k)) / (k0 * k0 * std::pow(p.phi0, 2 * (p.k0 - 1)));
  if (rhs < 0) throw std::invalid_argument("phi(0) lies outside the energy-1 region");
  return (p.direction >= 0 ? 1 : -1) * std::sqrt(rhs);
}

/// Adaptive Dormand-Prince integration of the orbit, sampled every sample_dt.
inline Trajectory integrate_orbit(const OrbitParams& p) {
  Trajectory out;
  out.params = p;
  detail::State x{p.phi0, initial_velocity(p)};
  auto rhs = [&p](const detail::State& s, detail::State& ds, double t) {
    detail::guard_phi(p, s[0], t);
    ds[0] = s[1];
    ds[1] = detail::orbit_acceleration(p, s[0], s[1]);
  };
  detail::integrate_sampled(rhs, x, p, [&](const detail::State& s, double t) {
    double drift = std::abs(detail::orbit_energy(p, s[0], s[1]) - 1);
    out.samples.push_back({t, s[0], s[1], drift});
    out.max_drift = std::max(out.max_drift, drift);
  });
  return out;
}

/// max |s^2 - 1 + phi^(k0 k)| with s = k0 phi' phi^(k0-1) / sqrt(2).
inline double time_change_check(const Trajectory& traj) {
  const auto& p = traj.params;
  double worst = 0;
  for (const auto& s : traj.samples) {
    double sv = p.k0 * s.dphi * std::pow(s.phi, p.k0 - 1) / std::sqrt(2.0);
    worst = std::max(worst, std::abs(sv * sv - 1 + std::pow(s.phi, p.k0 * p.k)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Variational systems along the orbit

struct VeSample {
  double t = 0;
  double phi = 0;
  double dphi = 0;
  std::vector<double> y;
};

struct VeSolution {
  std::vector<MonomialIndex> indices;
  std::vector<VeSample> samples;
  double max_residual = 0;  // relative defect of the interpolated solution
};

namespace detail {

struct NumericEntry {
  size_t from, to;
  double coef;
  int phi_exp;
};

inline std::vector<NumericEntry> numeric_entries(const VariationalSystem& sys) {
  if (!sys.bound()) throw std::invalid_argument("variational system has unbound d symbols");
  std::vector<NumericEntry> out;
  for (const auto& e : sys.entries) {
    Complex c = sys.value(e).to_complex();
    if (std::abs(c.imag()) > 1e-14 * (1 + std::abs(c.real())))
      throw std::invalid_argument("real-time integration needs real coefficients");
    out.push_back({e.from, e.to, c.real(), e.phi_exp});
  }
  return out;
}

inline void apply_system(const std::vector<NumericEntry>& entries, double phi, const double* y, double* dy, size_t n) {
  for (size_t i = 0; i < n; ++i) dy[i] = 0;
  for (const auto& e : entries) dy[e.from] += e.coef * std::pow(phi, e.phi_exp) * y[e.to];
}

}  // namespace detail

/// Integrates the orbit jointly with the linear system; y0 is indexed like
/// sys.indices. The residual re-evaluates the system at interval midpoints of
/// the cubic Hermite interpolant through consecutive samples.
inline VeSolution integrate_ve(const VariationalSystem& sys, const OrbitParams& p, const std::vector<double>& y0) {
  if (sys.level > 3) throw std::invalid_argument("integration is limited to level <= 3");
  if (y0.size() != sys.indices.size()) throw std::invalid_argument("initial condition size does not match the system");
  if (sys.k != p.k || sys.k0 != p.k0) throw std::invalid_argument("system and orbit degrees differ");
  auto entries = detail::numeric_entries(sys);
  size_t n = y0.size();
  detail::State x{p.phi0, initial_velocity(p)};
  x.insert(x.end(), y0.begin(), y0.end());
  auto rhs = [&](const detail::State& s, detail::State& ds, double t) {
    detail::guard_phi(p, s[0], t);
    ds[0] = s[1];
    ds[1] = detail::orbit_acceleration(p, s[0], s[1]);
    detail::apply_system(entries, s[0], s.data() + 2, ds.data() + 2, n);
  };
  VeSolution out;
  out.indices = sys.indices;
  detail::integrate_sampled(rhs, x, p, [&](const detail::State& s, double t) {
    out.samples.push_back({t, s[0], s[1], std::vector<double>(s.begin() + 2, s.end())});
  });
  detail::State f0(n + 2), f1(n + 2), fm(n + 2), mid(n + 2);
  for (size_t i = 0; i + 1 < out.samples.size(); ++i) {
    const auto& a = out.samples[i];
    const auto& b = out.samples[i + 1];
    double h = b.t - a.t;
    if (h <= 0) continue;
    detail::State sa{a.phi, a.dphi}, sb{b.phi, b.dphi};
    sa.insert(sa.end(), a.y.begin(), a.y.end());
    sb.insert(sb.end(), b.y.begin(), b.y.end());
    rhs(sa, f0, a.t);
    rhs(sb, f1, b.t);
    for (size_t c = 0; c < n + 2; ++c) mid[c] = 0.5 * (sa[c] + sb[c]) + h * (f0[c] - f1[c]) / 8;
    rhs(mid, fm, a.t + h / 2);
    for (size_t c = 2; c < n + 2; ++c) {
      double hermite_slope = 1.5 * (sb[c] - sa[c]) / h - 0.25 * (f0[c] + f1[c]);
      double scale = 1 + std::abs(fm[c]) + std::abs(mid[c]);
      out.max_residual = std::max(out.max_residual, std::abs(hermite_slope - fm[c]) / scale);
    }
  }
  return out;
}

/// Value and time derivative of P_k(s) = |s^2 - 1|^(1/k) at the orbit state,
/// with s = phi' / sqrt(2) (k0 = 1).
inline std::pair<double, double> pk_along_orbit(int k, double phi, double dphi) {
  double s = dphi / std::sqrt(2.0);
  double u = s * s - 1;
  double r = 1.0 / k;
  double value = std::pow(std::abs(u), r);
  double ds_dt = -k * std::pow(phi, k - 1) / std::sqrt(2.0);
  double dvalue_ds = 2 * r * s * std::pow(std::abs(u), r - 1) * (u < 0 ? -1 : 1);
  return {value, dvalue_ds * ds_dt};
}

/// Max relative deviation of a level-1 normal component from P_k(s(t)).
inline double pk_deviation(const VeSolution& sol, int k) {
  size_t x2 = 3;  // y_{0,0,0,1}
  double worst = 0;
  for (const auto& s : sol.samples) {
    double pk = pk_along_orbit(k, s.phi, s.dphi).first;
    worst = std::max(worst, std::abs(s.y[x2] - pk) / std::abs(pk));
  }
  return worst;
}

/// Level-1 initial data (X1', X2', X1, X2) = (0, d/dt P_k, 0, P_k) at t = 0.
inline std::vector<double> pk_initial_conditions(const OrbitParams& p) {
  if (p.k0 != 1) throw std::invalid_argument("P_k initial data assume k0 = 1");
  auto [v, dv] = pk_along_orbit(p.k, p.phi0, initial_velocity(p));
  return {0, dv, 0, v};
}

// ---------------------------------------------------------------------------
// Scenarios and CSV

/// Shipped scenarios: escape for k = -3, short arcs for k = 3 (which falls
/// off to -infinity in finite time) and the bounded quartic oscillator.
inline std::vector<OrbitParams> shipped_scenarios() {
  OrbitParams a;
  a.name = "k-3_escape";
  a.k = -3;
  a.phi0 = 2;
  a.t_end = 5;
  OrbitParams b;
  b.name = "k3_arc";
  b.k = 3;
  b.phi0 = 0.5;
  b.t_end = 1.5;
  OrbitParams c;
  c.name = "k4_oscillator";
  c.k = 4;
  c.phi0 = 0.5;
  c.t_end = 10;
  return {a, b, c};
}

struct ScenarioResult {
  std::string name;
  double max_drift = 0;
  double time_change_defect = 0;
  double min_phi = 0;
  double max_phi = 0;
};

/// Integrates each scenario on its own thread; results keep the input order.
inline std::vector<ScenarioResult> run_scenarios(const std::vector<OrbitParams>& scenarios) {
  std::vector<std::future<ScenarioResult>> jobs;
  for (const auto& p : scenarios)
    jobs.push_back(std::async(std::launch::async, [p] {
      Trajectory t = integrate_orbit(p);
      ScenarioResult r{p.name, t.max_drift, time_change_check(t), t.samples.front().phi, t.samples.front().phi};
      for (const auto& s : t.samples) {
        r.min_phi = std::min(r.min_phi, s.phi);
        r.max_phi = std::max(r.max_phi, s.phi);
      }
      return r;
    }));
  std::vector<ScenarioResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

inline void write_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,phi,dphi,drift\n";
  os.precision(17);
  for (const auto& s : traj.samples) os << s.t << ',' << s.phi << ',' << s.dphi << ',' << s.drift << '\n';
}

inline void write_csv(std::ostream& os, const VeSolution& sol) {
  os << "t,phi,dphi";
  for (const auto& m : sol.indices) os << ",y_" << m.n[0] << '_' << m.n[1] << '_' << m.n[2] << '_' << m.n[3];
  os << '\n';
  os.precision(17);
  for (const auto& s : sol.samples) {
    os << s.t << ',' << s.phi << ',' << s.dphi;
    for (double v : s.y) os << ',' << v;
    os << '\n';
  }
}

}  // namespace hompot
