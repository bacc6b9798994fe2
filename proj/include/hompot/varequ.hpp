#pragma once

// First-order variational equation along the homothetic orbit and the
// linearized higher variational systems over monomial indices.
//
// Conventions: the Darboux point is normalized to c = (1, 0) with V(c) = 1,
// the orbit is q(t) = phi(t) c with phi'' = -k phi^(k-1), and the variation
// X = (X1, X2) obeys the physical equation of motion
//   X'' = -sum_{i>=1} phi^(k0 (k-1-i)) sum_j d_{i,*} X1^(i-j) X2^j / ((i-j)! j!),
// with d_{i,j} = d^(i+1) V / dq1^(i-j+1) dq2^j at c.

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hompot/jet.hpp"
#include "hompot/rational.hpp"

namespace hompot {

// ---------------------------------------------------------------------------
// Rational polynomials in t

using RatPoly = std::vector<Rational>;  // coefficient of t^i at index i

namespace detail {

inline RatPoly trim(RatPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline RatPoly padd(const RatPoly& a, const RatPoly& b) {
  RatPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return trim(std::move(r));
}

inline RatPoly pmul(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return trim(std::move(r));
}

inline RatPoly pscale(RatPoly a, const Rational& c) {
  for (auto& x : a) x *= c;
  return trim(std::move(a));
}

inline RatPoly pderiv(const RatPoly& a) {
  RatPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
  return trim(std::move(r));
}

inline const RatPoly& t_poly() {
  static const RatPoly t{0, 1};
  return t;
}

inline const RatPoly& u_poly() {
  static const RatPoly u{-1, 0, 1};
  return u;
}

/// Exact division by u = t^2 - 1 when possible.
inline std::optional<RatPoly> divide_by_u(const RatPoly& p) {
  if (p.size() < 3) return std::nullopt;
  RatPoly rem = p, q(p.size() - 2);
  for (size_t i = p.size() - 1; i >= 2; --i) {
    q[i - 2] = rem[i];
    rem[i - 2] += rem[i];
    rem[i] = 0;
  }
  if (rem[0] != 0 || rem[1] != 0) return std::nullopt;
  return trim(std::move(q));
}

inline std::string poly_to_string(const RatPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  for (size_t i = p.size(); i-- > 0;) {
    if (p[i] == 0) continue;
    Rational c = p[i];
    bool neg = c < 0;
    if (neg) c = -c;
    out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
    bool unit = c == 1 && i > 0;
    if (!unit) out += to_string(c);
    if (i > 0) out += std::string(unit ? "" : "*") + "t" + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// First-order variational equation in the changed variable t

/// 1/2 k^2 (t^2 - 1) X'' + k (k-1) t X' - mu X = 0. mu = k is the multiple
/// point case; mu = lambda gives the normal component, mu = k(k-1) the
/// tangential one.
struct VE1 {
  int k = 0;
  Rational mu;

  static VE1 standard(int k) { return with_eigenvalue(k, Rational(k)); }
  static VE1 with_eigenvalue(int k, Rational lambda) {
    if (k == 0) throw std::invalid_argument("degree 0 has no variational equation");
    return {k, std::move(lambda)};
  }
};

/// Candidate X = (t^2-1)^r p(t), optionally times the integral of (t^2-1)^s.
struct Ve1Candidate {
  Rational r;
  RatPoly p{1};
  std::optional<Rational> integral_exponent;

  static Ve1Candidate P(int k) { return {make_rational(1, k), {1}, std::nullopt}; }
  static Ve1Candidate Q(int k) { return {make_rational(1, k), {1}, make_rational(-(k + 1), k)}; }
  static Ve1Candidate polynomial(RatPoly p) { return {Rational(0), std::move(p), std::nullopt}; }
};

/// (t^2-1)^power * poly(t).
struct ResidualTerm {
  Rational power;
  RatPoly poly;

  bool is_zero() const { return poly.empty(); }
  std::string to_string() const {
    if (poly.empty()) return "0";
    std::string base = "(" + detail::poly_to_string(poly) + ")";
    return power == 0 ? base : "(t^2 - 1)^(" + hompot::to_string(power) + ") * " + base;
  }
};

/// Residual of a candidate: free + times_integral * integral(...).
struct Ve1Residual {
  ResidualTerm free;
  std::optional<ResidualTerm> times_integral;

  bool identically_zero() const { return free.is_zero() && (!times_integral || times_integral->is_zero()); }
  std::string to_string() const {
    std::string s = free.to_string();
    if (times_integral && !times_integral->is_zero()) s += " + " + times_integral->to_string() + " * I(t)";
    return s;
  }
};

namespace detail {

inline ResidualTerm reduce_term(Rational power, RatPoly poly) {
  poly = trim(std::move(poly));
  if (poly.empty()) return {Rational(0), {}};
  while (auto q = divide_by_u(poly)) {
    poly = std::move(*q);
    power += 1;
  }
  return {std::move(power), std::move(poly)};
}

/// Residual of u^r p as u^(r-1) R(t).
inline ResidualTerm power_residual(const VE1& eq, const Rational& r, const RatPoly& p) {
  const RatPoly& t = t_poly();
  const RatPoly& u = u_poly();
  Rational k(eq.k);
  // X' = u^(r-1) A, A = 2 r t p + u p'
  RatPoly A = padd(pscale(pmul(t, p), 2 * r), pmul(u, pderiv(p)));
  // X'' = u^(r-2) (2 (r-1) t A + u A')
  RatPoly B = padd(pscale(pmul(t, A), 2 * (r - 1)), pmul(u, pderiv(A)));
  RatPoly R = padd(padd(pscale(B, k * k / 2), pscale(pmul(t, A), k * (k - 1))), pscale(pmul(u, p), -eq.mu));
  return reduce_term(r - 1, R);
}

}  // namespace detail

/// Substitutes the candidate into the equation and simplifies exactly.
inline Ve1Residual ve1_residual(const VE1& eq, const Ve1Candidate& x) {
  if (eq.k == 0) throw std::invalid_argument("degree 0 has no variational equation");
  if (detail::trim(x.p).empty()) throw std::invalid_argument("unsupported candidate: zero polynomial factor");
  Ve1Residual out;
  ResidualTerm own = detail::power_residual(eq, x.r, x.p);
  if (!x.integral_exponent) {
    out.free = own;
    return out;
  }
  // X = P I with I' = u^s: residual = I Res(P) + u^(r+s) [k^2 (A + s t p) + k (k-1) t p]
  const Rational& s = *x.integral_exponent;
  const RatPoly& t = detail::t_poly();
  Rational k(eq.k);
  RatPoly A = detail::padd(detail::pscale(detail::pmul(t, x.p), 2 * x.r), detail::pmul(detail::u_poly(), detail::pderiv(x.p)));
  RatPoly inner = detail::padd(A, detail::pscale(detail::pmul(t, x.p), s));
  RatPoly free = detail::padd(detail::pscale(inner, k * k), detail::pscale(detail::pmul(t, x.p), k * (k - 1)));
  out.free = detail::reduce_term(x.r + s, free);
  out.times_integral = own;
  return out;
}

inline Ve1Residual ve1_residual(int k, const Ve1Candidate& x) { return ve1_residual(VE1::standard(k), x); }

// ---------------------------------------------------------------------------
// Monomial indices

/// Exponents of (X1', X2', X1, X2).
struct MonomialIndex {
  std::array<int, 4> n{};

  int order() const { return n[0] + n[1] + n[2] + n[3]; }
  auto operator<=>(const MonomialIndex&) const = default;
  std::string to_string() const {
    return "y_{" + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," + std::to_string(n[2]) + "," +
           std::to_string(n[3]) + "}";
  }
};

/// All indices of exact order m, lexicographically descending.
inline std::vector<MonomialIndex> monomial_stratum(int m) {
  if (m < 0) throw std::invalid_argument("monomial order must be >= 0");
  std::vector<MonomialIndex> out;
  for (int a = m; a >= 0; --a)
    for (int b = m - a; b >= 0; --b)
      for (int c = m - a - b; c >= 0; --c) out.push_back({{a, b, c, m - a - b - c}});
  return out;
}

/// All indices of order 1..l, graded by order then lexicographically descending.
inline std::vector<MonomialIndex> monomial_basis(int l) {
  if (l < 1) throw std::invalid_argument("variational level must be >= 1");
  std::vector<MonomialIndex> out;
  for (int m = 1; m <= l; ++m) {
    auto s = monomial_stratum(m);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coefficient ring: sums of c * phi^e

using PhiPoly = std::map<int, AlgNum>;  // exponent -> coefficient, no zero entries

namespace detail {

inline void phi_add(PhiPoly& p, int e, const AlgNum& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = p.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

inline Rational factorial(int n) { return TaylorJet<AlgNum>::factorial(n); }

}  // namespace detail

/// 4x4 first-order matrix of the level-1 system on (X1', X2', X1, X2).
inline std::array<std::array<PhiPoly, 4>, 4> ve1_matrix(int k, const AlgNum& lambda, int k0 = 1) {
  std::array<std::array<PhiPoly, 4>, 4> a{};
  int e = k0 * (k - 2);
  detail::phi_add(a[0][2], e, AlgNum(Rational(-k) * (k - 1)));
  detail::phi_add(a[1][3], e, -lambda);
  detail::phi_add(a[2][0], 0, AlgNum(1));
  detail::phi_add(a[3][1], 0, AlgNum(1));
  return a;
}

/// l-th symmetric power of the level-1 system, in monomial_stratum(l) order:
/// row = index being differentiated, column = index it feeds from.
inline std::vector<std::vector<PhiPoly>> sym_power_ve1(int l, int k, const AlgNum& lambda, int k0 = 1) {
  if (l < 1) throw std::invalid_argument("symmetric power must be >= 1");
  auto a = ve1_matrix(k, lambda, k0);
  auto basis = monomial_stratum(l);
  std::map<std::vector<int>, size_t> where;
  auto factors = [](const MonomialIndex& m) {
    std::vector<int> f;
    for (int v = 0; v < 4; ++v) f.insert(f.end(), static_cast<size_t>(m.n[static_cast<size_t>(v)]), v);
    return f;
  };
  for (size_t i = 0; i < basis.size(); ++i) where[factors(basis[i])] = i;
  std::vector<std::vector<PhiPoly>> out(basis.size(), std::vector<PhiPoly>(basis.size()));
  for (size_t row = 0; row < basis.size(); ++row) {
    auto f = factors(basis[row]);
    // Leibniz over the factors, each replaced by its image under the matrix
    for (size_t p = 0; p < f.size(); ++p)
      for (int b = 0; b < 4; ++b) {
        const auto& entry = a[static_cast<size_t>(f[p])][static_cast<size_t>(b)];
        if (entry.empty()) continue;
        auto g = f;
        g[p] = b;
        std::sort(g.begin(), g.end());
        size_t col = where.at(g);
        for (const auto& [e, c] : entry) detail::phi_add(out[row][col], e, c);
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Higher variational systems

/// d_{i,j} = d^(i+1) V / dq1^(i-j+1) dq2^j at the Darboux point.
struct DSymbol {
  int i = 0;
  int j = 0;
  auto operator<=>(const DSymbol&) const = default;
  std::string name() const { return "d_{" + std::to_string(i) + "," + std::to_string(j) + "}"; }
};

/// dy_from/dt gets coef * [symbol] * phi^phi_exp * y_to.
struct Transition {
  size_t from = 0;
  size_t to = 0;
  AlgNum coef;
  int phi_exp = 0;
  std::optional<DSymbol> symbol;
};

struct VariationalSystem {
  int level = 0;
  int k = 0;
  int k0 = 1;
  AlgNum lambda;
  std::vector<MonomialIndex> indices;
  std::vector<Transition> entries;
  std::map<DSymbol, AlgNum> bindings;

  size_t position(const MonomialIndex& m) const {
    auto it = std::lower_bound(indices.begin(), indices.end(), m, [](const MonomialIndex& a, const MonomialIndex& b) {
      if (a.order() != b.order()) return a.order() < b.order();
      return a > b;
    });
    if (it == indices.end() || *it != m) throw std::out_of_range("monomial index outside the system");
    return static_cast<size_t>(it - indices.begin());
  }

  std::vector<DSymbol> symbols() const {
    std::vector<DSymbol> out;
    for (const auto& e : entries)
      if (e.symbol && std::find(out.begin(), out.end(), *e.symbol) == out.end()) out.push_back(*e.symbol);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool bound() const {
    for (const auto& s : symbols())
      if (!bindings.count(s)) return false;
    return true;
  }

  /// Coefficient with its symbol replaced by the bound value.
  AlgNum value(const Transition& t) const {
    if (!t.symbol) return t.coef;
    auto it = bindings.find(*t.symbol);
    if (it == bindings.end()) throw std::logic_error("unbound symbol " + t.symbol->name());
    return t.coef * it->second;
  }

  /// Entries between indices of order m, in monomial_stratum(m) coordinates.
  std::vector<std::vector<PhiPoly>> block(int m) const {
    auto s = monomial_stratum(m);
    std::vector<std::vector<PhiPoly>> out(s.size(), std::vector<PhiPoly>(s.size()));
    size_t offset = position(s.front());
    for (const auto& e : entries) {
      if (indices[e.from].order() != m || indices[e.to].order() != m) continue;
      detail::phi_add(out[e.from - offset][e.to - offset], e.phi_exp, e.symbol ? value(e) : e.coef);
    }
    return out;
  }
};

/// Builds the level-l system by differentiating X1'^n1 X2'^n2 X1^n3 X2^n4,
/// substituting the equation of motion and dropping monomials above order l.
/// Higher d_{i,j} (i >= 2) stay symbolic.
inline VariationalSystem build_higher_ve(int l, int k, const AlgNum& lambda, int k0 = 1) {
  if (l < 1) throw std::invalid_argument("variational level must be >= 1");
  if (k == 0) throw std::invalid_argument("degree 0 has no variational equation");
  if (k0 < 1) throw std::invalid_argument("orbit weight must be >= 1");
  VariationalSystem sys;
  sys.level = l;
  sys.k = k;
  sys.k0 = k0;
  sys.lambda = lambda;
  sys.indices = monomial_basis(l);
  for (size_t from = 0; from < sys.indices.size(); ++from) {
    const MonomialIndex m = sys.indices[from];
    auto shifted = [&](int drop, int add) {
      MonomialIndex t = m;
      --t.n[static_cast<size_t>(drop)];
      ++t.n[static_cast<size_t>(add)];
      return t;
    };
    // X1 -> X1', X2 -> X2'
    for (int v : {2, 3})
      if (m.n[static_cast<size_t>(v)] > 0)
        sys.entries.push_back({from, sys.position(shifted(v, v - 2)), AlgNum(m.n[static_cast<size_t>(v)]), 0, std::nullopt});
    // X_w' -> X_w'' = -sum_i phi^(k0 (k-1-i)) sum_j d_{i,j+w} X1^(i-j) X2^j / ((i-j)! j!)
    for (int w : {0, 1}) {
      int nw = m.n[static_cast<size_t>(w)];
      if (nw == 0) continue;
      for (int i = 1; m.order() - 1 + i <= l; ++i)
        for (int j = 0; j <= i; ++j) {
          MonomialIndex t = m;
          --t.n[static_cast<size_t>(w)];
          t.n[2] += i - j;
          t.n[3] += j;
          Rational c = Rational(-nw) / (detail::factorial(i - j) * detail::factorial(j));
          int e = k0 * (k - 1 - i);
          DSymbol d{i, j + w};
          if (i == 1) {
            // d_{1,0} = k(k-1), d_{1,1} = 0, d_{1,2} = lambda in normal form
            AlgNum v = d.j == 0 ? AlgNum(Rational(k) * (k - 1)) : d.j == 2 ? lambda : AlgNum(0);
            if (!v.is_zero()) sys.entries.push_back({from, sys.position(t), AlgNum(c) * v, e, std::nullopt});
          } else {
            sys.entries.push_back({from, sys.position(t), AlgNum(c), e, d});
          }
        }
    }
  }
  return sys;
}

/// Checks V(c) = 1 and dV/dq2(c) = 0 at the base (1, 0).
inline void require_normal_form(const TaylorJet<AlgNum>& jet) {
  if (jet.base().q1 != AlgNum(1) || !jet.base().q2.is_zero() || jet.value() != AlgNum(1) ||
      !jet.derivative(0, 1).is_zero())
    throw std::invalid_argument("jet is not in normal form (need V(1,0) = 1 and dV/dq2(1,0) = 0)");
}

/// Level-l system of a normalized jet; lambda = d_{1,2} and every symbol is bound.
inline VariationalSystem build_higher_ve(const TaylorJet<AlgNum>& jet, int l, int k, int k0 = 1) {
  require_normal_form(jet);
  if (jet.order() < l) throw std::invalid_argument("jet order is below the variational level");
  VariationalSystem sys = build_higher_ve(l, k, jet.d(1, 2), k0);
  for (const auto& s : sys.symbols()) sys.bindings[s] = jet.d(s.i, s.j);
  return sys;
}

/// Completes derivatives D(a, b) at (1, 0) from the pure q2 derivatives
/// D(0, b), b = 0..n, via D(a+1, b) = (k - a - b) D(a, b). Result is indexed
/// [a][b] with a + b <= n.
inline std::vector<std::vector<AlgNum>> euler_complete(int k, const std::vector<AlgNum>& pure_q2) {
  int n = static_cast<int>(pure_q2.size()) - 1;
  std::vector<std::vector<AlgNum>> d(static_cast<size_t>(n + 1));
  for (int a = 0; a <= n; ++a) d[static_cast<size_t>(a)].resize(static_cast<size_t>(n - a + 1));
  for (int b = 0; b <= n; ++b) {
    d[0][static_cast<size_t>(b)] = pure_q2[static_cast<size_t>(b)];
    for (int a = 0; a + 1 + b <= n; ++a)
      d[static_cast<size_t>(a + 1)][static_cast<size_t>(b)] = AlgNum(Rational(k - a - b)) * d[static_cast<size_t>(a)][static_cast<size_t>(b)];
  }
  return d;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const Ve1Residual& r) {
  nlohmann::json j{{"identically_zero", r.identically_zero()}, {"residual", r.to_string()}};
  return j;
}

inline nlohmann::json to_json(const VariationalSystem& s) {
  nlohmann::json idx = nlohmann::json::array();
  for (const auto& m : s.indices) idx.push_back(m.n);
  nlohmann::json ent = nlohmann::json::array();
  for (const auto& e : s.entries) {
    nlohmann::json syms = nlohmann::json::array();
    if (e.symbol) syms.push_back(e.symbol->name());
    ent.push_back({{"from", e.from}, {"to", e.to}, {"coef", to_string(e.coef)}, {"phi_exp", e.phi_exp}, {"d_symbols", syms}});
  }
  nlohmann::json b = nlohmann::json::object();
  for (const auto& [sym, v] : s.bindings) b[sym.name()] = to_string(v);
  return {{"level", s.level}, {"k", s.k},         {"k0", s.k0},      {"lambda", to_string(s.lambda)},
          {"indices", idx},   {"entries", ent},   {"bindings", b}};
}

}  // namespace hompot
