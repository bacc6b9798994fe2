#pragma once

// Admissible (k, lambda) pairs for meromorphic integrability.
//
// Every row of the table is either all of C (k = +-2) or a quadratic
// lambda(i) = a i^2 + b i + c in an integer parameter i. Membership is decided
// by solving the quadratic over Q and testing its roots for integrality.

#include "hompot/rational.hpp"

#include <json.hpp>

#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hompot {

/// The k = 5 sporadic row printed as -9/8 + 1/8(4 + 6i)^2 sits next to the
/// k = -5 row with (4 + 10i)^2; the variant switch selects either reading.
enum class K5Variant { as_printed, ten_i };

struct TableRow {
  std::string id;
  std::optional<int> k;  // nullopt: every nonzero integer k
  bool all_complex = false;
  Rational a, b, c;      // lambda(i) = a i^2 + b i + c
  std::string formula;

  Rational at(const Integer& i) const { return a * Rational(i * i) + b * Rational(i) + c; }
};

struct RowCheck {
  std::string row_id;
  bool all_complex = false;
  Rational discriminant;  // b^2 - 4 a (c - lambda)
  bool discriminant_square = false;
  std::vector<Rational> rational_solutions;
  std::optional<Integer> integer_solution;
};

struct MoralesVerdict {
  int k = 0;
  Rational lambda;
  bool admissible = false;
  std::optional<std::string> witness_row;
  std::optional<Integer> witness_i;  // absent for the all-of-C row
  std::vector<RowCheck> certificate;
};

namespace detail {

/// c0 + w (x + y i)^2 as a quadratic in i.
inline TableRow sporadic_row(int k, const Rational& c0, const Rational& w, const Rational& x, const Rational& y) {
  TableRow r;
  r.k = k;
  r.a = w * y * y;
  r.b = 2 * w * x * y;
  r.c = c0 + w * x * x;
  r.formula = to_string(c0) + " + " + to_string(w) + "*(" + to_string(x) + " + " + to_string(y) + "*i)^2";
  r.id = "k=" + std::to_string(k) + ":" + r.formula;
  return r;
}

}  // namespace detail

inline std::vector<TableRow> table_rows(int k, K5Variant variant = K5Variant::as_printed) {
  if (k == 0) throw std::invalid_argument("the table is indexed by nonzero k");
  std::vector<TableRow> rows;
  Rational kk(k);
  {
    // 1/2 i k (i k + k - 2)
    TableRow f1;
    f1.id = "family1";
    f1.a = kk * kk / 2;
    f1.b = kk * (kk - 2) / 2;
    f1.c = 0;
    f1.formula = "1/2*i*k*(i*k + k - 2)";
    rows.push_back(f1);
    // 1/2 (i k + k - 1)(i k + 1)
    TableRow f2;
    f2.id = "family2";
    f2.a = kk * kk / 2;
    f2.b = kk * kk / 2;
    f2.c = (kk - 1) / 2;
    f2.formula = "1/2*(i*k + k - 1)*(i*k + 1)";
    rows.push_back(f2);
  }
  if (k == 2 || k == -2) {
    TableRow all;
    all.id = "complex";
    all.k = k;
    all.all_complex = true;
    all.formula = "C";
    rows.push_back(all);
    return rows;
  }
  auto q = [](long p, long d = 1) { return make_rational(p, d); };
  auto add = [&](int kk_, Rational c0, Rational w, Rational x, Rational y) {
    rows.push_back(detail::sporadic_row(kk_, c0, w, x, y));
  };
  switch (k) {
    case -5:
      add(-5, q(-49, 8), q(1, 8), q(10, 3), q(10));
      add(-5, q(-49, 8), q(1, 8), q(4), q(10));
      break;
    case -4:
      add(-4, q(-9, 2), q(1, 2), q(4, 3), q(4));
      break;
    case -3:
      for (const Rational& x : {q(2), q(3, 2), q(6, 5), q(12, 5)}) add(-3, q(-25, 8), q(1, 8), x, q(6));
      break;
    case 3:
      for (const Rational& x : {q(2), q(3, 2), q(6, 5), q(12, 5)}) add(3, q(-1, 8), q(1, 8), x, q(6));
      break;
    case 4:
      add(4, q(-1, 2), q(1, 2), q(4, 3), q(4));
      break;
    case 5:
      add(5, q(-9, 8), q(1, 8), q(10, 3), q(10));
      add(5, q(-9, 8), q(1, 8), q(4), variant == K5Variant::ten_i ? q(10) : q(6));
      break;
    default:
      break;
  }
  return rows;
}

namespace detail {

inline Integer lcm_den(std::initializer_list<const Rational*> xs) {
  Integer l = 1;
  for (const Rational* x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x->get_den_mpz_t());
  return l;
}

/// Solves a i^2 + b i + (c - lambda) = 0; fills check.
inline void solve_row(const TableRow& row, const Rational& lambda, RowCheck& check) {
  check.row_id = row.id;
  if (row.all_complex) {
    check.all_complex = true;
    return;
  }
  Rational c = row.c - lambda;
  check.discriminant = row.b * row.b - 4 * row.a * c;
  if (row.a == 0) {
    if (row.b != 0) check.rational_solutions.push_back(-c / row.b);
  } else if (auto s = exact_sqrt(check.discriminant)) {
    check.discriminant_square = true;
    Rational r1 = (-row.b + *s) / (2 * row.a), r2 = (-row.b - *s) / (2 * row.a);
    check.rational_solutions.push_back(r1);
    if (r2 != r1) check.rational_solutions.push_back(r2);
  }
  for (const Rational& r : check.rational_solutions)
    if (is_integer(r)) {
      // prefer the root of least magnitude, then the nonnegative one
      const Integer& n = r.get_num();
      if (!check.integer_solution || abs(n) < abs(*check.integer_solution) ||
          (abs(n) == abs(*check.integer_solution) && n > *check.integer_solution))
        check.integer_solution = n;
    }
}

inline __int128 isqrt128(__int128 n) {
  if (n < 0) return -1;
  auto r = static_cast<__int128>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Integer-arithmetic membership test for lambda = p/q with small p, q.
inline bool row_has_integer_root_small(const TableRow& row, long p, long q) {
  // multiply through by L = lcm(den a, den b, den c, q)
  Integer lz = lcm_den({&row.a, &row.b, &row.c});
  mpz_lcm_ui(lz.get_mpz_t(), lz.get_mpz_t(), static_cast<unsigned long>(q));
  Rational ar = row.a * Rational(lz), br = row.b * Rational(lz), cr = row.c * Rational(lz);
  __int128 L = lz.get_si();
  __int128 A = ar.get_num().get_si(), B = br.get_num().get_si(), C = cr.get_num().get_si() - static_cast<__int128>(p) * (L / q);
  if (A == 0) return B != 0 && C % B == 0;
  __int128 disc = B * B - 4 * A * C;
  __int128 s = isqrt128(disc);
  if (s < 0 || s * s != disc) return false;
  for (__int128 num : {-B + s, -B - s})
    if (num % (2 * A) == 0) return true;
  return false;
}

}  // namespace detail

inline MoralesVerdict admissible(int k, const Rational& lambda, K5Variant variant = K5Variant::as_printed) {
  MoralesVerdict v;
  v.k = k;
  v.lambda = lambda;
  for (const TableRow& row : table_rows(k, variant)) {
    RowCheck check;
    detail::solve_row(row, lambda, check);
    if (!v.admissible && (check.all_complex || check.integer_solution)) {
      v.admissible = true;
      v.witness_row = row.id;
      v.witness_i = check.integer_solution;
    }
    v.certificate.push_back(std::move(check));
  }
  return v;
}

/// Membership only, for large scans. Uses 128-bit arithmetic when lambda has
/// a small numerator and denominator, GMP otherwise.
inline bool is_admissible(int k, const Rational& lambda, K5Variant variant = K5Variant::as_printed) {
  const Integer& p = lambda.get_num();
  const Integer& q = lambda.get_den();
  bool small = mpz_sizeinbase(p.get_mpz_t(), 2) < 40 && mpz_sizeinbase(q.get_mpz_t(), 2) < 20;
  for (const TableRow& row : table_rows(k, variant)) {
    if (row.all_complex) return true;
    if (small) {
      if (detail::row_has_integer_root_small(row, p.get_si(), q.get_si())) return true;
    } else {
      RowCheck check;
      detail::solve_row(row, lambda, check);
      if (check.integer_solution) return true;
    }
  }
  return false;
}

/// Continued-fraction reconstruction; nullopt means indeterminate.
inline std::optional<Rational> reconstruct_rational(double x, long max_denominator = 64, double tol = 1e-9) {
  return rational_approximation(x, max_denominator, tol);
}

inline nlohmann::json to_json(const MoralesVerdict& v) {
  nlohmann::json j;
  j["k"] = v.k;
  j["lambda"] = to_string(v.lambda);
  j["admissible"] = v.admissible;
  if (v.admissible) {
    j["witness"] = {{"row", *v.witness_row}};
    if (v.witness_i) j["witness"]["i"] = v.witness_i->get_str();
  }
  nlohmann::json cert = nlohmann::json::array();
  for (const auto& c : v.certificate) {
    nlohmann::json r{{"row", c.row_id}};
    if (c.all_complex) {
      r["all_complex"] = true;
    } else {
      r["discriminant"] = to_string(c.discriminant);
      r["discriminant_square"] = c.discriminant_square;
      nlohmann::json sols = nlohmann::json::array();
      for (const auto& s : c.rational_solutions) sols.push_back(to_string(s));
      r["rational_solutions"] = sols;
    }
    cert.push_back(r);
  }
  j["certificate"] = cert;
  return j;
}

inline nlohmann::json to_json(const TableRow& r) {
  nlohmann::json j{{"id", r.id}, {"formula", r.formula}};
  j["k"] = r.k ? nlohmann::json(*r.k) : nlohmann::json("any");
  if (r.all_complex) j["all_complex"] = true;
  else j["quadratic"] = {to_string(r.a), to_string(r.b), to_string(r.c)};
  return j;
}

/// Every distinct row: the two families plus all k-specific rows.
inline nlohmann::json dump_table(K5Variant variant = K5Variant::as_printed) {
  nlohmann::json out = nlohmann::json::array();
  out.push_back({{"id", "family1"}, {"k", "any"}, {"formula", "1/2*i*k*(i*k + k - 2)"}});
  out.push_back({{"id", "family2"}, {"k", "any"}, {"formula", "1/2*(i*k + k - 1)*(i*k + 1)"}});
  for (int k : {-5, -4, -3, -2, 2, 3, 4, 5})
    for (const auto& r : table_rows(k, variant))
      if (r.k) out.push_back(to_json(r));
  return out;
}

}  // namespace hompot
