// hompot: command-line front end for the integrability analysis.
// Exit codes: 0 success, 1 analysis failure or partial batch failure, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "hompot/monodromy.hpp"
#include "hompot/report.hpp"
#include "hompot/varequ.hpp"

using namespace hompot;
using nlohmann::json;

namespace {

struct Globals {
  bool json_out = false;
  double quad_tol = 1e-10;
  double residual_tol = 1e-9;
  long max_denominator = 64;
  std::string k5_variant = "as_printed";

  K5Variant variant() const { return k5_variant == "ten_i" ? K5Variant::ten_i : K5Variant::as_printed; }
  AnalyzeOptions analyze_options() const {
    AnalyzeOptions o;
    o.max_denominator = max_denominator;
    o.residual_tol = residual_tol;
    o.k5_variant = variant();
    return o;
  }
};

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json_out) std::cout << j.dump(2) << '\n';
  else std::cout << text;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

std::string period_line(const PeriodValue& p) {
  std::ostringstream os;
  os.precision(15);
  os << (p.method == PeriodMethod::closed_form ? "closed_form" : "quadrature") << ": " << p.value.real()
     << (p.value.imag() < 0 ? " - " : " + ") << std::abs(p.value.imag()) << "i";
  if (p.method == PeriodMethod::quadrature) os << "  (error bound " << p.error_bound << (p.converged ? "" : ", not converged") << ")";
  if (p.gamma_pole) os << "  [gamma pole]";
  return os.str() + "\n";
}

std::string darboux_text(const DarbouxSet& s) {
  std::ostringstream os;
  os << "degree " << s.degree << ", " << s.points.size() << " Darboux point(s)";
  if (s.continuum) os << " (continuum, one representative)";
  os << '\n';
  for (const auto& p : s.points) {
    os << "  c = (" << p.c.q1 << ", " << p.c.q2 << ")  lambda = ";
    if (p.lambda_exact) os << to_string(*p.lambda_exact);
    else os << p.lambda;
    if (p.multiple) os << "  multiple";
    if (p.isotropic) os << "  isotropic";
    os << '\n';
  }
  return os.str();
}

std::string morales_text(const MoralesVerdict& v) {
  std::ostringstream os;
  os << "k = " << v.k << ", lambda = " << to_string(v.lambda) << ": " << (v.admissible ? "admissible" : "inadmissible");
  if (v.witness_row) os << " (row " << *v.witness_row;
  if (v.witness_row && v.witness_i) os << ", i = " << v.witness_i->get_str();
  if (v.witness_row) os << ")";
  return os.str() + "\n";
}

std::string g_text(const GVerdict& g) {
  std::ostringstream os;
  os << "l = " << g.l << ", k = " << g.k << ", alpha = " << to_string(g.alpha) << ", beta = " << to_string(g.beta)
     << ": " << to_string(g.verdict) << '\n';
  for (const auto& c : g.conditions)
    os << "  " << c.name << " = " << to_string(c.value) << " " << c.requirement << "? " << (c.holds ? "yes" : "no") << '\n';
  return os.str();
}

std::string ve_text(const VariationalSystem& s) {
  std::ostringstream os;
  os << "level " << s.level << ", k = " << s.k << ", k0 = " << s.k0 << ", lambda = " << to_string(s.lambda) << '\n'
     << "  dimension " << s.indices.size() << ", " << s.entries.size() << " nonzero entries\n  symbols:";
  for (const auto& d : s.symbols()) os << ' ' << d.name();
  os << '\n';
  return os.str();
}

std::string polar_text(const PolarVerdict& v) {
  std::ostringstream os;
  os << "k = " << v.k << ": " << to_string(v.classification) << '\n';
  if (v.theta0) os << "  theta0 = " << v.theta0->theta << ", U = " << v.theta0->value << '\n';
  if (v.lambda_rational) os << "  lambda = " << to_string(*v.lambda_rational) << (v.lambda_reconstructed ? " (reconstructed)" : "") << '\n';
  else if (v.theta0) os << "  lambda ~ " << v.lambda << '\n';
  os << "  " << v.reason << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-integrability analysis of planar homogeneous potentials"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HOMPOT_VERSION);
  Globals g;
  app.add_flag("--json", g.json_out, "JSON on stdout");
  app.add_option("--quad-tol", g.quad_tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--residual-tol", g.residual_tol, "tolerance for reconstructing floating eigenvalues")->check(CLI::PositiveNumber);
  app.add_option("--max-denominator", g.max_denominator, "largest denominator in rational reconstruction")->check(CLI::PositiveNumber);
  app.add_option("--k5-variant", g.k5_variant, "k = 5 sporadic row variant")->check(CLI::IsMember({"as_printed", "ten_i"}));

  std::string potential;
  auto* analyze_cmd = app.add_subcommand("analyze", "full analysis of a potential");
  analyze_cmd->add_option("potential", potential, "potential expression")->required();

  std::string u_text;
  int k = 0;
  auto* polar_cmd = app.add_subcommand("polar-analyze", "analysis of r^k U(theta), k < 0");
  polar_cmd->add_option("--U", u_text, "angular factor")->required();
  polar_cmd->add_option("--k", k, "degree")->required();

  auto* darboux_cmd = app.add_subcommand("darboux", "Darboux points and Hessian eigenvalues");
  darboux_cmd->add_option("potential", potential, "potential expression")->required();

  std::string lambda_text;
  auto* morales_cmd = app.add_subcommand("morales-check", "admissibility of (k, lambda)");
  morales_cmd->add_option("--k", k, "degree")->required();
  morales_cmd->add_option("--lambda", lambda_text, "eigenvalue p/q")->required();

  std::string alpha_text;
  long j = 1;
  auto* period_cmd = app.add_subcommand("monodromy-period", "period integral, closed form and quadrature");
  period_cmd->add_option("--alpha", alpha_text, "exponent p/q")->required();
  period_cmd->add_option("--j", j, "loop index")->required();

  long l = 1;
  auto* g_cmd = app.add_subcommand("g-verdict", "commutativity checklist for alpha = 1/k");
  g_cmd->add_option("--l", l, "level")->required();
  g_cmd->add_option("--k", k, "degree")->required();

  int level = 1, k0 = 1;
  auto* ve_cmd = app.add_subcommand("ve-build", "higher variational system");
  ve_cmd->add_option("--level", level, "level l >= 1")->required();
  ve_cmd->add_option("--k", k, "degree")->required();
  ve_cmd->add_option("--lambda", lambda_text, "eigenvalue p/q")->required();
  ve_cmd->add_option("--k0", k0, "orbit weight");

  std::string dir, csv_path;
  unsigned threads = 0;
  auto* batch_cmd = app.add_subcommand("batch", "analyze every file of a directory");
  batch_cmd->add_option("dir", dir, "directory")->required();
  batch_cmd->add_option("--csv", csv_path, "write the summary table here");
  batch_cmd->add_option("--threads", threads, "worker threads (0: hardware)");

  auto* table_cmd = app.add_subcommand("dump-table", "the admissible (k, lambda) table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze_cmd) {
      auto r = analyze(potential, g.analyze_options());
      emit(g, to_json(r), human_summary(r));
    } else if (*polar_cmd) {
      auto v = analyze_polar(parse_trig_poly(u_text), k, {g.max_denominator, g.residual_tol, g.variant()});
      emit(g, to_json(v), polar_text(v));
    } else if (*darboux_cmd) {
      auto s = find_darboux_points(parse_potential(potential));
      emit(g, to_json(s), darboux_text(s));
    } else if (*morales_cmd) {
      auto v = admissible(k, parse_rational(lambda_text), g.variant());
      emit(g, to_json(v), morales_text(v));
    } else if (*period_cmd) {
      Rational alpha = parse_rational(alpha_text);
      auto closed = period_closed_form(alpha, j);
      auto quad = period_quadrature(alpha, j, g.quad_tol);
      double diff = std::abs(closed.value - quad.value);
      json out{{"closed_form", to_json(closed)}, {"quadrature", to_json(quad)}, {"difference", diff}};
      emit(g, out, period_line(closed) + period_line(quad) + "difference " + fmt_double(diff) + "\n");
    } else if (*g_cmd) {
      auto v = g_verdict(l, k);
      emit(g, to_json(v), g_text(v));
    } else if (*ve_cmd) {
      auto s = build_higher_ve(level, k, AlgNum(parse_rational(lambda_text)), k0);
      emit(g, to_json(s), ve_text(s));
    } else if (*batch_cmd) {
      auto b = batch(dir, g.analyze_options(), threads);
      std::string csv = summary_csv(b);
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("cannot write " + csv_path);
        out << csv;
      }
      emit(g, to_json(b), csv);
      return b.all_ok() ? 0 : 1;
    } else if (*table_cmd) {
      auto t = dump_table(g.variant());
      std::ostringstream os;
      for (const auto& row : t) os << row["k"].dump() << '\t' << row["id"].get<std::string>() << '\t' << row["formula"].get<std::string>() << '\n';
      emit(g, t, os.str());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
