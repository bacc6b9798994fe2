#pragma once

// Analysis pipeline, reports and batch processing.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <atomic>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hompot/darboux.hpp"
#include "hompot/morales.hpp"
#include "hompot/parser.hpp"
#include "hompot/polar.hpp"

#ifndef HOMPOT_VERSION
#define HOMPOT_VERSION "0.0.0"
#endif

namespace hompot {

struct AnalyzeOptions {
  long max_denominator = 64;
  double residual_tol = 1e-9;  // rational reconstruction of floating eigenvalues
  double imag_tol = 1e-6;      // larger imaginary parts mark a non-real eigenvalue
  K5Variant k5_variant = K5Variant::as_printed;
  bool include_timing = false;
};

enum class Verdict { non_integrable_by_morales_ramis, passes_first_order_tests, multiple_point_radial_candidate, indeterminate };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::non_integrable_by_morales_ramis: return "non_integrable_by_morales_ramis";
    case Verdict::passes_first_order_tests: return "passes_first_order_tests";
    case Verdict::multiple_point_radial_candidate: return "multiple_point_radial_candidate";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

inline Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::non_integrable_by_morales_ramis, Verdict::passes_first_order_tests,
                    Verdict::multiple_point_radial_candidate, Verdict::indeterminate})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

/// Table status of one Darboux point.
struct PointReport {
  std::string lambda;         // "p/q", an exact algebraic number, or a float
  std::string lambda_source;  // exact | reconstructed | float
  std::string status;         // admissible | inadmissible | indeterminate
  std::string witness_row;
  std::string witness_i;
  bool multiple = false;
  bool isotropic = false;

  bool operator==(const PointReport&) const = default;
};

struct AnalysisReport {
  std::string input;
  std::string canonical;
  std::string kind;
  int degree = 0;
  nlohmann::json potential;
  nlohmann::json evidence;  // Darboux set, or the polar verdict
  std::vector<PointReport> points;
  int multiple_points = 0;
  bool continuum = false;
  bool tests_agree = true;
  bool no_darboux_points = false;
  Verdict verdict = Verdict::indeterminate;
  std::string reason;
  std::string version = HOMPOT_VERSION;
  std::optional<double> timing_ms;

  bool operator==(const AnalysisReport&) const = default;
};

namespace detail {

inline PointReport judge_point(int k, const DarbouxPoint& p, const AnalyzeOptions& opt) {
  PointReport r;
  r.multiple = p.multiple;
  r.isotropic = p.isotropic;
  std::optional<Rational> lam;
  if (p.lambda_exact) {
    r.lambda = to_string(*p.lambda_exact);
    r.lambda_source = "exact";
    lam = p.lambda_exact->as_rational();
    if (!lam) {
      // every table row is rational-valued for k != +-2
      r.status = (k == 2 || k == -2) ? "admissible" : "inadmissible";
      if (r.status == "admissible") r.witness_row = "complex";
      return r;
    }
  } else {
    std::ostringstream os;
    os.precision(17);
    os << p.lambda.real();
    if (p.lambda.imag() != 0) os << (p.lambda.imag() < 0 ? "-" : "+") << std::abs(p.lambda.imag()) << "i";
    r.lambda = os.str();
    r.lambda_source = "float";
    if (std::abs(p.lambda.imag()) > opt.imag_tol) {
      r.status = (k == 2 || k == -2) ? "admissible" : "inadmissible";
      if (r.status == "admissible") r.witness_row = "complex";
      return r;
    }
    lam = reconstruct_rational(p.lambda.real(), opt.max_denominator, opt.residual_tol);
    if (!lam) {
      r.status = "indeterminate";
      return r;
    }
    r.lambda = to_string(*lam);
    r.lambda_source = "reconstructed";
  }
  auto v = admissible(k, *lam, opt.k5_variant);
  r.status = v.admissible ? "admissible" : "inadmissible";
  if (v.witness_row) r.witness_row = *v.witness_row;
  if (v.witness_i) r.witness_i = v.witness_i->get_str();
  return r;
}

inline void analyze_polar_into(const Potential& v, const AnalyzeOptions& opt, AnalysisReport& rep) {
  const TrigPoly& u = v.as<PolarKind>()->angular;
  if (v.degree() >= 0) throw std::invalid_argument("polar potentials are classified only for k < 0");
  PolarVerdict pv = analyze_polar(u, v.degree(), {opt.max_denominator, opt.residual_tol, opt.k5_variant});
  rep.evidence = to_json(pv);
  rep.reason = pv.reason;
  if (pv.theta0) {
    PointReport p;
    p.lambda = pv.lambda_rational ? to_string(*pv.lambda_rational) : pv.lambda_exact ? to_string(*pv.lambda_exact) : std::to_string(pv.lambda);
    p.lambda_source = pv.lambda_exact ? "exact" : pv.lambda_reconstructed ? "reconstructed" : "float";
    p.multiple = pv.classification == PolarClass::multiple_point_found;
    p.status = pv.morales ? (pv.morales->admissible ? "admissible" : "inadmissible")
                          : pv.classification == PolarClass::non_integrable ? "inadmissible" : "indeterminate";
    if (pv.morales && pv.morales->witness_row) p.witness_row = *pv.morales->witness_row;
    if (pv.morales && pv.morales->witness_i) p.witness_i = pv.morales->witness_i->get_str();
    rep.points.push_back(p);
    rep.multiple_points = p.multiple ? 1 : 0;
  }
  switch (pv.classification) {
    case PolarClass::radial_integrable:
      rep.continuum = true;
      rep.verdict = Verdict::multiple_point_radial_candidate;
      break;
    case PolarClass::degree_minus_two_integrable: rep.verdict = Verdict::passes_first_order_tests; break;
    case PolarClass::non_integrable:
    case PolarClass::multiple_point_found: rep.verdict = Verdict::non_integrable_by_morales_ramis; break;
    case PolarClass::indeterminate: rep.verdict = Verdict::indeterminate; break;
  }
}

}  // namespace detail

/// Full pipeline: Darboux points, their table status and the overall verdict.
inline AnalysisReport analyze(const Potential& v, const AnalyzeOptions& opt = {}, std::string input = {}) {
  auto start = std::chrono::steady_clock::now();
  AnalysisReport rep;
  rep.input = input.empty() ? to_string(v) : std::move(input);
  rep.canonical = to_string(v);
  rep.kind = kind_name(v.kind());
  rep.degree = v.degree();
  rep.potential = to_json(v);
  int k = v.degree();
  if (k == 0 || k == 2) throw std::invalid_argument("degrees 0 and 2 are outside the analysis");
  if (v.kind() == PotentialKind::polar) {
    detail::analyze_polar_into(v, opt, rep);
  } else {
    DarbouxSet set = find_darboux_points(v);
    rep.evidence = to_json(set);
    rep.continuum = set.continuum;
    bool radial = set.continuum || set.rotation_invariant || v.kind() == PotentialKind::radial;
    bool inadmissible = false, indeterminate = false, multiple = false;
    for (const auto& p : set.points) {
      PointReport r = detail::judge_point(k, p, opt);
      rep.tests_agree = rep.tests_agree && p.tests.agree();
      if (r.status == "inadmissible") inadmissible = true;
      if (r.status == "indeterminate") indeterminate = true;
      if (p.multiple) {
        multiple = true;
        ++rep.multiple_points;
      }
      rep.points.push_back(std::move(r));
    }
    rep.no_darboux_points = set.points.empty();
    if (inadmissible) {
      rep.verdict = Verdict::non_integrable_by_morales_ramis;
      rep.reason = "a Darboux point has an eigenvalue outside the table";
    } else if (multiple && radial) {
      rep.verdict = Verdict::multiple_point_radial_candidate;
      rep.reason = "multiple Darboux points of a radial potential: integrable through angular momentum";
    } else if (multiple && k != -2) {
      rep.verdict = Verdict::non_integrable_by_morales_ramis;
      rep.reason = "multiple Darboux point on a non-radial potential";
    } else if (indeterminate) {
      rep.verdict = Verdict::indeterminate;
      rep.reason = "an eigenvalue could not be decided exactly";
    } else {
      rep.verdict = Verdict::passes_first_order_tests;
      rep.reason = rep.no_darboux_points ? "no Darboux points found: no first-order evidence" : "every Darboux point is admissible";
    }
  }
  if (opt.include_timing)
    rep.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

inline AnalysisReport analyze(std::string_view text, const AnalyzeOptions& opt = {}) {
  return analyze(parse_potential(text), opt, std::string(text));
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const PointReport& p) {
  return {{"lambda", p.lambda},           {"lambda_source", p.lambda_source}, {"status", p.status},
          {"witness_row", p.witness_row}, {"witness_i", p.witness_i},         {"multiple", p.multiple},
          {"isotropic", p.isotropic}};
}

inline nlohmann::json to_json(const AnalysisReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) pts.push_back(to_json(p));
  nlohmann::json j{{"input", r.input},
                   {"canonical", r.canonical},
                   {"kind", r.kind},
                   {"degree", r.degree},
                   {"potential", r.potential},
                   {"evidence", r.evidence},
                   {"points", pts},
                   {"summary",
                    {{"points", r.points.size()},
                     {"multiple_points", r.multiple_points},
                     {"continuum", r.continuum},
                     {"tests_agree", r.tests_agree},
                     {"no_darboux_points", r.no_darboux_points}}},
                   {"verdict", to_string(r.verdict)},
                   {"reason", r.reason},
                   {"version", r.version}};
  if (r.timing_ms) j["timing_ms"] = *r.timing_ms;
  return j;
}

inline AnalysisReport report_from_json(const nlohmann::json& j) {
  AnalysisReport r;
  r.input = j.at("input");
  r.canonical = j.at("canonical");
  r.kind = j.at("kind");
  r.degree = j.at("degree");
  r.potential = j.at("potential");
  r.evidence = j.at("evidence");
  for (const auto& p : j.at("points"))
    r.points.push_back({p.at("lambda"), p.at("lambda_source"), p.at("status"), p.at("witness_row"), p.at("witness_i"),
                        p.at("multiple"), p.at("isotropic")});
  const auto& s = j.at("summary");
  r.multiple_points = s.at("multiple_points");
  r.continuum = s.at("continuum");
  r.tests_agree = s.at("tests_agree");
  r.no_darboux_points = s.at("no_darboux_points");
  r.verdict = verdict_from_string(j.at("verdict"));
  r.reason = j.at("reason");
  r.version = j.at("version");
  if (j.contains("timing_ms")) r.timing_ms = j.at("timing_ms").get<double>();
  return r;
}

inline std::string human_summary(const AnalysisReport& r) {
  std::ostringstream os;
  os << "potential: " << r.canonical << " (" << r.kind << ", k = " << r.degree << ")\n";
  if (r.continuum) os << "Darboux points: a continuum (circle), one representative\n";
  os << "Darboux points analyzed: " << r.points.size() << ", multiple: " << r.multiple_points << "\n";
  for (size_t i = 0; i < r.points.size(); ++i) {
    const auto& p = r.points[i];
    os << "  [" << i << "] lambda = " << p.lambda << " (" << p.lambda_source << ") " << p.status;
    if (!p.witness_row.empty()) os << " via " << p.witness_row << (p.witness_i.empty() ? "" : " i = " + p.witness_i);
    if (p.multiple) os << " multiple";
    if (p.isotropic) os << " isotropic";
    os << "\n";
  }
  os << "verdict: " << to_string(r.verdict) << "\n" << "reason: " << r.reason << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Batch

struct BatchEntry {
  std::string file;
  std::optional<AnalysisReport> report;
  std::string error;
};

struct BatchResult {
  std::vector<BatchEntry> entries;
  bool all_ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const BatchEntry& e) { return e.report.has_value(); });
  }
};

/// Potential text of a file: a JSON document ({"potential": "..."} or a
/// serialized potential) for .json files, otherwise the first non-comment line.
inline std::string read_potential_file(const std::filesystem::path& path, std::optional<Potential>& parsed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  if (path.extension() == ".json") {
    auto j = nlohmann::json::parse(content);
    if (j.contains("potential") && j["potential"].is_string()) return j["potential"];
    parsed = potential_from_json(j);
    return to_string(*parsed);
  }
  std::istringstream lines(content);
  std::string line;
  while (std::getline(lines, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    return line.substr(b, e - b + 1);
  }
  throw std::runtime_error("no potential in " + path.filename().string());
}

inline BatchEntry analyze_file(const std::filesystem::path& path, const AnalyzeOptions& opt) {
  BatchEntry e{path.filename().string(), std::nullopt, {}};
  try {
    std::optional<Potential> parsed;
    std::string text = read_potential_file(path, parsed);
    e.report = parsed ? analyze(*parsed, opt, text) : analyze(text, opt);
  } catch (const std::exception& ex) {
    e.error = ex.what();
  }
  return e;
}

/// Analyzes every regular file of dir concurrently; entries are ordered by
/// file name regardless of scheduling.
inline BatchResult batch(const std::filesystem::path& dir, const AnalyzeOptions& opt = {}, unsigned threads = 0) {
  if (!std::filesystem::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  BatchResult out;
  out.entries.resize(files.size());
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<size_t>(threads, files.size()); ++t)
    pool.emplace_back([&] {
      for (size_t i = next++; i < files.size(); i = next++) out.entries[i] = analyze_file(files[i], opt);
    });
  for (auto& th : pool) th.join();
  return out;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

/// file,k,points,multiple,verdict; failed files carry "error: ..." as verdict.
inline std::string summary_csv(const BatchResult& b) {
  std::ostringstream os;
  os << "file,k,points,multiple,verdict\n";
  for (const auto& e : b.entries) {
    if (e.report)
      os << csv_field(e.file) << ',' << e.report->degree << ',' << e.report->points.size() << ','
         << e.report->multiple_points << ',' << to_string(e.report->verdict) << '\n';
    else
      os << csv_field(e.file) << ",,,," << csv_field("error: " + e.error) << '\n';
  }
  return os.str();
}

inline nlohmann::json to_json(const BatchResult& b) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : b.entries) {
    nlohmann::json j{{"file", e.file}};
    if (e.report) j["report"] = to_json(*e.report);
    else j["error"] = e.error;
    arr.push_back(j);
  }
  return {{"entries", arr}, {"all_ok", b.all_ok()}};
}

}  // namespace hompot
