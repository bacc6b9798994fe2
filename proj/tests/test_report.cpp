#include "hompot/report.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

using namespace hompot;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = fs::temp_directory_path() / ("hompot_" + tag + "_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path / name) << text; }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("analyze reference potentials", "[report]") {
  auto r = analyze("q1^2*q2");
  CHECK(r.verdict == Verdict::non_integrable_by_morales_ramis);
  bool witness = false;
  for (const auto& p : r.points)
    if (p.lambda == "-3" && p.status == "inadmissible") witness = true;
  CHECK(witness);

  r = analyze("r^-3");
  CHECK(r.verdict == Verdict::multiple_point_radial_candidate);
  CHECK(r.continuum);
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].lambda == "-3");
  CHECK(r.points[0].multiple);
  CHECK(r.evidence["points"][0]["spectrum"] == nlohmann::json({"12", "-3"}));

  r = analyze("q1^3");
  CHECK(r.verdict == Verdict::passes_first_order_tests);
  REQUIRE_FALSE(r.points.empty());
  CHECK(r.points[0].lambda == "0");
  CHECK(r.points[0].witness_row == "family1");
  CHECK(r.points[0].witness_i == "0");

  CHECK_THROWS_AS(analyze("q1^2 + q2^2"), std::invalid_argument);
  CHECK_THROWS(analyze("q1^^2"));
}

TEST_CASE("analyze polar and rotation-invariant potentials", "[report]") {
  auto r = analyze("r^-3*(1 + 1/10*cos(2*theta))");
  CHECK(r.verdict == Verdict::non_integrable_by_morales_ramis);
  REQUIRE(r.points.size() == 1);
  CHECK(r.points[0].lambda == "-37/11");
  CHECK(r.evidence["classification"] == "non_integrable");

  CHECK(analyze("r^-3*(5)").verdict == Verdict::multiple_point_radial_candidate);
  CHECK(analyze("r^-2*(1 + cos(theta))").verdict == Verdict::passes_first_order_tests);

  // (q1^2 + q2^2)^2 written as a polynomial: rotation invariant, degree 4
  r = analyze("q1^4 + 2*q1^2*q2^2 + q2^4");
  CHECK(r.verdict == Verdict::multiple_point_radial_candidate);
  CHECK(r.evidence["rotation_invariant"] == true);
}

TEST_CASE("a non-radial multiple point is non-integrable", "[report]") {
  // q1^2 q2 has no multiple point; build one: V = q1^3 + q1 q2^2 * 0 + ... use the
  // cubic whose Hessian at (1,0) has lambda = k = 3: V = q1^3 + 3/2 q1 q2^2 + q2^3
  auto r = analyze("q1^3 + 3/2*q1*q2^2 + q2^3");
  bool multiple = false;
  for (const auto& p : r.points) multiple = multiple || p.multiple;
  REQUIRE(multiple);
  CHECK(r.verdict == Verdict::non_integrable_by_morales_ramis);
}

TEST_CASE("report JSON round trip and stability", "[report][json]") {
  for (const char* text : {"q1^2*q2", "r^-3", "q1^3", "q1^4 + q2^4", "r^-3*(1 + 1/10*cos(2*theta))", "1/(q1^3 + q2^3)"}) {
    auto r = analyze(text);
    auto j = to_json(r);
    CHECK(report_from_json(nlohmann::json::parse(j.dump())) == r);
    CHECK(to_json(analyze(text)).dump() == j.dump());
    CHECK_FALSE(j.contains("timing_ms"));
  }
  AnalyzeOptions timed;
  timed.include_timing = true;
  auto r = analyze("q1^3", timed);
  REQUIRE(r.timing_ms);
  CHECK(report_from_json(to_json(r)) == r);
  CHECK(human_summary(analyze("r^-3")).find("multiple_point_radial_candidate") != std::string::npos);
}

TEST_CASE("batch on an empty directory", "[report][batch]") {
  TempDir d("empty");
  auto b = batch(d.path);
  CHECK(b.entries.empty());
  CHECK(b.all_ok());
  CHECK(summary_csv(b) == "file,k,points,multiple,verdict\n");
  CHECK_THROWS_AS(batch(d.path / "missing"), std::invalid_argument);
}

TEST_CASE("batch with a malformed file", "[report][batch]") {
  TempDir d("mixed");
  d.write("a.txt", "q1^3\n");
  d.write("b.txt", "# comment\nr^-3\n");
  d.write("c.json", R"({"potential": "q1^2*q2"})");
  d.write("d.txt", "q1^^3\n");
  auto b = batch(d.path, {}, 3);
  REQUIRE(b.entries.size() == 4);
  CHECK_FALSE(b.all_ok());
  CHECK(b.entries[0].file == "a.txt");
  CHECK(b.entries[3].file == "d.txt");
  CHECK_FALSE(b.entries[3].report);
  CHECK_FALSE(b.entries[3].error.empty());
  int ok = 0;
  for (const auto& e : b.entries) ok += e.report ? 1 : 0;
  CHECK(ok == 3);
  // ordering and content do not depend on the thread count
  CHECK(summary_csv(batch(d.path, {}, 1)) == summary_csv(b));
  CHECK(to_json(batch(d.path, {}, 1)).dump() == to_json(b).dump());
}

TEST_CASE("shipped corpus matches the golden summary", "[report][batch][golden]") {
  fs::path root(HOMPOT_SOURCE_DIR);
  auto b = batch(root / "samples");
  CHECK(b.all_ok());
  CHECK(b.entries.size() == 6);
  CHECK(summary_csv(b) == read_file(root / "tests" / "golden" / "samples_summary.csv"));
}
