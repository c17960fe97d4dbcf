#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "momentgaps/io.hpp"
#include "momentgaps/oracle.hpp"

using namespace mgap;
using namespace testing_support;
using io::Json;

namespace {

Json file_of(const std::string& mode, const std::vector<std::string>& entries) {
  Json ms = Json::array();
  for (const auto& e : entries) {
    if (e == "x") ms.push_back(nullptr);
    else ms.push_back(e);
  }
  return Json{{"mode", mode}, {"moments", ms}};
}

std::string error_of(const Json& j) {
  try {
    io::parse_problem(j);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

// Reader that knows only the report layout: atoms are "p/q" strings, plain
// numbers, or {center, radicand, sign} with value center + sign sqrt(radicand).
long double value_of(const Json& v) {
  if (v.is_number()) return v.get<long double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stold(s);
    return std::stold(s.substr(0, slash)) / std::stold(s.substr(slash + 1));
  }
  return value_of(v["center"]) + v["sign"].get<int>() * std::sqrt(value_of(v["radicand"]));
}

// Worst relative error of the report's measure against the known moments,
// relative to max(|target|, sum of |terms|) so zero targets are judged fairly.
double resum(const Json& problem, const Json& report) {
  const Json& atoms = report["measure"]["atoms"];
  const Json& weights = report["measure"]["weights"];
  double worst = 0.0;
  const Json& ms = problem["moments"];
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].is_null()) continue;
    long double s = 0, size = 0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const long double term = value_of(weights[a]) * std::pow(value_of(atoms[a]), static_cast<long double>(i));
      s += term;
      size += std::abs(term);
    }
    const long double target = value_of(ms[i]);
    const long double err = std::abs(s - target) / std::max(std::abs(target), size);
    worst = std::max(worst, static_cast<double>(err));
  }
  return worst;
}

}  // namespace

TEST_CASE("problem schema errors name the field") {
  CHECK(error_of(Json::array()).find("top level") != std::string::npos);
  CHECK(error_of(Json{{"moments", Json::array()}}).find("mode") != std::string::npos);
  CHECK(error_of(Json{{"mode", "gap-middle"}, {"moments", {1, 0, 1}}}).find("unknown mode") != std::string::npos);
  CHECK(error_of(Json{{"mode", "thmp"}, {"moments", {1, "zero", 1}}}).find("moments[1]") != std::string::npos);
  CHECK(error_of(Json{{"mode", "thmp"}, {"moments", {1, 0, 1}}, {"arithmetic", "interval"}}).find("arithmetic") !=
        std::string::npos);
  CHECK(error_of(Json{{"mode", "thmp"}, {"moments", {1, 0, 1}}, {"tolerances", {{"psd", -1}}}}).find("tolerances") !=
        std::string::npos);

  auto wrong = file_of("gap-last", ex_last::beta3);
  wrong["moments"][3] = nullptr;
  CHECK(error_of(wrong) == "moments[3]: gap not allowed here in mode gap-last");
  auto filled = file_of("gap-last", ex_last::beta3);
  filled["moments"][17] = "0";
  CHECK(error_of(filled) == "moments[17]: mode gap-last expects a gap (null) here");
  // the same data under another pattern puts the gap in the wrong place
  CHECK(error_of(file_of("gap-first", ex_last::beta3)).find("moments[1]") != std::string::npos);
}

TEST_CASE("curve problem schema") {
  Json recs = Json::array();
  for (Index d = 0; d <= 2; ++d)
    for (Index i = 0; i <= d; ++i) recs.push_back({{"i", i}, {"j", d - i}, {"value", 1}});
  Json j{{"mode", "curve-yx3"}, {"moments", recs}};
  const io::Problem p = io::parse_problem(j);
  CHECK(p.kind == io::Mode::Curve);
  CHECK(p.k == 1);
  CHECK(p.bivariate.size() == 6);

  Json missing = j;
  missing["moments"].erase(4);
  CHECK(error_of(missing).find("missing beta_{") != std::string::npos);
  Json dup = j;
  dup["moments"].push_back({{"i", 0}, {"j", 0}, {"value", 1}});
  CHECK(error_of(dup).find("duplicate") != std::string::npos);
  Json rec = j;
  rec["moments"][0] = {1, 2};
  CHECK(error_of(rec).find("moments[0]") != std::string::npos);

  // y^3 = x^4 needs the extra moment
  Json y3x4 = j;
  y3x4["mode"] = "curve-y3x4";
  try {
    io::parse_problem(y3x4);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingExtraMoment);
  }
}

TEST_CASE("read_problem reports syntax errors with position") {
  const auto path = std::filesystem::temp_directory_path() / "momentgaps_syntax.json";
  {
    std::ofstream out(path);
    out << "{\n  \"mode\": \"thmp\",\n  \"moments\": [1, 0 1]\n}\n";
  }
  try {
    io::read_problem(path.string());
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
    CHECK(std::string(e.what()).find(path.string() + ":3:") != std::string::npos);
  }
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::read_problem("/nonexistent/problem.json"), Error);
}

TEST_CASE("reports for the published sequences") {
  auto run = [](const Json& j) { return io::run(io::parse_problem(j)); };

  auto r = run(file_of("gap-last", ex_last::beta3));
  CHECK(r.exit_code == 0);
  CHECK(r.report["atom_count"] == 8);
  CHECK(r.report["certificate"]["ranks"]["leading"] == 8);
  CHECK(r.report["certificate"]["ranks"]["known"] == 8);
  CHECK(r.report["certificate"]["ranks"]["bordered"] == 8);
  CHECK(r.report["verification"]["passed"] == true);
  CHECK(r.report["measure"]["atoms"][0] == "-5");

  r = run(file_of("gap-last", ex_last::beta2));
  CHECK(r.exit_code == 1);
  CHECK(r.report["exists"] == false);
  CHECK(r.report["certificate"]["not_psd"]["rows"].is_array());
  CHECK(r.report["certificate"]["not_psd"]["min_eigenvalue"].get<double>() < 0);
  CHECK_FALSE(r.report.contains("measure"));

  r = run(file_of("gap-first", ex_first::beta2));
  CHECK(r.exit_code == 1);
  CHECK(r.report.contains("certificate"));

  r = run(file_of("gap-first", ex_first::beta3));
  CHECK(r.exit_code == 0);
  CHECK(r.report["certificate"]["ranks"]["known_leading"] == r.report["certificate"]["ranks"]["bordered"]);

  // not asked for, not reported
  CHECK_FALSE(r.report.contains("timing"));
  r = io::run(io::parse_problem(file_of("gap-first", ex_first::beta3)), {true, true});
  CHECK(r.report["timing"]["seconds"].get<double>() >= 0);
}

TEST_CASE("exact reports are deterministic") {
  const Json j = file_of("gap-first", ex_first::beta4);
  CHECK(io::run(io::parse_problem(j)).report.dump() == io::run(io::parse_problem(j)).report.dump());
}

TEST_CASE("independent re-summation of exit-0 reports") {
  std::vector<Json> files{file_of("gap-last", ex_last::beta1), file_of("gap-last", ex_last::beta3),
                          file_of("gap-first", ex_first::beta1), file_of("gap-first", ex_first::beta3)};
  const char* modes[] = {"thmp", "gap-last", "gap-last2", "gap-first", "gap-first2"};
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Index n = 1 + static_cast<Index>(seed % 5);
    const AtomicMeasure m = random_measure(n, -3, 3, seed);
    files.push_back(io::sample_problem(modes[seed % 5], m, n + 2));
  }
  for (const Json& f : files) {
    CAPTURE(f.dump());
    const io::RunResult r = io::run(io::parse_problem(f));
    REQUIRE(r.exit_code == 0);
    const double err = resum(f, r.report);
    CHECK(err <= r.report["verification"]["tolerance"].get<double>());
    CHECK(err <= r.report["residual"].get<double>() + 1e-12);
  }
}

TEST_CASE("sample problems round trip through the parser") {
  const AtomicMeasure m = random_measure(3, -2, 2, 9);
  for (const char* mode : {"curve-yx3", "curve-yx4", "curve-y2x3", "curve-y3x4"}) {
    CAPTURE(mode);
    const Json j = io::sample_problem(mode, m, 4);
    const io::Problem p = io::parse_problem(j);
    CHECK(p.k == 4);
    CHECK(p.extra.has_value() == curve_needs_extra(p.curve));
    const io::RunResult r = io::run(p);
    CHECK(r.exit_code == 0);
    CHECK(r.report["atom_count"] == 3);
  }
}
