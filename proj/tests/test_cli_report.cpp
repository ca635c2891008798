#include <random>

#include "doctest.h"
#include "json.hpp"
#include "padyn/error.hpp"
#include "padyn/parser.hpp"
#include "padyn/report.hpp"

using namespace padyn;
using nlohmann::json;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Internal;
}

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const std::vector<std::string> kX{"x"};

Rational coef(const Polynomial& q, std::uint32_t e) { return q.coefficient(Monomial{e}); }

std::string p1_file(std::uint64_t p, const std::string& num, int k, const std::string& den = "1") {
  return "[model]\nkind = \"p1\"\np = " + std::to_string(p) + "\nnumerator = \"" + num + "\"\ndenominator = \"" + den +
         "\"\n[options]\nprecision = " + std::to_string(k) + "\n";
}

const std::string kCubic =
    "[model]\nkind = \"poly-chart\"\np = 3\nvariable = \"z\"\npolynomial = \"z + z^2 + 3*z^3\"\n"
    "[options]\nprecision = 8\n";

bool has_float(const json& j) {
  if (j.is_number_float()) return true;
  if (j.is_structured())
    for (const auto& v : j)
      if (has_float(v)) return true;
  return false;
}

RunOptions json_opts() {
  RunOptions o;
  o.json = true;
  return o;
}

}  // namespace

TEST_CASE("parse_polynomial examples") {
  const auto q = parse_polynomial("x^2 - 4*x + 3", kX, 3);
  CHECK(q.terms().size() == 3);
  CHECK(coef(q, 2) == 1);
  CHECK(coef(q, 1) == -4);
  CHECK(coef(q, 0) == 3);

  const auto r = parse_polynomial("x^2 - 29/16", kX, 3);
  CHECK(coef(r, 0) == Rational(-29, 16));

  CHECK(code_of([] { parse_polynomial("x/3", kX, 3); }) == ErrorCode::NonIntegralCoefficient);
  CHECK(code_of([] { parse_polynomial("1/9 + x", kX, 3); }) == ErrorCode::NonIntegralCoefficient);
  CHECK(code_of([] { parse_polynomial("y + 1", kX, 3); }) == ErrorCode::UnknownVariable);
  CHECK(parse_polynomial("x/2", kX, 3) == parse_polynomial("1/2*x", kX, 3));
}

TEST_CASE("parser grammar") {
  CHECK(parse_polynomial("-(x + 1)^2", kX, 5) == parse_polynomial("-x^2 - 2*x - 1", kX, 5));
  CHECK(parse_polynomial("(-x)^3", kX, 5) == parse_polynomial("-x^3", kX, 5));
  CHECK(parse_polynomial("  x *x*  x ", kX, 5) == parse_polynomial("x^3", kX, 5));
  CHECK(parse_polynomial("x - x", kX, 5).is_zero());
  CHECK(parse_polynomial("2^10", kX, 5) == Polynomial::constant(kX, 1024));
  const std::vector<std::string> xy{"x", "y"};
  const auto q = parse_polynomial("x*y - 3", xy, 3);
  CHECK(q.coefficient(Monomial{1, 1}) == 1);
  CHECK(q.coefficient(Monomial{0, 0}) == -3);
}

TEST_CASE("syntax errors carry a position") {
  for (const char* bad : {"", "x +", "x ^ -1", "(x + 1", "x + * 2", "3 x", "x^", "1/0", "x)"}) {
    INFO(bad);
    CHECK(code_of([&] { parse_polynomial(bad, kX, 3); }) == ErrorCode::SyntaxError);
  }
  CHECK(error_text([] { parse_polynomial("x + * 2", kX, 3); }).find("position 4") != std::string::npos);
  CHECK(error_text([] { parse_polynomial("(x + 1", kX, 3); }).find("position 6") != std::string::npos);
}

TEST_CASE("print / parse round trip") {
  std::mt19937_64 rng(42);
  const std::vector<std::string> vars{"x", "y"};
  for (int trial = 0; trial < 300; ++trial) {
    Polynomial q(vars);
    const int terms = static_cast<int>(rng() % 5);
    for (int i = 0; i < terms; ++i) {
      const auto num = static_cast<long long>(rng() % 2001) - 1000;
      const long long dens[] = {1, 1, 2, 4, 5, 7, 16};
      const auto den = dens[rng() % 7];
      q.add_term(Monomial{static_cast<std::uint32_t>(rng() % 4), static_cast<std::uint32_t>(rng() % 4)},
                 Rational(num, den));
    }
    const std::string text = q.to_string();
    INFO(text);
    CHECK(parse_polynomial(text, vars, 3) == q);
  }
}

TEST_CASE("map description format") {
  const auto d = parse_map_description(
      "# comment\n[model]\nkind = \"affine\"\np = 3\nvariables = \"x, y\"\nrelations = \"x*y - 3\"\n"
      "map = \"y; x\"\n\n[options]\nprecision = 5\n");
  CHECK(d.kind == MapKind::Affine);
  CHECK(d.p == 3);
  CHECK(d.precision == 5);
  CHECK(d.variables == std::vector<std::string>{"x", "y"});
  CHECK(d.relations == std::vector<std::string>{"x*y - 3"});
  CHECK(d.map == std::vector<std::string>{"y", "x"});

  const auto c = parse_map_description(kCubic);
  CHECK(c.kind == MapKind::PolyChart);
  CHECK(c.polynomial == "z + z^2 + 3*z^3");
  CHECK(c.variables == std::vector<std::string>{"z"});
  CHECK(build_model(c).is_affine_line());

  const auto p = parse_map_description(p1_file(7, "x^2", 6));
  CHECK(p.kind == MapKind::P1);
  CHECK(p.numerator == "x^2");
  CHECK(build_model(p).kind() == ModelKind::P1);
}

TEST_CASE("map description errors") {
  CHECK(code_of([] { parse_map_description("[model]\nkind = \"p1\"\np = 4\nnumerator = \"x\"\n"); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_map_description("[model]\nkind = \"torus\"\np = 3\n"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_map_description("[model]\nkind = \"p1\"\np = 3\nnumerator = \"x\"\nbogus = 1\n"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_map_description("[model]\nkind = \"p1\"\np = 3\np = 5\nnumerator = \"x\"\n"); }) ==
        ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_map_description("kind p1\n"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { build_model(parse_map_description(p1_file(3, "x/3", 4))); }) ==
        ErrorCode::NonIntegralCoefficient);
  CHECK(code_of([] { load_map_description("/nonexistent/file.map"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorCode::SyntaxError) == ExitCode::Usage);
  CHECK(exit_code_for(ErrorCode::NonIntegralCoefficient) == ExitCode::Usage);
  CHECK(exit_code_for(ErrorCode::ModelRejected) == ExitCode::Rejected);
  CHECK(exit_code_for(ErrorCode::PrecisionExhausted) == ExitCode::Precision);
  CHECK(exit_code_for(ErrorCode::Internal) == ExitCode::Precision);

  RunOptions o;
  CHECK(run_text("verify", p1_file(3, "x^2 - 4*x + 3", 6), o).code == ExitCode::Ok);
  // a violated verdict is a finding, not a failure
  CHECK(run_text("verify", p1_file(3, "x^2 - 29/16", 8), o).code == ExitCode::Ok);
  const std::string as_p1 = p1_file(3, "x + x^2 + 3*x^3", 6);
  const auto rejected = run_text("analyze", as_p1, o);
  CHECK(rejected.code == ExitCode::Rejected);
  CHECK(!rejected.output.empty());
  CHECK(run_text("cubic", kCubic, o).code == ExitCode::Ok);
  CHECK(run_text("analyze", p1_file(3, "x +", 6), o).code == ExitCode::Usage);
  CHECK(run_text("frobnicate", p1_file(3, "x^2", 6), o).code == ExitCode::Usage);
  o.point = "2";
  CHECK(run_text("decompose", p1_file(3, "x^2 - 4*x + 3", 6), o).code == ExitCode::Usage);
}

TEST_CASE("verify report for x^2 - 4x + 3") {
  const auto res = run_text("verify", p1_file(3, "x^2 - 4*x + 3", 6), json_opts());
  REQUIRE(res.code == ExitCode::Ok);
  const auto j = json::parse(res.output);
  for (const char* key : {"model", "special_fiber", "bounds", "cycles", "verdicts", "discrepancies", "meta"})
    CHECK_MESSAGE(j.contains(key), key);
  CHECK(j["bounds"]["general"]["value"] == 8);
  bool found = false;
  for (const auto& c : j["cycles"]["certified"]) {
    if (c["period"] != 2) continue;
    found = true;
    const auto& d = c["decomposition"];
    CHECK(d["n"] == 2);
    CHECK(d["n0"] == 1);
    CHECK(d["r"] == 2);
    CHECK(d["t"] == 0);
  }
  CHECK(found);
  CHECK(j["discrepancies"].empty());
  CHECK(j["meta"]["version"] == kVersion);
}

TEST_CASE("verify report for x^2 - 29/16 records the discrepancy") {
  const auto res = run_text("verify", p1_file(3, "x^2 - 29/16", 8), json_opts());
  const auto j = json::parse(res.output);
  bool c3 = false;
  for (const auto& d : j["discrepancies"])
    if (d["id"] == "C3") c3 = true;
  CHECK(c3);
}

TEST_CASE("decompose with --point") {
  RunOptions o = json_opts();
  o.point = "-1/4";
  const auto res = run_text("decompose", p1_file(3, "x^2 - 29/16", 8), o);
  REQUIRE(res.code == ExitCode::Ok);
  const auto j = json::parse(res.output);
  REQUIRE(j["cycles"]["certified"].size() == 1);
  const auto& d = j["cycles"]["certified"][0]["decomposition"];
  CHECK(d["n"] == 3);
  CHECK(d["t"] == 1);
}

TEST_CASE("cubic report") {
  const auto res = run_text("cubic", kCubic, json_opts());
  REQUIRE(res.code == ExitCode::Ok);
  const auto j = json::parse(res.output);
  bool repelling = false;
  for (const auto& d : j["discrepancies"])
    if (d["id"] == "repelling-fixed-point") repelling = true;
  CHECK(repelling);
  CHECK(j.contains("bounds"));
}

TEST_CASE("JSON output is deterministic") {
  const std::string files[] = {p1_file(3, "x^2 - 4*x + 3", 6), p1_file(7, "x^2", 4), p1_file(3, "x^2 - 29/16", 8),
                               kCubic};
  for (const auto& f : files) {
    for (const char* sub : {"analyze", "enumerate", "verify", "cubic"}) {
      if ((f == kCubic) != (std::string(sub) == "cubic")) continue;
      const auto a = run_text(sub, f, json_opts()), b = run_text(sub, f, json_opts());
      CHECK(a.code == b.code);
      CHECK(a.output == b.output);
      // canonical: re-serializing the parsed document gives the same bytes
      const auto doc = json::parse(a.output);
      CHECK(doc.dump(2) + "\n" == a.output);
      CHECK(!has_float(doc));
    }
  }
}

TEST_CASE("text report shows the verdict table") {
  const auto res = run_text("verify", p1_file(3, "x^2 - 29/16", 8), RunOptions{});
  CHECK(res.output.find("Violated") != std::string::npos);
  CHECK(res.output.find("C4") != std::string::npos);
}
