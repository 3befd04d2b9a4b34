#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "zetalab/suite.hpp"

using namespace zetalab;

namespace {

ParamPoint<Real> real(const char* a, const char* b) {
  return {ScalarTraits<Real>::parse(a), ScalarTraits<Real>::parse(b), std::nullopt};
}

ReportRow sample_row(bool with_gamma) {
  ReportRow row;
  row.relation_id = "csf-star";
  row.args = "index=1,2";
  row.alpha = "8.0e-01";
  row.beta = "1.7e+00";
  if (with_gamma) row.gamma = "1.3e+00";
  row.lhs = "2.4041138063191885e+00";
  row.lhs_err = "1.0e-20";
  row.rhs = "2.4041138063191885e+00";
  row.rhs_err = "2.0e-20";
  row.m_final = 4096;
  row.abs_diff = "0.0e+00";
  row.rel_diff = "0.0e+00";
  row.tol = "1e-06";
  row.pass = true;
  row.wall_time = 0.25;
  return row;
}

}  // namespace

TEST_CASE("report rows carry decimal strings at report precision") {
  const auto r = verify_eq12(1, 1, real("0.8", "1.7"));
  const auto row = to_row(r);
  CHECK(row.relation_id == "eq12");
  CHECK(row.alpha == format_decimal(ScalarTraits<Real>::parse("0.8")));
  CHECK(row.lhs == format_decimal(r.lhs.value));
  CHECK(row.lhs.size() > 70);
  CHECK(row.lhs.find(',') == std::string::npos);
  CHECK_FALSE(row.gamma.has_value());
  CHECK(row.tol == "1e-06");
  CHECK(outcome(row) == "pass");
}

TEST_CASE("report document JSON round trip") {
  ReportDocument doc;
  doc.config = {{"precision", 256}, {"grids", {{"main", {"1,1"}}}}};
  doc.rows = {sample_row(false), sample_row(true)};
  doc.rows[1].pass = false;
  doc.rows[1].inconclusive = true;
  doc.summary = tally(doc.rows);
  doc.total_wall_time = 1.5;
  CHECK(doc.summary == ReportSummary{1, 0, 1});

  const nlohmann::json j = doc;
  CHECK(j.at("summary").at("total") == 2);
  CHECK(j.at("reports").at(1).at("outcome") == "inconclusive");
  CHECK(j.at("reports").at(0).at("gamma").is_null());
  CHECK(j.at("tool_version") == kToolVersion);
  const auto back = nlohmann::json::parse(j.dump()).get<ReportDocument>();
  CHECK(back == doc);
}

TEST_CASE("CSV output") {
  std::ostringstream out;
  auto quoted = sample_row(true);
  quoted.args = "K=1,3 L=2,2";
  write_csv(out, {sample_row(false), quoted});
  std::istringstream in(out.str());
  std::string header;
  std::string first;
  std::string second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "relation_id,args,alpha,beta,gamma,lhs,rhs,rel_diff,pass");
  CHECK(first == "csf-star,\"index=1,2\",8.0e-01,1.7e+00,,2.4041138063191885e+00,2.4041138063191885e+00,0.0e+00,true");
  CHECK(second.rfind("csf-star,\"K=1,3 L=2,2\",8.0e-01,1.7e+00,1.3e+00,", 0) == 0);
}

TEST_CASE("text report") {
  const auto text = format_report(sample_row(true));
  CHECK(text.find("relation  csf-star (index=1,2)") != std::string::npos);
  CHECK(text.find("gamma=1.3e+00") != std::string::npos);
  CHECK(text.find("result    pass") != std::string::npos);
}

TEST_CASE("suite parsing") {
  const auto config = parse_suite(R"(# sample
precision = 192
threads = 2
output = out/run
tol = 1e-7
tol.lemma1 = 1e-3
tol.expansion = 1e-5
mmax = 65536
mmax.aux = 2048
grid main = 1,1 | 0.8,1.7

[relations]
csf-star index=1,2 grid=main   # trailing comment
eq21 s=2 params=1,1,1 tol=1e-8
)");
  CHECK(config.precision == 192);
  CHECK(config.threads == 2);
  CHECK(config.output == "out/run");
  CHECK(config.tol == 1e-7);
  CHECK(config.tol_lemma1 == 1e-3);
  CHECK(config.tol_expansion == 1e-5);
  CHECK(config.mmax == 65536);
  CHECK(config.mmax_aux == 2048);
  CHECK(config.grids.at("main") == std::vector<std::string>{"1,1", "0.8,1.7"});
  REQUIRE(config.instances.size() == 2);
  CHECK(config.instances[0].relation_id == "csf-star");
  CHECK(config.instances[0].args.at("index") == "1,2");
  CHECK(config.instances[1].args.at("tol") == "1e-8");
  CHECK(config.instances[1].line == 14);
  const auto echo = config_echo(config);
  CHECK(echo.at("relations").size() == 2);
  CHECK(echo.at("precision") == 192);
}

TEST_CASE("suite parse errors name the line") {
  auto message = [](const std::string& text) {
    try {
      parse_suite(text);
    } catch (const SuiteError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("precision = x\n").rfind("line 1:", 0) == 0);
  CHECK(message("\nprecision = 8\n").rfind("line 2:", 0) == 0);
  CHECK(message("colour = red\n").find("unknown setting") != std::string::npos);
  CHECK(message("[relations]\nfoo index=2 params=1,1\n").find("unknown relation") != std::string::npos);
  CHECK(message("[relations]\neq12 m=1 n=1\n").find("exactly one") != std::string::npos);
  CHECK(message("[relations]\neq12 m=1 n=1 grid=g params=1,1\n").find("exactly one") != std::string::npos);
  CHECK(message("[relations]\neq12 m=1 n=1 grid=none\n").find("unknown grid") != std::string::npos);
  CHECK(message("[relations]\neq12 m=1 m=2 params=1,1\n").find("duplicate") != std::string::npos);
  CHECK(message("[relations]\neq12 m\n").find("key=value") != std::string::npos);
  CHECK(message("grid g = 1,1 | | 2,2\n").find("empty grid point") != std::string::npos);
  CHECK(message("threads = 0\n").find("threads") != std::string::npos);
  CHECK(message("mmax = 10\n").find("mmax") != std::string::npos);
  CHECK_THROWS_AS(load_suite("/nonexistent/x.suite"), SuiteError);
}

TEST_CASE("suite expansion validates every instance first") {
  auto config = parse_suite(R"(grid g = 1,1 | 0.8,1.7
[relations]
csf-star index=admissible:4:2 grid=g
sum-formula k=3 n=2 params=1,1
eq21 s=2 params=1,1,1
expansion kind=beta series=zi index=1,2 r=1 params=1,1
lemma1-star index=2 params=1,1
c2-symmetry indexK=1,3 indexL=2,2 params=1.2,0.9
)");
  const auto plans = expand_suite(config);
  // Admissible indices of weight <= 4, depth <= 2: (2),(3),(1,2),(2,1),(4),(1,3),(2,2),(3,1).
  CHECK(plans.size() == 8 * 2 + 5);
  CHECK(plans[0].args == "index=2");
  CHECK(plans[16].relation_id == "sum-formula");
  CHECK(plans[18].args == "kind=beta series=zi index=1,2 r=1");
  CHECK(plans[18].tol == kDefaultExpansionTol);
  CHECK(plans[19].tol == kDefaultLemmaTol);

  auto expect_error = [](const std::string& text, const std::string& fragment) {
    auto cfg = parse_suite(text);
    try {
      expand_suite(cfg);
    } catch (const SuiteError& e) {
      CAPTURE(e.what());
      CHECK(std::string(e.what()).find(fragment) != std::string::npos);
      return;
    }
    FAIL("expected a suite error");
  };
  expect_error("grid g = 1,1 | -0.5,1\n[relations]\neq12 m=1 n=1 grid=g\n", "line 3 (eq12)");
  expect_error("[relations]\nsum-formula k=2 n=2 params=1,1\n", "line 2");
  expect_error("[relations]\neq12 m=1 n=1 q=3 params=1,1\n", "unknown argument 'q'");
  expect_error("[relations]\neq12 m=1 params=1,1\n", "missing argument 'n'");
  expect_error("[relations]\neq21 s=2 params=1,1\n", "alpha,beta,gamma");
  expect_error("[relations]\neq12 m=1 n=1 params=1,1,1\n", "alpha,beta only");
  expect_error("[relations]\ncsf-star index=1,1 params=1,1\n", "index");
  expect_error("[relations]\ncsf-star index=admissible:4 params=1,1\n", "admissible");
  expect_error("[relations]\nexpansion kind=alpha-star series=zi index=1,2 r=1 params=1,1\n", "zstar-i");
  expect_error("[relations]\neq12 m=1 n=1 tol=-1 params=1,1\n", "tol");
}

TEST_CASE("empty suite") {
  const auto config = parse_suite("# nothing here\n");
  const auto plans = expand_suite(config);
  const auto doc = run_suite(config, plans);
  CHECK(doc.rows.empty());
  CHECK(doc.summary == ReportSummary{});
  CHECK(suite_exit_code(doc) == 0);
}

TEST_CASE("suite runs are deterministic and keep configuration order") {
  auto config = parse_suite(R"(threads = 2
grid g = 1,1 | 0.8,1.7
[relations]
eq15 n=1 grid=g
csf-strict index=2 grid=g
sum-formula k=4 n=2 params=1.5,0.6
)");
  const auto plans = expand_suite(config);
  const auto a = run_suite(config, plans);
  const auto b = run_suite(config, plans);
  REQUIRE(a.rows.size() == 5);
  CHECK(a.rows[0].relation_id == "eq15");
  CHECK(a.rows[2].relation_id == "csf-strict");
  CHECK(a.rows[4].relation_id == "sum-formula");
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    auto x = a.rows[i];
    auto y = b.rows[i];
    x.wall_time = y.wall_time = 0;
    CHECK(x == y);
  }
  CHECK(a.summary.pass == 5);
  CHECK(suite_exit_code(a) == 0);

  ReportDocument failed = a;
  failed.rows[0].pass = false;
  failed.summary = tally(failed.rows);
  CHECK(suite_exit_code(failed) == 1);
  ReportDocument unsure = a;
  unsure.rows[0].pass = false;
  unsure.rows[0].inconclusive = true;
  unsure.summary = tally(unsure.rows);
  CHECK(suite_exit_code(unsure) == 3);
}

TEST_CASE("report files") {
  const auto dir = std::filesystem::temp_directory_path() / "zetalab_report_test";
  std::filesystem::remove_all(dir);
  ReportDocument doc;
  doc.rows = {sample_row(false)};
  doc.summary = tally(doc.rows);
  write_report_files(doc, dir / "nested" / "run");
  std::ifstream json_in(dir / "nested" / "run.json");
  REQUIRE(json_in);
  const auto back = nlohmann::json::parse(json_in).get<ReportDocument>();
  CHECK(back == doc);
  std::ifstream csv_in(dir / "nested" / "run.csv");
  std::string header;
  std::getline(csv_in, header);
  CHECK(header == "relation_id,args,alpha,beta,gamma,lhs,rhs,rel_diff,pass");
  std::filesystem::remove_all(dir);
}

TEST_CASE("parameter parsing") {
  const auto p = parse_params("0.8, 1.7");
  CHECK(p.alpha == ScalarTraits<Real>::parse("0.8"));
  CHECK_FALSE(p.gamma.has_value());
  CHECK(parse_params("1,1,3/2").gamma.value() == Real(3) / 2);
  CHECK_THROWS_AS(parse_params("1"), ArgumentError);
  CHECK_THROWS_AS(parse_params("1,2,3,4"), ArgumentError);
  CHECK_THROWS_AS(parse_params("1,x"), ArgumentError);
}
