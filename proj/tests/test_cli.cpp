#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qcalc/bell.hpp"
#include "qcalc/cli/commands.hpp"
#include "qcalc/cli/report.hpp"
#include "qcalc/errors.hpp"

using namespace qcalc;
using namespace qcalc::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_json(const std::string& stem) {
  return std::filesystem::temp_directory_path() / ("qcalc_test_" + stem + ".json");
}

Json read_json(const std::filesystem::path& p) { return Json::parse(slurp(p)); }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run_cli({"bell", "correlations", "--angles", "0,90,45,-45"}).code == kOk);
  CHECK(run_cli({"verify", "--suite", "identities", "--instances", "5"}).code == kOk);
  // A tolerance tighter than rounding turns the identity suites into failures.
  CHECK(run_cli({"verify", "--suite", "identities", "--instances", "5", "--tol", "1e-30",
                 "--fail-threshold", "1e-29"})
            .code == kVerificationFailure);
  CHECK(run_cli({}).code == kUsageError);
  CHECK(run_cli({"frobnicate"}).code == kUsageError);
  CHECK(run_cli({"verify", "--suite", "everything"}).code == kUsageError);
  CHECK(run_cli({"verify", "--tol", "1e-1"}).code == kUsageError);
  CHECK(run_cli({"bell", "bound", "--rates", "0.1,x,0.2"}).code == kUsageError);
  CHECK(run_cli({"bell", "bound", "--rates", "0.1,0.2"}).code == kUsageError);
  CHECK(run_cli({"bell", "simulate", "--pair", "AB"}).code == kUsageError);
  CHECK(run_cli({"scenario", "run", "nope"}).code == kUsageError);
  CHECK(run_cli({"bell", "bound", "--rates", "0.1,0.1,0.1", "--json", "/nonexistent/dir/x.json"}).code ==
        kIoError);
  CHECK(run_cli({"--version"}).code == kOk);
}

TEST_CASE("config validation") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tol = 1e-2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = RunConfig{};
  cfg.dims = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("json is canonical and reproducible") {
  const auto p1 = temp_json("a"), p2 = temp_json("b");
  const std::vector<std::string> base = {"verify", "--suite", "all", "--random", "2", "--instances", "10",
                                         "--seed", "7"};
  auto a1 = base, a2 = base;
  a1.insert(a1.end(), {"--json", p1.string()});
  a2.insert(a2.end(), {"--json", p2.string()});
  REQUIRE(run_cli(a1).code == kOk);
  REQUIRE(run_cli(a2).code == kOk);
  const std::string s1 = slurp(p1), s2 = slurp(p2);
  CHECK(!s1.empty());
  CHECK(s1.back() == '\n');
  // Only the command line and output path differ.
  const Json j1 = read_json(p1), j2 = read_json(p2);
  Json c1 = j1, c2 = j2;
  c1.erase("command");
  c2.erase("command");
  c1["config"].erase("output_path");
  c2["config"].erase("output_path");
  CHECK(canonical_dump(c1) == canonical_dump(c2));
  CHECK(canonical_dump(j1) == s1);

  const Report back = report_from_json(j1);
  CHECK(canonical_dump(to_json(back)) == s1);
  CHECK(back.config.seed == 7);
  const Summary sm = back.summary();
  CHECK(j1["summary"]["passed"].get<std::size_t>() == sm.passed);
  CHECK(sm.failed == 0);
  CHECK(sm.indeterminate == 0);
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("canonical dump sorts keys and prints shortest round-trip floats") {
  const Json j = {{"b", 0.1}, {"a", {{"z", 1}, {"y", true}}}, {"c", "x"}};
  const std::string s = canonical_dump(j);
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("\"y\"") < s.find("\"z\""));
  CHECK(Json::parse(s)["b"].get<double>() == 0.1);
  CHECK(number(std::nan("")).is_string());
  CHECK(number(INFINITY).is_string());
  CHECK(number(1.5).get<double>() == 1.5);
  CHECK(format_double(0.45) == "0.45000000000000001");
}

TEST_CASE("report round trip and empty summary") {
  Report r;
  r.command = "bell bound";
  CHECK(r.summary() == Summary{});
  CHECK(r.exit_code() == kOk);
  const Report back = report_from_json(to_json(r));
  CHECK(back.results.empty());
  CHECK(back.command == "bell bound");
  CHECK(to_json(back)["summary"]["passed"] == 0);

  Result x;
  x.name = "x";
  x.status = lab::Status::indeterminate;
  x.data["v"] = 1.25;
  r.results.push_back(x);
  CHECK(r.exit_code() == kVerificationFailure);
  const Report again = report_from_json(to_json(r));
  REQUIRE(again.results.size() == 1);
  CHECK(again.results[0] == x);
  CHECK_THROWS_AS(report_from_json(Json::parse("{\"version\": 3}")), std::invalid_argument);
  CHECK_THROWS_AS(report_from_json(Json::array()), std::invalid_argument);
}

TEST_CASE("expected failures") {
  lab::CriterionReport failing;
  failing.name = "c";
  failing.status = lab::Status::fail;
  failing.max_deviation = 0.1;
  CHECK(criterion_result(failing, Expect::fail).status == lab::Status::pass);
  CHECK(criterion_result(failing, Expect::hold).status == lab::Status::fail);
  failing.steps.push_back({"a", "b", "r", 0.1});
  CHECK(criterion_result(failing, Expect::fail).status != lab::Status::pass);
  failing.first_failing_step = "a->b";
  CHECK(criterion_result(failing, Expect::fail).status == lab::Status::pass);
  lab::CriterionReport holding;
  holding.status = lab::Status::pass;
  holding.holds = true;
  CHECK(criterion_result(holding, Expect::fail).status != lab::Status::pass);
}

TEST_CASE("chains suite records the broken scenarios as reproduced") {
  RunConfig cfg;
  const Report r = verify_report("chains", cfg, 0);
  bool saw = false;
  for (const auto& res : r.results) {
    CHECK(res.status == lab::Status::pass);
    if (res.name == "pointer_disturbing/transparency_chain") {
      saw = true;
      CHECK(res.data["first_failing_step"] == "c->d");
      CHECK(res.data["criterion_status"] == "fail");
    }
  }
  CHECK(saw);
}

TEST_CASE("bell commands") {
  const auto p = temp_json("bell");
  auto r = run_cli({"bell", "correlations", "--angles", "0,90,45,-45", "--json", p.string()});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("0.85355339059327") != std::string::npos);
  Json j = read_json(p);
  REQUIRE(j["results"].size() == 4);
  for (const auto& res : j["results"]) {
    const double v = res["p_same"].get<double>();
    if (res["name"] == "p_same[BK]") {
      CHECK(std::abs(v - 0.1464466094) < 1e-9);
    } else {
      CHECK(std::abs(v - 0.8535533906) < 1e-9);
    }
    // Table cells print the same double as the JSON.
    CHECK(r.out.find(format_double(v)) != std::string::npos);
  }

  r = run_cli({"bell", "bound", "--rates", "0.15,0.15,0.15", "--json", p.string()});
  CHECK(r.code == kOk);
  CHECK(read_json(p)["results"][0]["bound"].get<double>() == 0.45);

  r = run_cli({"bell", "qq", "--favored", "0.85", "--epsilon", "0.01"});
  CHECK(r.out.rfind("empty: 0.84 > 0.48", 0) == 0);
  r = run_cli({"bell", "qq", "--favored", "0.7", "--json", p.string()});
  CHECK(r.out.rfind("not empty: 0.7 <= 0.9", 0) == 0);
  j = read_json(p);
  CHECK(j["results"][0]["witness"]["B"].get<std::string>().size() == 10);

  r = run_cli({"bell", "tail", "--n", "1000000", "--p", "0.85", "--lo", "0.84", "--hi", "0.86", "--json",
               p.string()});
  CHECK(r.code == kOk);
  j = read_json(p);
  const double t = j["results"][0]["log10_tail"].get<double>();
  CHECK(t >= -175);
  CHECK(t <= -160);
  CHECK(j["results"][1]["name"] == "tail_log10[quantum_p]");

  r = run_cli({"bell", "simulate", "--n", "20000", "--seed", "3", "--json", p.string()});
  CHECK(r.code == kOk);
  j = read_json(p);
  CHECK(j["results"][0]["within_band"] == true);
  const auto again = run_cli({"bell", "simulate", "--n", "20000", "--seed", "3"});
  CHECK(again.out == r.out);
  std::filesystem::remove(p);
}

TEST_CASE("scenario commands") {
  auto r = run_cli({"scenario", "list"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("memory_antenna_violating") != std::string::npos);
  r = run_cli({"scenario", "run", "pointer_disturbing"});
  CHECK(r.code == kOk);
  CHECK(r.out.find("first failing step c->d") != std::string::npos);
  CHECK(r.out.find("summary: 3 passed, 0 failed, 0 indeterminate") != std::string::npos);
}
