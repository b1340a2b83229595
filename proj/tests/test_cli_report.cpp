#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "regrad/fixtures.hpp"
#include "regrad/report.hpp"
#include "regrad/verify.hpp"

using namespace regrad;
using nlohmann::json;

namespace {

std::string write_temp(const std::string& content) {
  static int counter = 0;
  std::string path = "regrad_test_scenario_" + std::to_string(counter++) + ".json";
  std::ofstream out(path);
  out << content;
  return path;
}

json minimal_linear_doc() {
  return json::parse(R"({
    "name": "minimal",
    "slits": ["a", "a'"],
    "theory": {"kind": "linear"},
    "sampler": {"kind": "complex-gaussian", "seed": 5},
    "tasks": ["representation"]
  })");
}

}  // namespace

TEST_CASE("shipped fixtures parse and carry all four names") {
  std::vector<std::string> names;
  for (const auto& f : shipped_fixtures()) {
    names.push_back(f.name);
    CHECK_NOTHROW(parse_scenario(f.scenario));
  }
  CHECK(names == std::vector<std::string>{"quadratic-counterexample", "linear-baseline",
                                          "product-combinator", "nonassociative-combinator"});
  CHECK(fixture_by_name("linear-baseline.json").name == "linear-baseline");
  CHECK_THROWS_AS(fixture_by_name("nope"), Error);
}

TEST_CASE("a minimal scenario gets the documented defaults") {
  auto sc = parse_scenario(minimal_linear_doc());
  CHECK(sc.tol("representation") == 1e-9);
  CHECK(sc.tol("triviality") == 1e-8);
  CHECK(sc.sample_count("representation") == 10000);
  CHECK(sc.probe_alphas.size() == 4);
  CHECK(sc.anchor == Complex{1.0, 0.0});
  CHECK(sc.normalized["sampler"]["seed"] == 5);
  CHECK(sc.normalized["tolerances"]["merge"] == 1e-10);
}

TEST_CASE("scenario files load from disk with parse errors located") {
  auto path = write_temp(minimal_linear_doc().dump());
  CHECK(load_scenario(path).name == "minimal");
  std::remove(path.c_str());

  auto bad = write_temp("{ \"slits\": [\"a\",");
  CHECK_THROWS_AS(load_scenario(bad), ParseError);
  std::remove(bad.c_str());

  CHECK_THROWS_AS(load_scenario("definitely-absent.json"), ParseError);
}

TEST_CASE("schema violations name the offending field") {
  auto doc = minimal_linear_doc();
  doc["tolerances"] = {{"representativeness", 1.0}};
  CHECK_THROWS_AS(parse_scenario(doc), SchemaError);

  doc = minimal_linear_doc();
  doc["theory"] = {{"kind", "cubic"}};
  CHECK_THROWS_AS(parse_scenario(doc), SchemaError);

  doc = minimal_linear_doc();
  doc["sampler"] = {{"kind", "complex-gaussian"}};  // missing seed
  CHECK_THROWS_AS(parse_scenario(doc), SchemaError);

  doc = minimal_linear_doc();
  doc["slits"] = {"a"};
  CHECK_THROWS_AS(parse_scenario(doc), SchemaError);

  doc = minimal_linear_doc();
  doc["frobnicate"] = 1;
  CHECK_THROWS_AS(parse_scenario(doc), SchemaError);
}

TEST_CASE("task ordering is validated at load time") {
  auto doc = minimal_linear_doc();
  doc["tasks"] = {"combinator"};
  CHECK_THROWS_AS(parse_scenario(doc), DependencyError);

  doc["tasks"] = {"combinator", "representation"};
  CHECK_THROWS_AS(parse_scenario(doc), DependencyError);

  doc["tasks"] = {"additivity"};
  CHECK_THROWS_AS(parse_scenario(doc), DependencyError);

  doc["tasks"] = {"representation", "representation"};
  CHECK_THROWS_AS(parse_scenario(doc), SchemaError);

  doc["tasks"] = {"representation", "frobnicate"};
  CHECK_THROWS_AS(parse_scenario(doc), SchemaError);
}

TEST_CASE("the quadratic fixture reports the paper-shaped verdicts") {
  auto report = run(parse_scenario(fixture_by_name("quadratic-counterexample").scenario));
  CHECK(report.exit_code() == kExitNegativeVerdict);
  CHECK(report.headline().find("NOT A REPRESENTATION") != std::string::npos);
  CHECK(report.headline().find("TRIVIAL") != std::string::npos);
  CHECK(report.task("combinator")["verdict"] == "skipped");
  CHECK(report.task("associativity")["verdict"] == "skipped");
  CHECK(report.task("regraduation")["verdict"] == "trivial");
  CHECK(report.task("additivity")["verdict"] == "skipped");

  std::string text = render(report, "text");
  CHECK(text.find("xi(4) = 2 xi(1)") != std::string::npos);
  CHECK(text.find("xi(0) = 2 xi(1)") != std::string::npos);
  CHECK(text.find("a = 1, a' = 1") != std::string::npos);
  CHECK(text.find("a = 1, a' = -1") != std::string::npos);
  CHECK(text.rfind("headline:") != std::string::npos);
}

TEST_CASE("the linear fixture passes every stage") {
  auto report = run(parse_scenario(fixture_by_name("linear-baseline").scenario));
  CHECK(report.exit_code() == kExitOk);
  CHECK(report.headline().find("REPRESENTATION") == 0);
  CHECK(report.task("combinator")["identified_rule"] == "sum");
  CHECK(report.task("associativity")["verdict"] == "pass");
  CHECK(report.task("regraduation")["verdict"] == "found");
  CHECK(report.task("additivity")["verdict"] == "pass");
}

TEST_CASE("json reports round-trip exactly") {
  auto report = run(parse_scenario(fixture_by_name("nonassociative-combinator").scenario));
  std::string dumped = render(report, "json");
  CHECK(json::parse(dumped) == report.doc);
  CHECK_THROWS_AS(render(report, "yaml"), Error);
}

TEST_CASE("an empty task list still renders") {
  auto doc = minimal_linear_doc();
  doc["tasks"] = json::array();
  auto report = run(parse_scenario(doc));
  CHECK(report.exit_code() == kExitOk);
  CHECK(report.doc["tasks"].empty());
  CHECK(render(report, "text").find("no tasks requested") != std::string::npos);
  CHECK_NOTHROW(render(report, "json"));
}

TEST_CASE("identical scenarios give identical reports apart from timing") {
  for (const char* name : {"quadratic-counterexample", "linear-baseline"}) {
    auto r1 = run(parse_scenario(fixture_by_name(name).scenario));
    auto r2 = run(parse_scenario(fixture_by_name(name).scenario));
    r1.doc.erase("timing");
    r2.doc.erase("timing");
    CHECK(r1.doc.dump() == r2.doc.dump());
  }
}

TEST_CASE("a user table surrogate of x + y^2 is representable but not associative") {
  json doc;
  doc["name"] = "affine-square-surrogate";
  doc["slits"] = {"a", "a'"};
  std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  json table = json::array();
  for (double x : grid) {
    table.push_back({{"config", {"a"}}, {"coeffs", {x}}, {"value", x}});
    table.push_back({{"config", {"a'"}}, {"coeffs", {x}}, {"value", x}});
  }
  for (double x : grid)
    for (double y : grid)
      table.push_back({{"config", {"a", "a'"}}, {"coeffs", {x, y}}, {"value", x + y * y}});
  doc["theory"] = {{"kind", "user_table"}, {"table", table}};
  doc["sampler"] = {{"kind", "grid"}, {"points", grid}, {"seed", 9}};
  doc["samples"] = {{"representation", 200}, {"fit", 50}, {"associativity_triples", 500}};
  doc["tasks"] = {"representation", "combinator", "associativity"};

  auto report = run(parse_scenario(doc));
  CHECK(report.task("representation")["verdict"] == "representation");
  CHECK(report.task("combinator")["verdict"] == "fitted");
  CHECK(report.task("combinator")["identified_rule"] == "affine_square");
  CHECK(report.task("associativity")["verdict"] == "fail");
  CHECK(report.task("associativity")["max_residual"].get<double>() > 0.1);
  CHECK(report.exit_code() == kExitNegativeVerdict);
}

TEST_CASE("witness verification accepts every fixture and catches tampering") {
  for (const auto& f : shipped_fixtures()) {
    auto report = run(parse_scenario(f.scenario));
    auto checks = verify_report(report.doc);
    CHECK(all_ok(checks));
  }

  auto report = run(parse_scenario(fixture_by_name("quadratic-counterexample").scenario));
  report.doc["tasks"]["representation"]["witness"]["second_state"]["a'"]["re"] = 1.0;
  auto checks = verify_report(report.doc);
  CHECK(!all_ok(checks));
}

TEST_CASE("cli seed overrides flow into the echoed scenario") {
  auto doc = fixture_by_name("quadratic-counterexample").scenario;
  doc["sampler"]["seed"] = 999;
  auto sc = parse_scenario(doc);
  CHECK(sc.sampler->seed == 999);
  auto report = run(sc);
  CHECK(report.doc["scenario"]["sampler"]["seed"] == 999);
}

