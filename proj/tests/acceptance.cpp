// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured quantities.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>

#include "doctest.h"
#include "regrad/fixtures.hpp"
#include "regrad/functional.hpp"
#include "regrad/regraduation.hpp"
#include "regrad/report.hpp"
#include "regrad/verify.hpp"

using namespace regrad;
using nlohmann::json;

namespace {

const SlitId kA{"a"};
const SlitId kA1{"a'"};
const std::array<SlitId, 2> kPair{kA, kA1};

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void announce(int number, const std::string& name, bool pass, const std::string& detail) {
  std::cout << "[acceptance " << number << "] " << name << ": " << (pass ? "PASS" : "FAIL")
            << " (" << detail << ")" << std::endl;
}

Report run_fixture(const std::string& name) {
  return run(parse_scenario(fixture_by_name(name).scenario));
}

}  // namespace

TEST_CASE("criterion 1: quadratic counterexample fails representation") {
  Stopwatch timer;
  auto report = run_fixture("quadratic-counterexample");
  double elapsed = timer.seconds();

  const json& rep = report.task("representation");
  bool verdict_ok = rep["verdict"] == "not_representation";
  REQUIRE(rep.contains("witness"));
  const json& w = rep["witness"];

  auto c = [](const json& j) { return complex_from_json(j); };
  bool states_ok = c(w["first_state"]["a"]) == Complex{1.0, 0.0} &&
                   c(w["first_state"]["a'"]) == Complex{1.0, 0.0} &&
                   c(w["second_state"]["a"]) == Complex{1.0, 0.0} &&
                   c(w["second_state"]["a'"]) == Complex{-1.0, 0.0};
  bool per_slit_ok = std::abs(c(w["phi_a"][0]) - Complex{1.0, 0.0}) <= 1e-12 &&
                     std::abs(c(w["phi_a"][1]) - Complex{1.0, 0.0}) <= 1e-12 &&
                     std::abs(c(w["phi_b"][0]) - Complex{1.0, 0.0}) <= 1e-12 &&
                     std::abs(c(w["phi_b"][1]) - Complex{1.0, 0.0}) <= 1e-12;
  bool joint_ok = std::abs(c(w["phi_joint"][0]) - Complex{4.0, 0.0}) <= 1e-12 &&
                  std::abs(c(w["phi_joint"][1]) - Complex{0.0, 0.0}) <= 1e-12;
  bool time_ok = elapsed < 1.0;

  CHECK(verdict_ok);
  CHECK(states_ok);
  CHECK(per_slit_ok);
  CHECK(joint_ok);
  CHECK(time_ok);
  CHECK(report.exit_code() == kExitNegativeVerdict);
  announce(1, "quadratic representation failure",
           verdict_ok && states_ok && per_slit_ok && joint_ok && time_ok,
           "witness (1,1) vs (1,-1), joint phi 4 vs 0, " + std::to_string(elapsed) + " s");
}

TEST_CASE("criterion 2: triviality certificate on the alpha grid") {
  Stopwatch timer;
  std::vector<WaveState> states;
  for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
    states.push_back(WaveState::pair(kA, kA1, {alpha, 0.0}, {alpha, 0.0}));
    states.push_back(WaveState::pair(kA, kA1, {alpha, 0.0}, {-alpha, 0.0}));
  }
  auto cs = build_constraints(Theory::quadratic(), states, kPair);
  auto result = solve_constraints(cs, Complex{1.0, 0.0});
  double elapsed = timer.seconds();

  bool trivial_ok = result.status == RegraduationResult::Status::Trivial;
  bool constrained_ok = result.constrained_residual > 1e-3;
  bool unconstrained_ok = result.unconstrained_sup_norm <= 1e-8;
  bool time_ok = elapsed < 1.0;

  CHECK(trivial_ok);
  CHECK(constrained_ok);
  CHECK(unconstrained_ok);
  CHECK(time_ok);
  announce(2, "triviality certificate",
           trivial_ok && constrained_ok && unconstrained_ok && time_ok,
           "constrained residual " + std::to_string(result.constrained_residual) +
               " > 1e-3, unconstrained sup-norm " +
               std::to_string(result.unconstrained_sup_norm) + " <= 1e-8");
}

TEST_CASE("criterion 3: linear baseline passes the whole pipeline") {
  Stopwatch timer;
  auto report = run_fixture("linear-baseline");
  double elapsed = timer.seconds();

  bool rep_ok = report.task("representation")["verdict"] == "representation" &&
                report.task("representation")["samples_used"] == 10000;

  double worst_fit = 0.0;
  for (const auto& e : report.task("combinator")["entries"]) {
    Complex x = complex_from_json(e["x"]), y = complex_from_json(e["y"]),
            z = complex_from_json(e["z"]);
    worst_fit = std::max(worst_fit, std::abs(z - (x + y)));
  }
  bool fit_ok = report.task("combinator")["verdict"] == "fitted" && worst_fit <= 1e-10;

  const json& assoc = report.task("associativity");
  bool assoc_ok = assoc["verdict"] == "pass" && assoc["grid_size"] == 1000 &&
                  assoc["max_residual"].get<double>() <= 1e-12;

  const json& regr = report.task("regraduation");
  const json& add = report.task("additivity");
  bool regrad_ok = regr["verdict"] == "found";
  bool additivity_ok = add["verdict"] == "pass" && add["count"] == 1000 &&
                       add["max_residual"].get<double>() <= 1e-10;
  bool time_ok = elapsed < 10.0;

  CHECK(rep_ok);
  CHECK(fit_ok);
  CHECK(assoc_ok);
  CHECK(regrad_ok);
  CHECK(additivity_ok);
  CHECK(time_ok);
  CHECK(report.exit_code() == kExitOk);
  announce(3, "linear baseline",
           rep_ok && fit_ok && assoc_ok && regrad_ok && additivity_ok && time_ok,
           "fit residual " + std::to_string(worst_fit) + ", assoc residual " +
               std::to_string(assoc["max_residual"].get<double>()) + ", additivity residual " +
               std::to_string(add["max_residual"].get<double>()) + ", " +
               std::to_string(elapsed) + " s");
}

TEST_CASE("criterion 4: combinator regraduation oracles") {
  // S = x * y on [0.5, 2] regraduates to a multiple of log t
  auto product = regraduate_combinator(combinator_by_name("product"), 0.5, 2.0, 1025);
  REQUIRE(product.status == RegraduationResult::Status::Found);
  double num = 0.0, den = 0.0;
  for (const auto& s : product.table) {
    double lt = std::log(s.point.real());
    num += s.value * lt;
    den += lt * lt;
  }
  double c_log = num / den;
  double worst_product = 0.0;
  for (const auto& s : product.table)
    worst_product = std::max(worst_product, std::abs(s.value - c_log * std::log(s.point.real())));
  bool product_ok = worst_product <= 1e-5 && product.additivity_residual <= 1e-6;

  // independent identity check: equal steps for equal ratios
  auto xi_p = to_real_table(product);
  double pattern = std::abs((xi_p(2.0) - xi_p(1.0)) - (xi_p(1.0) - xi_p(0.5)));
  bool pattern_ok = pattern <= 1e-5;

  // S = x + y + xy on [0.1, 1] regraduates to a multiple of log(1 + t)
  auto blend = regraduate_combinator(combinator_by_name("blend"), 0.1, 1.0, 1025);
  REQUIRE(blend.status == RegraduationResult::Status::Found);
  num = den = 0.0;
  for (const auto& s : blend.table) {
    double lt = std::log1p(s.point.real());
    num += s.value * lt;
    den += lt * lt;
  }
  double c_log1p = num / den;
  double worst_blend = 0.0;
  for (const auto& s : blend.table)
    worst_blend = std::max(worst_blend, std::abs(s.value - c_log1p * std::log1p(s.point.real())));
  bool blend_ok = worst_blend <= 1e-5 && blend.additivity_residual <= 1e-6;

  // independent brute-force identity: log1p(S(x, y)) = log1p(x) + log1p(y)
  double identity_worst = 0.0;
  for (int i = 0; i <= 40; ++i)
    for (int j = 0; j <= 40; ++j) {
      double x = 0.1 + 0.9 * i / 40.0, y = 0.1 + 0.9 * j / 40.0;
      double s = x + y + x * y;
      identity_worst =
          std::max(identity_worst, std::abs(std::log1p(s) - std::log1p(x) - std::log1p(y)));
    }
  bool identity_ok = identity_worst <= 1e-12;

  CHECK(product_ok);
  CHECK(pattern_ok);
  CHECK(blend_ok);
  CHECK(identity_ok);
  announce(4, "combinator regraduation oracles",
           product_ok && pattern_ok && blend_ok && identity_ok,
           "product->log within " + std::to_string(worst_product) + ", blend->log1p within " +
               std::to_string(worst_blend));
}

TEST_CASE("criterion 5: associativity refutation with a concrete worst triple") {
  std::vector<double> pts{-1.0, -0.5, 0.0, 0.5, 1.0};
  std::vector<std::array<Complex, 3>> triples;
  for (double x : pts)
    for (double y : pts)
      for (double z : pts) triples.push_back({Complex{x, 0.0}, Complex{y, 0.0}, Complex{z, 0.0}});
  auto report = check_associativity(combinator_by_name("affine_square"), triples, 1e-9);

  bool residual_ok = report.max_residual > 0.1;

  // direct recomputation of both sides at the worst triple
  auto s = [](double x, double y) { return x + y * y; };
  double x = report.worst_triple[0].real(), y = report.worst_triple[1].real(),
         z = report.worst_triple[2].real();
  double lhs = s(s(x, y), z), rhs = s(x, s(y, z));
  bool recompute_ok = std::abs(std::abs(lhs - rhs) - report.max_residual) <= 1e-12;

  CHECK(residual_ok);
  CHECK(recompute_ok);
  CHECK(!report.pass);
  announce(5, "associativity refutation", residual_ok && recompute_ok && !report.pass,
           "max residual " + std::to_string(report.max_residual) + " at (" + std::to_string(x) +
               ", " + std::to_string(y) + ", " + std::to_string(z) + ")");
}

TEST_CASE("criterion 6: association invariance over random setups") {
  std::mt19937 rng(20250810);
  CombinatorRule sum = combinator_by_name("sum");
  Theory lin = Theory::linear();
  bool all_equal = true;
  bool all_phi_close = true;
  for (int round = 0; round < 200; ++round) {
    std::uniform_int_distribution<std::size_t> size_pick(3, 6);
    std::size_t n = size_pick(rng);
    std::vector<SlitId> slits;
    for (std::size_t i = 0; i < n; ++i) slits.push_back(SlitId{"s" + std::to_string(i)});

    SamplerSpec sampler{ComplexGaussian{1.0}, static_cast<std::uint64_t>(round + 1)};
    WaveState state = sample_wavestate(sampler, slits, 0);
    Complex flat = phi(lin, state, Configuration(slits));

    for (const auto& [t1, t2] : association_variants(slits)) {
      if (!(canonicalize(t1) == Configuration(slits)) ||
          !(canonicalize(t2) == Configuration(slits)))
        all_equal = false;
      double scale = std::max(1.0, std::abs(flat));
      if (std::abs(fold_phi(lin, state, *t1, sum) - flat) > 1e-12 * scale ||
          std::abs(fold_phi(lin, state, *t2, sum) - flat) > 1e-12 * scale)
        all_phi_close = false;
    }
  }
  CHECK(all_equal);
  CHECK(all_phi_close);
  announce(6, "association invariance", all_equal && all_phi_close,
           "200 random setups over 3..6 slits, every bracketing agrees to 1e-12");
}

TEST_CASE("criterion 7: fixture runs are deterministic") {
  bool all_identical = true;
  for (const auto& f : shipped_fixtures()) {
    auto r1 = run(parse_scenario(f.scenario));
    auto r2 = run(parse_scenario(f.scenario));
    r1.doc.erase("timing");
    r2.doc.erase("timing");
    std::string d1 = render(Report{r1.doc}, "json");
    std::string d2 = render(Report{r2.doc}, "json");
    if (d1 != d2) all_identical = false;
    CHECK(d1 == d2);
  }
  announce(7, "byte-identical reports", all_identical,
           "all four fixtures, timing fields excluded");
}

TEST_CASE("criterion 8: witness soundness across the fixture suite") {
  bool all_verified = true;
  std::size_t total_checks = 0;
  for (const auto& f : shipped_fixtures()) {
    auto report = run(parse_scenario(f.scenario));
    auto checks = verify_report(report.doc);
    total_checks += checks.size();
    for (const auto& c : checks) {
      CHECK_MESSAGE(c.ok, f.name, ": ", c.description, " -- ", c.detail);
      if (!c.ok) all_verified = false;
    }
  }
  bool any = total_checks > 0;
  CHECK(any);
  announce(8, "witness soundness", all_verified && any,
           std::to_string(total_checks) + " checks across the fixture suite, zero false witnesses");
}
