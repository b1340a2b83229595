#include "regrad/fixtures.hpp"

#include "regrad/errors.hpp"

namespace regrad {

using nlohmann::json;

namespace {

json quadratic_counterexample() {
  return json::parse(R"({
    "name": "quadratic-counterexample",
    "slits": ["a", "a'"],
    "theory": {"kind": "quadratic"},
    "sampler": {"kind": "complex-gaussian", "sigma": 1.0, "seed": 20250810},
    "tolerances": {"representation": 1e-9},
    "samples": {"representation": 10000},
    "probe_alphas": [1.0, 0.25, 0.5, 2.0],
    "anchor": 1.0,
    "tasks": ["representation", "combinator", "associativity", "regraduation", "additivity"]
  })");
}

json linear_baseline() {
  return json::parse(R"({
    "name": "linear-baseline",
    "slits": ["a", "a'"],
    "theory": {"kind": "linear"},
    "sampler": {"kind": "grid",
                "points": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
                "seed": 42},
    "tolerances": {"representation": 1e-9, "key": 1e-6, "associativity": 1e-12,
                   "feasibility": 1e-10, "additivity": 1e-10},
    "samples": {"representation": 10000, "fit": 2000, "associativity_triples": 1000,
                "regraduation": 200, "additivity": 1000},
    "anchor": 1.0,
    "tasks": ["representation", "combinator", "associativity", "regraduation", "additivity"]
  })");
}

json product_combinator() {
  return json::parse(R"({
    "name": "product-combinator",
    "slits": ["a", "a'"],
    "combinator": {"rule": "product", "domain": [0.5, 2.0], "grid_points": 1025},
    "sampler": {"kind": "real-uniform", "lo": 0.75, "hi": 1.3, "seed": 7},
    "tolerances": {"associativity": 1e-12, "feasibility": 1e-6, "additivity": 1e-5},
    "samples": {"associativity_triples": 1000, "additivity": 1000},
    "tasks": ["associativity", "regraduation", "additivity"]
  })");
}

json nonassociative_combinator() {
  return json::parse(R"({
    "name": "nonassociative-combinator",
    "slits": ["a", "a'"],
    "combinator": {"rule": "affine_square", "grid": [-1.0, -0.5, 0.0, 0.5, 1.0]},
    "tolerances": {"associativity": 1e-9},
    "tasks": ["associativity"]
  })");
}

}  // namespace

const std::vector<Fixture>& shipped_fixtures() {
  static const std::vector<Fixture> fixtures = {
      {"quadratic-counterexample",
       "quadratic two-slit theory: representation fails on the sign-flip witness and the "
       "constraint system certifies xi = 0",
       quadratic_counterexample()},
      {"linear-baseline",
       "linear theory over a coefficient grid: representation holds, S = x + y, xi is the "
       "identity up to scale",
       linear_baseline()},
      {"product-combinator",
       "closed-form S = x * y on [0.5, 2]: associative, regraduates to a logarithmic xi",
       product_combinator()},
      {"nonassociative-combinator",
       "closed-form S = x + y^2 on a coarse grid: the associativity constraint fails with an "
       "explicit worst triple",
       nonassociative_combinator()},
  };
  return fixtures;
}

const Fixture& fixture_by_name(const std::string& name) {
  std::string stem = name;
  if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json")
    stem = stem.substr(0, stem.size() - 5);
  for (const auto& f : shipped_fixtures())
    if (f.name == stem) return f;
  throw Error("no shipped fixture named '" + name + "'");
}

}  // namespace regrad
