#ifndef REGRAD_SCENARIO_HPP
#define REGRAD_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "regrad/combinators.hpp"
#include "regrad/sampling.hpp"
#include "regrad/theory.hpp"

namespace regrad {

// Closed-form combinator block: drives the associativity check and, when a
// domain is given, combinator-mode regraduation.
struct CombinatorSpec {
  std::string rule;
  std::optional<std::pair<double, double>> domain;  // [lo, hi] for regraduation
  std::size_t grid_points = 1025;                   // xi knot count
  std::vector<double> assoc_grid;                   // explicit triple grid (else random triples)
};

struct Scenario {
  std::string name;
  std::vector<SlitId> slits;
  std::optional<Theory> theory;
  std::optional<SamplerSpec> sampler;
  std::map<std::string, double> tolerances;      // defaults filled
  std::map<std::string, std::size_t> samples;    // defaults filled
  std::vector<double> probe_alphas;
  Complex anchor{1.0, 0.0};
  std::optional<CombinatorSpec> combinator;
  std::optional<std::pair<double, double>> additivity_range;
  std::vector<std::string> tasks;
  nlohmann::json normalized;  // defaults-filled echo; reports embed this

  double tol(const std::string& name) const { return tolerances.at(name); }
  std::size_t sample_count(const std::string& name) const { return samples.at(name); }
  std::array<SlitId, 2> slit_pair() const { return {slits.at(0), slits.at(1)}; }
};

// Parse and validate a scenario document, filling documented defaults.
// Throws SchemaError / DependencyError.
Scenario parse_scenario(const nlohmann::json& doc);

// Read a scenario file. Throws ParseError on malformed JSON (with the
// position nlohmann reports), then validates as parse_scenario.
Scenario load_scenario(const std::string& path);

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json state_to_json(const WaveState& state);
WaveState state_from_json(const nlohmann::json& j);

}  // namespace regrad

#endif  // REGRAD_SCENARIO_HPP
