#ifndef REGRAD_FIXTURES_HPP
#define REGRAD_FIXTURES_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace regrad {

struct Fixture {
  std::string name;
  std::string description;
  nlohmann::json scenario;
};

const std::vector<Fixture>& shipped_fixtures();

// Lookup by name, with or without a trailing ".json". Throws Error when
// absent.
const Fixture& fixture_by_name(const std::string& name);

}  // namespace regrad

#endif  // REGRAD_FIXTURES_HPP
