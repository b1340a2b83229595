#ifndef REGRAD_VERIFY_HPP
#define REGRAD_VERIFY_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace regrad {

struct WitnessCheck {
  std::string task;
  std::string description;
  bool ok = false;
  std::string detail;
};

// Re-validate every witness-like claim in a report from scratch: the
// representation witness by direct phi evaluation, associativity worst
// triples by recomputing both sides, trivial certificates by re-solving
// the reconstructed constraint system, and found xi tables against their
// equations. Returns one entry per check; an empty list means the report
// carried nothing checkable.
std::vector<WitnessCheck> verify_report(const nlohmann::json& report);

inline bool all_ok(const std::vector<WitnessCheck>& checks) {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

}  // namespace regrad

#endif  // REGRAD_VERIFY_HPP
