#include "regrad/combinators.hpp"

#include <cmath>

namespace regrad {

const std::vector<CombinatorRule>& builtin_combinators() {
  static const std::vector<CombinatorRule> rules = {
      {"sum", [](Complex x, Complex y) { return x + y; }},
      {"product", [](Complex x, Complex y) { return x * y; }},
      {"blend", [](Complex x, Complex y) { return x + y + x * y; }},
      {"affine_square", [](Complex x, Complex y) { return x + y * y; }},
  };
  return rules;
}

CombinatorRule combinator_by_name(const std::string& name) {
  for (const auto& r : builtin_combinators())
    if (r.name == name) return r;
  throw Error("unknown combinator rule '" + name + "'");
}

std::optional<std::pair<CombinatorRule, double>> identify_combinator(
    const std::vector<CombinatorEntry>& entries, double tol) {
  if (entries.empty()) return std::nullopt;
  for (const auto& rule : builtin_combinators()) {
    double worst = 0.0;
    for (const auto& e : entries) worst = std::max(worst, std::abs(e.z - rule.apply(e.x, e.y)));
    if (worst <= tol) return std::make_pair(rule, worst);
  }
  return std::nullopt;
}

}  // namespace regrad
