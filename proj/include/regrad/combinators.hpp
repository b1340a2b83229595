#ifndef REGRAD_COMBINATORS_HPP
#define REGRAD_COMBINATORS_HPP

#include <optional>
#include <string>
#include <vector>

#include "regrad/theory.hpp"

namespace regrad {

// Built-in closed-form combinators, addressable by name in scenarios:
//   sum           S(x, y) = x + y
//   product       S(x, y) = x * y
//   blend         S(x, y) = x + y + x * y
//   affine_square S(x, y) = x + y^2   (not associative; refutation fodder)
const std::vector<CombinatorRule>& builtin_combinators();

CombinatorRule combinator_by_name(const std::string& name);  // throws Error on unknown name

// Best-matching built-in rule for a sampled table: the rule whose maximum
// |z - S(x, y)| over the entries is below `tol`, if any.
struct CombinatorEntry {
  Complex x, y, z;
};

std::optional<std::pair<CombinatorRule, double>> identify_combinator(
    const std::vector<CombinatorEntry>& entries, double tol = 1e-8);

}  // namespace regrad

#endif  // REGRAD_COMBINATORS_HPP
