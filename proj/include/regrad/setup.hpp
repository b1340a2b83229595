#ifndef REGRAD_SETUP_HPP
#define REGRAD_SETUP_HPP

#include <compare>
#include <memory>
#include <string>
#include <vector>

#include "regrad/errors.hpp"

namespace regrad {

// A single slit, identified by its label ("a", "a'", "b2", ...).
struct SlitId {
  std::string label;

  auto operator<=>(const SlitId&) const = default;
};

// Ordered, duplicate-free, non-empty set of open slits.
class Configuration {
public:
  explicit Configuration(std::vector<SlitId> slits);

  const std::vector<SlitId>& open() const { return open_; }
  std::size_t size() const { return open_.size(); }
  bool contains(const SlitId& id) const;

  bool operator==(const Configuration&) const = default;

private:
  std::vector<SlitId> open_;  // sorted by label, unique
};

// Parse tree of slit atoms joined by "v" (the join of two setups).
// Immutable; shared subtrees are fine.
class SetupExpr {
public:
  using Ptr = std::shared_ptr<const SetupExpr>;

  static Ptr atom(SlitId id);
  // Throws DuplicateSlitError if the operands share a slit.
  static Ptr join(Ptr left, Ptr right);

  bool is_atom() const { return !left_; }
  const SlitId& slit() const { return slit_; }
  const Ptr& left() const { return left_; }
  const Ptr& right() const { return right_; }

  // Leaf labels in left-to-right order.
  std::vector<SlitId> leaves() const;

private:
  SetupExpr() = default;
  SlitId slit_;     // valid when atom
  Ptr left_, right_;  // valid when join
};

bool equal(const SetupExpr& a, const SetupExpr& b);
inline bool equal(const SetupExpr::Ptr& a, const SetupExpr::Ptr& b) { return equal(*a, *b); }

// Grammar:  expr := term ("v" term)*   term := atom | "(" expr ")"
// "v" is left-associative; the Unicode join sign is accepted as a synonym.
// Atom labels are runs of letters, digits and apostrophes (other than a
// bare "v"). Whitespace is insignificant.
SetupExpr::Ptr parse_setup(const std::string& text);

// Pretty-print with the minimal parentheses needed to reparse to the same
// tree (right-nested joins are parenthesized, left-nested ones are not).
std::string render(const SetupExpr& expr);
inline std::string render(const SetupExpr::Ptr& expr) { return render(*expr); }

// Flatten an expression to its set of open slits. Association- and
// order-invariant by construction.
Configuration canonicalize(const SetupExpr& expr);
inline Configuration canonicalize(const SetupExpr::Ptr& expr) { return canonicalize(*expr); }

// All full binary trees over the given leaf sequence.
std::vector<SetupExpr::Ptr> association_trees(const std::vector<SlitId>& slits);

// All unordered pairs of distinct association trees over the same leaves.
// For three slits this is exactly the pair ((a v a') v a'', a v (a' v a'')).
// Throws TooFewSlits below 3.
std::vector<std::pair<SetupExpr::Ptr, SetupExpr::Ptr>> association_variants(
    const std::vector<SlitId>& slits);

}  // namespace regrad

#endif  // REGRAD_SETUP_HPP
