#include <algorithm>
#include <random>

#include "doctest.h"
#include "regrad/setup.hpp"

using namespace regrad;

namespace {

const SlitId kA{"a"};
const SlitId kA1{"a'"};
const SlitId kA2{"a''"};

// Independent count of full binary trees over n+1 leaves: the Catalan
// number via the convolution recurrence C_{k+1} = sum_i C_i * C_{k-i}.
unsigned long long catalan(unsigned n) {
  std::vector<unsigned long long> c{1};
  for (unsigned k = 1; k <= n; ++k) {
    unsigned long long sum = 0;
    for (unsigned i = 0; i < k; ++i) sum += c[i] * c[k - 1 - i];
    c.push_back(sum);
  }
  return c[n];
}

std::vector<SlitId> make_slits(std::size_t count) {
  std::vector<SlitId> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(SlitId{"s" + std::to_string(i)});
  return out;
}

SetupExpr::Ptr random_tree(const std::vector<SlitId>& slits, std::size_t lo, std::size_t hi,
                           std::mt19937& rng) {
  if (hi - lo == 1) return SetupExpr::atom(slits[lo]);
  std::uniform_int_distribution<std::size_t> pick(lo + 1, hi - 1);
  std::size_t mid = pick(rng);
  return SetupExpr::join(random_tree(slits, lo, mid, rng), random_tree(slits, mid, hi, rng));
}

SetupExpr::Ptr mirror(const SetupExpr::Ptr& e) {
  if (e->is_atom()) return e;
  return SetupExpr::join(mirror(e->right()), mirror(e->left()));
}

}  // namespace

TEST_CASE("parse joins two atoms") {
  auto e = parse_setup("a v a'");
  REQUIRE(!e->is_atom());
  CHECK(e->left()->is_atom());
  CHECK(e->left()->slit() == kA);
  CHECK(e->right()->slit() == kA1);
}

TEST_CASE("parse respects explicit association") {
  auto left = parse_setup("(a v a') v a''");
  REQUIRE(!left->is_atom());
  CHECK(!left->left()->is_atom());
  CHECK(left->right()->slit() == kA2);

  auto right = parse_setup("a v (a' v a'')");
  REQUIRE(!right->is_atom());
  CHECK(right->left()->slit() == kA);
  CHECK(!right->right()->is_atom());
  CHECK(!equal(left, right));
}

TEST_CASE("bare join chain is left-associative") {
  CHECK(equal(parse_setup("a v a' v a''"), parse_setup("(a v a') v a''")));
}

TEST_CASE("unicode join sign and whitespace are accepted") {
  CHECK(equal(parse_setup("a ∨ a'"), parse_setup("a v a'")));
  CHECK(equal(parse_setup("  (a)v(a')  "), parse_setup("a v a'")));
  CHECK(equal(parse_setup("((a v a'))"), parse_setup("a v a'")));
}

TEST_CASE("syntax errors carry position and expectation") {
  CHECK_THROWS_AS(parse_setup(""), SyntaxError);
  try {
    parse_setup("a v");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 3);
  }
  try {
    parse_setup("a a'");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 2);
  }
  CHECK_THROWS_AS(parse_setup("(a v a'"), SyntaxError);
  CHECK_THROWS_AS(parse_setup("a v ) a'"), SyntaxError);
  CHECK_THROWS_AS(parse_setup("a + a'"), SyntaxError);
}

TEST_CASE("repeated slit is rejected") {
  CHECK_THROWS_AS(parse_setup("a v a"), DuplicateSlitError);
  CHECK_THROWS_AS(parse_setup("(a v a') v a"), DuplicateSlitError);
}

TEST_CASE("canonicalize flattens any bracketing to the sorted slit set") {
  Configuration expected({kA, kA1, kA2});
  CHECK(canonicalize(parse_setup("(a v a') v a''")) == expected);
  CHECK(canonicalize(parse_setup("a v (a' v a'')")) == expected);
  CHECK(canonicalize(parse_setup("a'' v a' v a")) == expected);
  CHECK(canonicalize(parse_setup("a")) == Configuration({kA}));
}

TEST_CASE("three slits give exactly the two association trees") {
  auto pairs = association_variants({kA, kA1, kA2});
  REQUIRE(pairs.size() == 1);
  auto left = parse_setup("(a v a') v a''");
  auto right = parse_setup("a v (a' v a'')");
  bool forward = equal(pairs[0].first, left) && equal(pairs[0].second, right);
  bool backward = equal(pairs[0].first, right) && equal(pairs[0].second, left);
  CHECK((forward || backward));
}

TEST_CASE("association tree counts match the Catalan numbers") {
  // catalan: 1, 1, 2, 5, 14, 42 for n = 1..6 leaves
  for (std::size_t n = 1; n <= 6; ++n) {
    auto trees = association_trees(make_slits(n));
    CHECK(trees.size() == catalan(static_cast<unsigned>(n) - 1));
  }
  auto pairs = association_variants(make_slits(4));
  CHECK(pairs.size() == 10);  // 5 trees, all unordered pairs
}

TEST_CASE("too few slits for association variants") {
  CHECK_THROWS_AS(association_variants({kA, kA1}), TooFewSlits);
  CHECK_THROWS_AS(association_variants({}), TooFewSlits);
}

TEST_CASE("every association variant canonicalizes identically") {
  std::mt19937 rng(1234);
  for (int round = 0; round < 40; ++round) {
    std::uniform_int_distribution<std::size_t> size_pick(3, 6);
    auto slits = make_slits(size_pick(rng));
    auto pairs = association_variants(slits);
    Configuration expected(slits);
    for (const auto& [t1, t2] : pairs) {
      CHECK(canonicalize(t1) == expected);
      CHECK(canonicalize(t2) == expected);
    }
  }
}

TEST_CASE("render round-trips through the parser") {
  CHECK(render(parse_setup("(a v a') v a''")) == "a v a' v a''");
  CHECK(render(parse_setup("a v (a' v a'')")) == "a v (a' v a'')");
  std::mt19937 rng(99);
  for (int round = 0; round < 60; ++round) {
    std::uniform_int_distribution<std::size_t> size_pick(1, 7);
    auto slits = make_slits(size_pick(rng));
    auto tree = random_tree(slits, 0, slits.size(), rng);
    CHECK(equal(parse_setup(render(tree)), tree));
  }
}

TEST_CASE("canonicalize ignores join child order") {
  std::mt19937 rng(7);
  for (int round = 0; round < 40; ++round) {
    std::uniform_int_distribution<std::size_t> size_pick(2, 6);
    auto slits = make_slits(size_pick(rng));
    auto tree = random_tree(slits, 0, slits.size(), rng);
    CHECK(canonicalize(tree) == canonicalize(mirror(tree)));
  }
}
