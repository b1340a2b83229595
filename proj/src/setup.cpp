#include "regrad/setup.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace regrad {

Configuration::Configuration(std::vector<SlitId> slits) : open_(std::move(slits)) {
  if (open_.empty()) throw Error("configuration must have at least one open slit");
  std::sort(open_.begin(), open_.end());
  for (std::size_t i = 1; i < open_.size(); ++i)
    if (open_[i] == open_[i - 1]) throw DuplicateSlitError(open_[i].label);
}

bool Configuration::contains(const SlitId& id) const {
  return std::binary_search(open_.begin(), open_.end(), id);
}

SetupExpr::Ptr SetupExpr::atom(SlitId id) {
  auto e = std::shared_ptr<SetupExpr>(new SetupExpr());
  e->slit_ = std::move(id);
  return e;
}

SetupExpr::Ptr SetupExpr::join(Ptr left, Ptr right) {
  auto ll = left->leaves();
  auto rl = right->leaves();
  std::set<SlitId> seen(ll.begin(), ll.end());
  if (seen.size() != ll.size()) {
    std::sort(ll.begin(), ll.end());
    auto dup = std::adjacent_find(ll.begin(), ll.end());
    throw DuplicateSlitError(dup->label);
  }
  for (const auto& id : rl)
    if (!seen.insert(id).second) throw DuplicateSlitError(id.label);
  auto e = std::shared_ptr<SetupExpr>(new SetupExpr());
  e->left_ = std::move(left);
  e->right_ = std::move(right);
  return e;
}

std::vector<SlitId> SetupExpr::leaves() const {
  if (is_atom()) return {slit_};
  auto out = left_->leaves();
  auto r = right_->leaves();
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

bool equal(const SetupExpr& a, const SetupExpr& b) {
  if (a.is_atom() != b.is_atom()) return false;
  if (a.is_atom()) return a.slit() == b.slit();
  return equal(*a.left(), *b.left()) && equal(*a.right(), *b.right());
}

namespace {

struct Token {
  enum class Kind { Atom, Join, LParen, RParen, End };
  Kind kind;
  std::string text;
  std::size_t position;
};

bool is_label_char(unsigned char c) { return std::isalnum(c) || c == '\''; }

// The Unicode join sign, UTF-8 encoded.
constexpr char kJoinUtf8[] = "\xe2\x88\xa8";

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = text[i];
    if (std::isspace(c)) {
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::LParen, "(", i});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::Kind::RParen, ")", i});
      ++i;
    } else if (text.compare(i, 3, kJoinUtf8) == 0) {
      out.push_back({Token::Kind::Join, "v", i});
      i += 3;
    } else if (is_label_char(c)) {
      std::size_t start = i;
      while (i < text.size() && is_label_char(text[i])) ++i;
      std::string word = text.substr(start, i - start);
      if (word == "v")
        out.push_back({Token::Kind::Join, word, start});
      else
        out.push_back({Token::Kind::Atom, word, start});
    } else {
      throw SyntaxError(i, "slit label, 'v', '(' or ')'", "'" + std::string(1, text[i]) + "'");
    }
  }
  out.push_back({Token::Kind::End, "<end>", text.size()});
  return out;
}

class Parser {
public:
  explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

  SetupExpr::Ptr parse() {
    auto expr = parse_expr();
    expect(Token::Kind::End, "'v' or end of input");
    return expr;
  }

private:
  SetupExpr::Ptr parse_expr() {
    auto lhs = parse_term();
    while (peek().kind == Token::Kind::Join) {
      advance();
      lhs = SetupExpr::join(lhs, parse_term());
    }
    return lhs;
  }

  SetupExpr::Ptr parse_term() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Atom) {
      advance();
      return SetupExpr::atom(SlitId{t.text});
    }
    if (t.kind == Token::Kind::LParen) {
      advance();
      auto inner = parse_expr();
      expect(Token::Kind::RParen, "')'");
      return inner;
    }
    throw SyntaxError(t.position, "slit label or '('", describe(t));
  }

  static std::string describe(const Token& t) {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

  const Token& peek() const { return tokens_[pos_]; }
  void advance() { ++pos_; }
  void expect(Token::Kind k, const std::string& what) {
    if (peek().kind != k) throw SyntaxError(peek().position, what, describe(peek()));
    advance();
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

SetupExpr::Ptr parse_setup(const std::string& text) { return Parser(text).parse(); }

std::string render(const SetupExpr& expr) {
  if (expr.is_atom()) return expr.slit().label;
  std::string lhs = render(*expr.left());
  std::string rhs = render(*expr.right());
  if (!expr.right()->is_atom()) rhs = "(" + rhs + ")";
  return lhs + " v " + rhs;
}

Configuration canonicalize(const SetupExpr& expr) { return Configuration(expr.leaves()); }

std::vector<SetupExpr::Ptr> association_trees(const std::vector<SlitId>& slits) {
  {
    std::set<SlitId> seen(slits.begin(), slits.end());
    if (seen.size() != slits.size()) {
      auto copy = slits;
      std::sort(copy.begin(), copy.end());
      throw DuplicateSlitError(std::adjacent_find(copy.begin(), copy.end())->label);
    }
  }
  // trees over slits[lo, hi)
  std::function<std::vector<SetupExpr::Ptr>(std::size_t, std::size_t)> build =
      [&](std::size_t lo, std::size_t hi) -> std::vector<SetupExpr::Ptr> {
    std::vector<SetupExpr::Ptr> out;
    if (hi - lo == 1) {
      out.push_back(SetupExpr::atom(slits[lo]));
      return out;
    }
    for (std::size_t mid = lo + 1; mid < hi; ++mid)
      for (const auto& l : build(lo, mid))
        for (const auto& r : build(mid, hi)) out.push_back(SetupExpr::join(l, r));
    return out;
  };
  if (slits.empty()) return {};
  return build(0, slits.size());
}

std::vector<std::pair<SetupExpr::Ptr, SetupExpr::Ptr>> association_variants(
    const std::vector<SlitId>& slits) {
  if (slits.size() < 3) throw TooFewSlits(slits.size());
  auto trees = association_trees(slits);
  std::vector<std::pair<SetupExpr::Ptr, SetupExpr::Ptr>> pairs;
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = i + 1; j < trees.size(); ++j) pairs.emplace_back(trees[i], trees[j]);
  return pairs;
}

}  // namespace regrad
