#ifndef REGRAD_ERRORS_HPP
#define REGRAD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regrad {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- setup algebra ---

class SyntaxError : public Error {
public:
  SyntaxError(std::size_t position, const std::string& expected, const std::string& found)
      : Error("syntax error at position " + std::to_string(position) + ": expected " + expected +
              ", found " + found),
        position(position), expected(expected), found(found) {}
  std::size_t position;
  std::string expected;
  std::string found;
};

class DuplicateSlitError : public Error {
public:
  explicit DuplicateSlitError(const std::string& label)
      : Error("slit '" + label + "' appears more than once"), label(label) {}
  std::string label;
};

class TooFewSlits : public Error {
public:
  explicit TooFewSlits(std::size_t count)
      : Error("association variants need at least 3 slits, got " + std::to_string(count)) {}
};

// --- theory engine ---

class UnknownSlit : public Error {
public:
  explicit UnknownSlit(const std::string& label)
      : Error("configuration references slit '" + label + "' absent from the state"), label(label) {}
  std::string label;
};

class TableMiss : public Error {
public:
  explicit TableMiss(const std::string& key_desc)
      : Error("user table has no entry for " + key_desc) {}
};

class TooManySlits : public Error {
public:
  TooManySlits(std::size_t count, std::size_t cap)
      : Error("full assignment over " + std::to_string(count) + " slits exceeds the cap of " +
              std::to_string(cap)) {}
};

class BadDistribution : public Error {
public:
  explicit BadDistribution(const std::string& why) : Error("bad sampling distribution: " + why) {}
};

// --- functional analysis ---

class BadTolerance : public Error {
public:
  explicit BadTolerance(double tol)
      : Error("tolerance must be positive, got " + std::to_string(tol)) {}
};

class NonFunctional : public Error {
public:
  explicit NonFunctional(const std::string& detail)
      : Error("combinator keys collide with disagreeing values: " + detail) {}
};

class EvaluationGap : public Error {
public:
  explicit EvaluationGap(const std::string& where)
      : Error("combinator table cannot cover " + where) {}
};

// --- regraduation ---

class SingularSystem : public Error {
public:
  explicit SingularSystem(const std::string& why) : Error("constraint system is singular: " + why) {}
};

class BadAnchor : public Error {
public:
  explicit BadAnchor(const std::string& why) : Error("bad regraduation anchor: " + why) {}
};

class NotAssociative : public Error {
public:
  explicit NotAssociative(const std::string& detail)
      : Error("combinator is not associative: " + detail) {}
};

class NonMonotone : public Error {
public:
  explicit NonMonotone(const std::string& detail)
      : Error("combinator is not strictly increasing: " + detail) {}
};

class DomainEscape : public Error {
public:
  explicit DomainEscape(const std::string& detail)
      : Error("phi value escapes the xi table domain: " + detail) {}
};

// --- scenario / report ---

class ParseError : public Error {
public:
  explicit ParseError(const std::string& detail) : Error("scenario parse error: " + detail) {}
};

class SchemaError : public Error {
public:
  SchemaError(const std::string& field, const std::string& reason)
      : Error("scenario schema error in '" + field + "': " + reason), field(field) {}
  std::string field;
};

class DependencyError : public Error {
public:
  explicit DependencyError(const std::string& detail)
      : Error("task dependency violation: " + detail) {}
};

}  // namespace regrad

#endif  // REGRAD_ERRORS_HPP
