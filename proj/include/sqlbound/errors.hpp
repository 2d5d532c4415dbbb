#pragma once

#include <stdexcept>
#include <string>

namespace sqlbound {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int col)
    : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
      line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

// Unknown or ambiguous names, duplicate aliases, arity mismatches.
class ResolveError : public Error {
public:
  using Error::Error;
};

// Rejected query. ill_formed() separates broken SQL from SQL outside the fragment.
class Unsupported : public Error {
public:
  Unsupported(std::string feature, std::string location, bool ill_formed = false)
    : Error((ill_formed ? "ill-formed: " : "unsupported: ") + feature +
            (location.empty() ? "" : " (" + location + ")")),
      feature_(std::move(feature)), location_(std::move(location)),
      ill_formed_(ill_formed) {}
  const std::string& feature() const { return feature_; }
  const std::string& location() const { return location_; }
  bool ill_formed() const { return ill_formed_; }

private:
  std::string feature_;
  std::string location_;
  bool ill_formed_;
};

class EvalError : public Error {
public:
  using Error::Error;
};

// Raised when the enumeration cap is hit.
class Exhausted : public Error {
public:
  using Error::Error;
};

// Broken internal invariant, e.g. a counterexample the oracle rejects.
class InternalError : public Error {
public:
  using Error::Error;
};

} // namespace sqlbound
