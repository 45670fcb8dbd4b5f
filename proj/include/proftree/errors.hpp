#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace proftree {

// Base class for everything thrown by the library.  Each subclass carries a
// stable code string so the C API and the CLI can map errors without parsing
// the human-readable message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

struct ParseError : Error {
  // line/col are 1-based positions into the offending source text.
  ParseError(int line, int col, const std::string& what)
      : Error("parse", "parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + what),
        line(line), col(col) {}
  int line, col;
};

struct TypeError : Error {
  TypeError(const std::string& where, const std::string& expected,
            const std::string& found)
      : Error("type", "type error at " + where + ": expected " + expected +
                          ", found " + found) {}
  explicit TypeError(const std::string& msg) : Error("type", msg) {}
};

struct ScopeError : Error {
  explicit ScopeError(const std::string& msg) : Error("scope", msg) {}
};

struct ArityMismatch : Error {
  explicit ArityMismatch(const std::string& msg) : Error("arity", msg) {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& msg) : Error("index", msg) {}
};

// Raised when an operation would enumerate or tabulate past the configured
// guard.  Callers that can degrade (e.g. equality checks) catch this and
// report "inconclusive" instead of guessing.
struct GuardExceeded : Error {
  GuardExceeded(std::uint64_t requested, std::uint64_t guard)
      : Error("guard", "enumeration of " + std::to_string(requested) +
                           " elements exceeds guard " + std::to_string(guard)),
        requested(requested), guard(guard) {}
  std::uint64_t requested, guard;
};

struct ActionLawViolation : Error {
  ActionLawViolation(const std::string& law, const std::string& witness)
      : Error("action-law", "monoid-action law violated (" + law + "): " + witness),
        law(law) {}
  std::string law;
};

struct NotChurchTyped : Error {
  explicit NotChurchTyped(const std::string& msg) : Error("not-church", msg) {}
};

struct MissingRosterMember : Error {
  explicit MissingRosterMember(const std::string& msg) : Error("roster", msg) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

struct UnsupportedOperation : Error {
  explicit UnsupportedOperation(const std::string& msg) : Error("unsupported", msg) {}
};

}  // namespace proftree
