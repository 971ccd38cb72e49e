#pragma once

#include <stdexcept>
#include <string>

namespace endure {

// Base class for everything this library throws on purpose.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad value or violated precondition on an input (caller mistake).
struct domain_error : error {
  explicit domain_error(const std::string& msg) : error(msg) {}
};

// Incompatible units passed to a conversion.
struct unit_error : domain_error {
  explicit unit_error(const std::string& msg) : domain_error(msg) {}
};

// Malformed input file or stream.
struct parse_error : error {
  explicit parse_error(const std::string& msg) : error(msg) {}
};

// A requested operating point cannot be reached. Carries the best value
// that *is* reachable so callers can report how far off the request was.
struct infeasible_error : error {
  infeasible_error(const std::string& msg, double achievable)
      : error(msg), max_achievable(achievable) {}
  double max_achievable;
};

// A solver failed to bracket or converge on its target.
struct solver_error : error {
  explicit solver_error(const std::string& msg) : error(msg) {}
};

}  // namespace endure
