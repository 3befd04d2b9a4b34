#pragma once

#include <stdexcept>
#include <string>

namespace zetalab {

/// Bad caller input: malformed index, out-of-range argument, size guard exceeded.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameter point outside the region where a series converges.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Series description violates the convergence guard or is inconsistent.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace zetalab
