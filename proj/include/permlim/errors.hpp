#pragma once

#include <stdexcept>
#include <string>

namespace permlim {

// Malformed input: bad tokens, non-bijections, invalid matrices.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A request outside the supported enumeration range (k, m, grid size).
class GuardError : public std::domain_error {
 public:
  explicit GuardError(const std::string& what) : std::domain_error(what) {}
};

// An internal invariant failed to hold. Always a bug.
class InvariantError : public std::logic_error {
 public:
  explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace permlim
