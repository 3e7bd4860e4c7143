#pragma once

#include <stdexcept>
#include <string>

namespace lmg {

// Precondition violations on user-supplied parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver or algebra failures (eigensolver non-convergence, oracle residues).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace lmg
