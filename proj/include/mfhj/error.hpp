#pragma once

#include <stdexcept>
#include <string>

namespace mfhj {

// Raised when caller-supplied parameters violate an operation's precondition.
// The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a numerical procedure cannot produce a result (no bracket,
// no transition, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// The literal overload keeps hot loops free of string construction.
inline void require(bool cond, const char* message) {
  if (!cond) throw ValidationError(message);
}

inline void require(bool cond, const std::string& message) {
  if (!cond) throw ValidationError(message);
}

}  // namespace mfhj
