#pragma once

#include <stdexcept>
#include <string>

namespace specgraph {

/// Bad inputs: schema mismatches, invalid shapes, out-of-range arguments.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Runtime numerical failure: singular slices, divergence, non-finite values.
/// The CLI maps this to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

inline void require_numeric(bool cond, const std::string& msg) {
  if (!cond) throw NumericalError(msg);
}

}  // namespace specgraph
