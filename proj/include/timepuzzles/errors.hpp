#pragma once

#include <stdexcept>
#include <string>

namespace timepuzzles {

// Exception taxonomy maps onto CLI exit codes:
//   validation_error (and subtypes) -> 1, io_error -> 2, generation_error -> 3.

struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data outside the range a calendar table covers.
struct coverage_error : validation_error {
  using validation_error::validation_error;
};

// Unknown id in the knowledge base.
struct lookup_error : validation_error {
  using validation_error::validation_error;
};

// A fact kind cannot be instantiated for a given seed date. Callers treat
// this as "try a different kind", not as a hard failure.
struct instantiation_error : validation_error {
  using validation_error::validation_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The rejection-sampling loop ran out of attempts.
struct generation_error : std::runtime_error {
  generation_error(const std::string& msg, int attempts_used)
      : std::runtime_error(msg), attempts(attempts_used) {}
  int attempts;
};

}  // namespace timepuzzles
