#pragma once

#include <stdexcept>
#include <string>

namespace twobridge {

// Thrown when an internal structural invariant fails (a differential that
// does not square to zero, a grading that fails an integrality constraint,
// and so on).  These indicate a bug or a corrupted cache, never bad user
// input; the command-line driver maps them to a distinct exit code.
//
// Bad user input (malformed fractions, invalid knot parameters, ...) is
// reported with std::invalid_argument instead.
class inconsistency_error : public std::runtime_error {
public:
  explicit inconsistency_error(const std::string& what)
      : std::runtime_error(what) {}
};

} // namespace twobridge
