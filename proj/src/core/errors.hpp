#pragma once

#include <stdexcept>

namespace rovernet {

// Dimension or topology disagreement between values that must match.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed file contents (network JSON, dataset CSV, scenario JSON).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem read/write failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A weight update or loss evaluation produced NaN or infinity.
struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rovernet
