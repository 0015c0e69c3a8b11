#pragma once

#include <stdexcept>
#include <string>

namespace crowdsim {

// A well-formed input that violates a documented invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input (bad JSON, wrong types, unknown keys).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure (missing file, unwritable path).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace crowdsim
