#pragma once

#include <stdexcept>
#include <string>

namespace gsr {

/// Bad caller input: sizes, ranges, malformed sets.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The request is well-formed but cannot be satisfied on this instance
/// (hub check fails, graph disconnected, retry limit reached, ...).
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure in one of the text formats.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsr
