#pragma once

#include <stdexcept>
#include <string>

namespace dephasim {

// Raised when a physical parameter violates its domain (angle range, negative flux, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a data container is malformed (mismatched run lengths, short windows, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dephasim
