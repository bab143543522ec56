#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphfilt {

// Bad shapes, out-of-range indices, malformed parameters.
using InvalidArgument = std::invalid_argument;

/// A diagonal scaling or preconditioner hit a zero entry.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rayleigh-Ritz received a trial basis with no independent direction left.
class DegenerateBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem size exceeds a dense (O(n^3)) code path's cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file content; offset is the byte position where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace graphfilt
