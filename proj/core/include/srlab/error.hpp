#pragma once

#include <stdexcept>
#include <string>

namespace srlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of two operands disagree, or a size precondition is violated.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument is outside its domain.
class ValueError : public Error {
 public:
  using Error::Error;
};

/// The filesystem refused a read or write.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Distinguishes the ways a binary or image file can be malformed.
enum class FormatErrc {
  bad_magic,
  unsupported_version,
  bad_dimensions,
  truncated,
  trailing_bytes,
  bad_values,
  unsupported_format,
};

const char* to_string(FormatErrc code) noexcept;

class FormatError : public Error {
 public:
  FormatError(FormatErrc code, const std::string& what);
  FormatErrc code() const noexcept { return code_; }

 private:
  FormatErrc code_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace srlab
