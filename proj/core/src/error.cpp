#include "srlab/error.hpp"

namespace srlab {

const char* to_string(FormatErrc code) noexcept {
  switch (code) {
    case FormatErrc::bad_magic: return "bad magic";
    case FormatErrc::unsupported_version: return "unsupported version";
    case FormatErrc::bad_dimensions: return "bad dimensions";
    case FormatErrc::truncated: return "truncated";
    case FormatErrc::trailing_bytes: return "trailing bytes";
    case FormatErrc::bad_values: return "bad values";
    case FormatErrc::unsupported_format: return "unsupported format";
  }
  return "unknown";
}

FormatError::FormatError(FormatErrc code, const std::string& what)
    : Error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace srlab
