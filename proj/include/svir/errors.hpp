#pragma once

#include <stdexcept>
#include <string>

namespace svir {

/// Raised for malformed input: mismatched symbol sets, bad index parity,
/// unknown family names, syntax errors. The CLI maps it to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace svir
