#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "svir/algebra.hpp"
#include "svir/errors.hpp"
#include "svir/families.hpp"

namespace svir {

/// Syntax error in an element or vector expression; `position` is the
/// 0-based offset of the offending character.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : UsageError(what + " at position " + std::to_string(position)), position_(position) {}
  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// element := ['+'|'-'] term (('+'|'-') term)* | "0"
/// term    := [rational '*'] gen
/// gen     := ('L'|'Y'|'M') '[' rational ']' | 'C'
AlgebraElement parse_element(std::string_view text, Sector sector);

/// Terms ordered L < Y < M < C, then by index; "0" for the zero element.
std::string format_element(const AlgebraElement& e);

/// Same grammar with gen := 'x' '[' rational ']'.
ModuleVector parse_vector(std::string_view text);

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 1 violations or asserted feasibility failed, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace svir
