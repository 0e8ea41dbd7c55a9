#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "svir/rational.hpp"

namespace svir {

/// Ordered list of indeterminate names. Polynomials may only be combined
/// when they were built over the same list.
class SymbolTable {
 public:
  explicit SymbolTable(std::vector<std::string> names);

  [[nodiscard]] std::size_t size() const { return names_.size(); }
  [[nodiscard]] const std::string& name(std::size_t i) const { return names_.at(i); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
  /// Throws UsageError for an undeclared name.
  [[nodiscard]] std::size_t index_of(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

using Symbols = std::shared_ptr<const SymbolTable>;

Symbols make_symbols(std::vector<std::string> names);

/// The shared registry: u (= a+k), p, m, k, a, b, b', alpha, n, plus the
/// scaling constants f0, d0 and a free M-coefficient g used by lemma checks.
const Symbols& standard_symbols();

bool same_symbols(const Symbols& x, const Symbols& y);

using Exponents = std::vector<std::uint32_t>;

/// Graded lexicographic order, greatest monomial first.
struct GradedLexGreater {
  bool operator()(const Exponents& x, const Exponents& y) const;
};

/// Sparse multivariate polynomial over Q in canonical form: no zero
/// coefficients, terms sorted by GradedLexGreater, zero = empty map.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, Rational, GradedLexGreater>;

  explicit MultiPoly(Symbols symbols);

  static MultiPoly constant(Symbols symbols, const Rational& c);
  static MultiPoly var(Symbols symbols, std::string_view name);

  [[nodiscard]] const Symbols& symbols() const { return symbols_; }
  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] Rational constant_term() const;
  [[nodiscard]] unsigned total_degree() const;
  /// Degree in one indeterminate.
  [[nodiscard]] unsigned degree_in(std::string_view name) const;

  /// Adds c * monomial, dropping the term if it cancels.
  void add_term(const Exponents& e, const Rational& c);

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Rational& c);

  friend MultiPoly operator+(MultiPoly x, const MultiPoly& y) { return x += y; }
  friend MultiPoly operator-(MultiPoly x, const MultiPoly& y) { return x -= y; }
  friend MultiPoly operator*(MultiPoly x, const MultiPoly& y) { return x *= y; }
  friend MultiPoly operator*(MultiPoly x, const Rational& c) { return x *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly x) { return x *= c; }
  friend MultiPoly operator-(MultiPoly x) { return x *= Rational(-1); }

  MultiPoly operator+(const Rational& c) const { return *this + constant(symbols_, c); }
  MultiPoly operator-(const Rational& c) const { return *this - constant(symbols_, c); }

  [[nodiscard]] MultiPoly pow(unsigned e) const;

  /// Partial evaluation. Throws UsageError for names not in the symbol list.
  [[nodiscard]] MultiPoly substitute(const std::map<std::string, Rational>& bindings) const;
  /// Full evaluation; every indeterminate that occurs must be bound.
  [[nodiscard]] Rational evaluate(const std::map<std::string, Rational>& bindings) const;

  /// Replaces an indeterminate by a polynomial over the same symbols.
  [[nodiscard]] MultiPoly compose(std::string_view name, const MultiPoly& value) const;

  /// Multivariate division by a single divisor in graded-lex order.
  /// For a single divisor the remainder is zero iff the divisor divides.
  [[nodiscard]] std::pair<MultiPoly, MultiPoly> divmod(const MultiPoly& divisor) const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const MultiPoly& x, const MultiPoly& y);

 private:
  void require_compatible(const MultiPoly& o) const;

  Symbols symbols_;
  TermMap terms_;
};

enum class PolyOp { kAdd, kSub, kMul };

/// Throws UsageError when p and q were built over different symbol lists.
MultiPoly poly_arith(PolyOp op, const MultiPoly& p, const MultiPoly& q);

using PolyMatrix = std::vector<std::vector<MultiPoly>>;

/// Cofactor expansion along the first row.
MultiPoly det3(const PolyMatrix& m);

}  // namespace svir
