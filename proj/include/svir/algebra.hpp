#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "svir/poly.hpp"
#include "svir/rational.hpp"

namespace svir {

/// Element of (1/2)Z, stored doubled.
class HalfIndex {
 public:
  constexpr HalfIndex() = default;
  static constexpr HalfIndex from_doubled(std::int64_t d) { return HalfIndex(d); }
  static constexpr HalfIndex integer(std::int64_t v) { return HalfIndex(2 * v); }
  /// Throws UsageError unless r lies in (1/2)Z.
  static HalfIndex from_rational(const Rational& r);

  [[nodiscard]] constexpr std::int64_t doubled() const { return doubled_; }
  [[nodiscard]] constexpr bool is_integer() const { return doubled_ % 2 == 0; }
  [[nodiscard]] Rational value() const { return Rational(doubled_, 2); }
  /// Integer value; only meaningful when is_integer().
  [[nodiscard]] constexpr std::int64_t as_integer() const { return doubled_ / 2; }
  [[nodiscard]] std::string to_string() const { return value().to_string(); }

  constexpr HalfIndex operator+(HalfIndex o) const { return HalfIndex(doubled_ + o.doubled_); }
  constexpr HalfIndex operator-(HalfIndex o) const { return HalfIndex(doubled_ - o.doubled_); }
  constexpr HalfIndex operator-() const { return HalfIndex(-doubled_); }

  friend constexpr bool operator==(HalfIndex, HalfIndex) = default;
  friend constexpr auto operator<=>(HalfIndex, HalfIndex) = default;

 private:
  constexpr explicit HalfIndex(std::int64_t d) : doubled_(d) {}
  std::int64_t doubled_ = 0;
};

/// s = 0 is the twisted algebra L[0], s = 1/2 the original L[1/2].
enum class Sector { kTwisted, kOriginal };

Rational sector_shift(Sector s);
std::string sector_name(Sector s);
/// Accepts "0" and "1/2".
Sector parse_sector(const std::string& text);
/// Y-indices of the sector lie in s + Z.
bool y_index_allowed(Sector s, HalfIndex p);

enum class GenKind { kL = 0, kY = 1, kM = 2, kC = 3 };

struct Generator {
  GenKind kind = GenKind::kC;
  HalfIndex index;

  static Generator L(std::int64_t m) { return {GenKind::kL, HalfIndex::integer(m)}; }
  static Generator M(std::int64_t n) { return {GenKind::kM, HalfIndex::integer(n)}; }
  static Generator Y(HalfIndex p) { return {GenKind::kY, p}; }
  static Generator C() { return {GenKind::kC, HalfIndex()}; }

  /// "L[2]", "Y[1/2]", "C".
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Generator&, const Generator&) = default;
  friend auto operator<=>(const Generator&, const Generator&) = default;
};

/// Throws UsageError if the generator's index is not allowed in the sector.
void validate_generator(const Generator& g, Sector s);

/// Every generator of the sector with |index| <= bound (C excluded).
std::vector<Generator> generators_up_to(Sector s, HalfIndex bound);

inline bool scalar_is_zero(const Rational& r) { return r.is_zero(); }
inline bool scalar_is_zero(const MultiPoly& p) { return p.is_zero(); }

/// Finite formal linear combination of generators; zero coefficients are
/// never stored. Scalar is Rational or MultiPoly.
template <class Scalar>
class BasicElement {
 public:
  using Map = std::map<Generator, Scalar>;

  BasicElement() = default;
  BasicElement(const Generator& g, Scalar c) { add(g, std::move(c)); }

  [[nodiscard]] const Map& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  void add(const Generator& g, const Scalar& c) {
    if (scalar_is_zero(c)) return;
    auto it = terms_.find(g);
    if (it == terms_.end()) {
      terms_.emplace(g, c);
      return;
    }
    it->second += c;
    if (scalar_is_zero(it->second)) terms_.erase(it);
  }

  BasicElement& operator+=(const BasicElement& o) {
    for (const auto& [g, c] : o.terms_) add(g, c);
    return *this;
  }
  BasicElement& operator-=(const BasicElement& o) {
    for (const auto& [g, c] : o.terms_) add(g, -c);
    return *this;
  }
  template <class Factor>
  BasicElement& scale(const Factor& f) {
    Map out;
    for (const auto& [g, c] : terms_) {
      Scalar v = c * f;
      if (!scalar_is_zero(v)) out.emplace(g, std::move(v));
    }
    terms_ = std::move(out);
    return *this;
  }

  friend BasicElement operator+(BasicElement x, const BasicElement& y) { return x += y; }
  friend BasicElement operator-(BasicElement x, const BasicElement& y) { return x -= y; }
  friend bool operator==(const BasicElement& x, const BasicElement& y) {
    return x.terms_ == y.terms_;
  }

 private:
  Map terms_;
};

using AlgebraElement = BasicElement<Rational>;
using SymbolicElement = BasicElement<MultiPoly>;

/// Bracket of two basis generators, including the Virasoro cocycle.
AlgebraElement bracket(const Generator& x, const Generator& y, Sector s);

/// Bilinear extension over any scalar that can be multiplied by a Rational.
template <class Scalar>
BasicElement<Scalar> bracket(const BasicElement<Scalar>& x, const BasicElement<Scalar>& y,
                             Sector s) {
  BasicElement<Scalar> out;
  for (const auto& [gx, cx] : x.terms()) {
    for (const auto& [gy, cy] : y.terms()) {
      const AlgebraElement b = bracket(gx, gy, s);
      if (b.is_zero()) continue;
      const Scalar prod = cx * cy;
      for (const auto& [g, c] : b.terms()) out.add(g, prod * c);
    }
  }
  return out;
}

/// Eigenvalue of ad L_0 on g: [L_0, g] = w g.
HalfIndex ad_weight(const Generator& g);

/// [x,[y,z]] + [y,[z,x]] + [z,[x,y]].
AlgebraElement jacobi_residual(const Generator& x, const Generator& y, const Generator& z,
                               Sector s);

}  // namespace svir
