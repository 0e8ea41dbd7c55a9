#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "svir/algebra.hpp"
#include "svir/rational.hpp"

namespace svir {

enum class FamilyId {
  kVirAab,
  kVirAalpha,
  kVirBalpha,
  kSvAab,
  kSvBab,
  kSvCa,
  kSvDa,
  kSvA1,
  kSvA2,
  kSvB1,
  kSvB2,
  kSvCalphas,
  kSvDbetas,
};

std::string family_tag(FamilyId id);
/// Accepts the tags "Vir-Aab", ..., "SV-Dbetas". Throws UsageError otherwise.
FamilyId parse_family(std::string_view tag);
const std::vector<FamilyId>& all_families();
bool is_virasoro_family(FamilyId id);

/// Parameter slots; only the ones relevant to a family may be set.
struct FamilyParams {
  std::optional<Rational> a, b;
  std::optional<Rational> alpha, alpha_p;  // alpha, alpha'
  std::optional<Rational> beta, beta_p;    // beta, beta'
  std::optional<Rational> f0, d0;
  /// B1/B2 only: use the tables exactly as printed instead of the
  /// typo-ledger corrections. These are not modules (kept for evidence).
  bool printed = false;

  /// "a=1/3,b=2", "alpha=1,alpha'=2". Empty text gives no slots.
  static FamilyParams parse(std::string_view text);
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Sparse vector over the basis {x_k}.
class ModuleVector {
 public:
  using Map = std::map<HalfIndex, Rational>;

  ModuleVector() = default;
  ModuleVector(HalfIndex k, const Rational& c) { add(k, c); }
  static ModuleVector basis(HalfIndex k) { return ModuleVector(k, Rational(1)); }

  void add(HalfIndex k, const Rational& c);
  [[nodiscard]] const Map& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] Rational coeff(HalfIndex k) const;
  /// "7/3*x[1/2] - x[0]", or "0".
  [[nodiscard]] std::string to_string() const;

  ModuleVector& operator+=(const ModuleVector& o);
  ModuleVector& operator-=(const ModuleVector& o);
  friend ModuleVector operator+(ModuleVector x, const ModuleVector& y) { return x += y; }
  friend ModuleVector operator-(ModuleVector x, const ModuleVector& y) { return x -= y; }
  friend bool operator==(const ModuleVector&, const ModuleVector&) = default;

 private:
  Map terms_;
};

/// Anything that assigns a single-term action g x_k = coeff(g,k) x_{k+w(g)}
/// on a basis indexed by a subset of (1/2)Z.
class ActionModel {
 public:
  virtual ~ActionModel() = default;
  [[nodiscard]] virtual Sector sector() const = 0;
  [[nodiscard]] virtual bool in_lattice(HalfIndex k) const = 0;
  [[nodiscard]] virtual Rational coeff(const Generator& g, HalfIndex k) const = 0;
  [[nodiscard]] virtual std::string label() const = 0;
  [[nodiscard]] virtual nlohmann::json params_json() const = 0;
};

/// Linear extension of the single-term actions. Validates the generator
/// against the model's sector and the vector's indices against its lattice.
ModuleVector act(const ActionModel& model, const Generator& g, const ModuleVector& v);

class Family final : public ActionModel {
 public:
  /// Vir families are modules over L[s] for either s (S acts as zero);
  /// SV families live in sector 1/2 and reject kTwisted.
  Family(FamilyId id, FamilyParams params, Sector sector = Sector::kOriginal);

  [[nodiscard]] FamilyId id() const { return id_; }
  [[nodiscard]] const FamilyParams& params() const { return params_; }

  [[nodiscard]] Sector sector() const override { return sector_; }
  [[nodiscard]] bool in_lattice(HalfIndex k) const override;
  [[nodiscard]] Rational coeff(const Generator& g, HalfIndex k) const override;
  [[nodiscard]] std::string label() const override { return family_tag(id_); }
  [[nodiscard]] nlohmann::json params_json() const override { return params_.to_json(); }

  /// L_0-eigenvalue of x_k, i.e. a + k with the family's normalized shift.
  [[nodiscard]] Rational weight(HalfIndex k) const;
  /// The shift a itself.
  [[nodiscard]] Rational base_weight() const;

 private:
  Rational coeff_unchecked(const Generator& g, HalfIndex k) const;

  FamilyId id_;
  FamilyParams params_;
  Sector sector_;
};

Rational weight(const Family& family, HalfIndex k);

/// All basis indices of the model with |2k| <= window.
std::vector<HalfIndex> window_indices(const ActionModel& model, std::int64_t window);
inline bool in_window(HalfIndex k, std::int64_t window) {
  return k.doubled() <= window && -k.doubled() <= window;
}

struct ActionEntry {
  Generator gen;
  HalfIndex k;
  HalfIndex target;
  Rational coeff;
};

/// Materialized coefficients on a finite index set. Also an ActionModel so
/// that sub/quotient tables can be re-verified.
class ActionTable final : public ActionModel {
 public:
  ActionTable(std::string family, nlohmann::json params, Sector sector, std::int64_t window,
              HalfIndex genrange, std::set<HalfIndex> basis);

  void set(const Generator& g, HalfIndex k, const Rational& c);

  [[nodiscard]] Sector sector() const override { return sector_; }
  [[nodiscard]] bool in_lattice(HalfIndex k) const override { return basis_.count(k) > 0; }
  /// Throws UsageError when (g, k) lies outside the materialized range.
  [[nodiscard]] Rational coeff(const Generator& g, HalfIndex k) const override;
  [[nodiscard]] std::string label() const override { return family_; }
  [[nodiscard]] nlohmann::json params_json() const override { return params_; }

  [[nodiscard]] std::int64_t window() const { return window_; }
  [[nodiscard]] HalfIndex genrange() const { return genrange_; }
  [[nodiscard]] const std::set<HalfIndex>& basis() const { return basis_; }
  /// Deterministic order: generator, then k.
  [[nodiscard]] std::vector<ActionEntry> entries() const;
  [[nodiscard]] nlohmann::json to_json() const;

 private:
  std::string family_;
  nlohmann::json params_;
  Sector sector_;
  std::int64_t window_;
  HalfIndex genrange_;
  std::set<HalfIndex> basis_;
  std::map<std::pair<Generator, HalfIndex>, Rational> coeffs_;
};

/// Complete table of coeff(g,k) for |index g| <= genrange and k, k+w(g) in
/// the window, zeros included. Requires window >= 2*genrange (window is
/// a bound on |2k|).
ActionTable family_table(const ActionModel& model, std::int64_t window, HalfIndex genrange);

/// Machine-readable record of every deviation from the printed formulas.
const nlohmann::json& typo_ledger();
/// FNV-1a 64 of the canonical ledger dump, as 16 hex digits.
std::string typo_ledger_hash();

}  // namespace svir
