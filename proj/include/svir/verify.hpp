#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "svir/algebra.hpp"
#include "svir/families.hpp"

namespace svir {

/// act([g1,g2], x_k) - g1(g2 x_k) + g2(g1 x_k), as the single coefficient of
/// x_{k+w1+w2}. `coeff(g, k)` may return any scalar supporting +=, -=, * and
/// scalar_is_zero (Rational for tables, affine forms for deformations).
template <class Scalar, class CoeffFn>
Scalar module_residual(const CoeffFn& coeff, const Generator& g1, const Generator& g2,
                       HalfIndex k, Sector s) {
  Scalar r{};
  const AlgebraElement br = bracket(g1, g2, s);
  for (const auto& [h, c] : br.terms()) {
    if (h.kind == GenKind::kC) continue;  // c acts as 0
    r += coeff(h, k) * c;
  }
  const Scalar c2 = coeff(g2, k);
  if (!scalar_is_zero(c2)) r -= coeff(g1, k + ad_weight(g2)) * c2;
  const Scalar c1 = coeff(g1, k);
  if (!scalar_is_zero(c1)) r += coeff(g2, k + ad_weight(g1)) * c1;
  return r;
}

ModuleVector axiom_residual(const ActionModel& model, const Generator& g1, const Generator& g2,
                            HalfIndex k);

struct Violation {
  Generator g1, g2;
  HalfIndex k;
  ModuleVector residual;
};

struct ResidualReport {
  std::string family;
  nlohmann::json params;
  std::vector<Violation> violations;  // sorted by (g1, g2, k)
  std::int64_t checked = 0;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// All ordered generator pairs with |index| <= genrange and all basis k with
/// k, k+w2, k+w1, k+w1+w2 inside the window.
ResidualReport verify_model(const ActionModel& model, std::int64_t window, HalfIndex genrange);
ResidualReport verify_family(const Family& family, std::int64_t window, HalfIndex genrange);

struct InvariantIndexSet {
  std::set<HalfIndex> indices;
  bool certified = false;
  std::vector<HalfIndex> seeds;  // singleton seeds whose closure is this set

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Independent re-check: no generator within genrange maps a member to a
/// window index outside the set with nonzero coefficient.
bool closure_certified(const ActionModel& model, const std::set<HalfIndex>& indices,
                       std::int64_t window, HalfIndex genrange);

/// Forward closures of every singleton seed; each distinct proper nonempty
/// closure is reported once, in ascending order of its smallest seed.
std::vector<InvariantIndexSet> scan_submodules(const ActionModel& model, std::int64_t window,
                                               HalfIndex genrange);

struct SubQuotient {
  ActionTable sub;
  ActionTable quotient;
};

/// Tables are stored with generator range 2*genrange so that brackets of
/// genrange pairs stay inside them. Throws UsageError for uncertified sets.
SubQuotient sub_quotient(const ActionModel& model, const InvariantIndexSet& s,
                         std::int64_t window, HalfIndex genrange);

/// L_i, L_{i+1}, Y_{i+s}, Y_{i+1+s} on x_k; true unless all four vanish.
bool injectivity_check(const Family& family, HalfIndex k, std::int64_t i);

/// L_0 acts as weight(k), M_0 and c as 0 on every window basis vector.
bool torus_check(const Family& family, std::int64_t window);

/// Rational with |numerator| <= 100 and 1 <= denominator <= 100. Uses plain
/// modular reduction of mt19937_64 output so sequences are portable.
Rational random_rational(std::mt19937_64& rng);
/// Generic parameters for a family: a avoids (1/2)Z, b avoids
/// {0, +-1/2, 1, 3/2}; alpha-type parameters are unrestricted.
FamilyParams random_params(FamilyId id, std::mt19937_64& rng);

}  // namespace svir
