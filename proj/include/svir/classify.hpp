#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "svir/algebra.hpp"
#include "svir/families.hpp"
#include "svir/linear.hpp"
#include "svir/poly.hpp"

namespace svir {

// ---- named polynomials and the determinant identity ----------------------

/// Polynomials over standard_symbols(); u stands for a+k.
///   table_delta0..3        Delta_0..Delta_3 in (b, b'), Delta_3 with one 240b'^2
///   table_delta3_doubled   Delta_3 with the 240b'^2 term taken twice
///   elimination_delta1     the condition polynomial in (u, p, m, b)
///   elimination_delta2     (u(1-4b) + (1+6b)(b-1)p)
///   nabla, nabla0, nabla2  in (u, p, m)
///   delta                  det3(build_ijk_system()), never transcribed
std::map<std::string, MultiPoly> named_polynomials();

/// Rows (I), (II), (III); columns f_{p,k+m}, f_{p,k}, f_{p,k-m}.
PolyMatrix build_ijk_system();

/// (m^6/64) * D0 * (D1*u*p + D2*m^2 + D3*p^2).
MultiPoly assembled_delta(const MultiPoly& d0, const MultiPoly& d1, const MultiPoly& d2,
                          const MultiPoly& d3);

struct DeltaReading {
  std::string name;
  bool symbolic_equal = false;
  std::size_t points = 0;
  std::size_t agreements = 0;
  std::optional<std::map<std::string, Rational>> mismatch;  // first witness point
};

struct DeltaReport {
  std::vector<DeltaReading> readings;  // "single", "doubled"
  std::uint64_t seed = 0;
  [[nodiscard]] nlohmann::json to_json() const;
};

DeltaReport verify_delta_factorization(std::size_t points, std::uint64_t seed);

// ---- admissible (b, b') pairs --------------------------------------------

/// "-2:2:1/2" -> {-2, -3/2, ..., 2}; a bare rational gives one value.
std::vector<Rational> parse_grid(std::string_view text);

struct AdmissiblePair {
  Rational b, bp;
  std::string reason;  // "delta0" or "delta123"
};

struct AdmissibleReport {
  std::vector<AdmissiblePair> pairs;          // criteria route
  std::vector<std::pair<Rational, Rational>> sampled;  // evaluation route
  bool routes_agree = false;
  std::size_t grid_size = 0;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Pairs where Delta vanishes identically in (u, p, m), computed from the
/// D0/D1D2D3 criteria and independently from `samples` random evaluations
/// of the determinant.
AdmissibleReport admissible_scan(const std::vector<Rational>& bs, const std::vector<Rational>& bps,
                                 std::size_t samples, std::uint64_t seed);

// ---- ansatz solver --------------------------------------------------------

struct AnsatzConfig {
  Sector sector = Sector::kOriginal;
  Rational a, b, bp;  // bp ignored (= b) in sector 0
  std::int64_t window = 8;
  HalfIndex genrange = HalfIndex::integer(2);
  /// Scaling of the stage-1 pattern handed to stages 2 and 3.
  Rational f0 = 1, d0 = 0;

  [[nodiscard]] Rational effective_bp() const { return sector == Sector::kTwisted ? b : bp; }
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Unknown labels "f[p,k]" for Y_p x_k = f_{p,k} x_{k+p}.
std::string f_label(HalfIndex p, HalfIndex k);
/// Unknown labels "g[n,k]" for M_n x_k = g_{n,k} x_{k+n}.
std::string g_label(HalfIndex n, HalfIndex k);

/// Rows of [L_m, Y_p] x_k = (p - m/2) Y_{p+m} x_k over the f-unknowns.
LinearSystem generate_ansatz_constraints(const AnsatzConfig& cfg);

/// Closed forms restricted to the unknowns of `system`: f_{p,i} = (a+i+2bp)
/// for the "f0" pattern and f_{p,j} = 1 for the "d0" pattern.
RationalVector ansatz_pattern(const AnsatzConfig& cfg, const LinearSystem& system,
                              const Rational& f0, const Rational& d0);

struct WitnessRow {
  std::string tag;
  Rational multiplier;
};

struct StageReport {
  std::string stage;
  std::size_t unknowns = 0;
  std::size_t rows = 0;
  std::size_t rank = 0;
  std::size_t nullity = 0;
  bool consistent = true;
  std::vector<WitnessRow> witness;
  Rational witness_value;
  bool witness_checked = false;
  nlohmann::json extra = nlohmann::json::object();
  [[nodiscard]] nlohmann::json to_json() const;
};

struct AnsatzReport {
  AnsatzConfig config;
  StageReport stage1, stage2, stage3;
  bool patterns_in_nullspace = false;
  bool patterns_span_nullspace = false;
  std::vector<RationalVector> basis;
  std::vector<std::string> labels;
  bool mm_rows_hold = false;
  [[nodiscard]] nlohmann::json to_json() const;
};

AnsatzReport solve_ansatz(const AnsatzConfig& cfg);

// ---- deformations ---------------------------------------------------------

/// c + sum_i x_i * v_i over deformation unknowns.
struct Affine {
  Rational c;
  std::map<std::size_t, Rational> v;

  Affine() = default;
  Affine(Rational constant) : c(std::move(constant)) {}  // NOLINT
  static Affine unknown(std::size_t i);

  [[nodiscard]] bool is_constant() const { return v.empty(); }
  Affine& operator+=(const Affine& o);
  Affine& operator-=(const Affine& o);
  friend Affine operator*(Affine x, const Rational& r);
  /// Throws std::logic_error when both factors involve unknowns.
  friend Affine operator*(const Affine& x, const Affine& y);
};
inline bool scalar_is_zero(const Affine& x) { return x.c.is_zero() && x.v.empty(); }

enum class Direction { kOutgoing, kIncoming };

struct DeformationSpec {
  std::string name;
  FamilyId base = FamilyId::kSvAab;
  FamilyParams params;
  HalfIndex k0;
  Direction direction = Direction::kOutgoing;
  Rational alpha = 1;
  std::int64_t window = 8;
  HalfIndex genrange = HalfIndex::integer(2);
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Named specs: "1.1", "1.2", "1.3", "1.4", "B1", "B2", "B1-printed",
/// "B2-printed", "C", "D".
DeformationSpec deformation_preset(const std::string& name, const Rational& alpha);
std::vector<std::string> deformation_preset_names();

struct DeformationReport {
  DeformationSpec spec;
  std::vector<std::string> labels;
  std::size_t rows = 0;
  std::size_t rank = 0;
  bool feasible = false;
  std::size_t nullity = 0;
  std::optional<RationalVector> solution;
  std::vector<RationalVector> nullspace;
  std::vector<WitnessRow> witness;
  Rational witness_value;
  bool witness_checked = false;

  /// "infeasible", "feasible-with-zero" or "feasible".
  [[nodiscard]] std::string verdict() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

DeformationReport deformation_check(const DeformationSpec& spec);

// ---- symbolic lemma identities -------------------------------------------

struct LemmaVerdict {
  std::string id;
  bool holds = false;
  std::string detail;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// "L3.2", "L3.3-closed-form", "L3.4-constant", "g-closed-form", "L3.4-nabla".
std::vector<std::string> lemma_ids();
LemmaVerdict lemma_identity_check(const std::string& id);

}  // namespace svir
