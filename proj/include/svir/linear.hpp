#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svir/rational.hpp"

namespace svir {

using RationalVector = std::vector<Rational>;

struct LinearRow {
  RationalVector coeffs;
  Rational rhs;
  std::string tag;  // provenance of the row, e.g. "[L1,Y1/2]x0"
};

/// Exact linear system  A x = b  over labelled unknowns.
class LinearSystem {
 public:
  explicit LinearSystem(std::vector<std::string> labels);

  [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
  [[nodiscard]] const std::vector<LinearRow>& rows() const { return rows_; }
  [[nodiscard]] std::size_t width() const { return labels_.size(); }
  [[nodiscard]] std::optional<std::size_t> find(const std::string& label) const;
  [[nodiscard]] std::size_t index_of(const std::string& label) const;

  void add_row(RationalVector coeffs, Rational rhs, std::string tag = {});
  void add_sparse_row(const std::map<std::size_t, Rational>& coeffs, Rational rhs,
                      std::string tag = {});

  /// Residual of row i at x: sum_j A_ij x_j - b_i.
  [[nodiscard]] Rational residual(std::size_t i, const RationalVector& x) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t> index_;
  std::vector<LinearRow> rows_;
};

/// A combination sum_i y_i * row_i whose coefficient part vanishes and
/// whose right-hand side is nonzero: the certificate 0 = value.
struct InconsistencyWitness {
  std::map<std::size_t, Rational> multipliers;  // original row index -> y_i
  Rational value;
};

struct SolveReport {
  bool consistent = true;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
  std::vector<RationalVector> nullspace;
  std::optional<RationalVector> particular;
  std::optional<InconsistencyWitness> witness;
};

/// Gauss-Jordan elimination over Q. Inconsistency is a report outcome.
SolveReport solve_linear(const LinearSystem& system);

/// Independent re-check of a witness against the original rows.
bool witness_holds(const LinearSystem& system, const InconsistencyWitness& w);

}  // namespace svir
