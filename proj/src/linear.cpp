#include "svir/linear.hpp"

#include <utility>

#include "svir/errors.hpp"

namespace svir {

LinearSystem::LinearSystem(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw UsageError("duplicate unknown label '" + labels_[i] + "'");
    }
  }
}

std::optional<std::size_t> LinearSystem::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t LinearSystem::index_of(const std::string& label) const {
  if (auto i = find(label)) return *i;
  throw UsageError("unknown label '" + label + "'");
}

void LinearSystem::add_row(RationalVector coeffs, Rational rhs, std::string tag) {
  if (coeffs.size() != labels_.size()) throw UsageError("row width does not match unknowns");
  rows_.push_back({std::move(coeffs), std::move(rhs), std::move(tag)});
}

void LinearSystem::add_sparse_row(const std::map<std::size_t, Rational>& coeffs, Rational rhs,
                                  std::string tag) {
  RationalVector dense(labels_.size());
  for (const auto& [j, c] : coeffs) {
    if (j >= labels_.size()) throw UsageError("sparse row column out of range");
    dense[j] = c;
  }
  add_row(std::move(dense), std::move(rhs), std::move(tag));
}

Rational LinearSystem::residual(std::size_t i, const RationalVector& x) const {
  const auto& row = rows_.at(i);
  Rational acc = -row.rhs;
  for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
    if (!row.coeffs[j].is_zero()) acc += row.coeffs[j] * x.at(j);
  }
  return acc;
}

namespace {

struct WorkRow {
  RationalVector coeffs;
  Rational rhs;
  std::map<std::size_t, Rational> combo;  // how this row arises from the input rows
};

void axpy(WorkRow& dst, const Rational& f, const WorkRow& src) {
  for (std::size_t j = 0; j < dst.coeffs.size(); ++j) {
    if (!src.coeffs[j].is_zero()) dst.coeffs[j] -= f * src.coeffs[j];
  }
  dst.rhs -= f * src.rhs;
  for (const auto& [i, y] : src.combo) {
    auto [it, inserted] = dst.combo.try_emplace(i, -(f * y));
    if (!inserted) {
      it->second -= f * y;
      if (it->second.is_zero()) dst.combo.erase(it);
    }
  }
}

}  // namespace

SolveReport solve_linear(const LinearSystem& system) {
  const std::size_t n = system.width();
  std::vector<WorkRow> work;
  work.reserve(system.rows().size());
  for (std::size_t i = 0; i < system.rows().size(); ++i) {
    const auto& r = system.rows()[i];
    work.push_back({r.coeffs, r.rhs, {{i, Rational(1)}}});
  }

  SolveReport report;
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < work.size(); ++col) {
    std::size_t piv = r;
    while (piv < work.size() && work[piv].coeffs[col].is_zero()) ++piv;
    if (piv == work.size()) continue;
    std::swap(work[r], work[piv]);
    const Rational inv = work[r].coeffs[col].inverse();
    for (auto& c : work[r].coeffs) c *= inv;
    work[r].rhs *= inv;
    for (auto& [i, y] : work[r].combo) y *= inv;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (i == r || work[i].coeffs[col].is_zero()) continue;
      const Rational f = work[i].coeffs[col];
      axpy(work[i], f, work[r]);
    }
    report.pivot_columns.push_back(col);
    ++r;
  }
  report.rank = r;

  for (std::size_t i = r; i < work.size(); ++i) {
    if (!work[i].rhs.is_zero()) {
      report.consistent = false;
      report.witness = InconsistencyWitness{work[i].combo, work[i].rhs};
      break;
    }
  }

  std::vector<bool> is_pivot(n, false);
  for (auto c : report.pivot_columns) is_pivot[c] = true;

  if (report.consistent) {
    RationalVector x(n);
    for (std::size_t i = 0; i < r; ++i) x[report.pivot_columns[i]] = work[i].rhs;
    report.particular = std::move(x);
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(n);
    v[f] = Rational(1);
    for (std::size_t i = 0; i < r; ++i) v[report.pivot_columns[i]] = -work[i].coeffs[f];
    report.nullspace.push_back(std::move(v));
  }
  return report;
}

bool witness_holds(const LinearSystem& system, const InconsistencyWitness& w) {
  RationalVector acc(system.width());
  Rational rhs;
  for (const auto& [i, y] : w.multipliers) {
    const auto& row = system.rows().at(i);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += y * row.coeffs[j];
    rhs += y * row.rhs;
  }
  for (const auto& c : acc) {
    if (!c.is_zero()) return false;
  }
  return !rhs.is_zero() && rhs == w.value;
}

}  // namespace svir
