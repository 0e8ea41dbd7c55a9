#include "svir/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "svir/errors.hpp"

namespace svir {

SymbolTable::SymbolTable(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw UsageError("empty indeterminate name");
    if (!seen.insert(n).second) throw UsageError("duplicate indeterminate '" + n + "'");
  }
}

std::optional<std::size_t> SymbolTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t SymbolTable::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UsageError("unknown indeterminate '" + std::string(name) + "'");
}

Symbols make_symbols(std::vector<std::string> names) {
  return std::make_shared<const SymbolTable>(std::move(names));
}

const Symbols& standard_symbols() {
  static const Symbols kStandard =
      make_symbols({"u", "p", "m", "k", "a", "b", "b'", "alpha", "n", "f0", "d0", "g"});
  return kStandard;
}

bool same_symbols(const Symbols& x, const Symbols& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  return x->names() == y->names();
}

bool GradedLexGreater::operator()(const Exponents& x, const Exponents& y) const {
  const auto dx = std::accumulate(x.begin(), x.end(), 0ull);
  const auto dy = std::accumulate(y.begin(), y.end(), 0ull);
  if (dx != dy) return dx > dy;
  return x > y;
}

MultiPoly::MultiPoly(Symbols symbols) : symbols_(std::move(symbols)) {
  if (!symbols_) throw UsageError("polynomial without a symbol table");
}

MultiPoly MultiPoly::constant(Symbols symbols, const Rational& c) {
  MultiPoly p(std::move(symbols));
  p.add_term(Exponents(p.symbols_->size(), 0), c);
  return p;
}

MultiPoly MultiPoly::var(Symbols symbols, std::string_view name) {
  MultiPoly p(std::move(symbols));
  Exponents e(p.symbols_->size(), 0);
  e[p.symbols_->index_of(name)] = 1;
  p.add_term(e, Rational(1));
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
}

Rational MultiPoly::constant_term() const {
  const Exponents zero(symbols_->size(), 0);
  auto it = terms_.find(zero);
  return it == terms_.end() ? Rational(0) : it->second;
}

unsigned MultiPoly::total_degree() const {
  if (terms_.empty()) return 0;
  const auto& e = terms_.begin()->first;
  return static_cast<unsigned>(std::accumulate(e.begin(), e.end(), 0ull));
}

unsigned MultiPoly::degree_in(std::string_view name) const {
  const auto i = symbols_->index_of(name);
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max<unsigned>(d, e[i]);
  return d;
}

void MultiPoly::add_term(const Exponents& e, const Rational& c) {
  if (e.size() != symbols_->size()) throw UsageError("exponent vector width mismatch");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void MultiPoly::require_compatible(const MultiPoly& o) const {
  if (!same_symbols(symbols_, o.symbols_)) {
    throw UsageError("polynomials over different indeterminate lists");
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  require_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  require_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  require_compatible(o);
  TermMap out;
  Exponents e(symbols_->size());
  for (const auto& [ex, cx] : terms_) {
    for (const auto& [ey, cy] : o.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ex[i] + ey[i];
      auto [it, inserted] = out.try_emplace(e, cx * cy);
      if (!inserted) {
        it->second += cx * cy;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  terms_ = std::move(out);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(symbols_, Rational(1));
  MultiPoly base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e > 0) base *= base;
  }
  return result;
}

MultiPoly MultiPoly::substitute(const std::map<std::string, Rational>& bindings) const {
  std::vector<std::pair<std::size_t, Rational>> idx;
  for (const auto& [name, value] : bindings) idx.emplace_back(symbols_->index_of(name), value);
  MultiPoly out(symbols_);
  for (const auto& [e, c] : terms_) {
    Exponents ne = e;
    Rational coeff = c;
    for (const auto& [i, v] : idx) {
      for (std::uint32_t k = 0; k < ne[i]; ++k) coeff *= v;
      ne[i] = 0;
    }
    out.add_term(ne, coeff);
  }
  return out;
}

Rational MultiPoly::evaluate(const std::map<std::string, Rational>& bindings) const {
  const MultiPoly r = substitute(bindings);
  if (!r.is_constant()) {
    throw UsageError("evaluate: unbound indeterminates in " + r.to_string());
  }
  return r.constant_term();
}

MultiPoly MultiPoly::compose(std::string_view name, const MultiPoly& value) const {
  require_compatible(value);
  const auto i = symbols_->index_of(name);
  MultiPoly out(symbols_);
  std::vector<MultiPoly> powers{constant(symbols_, Rational(1))};
  for (const auto& [e, c] : terms_) {
    while (powers.size() <= e[i]) powers.push_back(powers.back() * value);
    Exponents rest = e;
    rest[i] = 0;
    MultiPoly mono(symbols_);
    mono.add_term(rest, c);
    out += mono * powers[e[i]];
  }
  return out;
}

std::pair<MultiPoly, MultiPoly> MultiPoly::divmod(const MultiPoly& divisor) const {
  require_compatible(divisor);
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  const auto& [lead_e, lead_c] = *divisor.terms_.begin();
  MultiPoly quotient(symbols_);
  MultiPoly remainder(symbols_);
  MultiPoly rest = *this;
  while (!rest.is_zero()) {
    const auto [e, c] = *rest.terms_.begin();
    bool divisible = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < lead_e[i]) {
        divisible = false;
        break;
      }
    }
    MultiPoly term(symbols_);
    if (divisible) {
      Exponents q(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) q[i] = e[i] - lead_e[i];
      term.add_term(q, c / lead_c);
      quotient += term;
      rest -= term * divisor;
    } else {
      term.add_term(e, c);
      remainder += term;
      rest -= term;
    }
  }
  return {quotient, remainder};
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    const bool neg = c.sign() < 0;
    const Rational mag = c.abs();
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    const bool unit = mag == Rational(1);
    if (!unit) {
      os << mag.to_string();
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << symbols_->name(i);
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
    if (!wrote) os << "1";
  }
  return os.str();
}

bool operator==(const MultiPoly& x, const MultiPoly& y) {
  return same_symbols(x.symbols_, y.symbols_) && x.terms_ == y.terms_;
}

MultiPoly poly_arith(PolyOp op, const MultiPoly& p, const MultiPoly& q) {
  switch (op) {
    case PolyOp::kAdd: return p + q;
    case PolyOp::kSub: return p - q;
    case PolyOp::kMul: return p * q;
  }
  throw UsageError("unknown polynomial operation");
}

MultiPoly det3(const PolyMatrix& m) {
  if (m.size() != 3 || m[0].size() != 3 || m[1].size() != 3 || m[2].size() != 3) {
    throw UsageError("det3 expects a 3x3 matrix");
  }
  const auto minor = [&](int c0, int c1) { return m[1][c0] * m[2][c1] - m[1][c1] * m[2][c0]; };
  return m[0][0] * minor(1, 2) - m[0][1] * minor(0, 2) + m[0][2] * minor(0, 1);
}

}  // namespace svir
