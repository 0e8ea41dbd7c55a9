#include "svir/algebra.hpp"

#include "svir/errors.hpp"

namespace svir {

HalfIndex HalfIndex::from_rational(const Rational& r) {
  const Rational twice = r * Rational(2);
  if (!twice.is_integer() || !twice.numerator().fits_slong_p()) {
    throw UsageError("index " + r.to_string() + " is not in (1/2)Z");
  }
  return HalfIndex(twice.numerator().get_si());
}

Rational sector_shift(Sector s) { return s == Sector::kOriginal ? Rational(1, 2) : Rational(0); }

std::string sector_name(Sector s) { return s == Sector::kOriginal ? "1/2" : "0"; }

Sector parse_sector(const std::string& text) {
  if (text == "0") return Sector::kTwisted;
  if (text == "1/2") return Sector::kOriginal;
  throw UsageError("sector must be 0 or 1/2, got '" + text + "'");
}

bool y_index_allowed(Sector s, HalfIndex p) {
  return s == Sector::kOriginal ? !p.is_integer() : p.is_integer();
}

std::string Generator::to_string() const {
  switch (kind) {
    case GenKind::kL: return "L[" + index.to_string() + "]";
    case GenKind::kY: return "Y[" + index.to_string() + "]";
    case GenKind::kM: return "M[" + index.to_string() + "]";
    case GenKind::kC: return "C";
  }
  return "?";
}

void validate_generator(const Generator& g, Sector s) {
  switch (g.kind) {
    case GenKind::kL:
    case GenKind::kM:
      if (!g.index.is_integer()) {
        throw UsageError(g.to_string() + " invalid: L and M carry integer indices");
      }
      break;
    case GenKind::kY:
      if (!y_index_allowed(s, g.index)) {
        throw UsageError(g.to_string() + " invalid in sector " + sector_name(s) +
                         ": Y-indices must lie in " +
                         (s == Sector::kOriginal ? "1/2+Z" : "Z"));
      }
      break;
    case GenKind::kC:
      if (g.index != HalfIndex()) throw UsageError("C carries no index");
      break;
  }
}

std::vector<Generator> generators_up_to(Sector s, HalfIndex bound) {
  std::vector<Generator> out;
  const auto b = bound.doubled();
  for (auto d = -b; d <= b; ++d) {
    const auto idx = HalfIndex::from_doubled(d);
    if (idx.is_integer()) out.push_back({GenKind::kL, idx});
  }
  for (auto d = -b; d <= b; ++d) {
    const auto idx = HalfIndex::from_doubled(d);
    if (y_index_allowed(s, idx)) out.push_back({GenKind::kY, idx});
  }
  for (auto d = -b; d <= b; ++d) {
    const auto idx = HalfIndex::from_doubled(d);
    if (idx.is_integer()) out.push_back({GenKind::kM, idx});
  }
  return out;
}

namespace {

// Brackets with x.kind <= y.kind; the caller handles the swap.
AlgebraElement ordered_bracket(const Generator& x, const Generator& y) {
  const Rational i = x.index.value();
  const Rational j = y.index.value();
  AlgebraElement out;
  if (x.kind == GenKind::kC || y.kind == GenKind::kC) return out;
  if (x.kind == GenKind::kL && y.kind == GenKind::kL) {
    out.add(Generator{GenKind::kL, x.index + y.index}, j - i);
    if (x.index == -y.index) out.add(Generator::C(), (i * i * i - i) / Rational(12));
  } else if (x.kind == GenKind::kL && y.kind == GenKind::kY) {
    out.add(Generator{GenKind::kY, x.index + y.index}, j - i / Rational(2));
  } else if (x.kind == GenKind::kL && y.kind == GenKind::kM) {
    out.add(Generator{GenKind::kM, x.index + y.index}, j);
  } else if (x.kind == GenKind::kY && y.kind == GenKind::kY) {
    out.add(Generator{GenKind::kM, x.index + y.index}, j - i);
  }
  return out;
}

}  // namespace

AlgebraElement bracket(const Generator& x, const Generator& y, Sector s) {
  validate_generator(x, s);
  validate_generator(y, s);
  if (x.kind <= y.kind) return ordered_bracket(x, y);
  AlgebraElement out = ordered_bracket(y, x);
  return out.scale(Rational(-1));
}

HalfIndex ad_weight(const Generator& g) {
  return g.kind == GenKind::kC ? HalfIndex() : g.index;
}

AlgebraElement jacobi_residual(const Generator& x, const Generator& y, const Generator& z,
                               Sector s) {
  const AlgebraElement ex(x, Rational(1));
  const AlgebraElement ey(y, Rational(1));
  const AlgebraElement ez(z, Rational(1));
  AlgebraElement r = bracket(ex, bracket(ey, ez, s), s);
  r += bracket(ey, bracket(ez, ex, s), s);
  r += bracket(ez, bracket(ex, ey, s), s);
  return r;
}

}  // namespace svir
