#include <gtest/gtest.h>

#include <random>

#include "../support/gen.hpp"
#include "svir/algebra.hpp"
#include "svir/errors.hpp"

using namespace svir;

namespace {

HalfIndex H(std::int64_t doubled) { return HalfIndex::from_doubled(doubled); }

AlgebraElement E(const Generator& g, const Rational& c = 1) { return {g, c}; }

// The five bracket rules written out again, without going through the
// library's dispatch, as an oracle.
AlgebraElement oracle_bracket(const Generator& x, const Generator& y) {
  using K = GenKind;
  AlgebraElement out;
  const Rational i = x.index.value(), j = y.index.value();
  if (x.kind == K::kC || y.kind == K::kC) return out;
  if (x.kind == K::kL && y.kind == K::kL) {
    out.add({K::kL, x.index + y.index}, j - i);
    if (i + j == Rational(0)) out.add(Generator::C(), (i * i * i - i) / Rational(12));
    return out;
  }
  if (x.kind == K::kL && y.kind == K::kY) {
    out.add({K::kY, x.index + y.index}, j - i / Rational(2));
    return out;
  }
  if (x.kind == K::kL && y.kind == K::kM) {
    out.add({K::kM, x.index + y.index}, j);
    return out;
  }
  if (x.kind == K::kY && y.kind == K::kY) {
    out.add({K::kM, x.index + y.index}, j - i);
    return out;
  }
  if (y.kind == K::kL) {
    AlgebraElement r = oracle_bracket(y, x);
    return r.scale(Rational(-1));
  }
  return out;  // [Y,M] = [M,Y] = [M,M] = 0
}

std::vector<Generator> all_gens(Sector s, std::int64_t bound) {
  auto g = generators_up_to(s, H(bound));
  g.push_back(Generator::C());
  return g;
}

}  // namespace

TEST(Bracket, Examples) {
  const Sector s = Sector::kOriginal;
  EXPECT_EQ(bracket(Generator::L(1), Generator::L(-1), s), E(Generator::L(0), -2));
  AlgebraElement want = E(Generator::L(0), -4);
  want.add(Generator::C(), Rational(1, 2));
  EXPECT_EQ(bracket(Generator::L(2), Generator::L(-2), s), want);
  EXPECT_EQ(bracket(Generator::Y(H(1)), Generator::Y(H(5)), s), E(Generator::M(3), 2));
  EXPECT_TRUE(bracket(Generator::Y(H(3)), Generator::M(2), s).is_zero());
}

TEST(Bracket, SectorMismatchIsUsageError) {
  EXPECT_THROW(bracket(Generator::L(1), Generator::Y(H(2)), Sector::kOriginal), UsageError);
  EXPECT_THROW(bracket(Generator::Y(H(1)), Generator::L(1), Sector::kTwisted), UsageError);
  EXPECT_THROW(validate_generator({GenKind::kL, H(1)}, Sector::kOriginal), UsageError);
  EXPECT_NO_THROW(bracket(Generator::Y(H(2)), Generator::L(1), Sector::kTwisted));
}

TEST(Bracket, AgreesWithOracle) {
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    const auto gens = all_gens(s, 8);
    for (const auto& x : gens) {
      for (const auto& y : gens) EXPECT_EQ(bracket(x, y, s), oracle_bracket(x, y)) << x.to_string() << "," << y.to_string();
    }
  }
}

TEST(AdWeight, Examples) {
  EXPECT_EQ(ad_weight(Generator::Y(H(3))), H(3));
  EXPECT_EQ(ad_weight(Generator::M(-2)), H(-4));
  EXPECT_EQ(ad_weight(Generator::C()), H(0));
  EXPECT_EQ(ad_weight(Generator::L(0)), H(0));
}

TEST(AdWeight, IsTheL0Eigenvalue) {
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    for (const auto& g : all_gens(s, 8)) {
      EXPECT_EQ(bracket(Generator::L(0), g, s), E(g, ad_weight(g).value()));
    }
  }
}

TEST(Jacobi, Examples) {
  const Sector s = Sector::kOriginal;
  EXPECT_TRUE(jacobi_residual(Generator::L(2), Generator::L(-1), Generator::L(-1), s).is_zero());
  EXPECT_TRUE(jacobi_residual(Generator::L(1), Generator::L(2), Generator::Y(H(1)), s).is_zero());
  EXPECT_TRUE(jacobi_residual(Generator::Y(H(1)), Generator::Y(H(3)), Generator::L(1), s).is_zero());
}

TEST(Bracket, AntisymmetryAndJacobiExhaustive) {
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    const auto gens = all_gens(s, 8);
    std::size_t triples = 0;
    for (const auto& x : gens) {
      for (const auto& y : gens) {
        AlgebraElement sum = bracket(x, y, s) + bracket(y, x, s);
        ASSERT_TRUE(sum.is_zero()) << x.to_string() << "," << y.to_string();
        for (const auto& z : gens) {
          ASSERT_TRUE(jacobi_residual(x, y, z, s).is_zero());
          ++triples;
        }
      }
    }
    EXPECT_GT(triples, 1000u);
  }
}

TEST(Bracket, GradingProperty) {
  std::mt19937_64 rng(21);
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    for (int t = 0; t < 500; ++t) {
      const Generator x = testgen::generator(rng, s, 10), y = testgen::generator(rng, s, 10);
      const HalfIndex w = ad_weight(x) + ad_weight(y);
      const AlgebraElement br = bracket(x, y, s);
      for (const auto& [g, c] : br.terms()) EXPECT_EQ(ad_weight(g), w);
    }
  }
}

TEST(Bracket, BilinearExtensionProperty) {
  std::mt19937_64 rng(22);
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    for (int t = 0; t < 200; ++t) {
      const AlgebraElement x = testgen::element(rng, s), y = testgen::element(rng, s),
                           z = testgen::element(rng, s);
      EXPECT_EQ(bracket(x, y + z, s), bracket(x, y, s) + bracket(x, z, s));
      AlgebraElement neg = bracket(y, x, s);
      neg.scale(Rational(-1));
      EXPECT_EQ(bracket(x, y, s), neg);
      // Jacobi on random combinations as well.
      AlgebraElement j = bracket(x, bracket(y, z, s), s) + bracket(y, bracket(z, x, s), s) +
                         bracket(z, bracket(x, y, s), s);
      EXPECT_TRUE(j.is_zero());
    }
  }
}

TEST(Bracket, CenterIsCentral) {
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    for (const auto& g : all_gens(s, 8)) {
      EXPECT_TRUE(bracket(Generator::C(), g, s).is_zero());
      EXPECT_TRUE(bracket(g, Generator::C(), s).is_zero());
    }
  }
}

TEST(Bracket, NestedLYIdentity) {
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    for (std::int64_t m = -4; m <= 4; ++m) {
      for (std::int64_t n = -4; n <= 4; ++n) {
        for (std::int64_t d = -8; d <= 8; ++d) {
          const HalfIndex p = H(d);
          if (!y_index_allowed(s, p)) continue;
          const Rational pv = p.value();
          AlgebraElement lhs =
              bracket(E(Generator::L(m)), bracket(E(Generator::L(n)), E(Generator::Y(p)), s), s);
          lhs.scale(pv - Rational(m + n, 2));
          AlgebraElement rhs = bracket(Generator::L(m + n), Generator::Y(p), s);
          rhs.scale((pv - Rational(n, 2)) * (Rational(n) + pv - Rational(m, 2)));
          EXPECT_EQ(lhs, rhs);
        }
      }
    }
  }
}

TEST(Bracket, SymbolicScalars) {
  const auto& S = standard_symbols();
  const MultiPoly a = MultiPoly::var(S, "a"), b = MultiPoly::var(S, "b");
  SymbolicElement x(Generator::L(1), a);
  SymbolicElement y(Generator::Y(H(3)), b);
  const SymbolicElement r = bracket(x, y, Sector::kOriginal);
  ASSERT_EQ(r.terms().size(), 1u);
  EXPECT_EQ(r.terms().begin()->first, Generator::Y(H(5)));
  EXPECT_EQ(r.terms().begin()->second, a * b);
}

TEST(Sector, ParseAndParity) {
  EXPECT_EQ(parse_sector("0"), Sector::kTwisted);
  EXPECT_EQ(parse_sector("1/2"), Sector::kOriginal);
  EXPECT_THROW(parse_sector("1"), UsageError);
  EXPECT_TRUE(y_index_allowed(Sector::kOriginal, H(1)));
  EXPECT_FALSE(y_index_allowed(Sector::kOriginal, H(2)));
  EXPECT_TRUE(y_index_allowed(Sector::kTwisted, H(2)));
  EXPECT_THROW(HalfIndex::from_rational(Rational(1, 3)), UsageError);
}
