#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "../support/gen.hpp"
#include "../support/golden.hpp"
#include "svir/cli.hpp"

using namespace svir;

namespace {

HalfIndex H(std::int64_t doubled) { return HalfIndex::from_doubled(doubled); }

struct Ran {
  int code;
  std::string out, err;
};

Ran run_args(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(ParseElement, Examples) {
  const Sector s = Sector::kOriginal;
  EXPECT_EQ(parse_element("L[2]", s), AlgebraElement(Generator::L(2), 1));
  AlgebraElement want(Generator::Y(H(1)), Rational(3, 2));
  want.add(Generator::M(-1), -1);
  EXPECT_EQ(parse_element("3/2*Y[1/2] - M[-1]", s), want);
  try {
    parse_element("Y[1]", s);
    FAIL() << "parity accepted";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("Y[1]"), std::string::npos);
  }
}

TEST(ParseElement, SyntaxErrorsCarryPositions) {
  const Sector s = Sector::kOriginal;
  for (const char* bad : {"", "L[", "L[1", "Q[1]", "2*", "L[1] +", "L[1/0]", "L[1] L[2]", "3/*L[1]"}) {
    EXPECT_THROW(parse_element(bad, s), UsageError) << bad;
  }
  try {
    parse_element("L[1] + Q[2]", s);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
  EXPECT_TRUE(parse_element("0", s).is_zero());
  EXPECT_EQ(parse_element(" C ", s), AlgebraElement(Generator::C(), 1));
  EXPECT_TRUE(parse_element("L[1] - L[1]", s).is_zero());
}

TEST(FormatElement, Examples) {
  EXPECT_EQ(format_element(AlgebraElement(Generator::L(0), -2)), "-2*L[0]");
  EXPECT_EQ(format_element(AlgebraElement()), "0");
  EXPECT_EQ(format_element(AlgebraElement(Generator::M(3), 2)), "2*M[3]");
  AlgebraElement e(Generator::C(), Rational(1, 2));
  e.add(Generator::L(0), -4);
  EXPECT_EQ(format_element(e), "-4*L[0] + 1/2*C");
  EXPECT_EQ(format_element(AlgebraElement(Generator::Y(H(-3)), -1)), "-Y[-3/2]");
}

TEST(FormatElement, RoundTripCorpus) {
  std::mt19937_64 rng(91);
  int n = 0;
  for (const Sector s : {Sector::kTwisted, Sector::kOriginal}) {
    for (int t = 0; t < 500; ++t, ++n) {
      const AlgebraElement e = testgen::element(rng, s, 1 + t % 6, 20);
      const std::string text = format_element(e);
      EXPECT_EQ(parse_element(text, s), e) << text;
      EXPECT_EQ(format_element(parse_element(text, s)), text);
    }
  }
  EXPECT_EQ(n, 1000);
}

TEST(ParseVector, Basic) {
  ModuleVector want(H(-4), 2);
  want.add(H(1), 1);
  EXPECT_EQ(parse_vector("2*x[-2] + x[1/2]"), want);
  EXPECT_THROW(parse_vector("y[1]"), UsageError);
  EXPECT_THROW(parse_vector("x[1/3]"), UsageError);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(run_args({"bracket", "L[1]", "L[-1]"}).code, 0);
  EXPECT_EQ(run_args({"bracket", "Y[1]", "L[-1]"}).code, 2);
  EXPECT_EQ(run_args({"frobnicate"}).code, 2);
  EXPECT_EQ(run_args({}).code, 2);
  EXPECT_EQ(run_args({"--help"}).code, 0);
  EXPECT_EQ(run_args({"--window", "-3", "verify", "torus", "--family", "SV-Aab", "--params", "a=0,b=0"}).code, 2);
  EXPECT_EQ(run_args({"verify", "family", "--family", "SV-Aab", "--params", "a=1/3,b=2,f0=1,d0=1",
                      "--window", "4", "--genrange", "1"})
                .code,
            1);
  EXPECT_EQ(run_args({"classify", "deform", "--preset", "1.1", "--assert-feasible"}).code, 1);
  EXPECT_EQ(run_args({"classify", "deform", "--preset", "1.1"}).code, 0);
  EXPECT_EQ(run_args({"classify", "deform", "--preset", "1.2", "--assert-feasible"}).code, 0);
}

TEST(Run, BracketJson) {
  const Ran r = run_args({"bracket", "L[2]", "L[-2]", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["results"]["result"], "-4*L[0] + 1/2*C");
  EXPECT_EQ(j["typo_ledger_hash"], typo_ledger_hash());
  EXPECT_TRUE(j["timing"]["elapsed_ms"].is_number_integer());
  for (const char* key : {"command", "inputs", "sector", "results", "timing", "version"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Run, DeterministicModuloTiming) {
  const std::vector<std::string> args{"--seed", "17", "classify", "delta-verify", "--points", "25",
                                      "--format", "json"};
  const Ran a = run_args(args), b = run_args(args);
  EXPECT_EQ(golden::normalize(a.out), golden::normalize(b.out));
  const Ran c = run_args({"--seed", "18", "classify", "delta-verify", "--points", "25", "--format", "json"});
  EXPECT_NE(golden::normalize(a.out), golden::normalize(c.out));
}

TEST(Run, OutFileIsWritten) {
  const auto dir = std::filesystem::temp_directory_path() / "svir_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "report.json";
  std::filesystem::remove(path);
  const Ran r = run_args({"bracket", "L[1]", "L[-1]", "--format", "json", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j["results"]["result"], "-2*L[0]");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  EXPECT_EQ(run_args({"bracket", "L[1]", "L[-1]", "--out", (dir / "no/such/dir/x").string()}).code, 2);
}

TEST(Golden, Transcripts) {
  const auto outcomes = golden::check_all(golden::default_dir());
  EXPECT_GE(outcomes.size(), 10u);
  for (const auto& o : outcomes) EXPECT_TRUE(o.ok) << o.name << ": " << o.detail;
}
