#include "svir/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "svir/classify.hpp"
#include "svir/verify.hpp"

#ifndef SVIR_VERSION
#define SVIR_VERSION "0.0.0"
#endif

namespace svir {

// ---- expressions ------------------------------------------------------------

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[nodiscard]] bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  [[nodiscard]] char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  [[nodiscard]] std::size_t pos() const { return pos_; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("syntax error: " + what, pos_);
  }

  // rational := ['-'|'+'] digits ['/' digits]
  Rational rational(bool allow_sign) {
    skip_ws();
    const std::size_t start = pos_;
    if (allow_sign && pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected a number");
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      const std::size_t den = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == den) fail("expected a positive denominator");
    }
    try {
      return Rational::parse(s_.substr(start, pos_ - start));
    } catch (const UsageError& e) {
      throw ParseError(std::string("bad number: ") + e.what(), start);
    }
  }
  [[nodiscard]] bool at_digit() {
    skip_ws();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

bool is_literal_zero(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  }
  return t == "0";
}

// Parses the shared sum-of-terms shape; `atom` reads one basis symbol and
// returns a callback adding coeff * symbol to the result.
template <class Atom>
void parse_sum(Lexer& lx, Atom&& atom) {
  bool first = true;
  while (true) {
    Rational sign(1);
    if (lx.accept('-')) {
      sign = Rational(-1);
    } else if (!lx.accept('+') && !first) {
      lx.fail("expected '+' or '-'");
    }
    first = false;
    Rational c(1);
    if (lx.at_digit()) {
      c = lx.rational(false);
      lx.expect('*');
    }
    atom(sign * c);
    if (lx.done()) break;
  }
}

}  // namespace

AlgebraElement parse_element(std::string_view text, Sector sector) {
  AlgebraElement out;
  if (is_literal_zero(text)) return out;
  Lexer lx(text);
  if (lx.done()) throw ParseError("syntax error: empty expression", 0);
  parse_sum(lx, [&](const Rational& c) {
    const std::size_t at = lx.pos();
    const char k = lx.peek();
    Generator g;
    if (k == 'C') {
      lx.expect('C');
      g = Generator::C();
    } else if (k == 'L' || k == 'Y' || k == 'M') {
      lx.expect(k);
      lx.expect('[');
      const Rational idx = lx.rational(true);
      lx.expect(']');
      HalfIndex h;
      try {
        h = HalfIndex::from_rational(idx);
      } catch (const UsageError&) {
        throw ParseError(std::string(1, k) + "[" + idx.to_string() + "] index is not in (1/2)Z", at);
      }
      g = Generator{k == 'L' ? GenKind::kL : (k == 'Y' ? GenKind::kY : GenKind::kM), h};
      try {
        validate_generator(g, sector);
      } catch (const UsageError& e) {
        throw ParseError(e.what(), at);
      }
    } else {
      lx.fail("expected L[..], Y[..], M[..] or C");
    }
    out.add(g, c);
  });
  return out;
}

std::string format_element(const AlgebraElement& e) {
  if (e.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [g, c] : e.terms()) {
    const bool neg = c.sign() < 0;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    const Rational mag = c.abs();
    if (mag != Rational(1)) s += mag.to_string() + "*";
    s += g.to_string();
  }
  return s;
}

ModuleVector parse_vector(std::string_view text) {
  ModuleVector out;
  if (is_literal_zero(text)) return out;
  Lexer lx(text);
  if (lx.done()) throw ParseError("syntax error: empty expression", 0);
  parse_sum(lx, [&](const Rational& c) {
    const std::size_t at = lx.pos();
    lx.expect('x');
    lx.expect('[');
    const Rational idx = lx.rational(true);
    lx.expect(']');
    try {
      out.add(HalfIndex::from_rational(idx), c);
    } catch (const UsageError&) {
      throw ParseError("x[" + idx.to_string() + "] index is not in (1/2)Z", at);
    }
  });
  return out;
}

// ---- commands ---------------------------------------------------------------

namespace {

using nlohmann::json;

struct Global {
  std::string sector = "1/2";
  std::optional<std::int64_t> window;
  std::optional<std::string> genrange;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::string out;
};

struct Outcome {
  json inputs = json::object();
  json results = json::object();
  std::string text;
  int code = 0;
};

struct FamilyOpts {
  std::string family;
  std::string params;
};

void add_family_opts(CLI::App* sub, FamilyOpts& f) {
  sub->add_option("--family", f.family, "Family tag, e.g. SV-Aab")->required();
  sub->add_option("--params", f.params, "Parameters, e.g. a=1/3,b=2");
}

Sector sector_of(const Global& g) { return parse_sector(g.sector); }

std::int64_t window_of(const Global& g, std::int64_t fallback) {
  const auto w = g.window.value_or(fallback);
  if (w < 0) throw UsageError("--window must be non-negative");
  return w;
}

HalfIndex genrange_of(const Global& g, std::int64_t fallback) {
  if (!g.genrange) return HalfIndex::integer(fallback);
  const HalfIndex r = HalfIndex::from_rational(Rational::parse(*g.genrange));
  if (r.doubled() < 0) throw UsageError("--genrange must be non-negative");
  return r;
}

Family make_family(const FamilyOpts& f, Sector s) {
  return Family(parse_family(f.family), FamilyParams::parse(f.params), s);
}

std::string params_text(const json& params) { return params.dump(); }

std::string set_text(const std::set<HalfIndex>& indices, const std::vector<HalfIndex>& lattice) {
  std::vector<HalfIndex> in(indices.begin(), indices.end());
  std::vector<HalfIndex> outside;
  for (auto k : lattice) {
    if (indices.count(k) == 0) outside.push_back(k);
  }
  const auto list = [](const std::vector<HalfIndex>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
    return s + "}";
  };
  if (outside.size() < in.size()) return "window minus " + list(outside);
  return list(in);
}

void echo_family(Outcome& o, const FamilyOpts& f) {
  o.inputs["family"] = f.family;
  o.inputs["params"] = f.params;
}

void append_violations(std::ostringstream& t, const ResidualReport& r, std::size_t limit) {
  std::size_t shown = 0;
  for (const auto& v : r.violations) {
    if (shown++ == limit) {
      t << "  ... " << (r.violations.size() - limit) << " more\n";
      break;
    }
    t << "  [" << v.g1.to_string() << "," << v.g2.to_string() << "]x[" << v.k.to_string()
      << "]: " << v.residual.to_string() << "\n";
  }
}

Outcome cmd_bracket(const Global& g, const std::string& e1, const std::string& e2) {
  Outcome o;
  const Sector s = sector_of(g);
  const AlgebraElement x = parse_element(e1, s);
  const AlgebraElement y = parse_element(e2, s);
  const std::string r = format_element(bracket(x, y, s));
  o.inputs = {{"e1", e1}, {"e2", e2}};
  o.results = {{"result", r}};
  o.text = "[" + format_element(x) + ", " + format_element(y) + "] = " + r + "\n";
  return o;
}

Outcome cmd_act(const Global& g, const FamilyOpts& f, const std::string& gen,
                const std::string& vec) {
  Outcome o;
  const Sector s = sector_of(g);
  const Family fam = make_family(f, s);
  const AlgebraElement e = parse_element(gen, s);
  const ModuleVector v = parse_vector(vec);
  ModuleVector r;
  for (const auto& [h, c] : e.terms()) {
    ModuleVector part = act(fam, h, v);
    ModuleVector scaled;
    for (const auto& [k, x] : part.terms()) scaled.add(k, x * c);
    r += scaled;
  }
  echo_family(o, f);
  o.inputs["gen"] = gen;
  o.inputs["vec"] = vec;
  o.results = {{"result", r.to_string()}};
  o.text = "(" + format_element(e) + ") . (" + v.to_string() + ") = " + r.to_string() + "\n";
  return o;
}

Outcome cmd_verify_family(const Global& g, const FamilyOpts& f) {
  Outcome o;
  const Family fam = make_family(f, sector_of(g));
  const auto window = window_of(g, 12);
  const auto range = genrange_of(g, 3);
  const ResidualReport r = verify_family(fam, window, range);
  echo_family(o, f);
  o.inputs["window"] = window;
  o.inputs["genrange"] = range.to_string();
  o.results = r.to_json();
  std::ostringstream t;
  t << fam.label() << " " << params_text(fam.params_json()) << ": checked " << r.checked
    << " triples, " << r.violations.size() << " violations\n";
  append_violations(t, r, 20);
  o.text = t.str();
  o.code = r.ok() ? 0 : 1;
  return o;
}

Outcome cmd_verify_all(const Global& g, int tuples) {
  Outcome o;
  const auto window = window_of(g, 12);
  const auto range = genrange_of(g, 3);
  std::mt19937_64 rng(g.seed);
  json runs = json::array();
  std::ostringstream t;
  std::size_t total = 0, bad = 0;
  for (FamilyId id : all_families()) {
    for (int i = 0; i < tuples; ++i) {
      const Family fam(id, random_params(id, rng));
      const ResidualReport r = verify_family(fam, window, range);
      runs.push_back(r.to_json());
      ++total;
      if (!r.ok()) ++bad;
      t << fam.label() << " " << params_text(fam.params_json()) << ": " << r.violations.size()
        << " violations (" << r.checked << " triples)\n";
    }
  }
  t << "total: " << total << " runs, " << bad << " with violations\n";
  o.inputs = {{"tuples", tuples}, {"window", window}, {"genrange", range.to_string()},
              {"seed", g.seed}};
  o.results = {{"runs", runs}, {"total", total}, {"failing", bad}};
  o.text = t.str();
  o.code = bad == 0 ? 0 : 1;
  return o;
}

Outcome cmd_verify_torus(const Global& g, const FamilyOpts& f) {
  Outcome o;
  const Family fam = make_family(f, sector_of(g));
  const auto window = window_of(g, 12);
  const bool ok = torus_check(fam, window);
  echo_family(o, f);
  o.inputs["window"] = window;
  o.results = {{"diagonal", ok}};
  o.text = fam.label() + " " + params_text(fam.params_json()) + ": torus acts " +
           (ok ? "diagonally with M0 = c = 0" : "NOT as expected") + "\n";
  o.code = ok ? 0 : 1;
  return o;
}

Outcome cmd_verify_injectivity(const Global& g, const FamilyOpts& f, const std::string& k,
                               std::int64_t i) {
  Outcome o;
  const Family fam = make_family(f, sector_of(g));
  const HalfIndex kk = HalfIndex::from_rational(Rational::parse(k));
  const bool inj = injectivity_check(fam, kk, i);
  echo_family(o, f);
  o.inputs["k"] = kk.to_string();
  o.inputs["i"] = i;
  o.results = {{"injective", inj}};
  o.text = fam.label() + " at x[" + kk.to_string() + "], i = " + std::to_string(i) + ": " +
           (inj ? "injective" : "not injective (all four coefficients vanish)") + "\n";
  return o;
}

Outcome cmd_scan(const Global& g, const FamilyOpts& f) {
  Outcome o;
  const Family fam = make_family(f, sector_of(g));
  const auto window = window_of(g, 12);
  const auto range = genrange_of(g, 3);
  const auto sets = scan_submodules(fam, window, range);
  const auto lattice = window_indices(fam, window);
  json arr = json::array();
  std::ostringstream t;
  t << fam.label() << " " << params_text(fam.params_json()) << ": " << sets.size()
    << " proper invariant set(s) within window\n";
  bool all_ok = true;
  for (const auto& s : sets) {
    json j = s.to_json();
    t << "  " << set_text(s.indices, lattice) << (s.certified ? " certified" : " NOT certified");
    if (s.certified) {
      const SubQuotient sq = sub_quotient(fam, s, window, range);
      const ResidualReport rs = verify_model(sq.sub, window, range);
      const ResidualReport rq = verify_model(sq.quotient, window, range);
      j["sub_violations"] = rs.violations.size();
      j["quotient_violations"] = rq.violations.size();
      t << "; sub " << rs.violations.size() << " / quotient " << rq.violations.size()
        << " violations";
      all_ok = all_ok && rs.ok() && rq.ok();
    } else {
      all_ok = false;
    }
    t << "\n";
    arr.push_back(j);
  }
  if (sets.empty()) t << "  no proper invariant set within window\n";
  echo_family(o, f);
  o.inputs["window"] = window;
  o.inputs["genrange"] = range.to_string();
  o.results = {{"sets", arr}};
  o.text = t.str();
  o.code = all_ok ? 0 : 1;
  return o;
}

Outcome cmd_delta(const Global& g, std::size_t points) {
  Outcome o;
  const DeltaReport r = verify_delta_factorization(points, g.seed);
  o.inputs = {{"points", points}, {"seed", g.seed}};
  o.results = r.to_json();
  std::ostringstream t;
  bool single_ok = false;
  for (const auto& d : r.readings) {
    t << "Delta3 " << d.name << " reading: symbolic " << (d.symbolic_equal ? "equal" : "differs")
      << ", " << d.agreements << "/" << d.points << " points agree\n";
    if (d.name == "single") single_ok = d.symbolic_equal && d.agreements == d.points;
  }
  o.text = t.str();
  o.code = single_ok ? 0 : 1;
  return o;
}

Outcome cmd_scan_bb(const Global& g, const std::string& grid, const std::string& grid_bp,
                    std::size_t samples) {
  Outcome o;
  const auto bs = parse_grid(grid);
  const auto bps = parse_grid(grid_bp.empty() ? grid : grid_bp);
  const AdmissibleReport r = admissible_scan(bs, bps, samples, g.seed);
  o.inputs = {{"grid", grid}, {"grid_bp", grid_bp.empty() ? grid : grid_bp},
              {"samples", samples}, {"seed", g.seed}};
  o.results = r.to_json();
  std::ostringstream t;
  t << r.pairs.size() << " admissible pair(s) out of " << r.grid_size << "\n";
  for (const auto& p : r.pairs) {
    t << "  (" << p.b.to_string() << ", " << p.bp.to_string() << ") via " << p.reason << "\n";
  }
  t << "sampled determinant route " << (r.routes_agree ? "agrees" : "DISAGREES") << "\n";
  o.text = t.str();
  o.code = r.routes_agree ? 0 : 1;
  return o;
}

struct AnsatzOpts {
  std::string a = "1/7", b = "1/3", bp, f0 = "1", d0 = "0";
};

Outcome cmd_solve(const Global& g, const AnsatzOpts& a) {
  Outcome o;
  AnsatzConfig c;
  c.sector = sector_of(g);
  c.a = Rational::parse(a.a);
  c.b = Rational::parse(a.b);
  c.bp = a.bp.empty() ? c.b + Rational(1, 2) : Rational::parse(a.bp);
  c.f0 = Rational::parse(a.f0);
  c.d0 = Rational::parse(a.d0);
  c.window = window_of(g, 8);
  c.genrange = genrange_of(g, 2);
  const AnsatzReport r = solve_ansatz(c);
  o.inputs = c.to_json();
  o.results = r.to_json();
  std::ostringstream t;
  t << "stage 1: " << r.stage1.unknowns << " unknowns, " << r.stage1.rows << " rows, rank "
    << r.stage1.rank << ", nullity " << r.stage1.nullity << "\n";
  t << "  closed-form patterns " << (r.patterns_in_nullspace ? "solve" : "do not solve")
    << " the rows and " << (r.patterns_span_nullspace ? "span" : "do not span")
    << " the nullspace\n";
  t << "stage 2: " << (r.stage2.consistent ? "consistent" : "inconsistent") << ", nullity "
    << r.stage2.nullity << "\n";
  t << "stage 3: " << (r.stage3.consistent ? "consistent" : "inconsistent") << "\n";
  if (!r.stage3.consistent) {
    t << "  witness: 0 = " << r.stage3.witness_value.to_string() << " from "
      << r.stage3.witness.size() << " rows, first " << r.stage3.witness.front().tag << "\n";
  }
  o.text = t.str();
  return o;
}

struct DeformOpts {
  std::string preset;
  FamilyOpts fam;
  std::string k0 = "0";
  std::string direction = "outgoing";
  std::string alpha = "1";
  bool assert_feasible = false;
};

Outcome cmd_deform(const Global& g, const DeformOpts& d) {
  Outcome o;
  const Rational alpha = Rational::parse(d.alpha);
  DeformationSpec spec;
  if (!d.preset.empty()) {
    spec = deformation_preset(d.preset, alpha);
  } else {
    if (d.fam.family.empty()) throw UsageError("deform needs --preset or --family");
    spec.name = "custom";
    spec.base = parse_family(d.fam.family);
    spec.params = FamilyParams::parse(d.fam.params);
    spec.k0 = HalfIndex::from_rational(Rational::parse(d.k0));
    if (d.direction == "outgoing") spec.direction = Direction::kOutgoing;
    else if (d.direction == "incoming") spec.direction = Direction::kIncoming;
    else throw UsageError("--direction must be outgoing or incoming");
    spec.alpha = alpha;
  }
  spec.window = window_of(g, 8);
  spec.genrange = genrange_of(g, 2);
  const DeformationReport r = deformation_check(spec);
  o.inputs = spec.to_json();
  o.inputs["assert_feasible"] = d.assert_feasible;
  o.results = r.to_json();
  std::ostringstream t;
  t << "deformation " << spec.name << " of " << family_tag(spec.base) << " "
    << params_text(spec.params.to_json()) << " at x[" << spec.k0.to_string() << "] ("
    << (spec.direction == Direction::kOutgoing ? "outgoing" : "incoming") << ", alpha "
    << spec.alpha.to_string() << "): " << r.verdict() << "\n";
  t << "  " << r.labels.size() << " unknowns, " << r.rows << " rows, rank " << r.rank
    << ", nullity " << r.nullity << "\n";
  if (r.feasible && r.solution) {
    t << "  solution:";
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      t << " " << r.labels[i] << "=" << (*r.solution)[i].to_string();
    }
    t << "\n";
  } else if (!r.feasible) {
    t << "  witness: 0 = " << r.witness_value.to_string() << " from " << r.witness.size()
      << " rows" << (r.witness_checked ? " (rechecked)" : "") << "\n";
  }
  o.text = t.str();
  o.code = d.assert_feasible && !r.feasible ? 1 : 0;
  return o;
}

Outcome cmd_lemmas(const std::vector<std::string>& ids) {
  Outcome o;
  const auto which = ids.empty() ? lemma_ids() : ids;
  json arr = json::array();
  std::ostringstream t;
  bool ok = true;
  for (const auto& id : which) {
    const LemmaVerdict v = lemma_identity_check(id);
    arr.push_back(v.to_json());
    ok = ok && v.holds;
    t << id << ": " << (v.holds ? "holds" : "FAILS") << " (" << v.detail << ")\n";
  }
  o.inputs = {{"ids", which}};
  o.results = {{"lemmas", arr}};
  o.text = t.str();
  o.code = ok ? 0 : 1;
  return o;
}

Outcome cmd_table(const Global& g, const FamilyOpts& f) {
  Outcome o;
  const Family fam = make_family(f, sector_of(g));
  const auto window = window_of(g, 12);
  const auto range = genrange_of(g, 3);
  const ActionTable t = family_table(fam, window, range);
  echo_family(o, f);
  o.inputs["window"] = window;
  o.inputs["genrange"] = range.to_string();
  o.results = {{"table", t.to_json()}};
  std::ostringstream s;
  for (const auto& e : t.entries()) {
    s << e.gen.to_string() << " x[" << e.k.to_string() << "] = " << e.coeff.to_string() << " x["
      << e.target.to_string() << "]\n";
  }
  o.text = s.str();
  return o;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw UsageError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw UsageError("cannot move output into place: " + ec.message());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact toolkit for modules of intermediate series over Schrodinger-Virasoro algebras",
               "svir"};
  app.set_version_flag("--version", std::string(SVIR_VERSION));
  app.fallthrough();
  app.require_subcommand(1);

  Global g;
  app.add_option("--sector", g.sector, "Algebra sector: 0 (twisted) or 1/2 (original)")
      ->check(CLI::IsMember({"0", "1/2"}));
  app.add_option("--window", g.window, "Window bound N on |2k|");
  app.add_option("--genrange", g.genrange, "Generator index bound R");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", g.seed, "Seed for sampled parameters and points");
  app.add_option("--out", g.out, "Write the report to this file (atomically)");

  std::string e1, e2;
  auto* br = app.add_subcommand("bracket", "Bracket of two algebra elements");
  br->add_option("e1", e1)->required();
  br->add_option("e2", e2)->required();

  FamilyOpts act_f;
  std::string act_gen, act_vec;
  auto* ac = app.add_subcommand("act", "Act with an algebra element on a module vector");
  add_family_opts(ac, act_f);
  ac->add_option("--gen", act_gen, "Algebra element, e.g. L[1]")->required();
  ac->add_option("--vec", act_vec, "Module vector, e.g. x[1/2]")->required();

  auto* ver = app.add_subcommand("verify", "Module-law and structure checks");
  ver->require_subcommand(1);
  FamilyOpts vf_f, vt_f, vi_f;
  auto* vf = ver->add_subcommand("family", "Verify one family on a window");
  add_family_opts(vf, vf_f);
  int tuples = 5;
  auto* va = ver->add_subcommand("all", "Verify every family at seeded parameters");
  va->add_option("--tuples", tuples, "Parameter tuples per family")->check(CLI::PositiveNumber);
  auto* vt = ver->add_subcommand("torus", "Check that L0, M0, c act diagonally");
  add_family_opts(vt, vt_f);
  std::string inj_k = "0";
  std::int64_t inj_i = 1;
  auto* vi = ver->add_subcommand("injectivity", "Injectivity predicate at x_k");
  add_family_opts(vi, vi_f);
  vi->add_option("--k", inj_k, "Basis index k");
  vi->add_option("--i", inj_i, "Nonzero integer i");

  FamilyOpts sc_f;
  auto* sc = app.add_subcommand("scan-submodules", "Invariant index sets within the window");
  add_family_opts(sc, sc_f);

  auto* cl = app.add_subcommand("classify", "Classification machinery");
  cl->require_subcommand(1);
  std::size_t points = 200;
  auto* cd = cl->add_subcommand("delta-verify", "Check the determinant factorization");
  cd->add_option("--points", points, "Random evaluation points");
  std::string grid = "-2:2:1/2", grid_bp;
  std::size_t samples = 50;
  auto* cs = cl->add_subcommand("scan-bb", "Admissible (b, b') pairs on a grid");
  cs->add_option("--grid", grid, "Values lo:hi:step for b (and b')");
  cs->add_option("--grid-bp", grid_bp, "Separate grid for b'");
  cs->add_option("--samples", samples, "Random points for the determinant route");
  AnsatzOpts ansatz;
  auto* ca = cl->add_subcommand("solve-ansatz", "Staged exact solve of the action ansatz");
  ca->add_option("--a", ansatz.a);
  ca->add_option("--b", ansatz.b);
  ca->add_option("--bp", ansatz.bp, "b' (default b+1/2)");
  ca->add_option("--f0", ansatz.f0, "Scale of the integer-index pattern");
  ca->add_option("--d0", ansatz.d0, "Scale of the half-integer-index pattern");
  DeformOpts deform;
  auto* cf = cl->add_subcommand("deform", "Feasibility of a deformation at one basis vector");
  cf->add_option("--preset", deform.preset)
      ->check(CLI::IsMember(deformation_preset_names()));
  cf->add_option("--family", deform.fam.family);
  cf->add_option("--params", deform.fam.params);
  cf->add_option("--k0", deform.k0);
  cf->add_option("--direction", deform.direction);
  cf->add_option("--alpha", deform.alpha);
  cf->add_flag("--assert-feasible", deform.assert_feasible);
  std::vector<std::string> lemma_sel;
  auto* cm = cl->add_subcommand("lemmas", "Symbolic lemma identities");
  cm->add_option("--id", lemma_sel)->check(CLI::IsMember(lemma_ids()));

  auto* tb = app.add_subcommand("table", "Action tables");
  tb->require_subcommand(1);
  FamilyOpts te_f;
  auto* te = tb->add_subcommand("export", "Export a family's action table");
  add_family_opts(te, te_f);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  std::string command;
  try {
    if (br->parsed()) {
      command = "bracket";
      o = cmd_bracket(g, e1, e2);
    } else if (ac->parsed()) {
      command = "act";
      o = cmd_act(g, act_f, act_gen, act_vec);
    } else if (vf->parsed()) {
      command = "verify family";
      o = cmd_verify_family(g, vf_f);
    } else if (va->parsed()) {
      command = "verify all";
      o = cmd_verify_all(g, tuples);
    } else if (vt->parsed()) {
      command = "verify torus";
      o = cmd_verify_torus(g, vt_f);
    } else if (vi->parsed()) {
      command = "verify injectivity";
      o = cmd_verify_injectivity(g, vi_f, inj_k, inj_i);
    } else if (sc->parsed()) {
      command = "scan-submodules";
      o = cmd_scan(g, sc_f);
    } else if (cd->parsed()) {
      command = "classify delta-verify";
      o = cmd_delta(g, points);
    } else if (cs->parsed()) {
      command = "classify scan-bb";
      o = cmd_scan_bb(g, grid, grid_bp, samples);
    } else if (ca->parsed()) {
      command = "classify solve-ansatz";
      o = cmd_solve(g, ansatz);
    } else if (cf->parsed()) {
      command = "classify deform";
      o = cmd_deform(g, deform);
    } else if (cm->parsed()) {
      command = "classify lemmas";
      o = cmd_lemmas(lemma_sel);
    } else if (te->parsed()) {
      command = "table export";
      o = cmd_table(g, te_f);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();

  std::string rendered;
  if (g.format == "json") {
    const json report{{"command", command},
                      {"inputs", o.inputs},
                      {"sector", g.sector},
                      {"results", o.results},
                      {"timing", {{"elapsed_ms", ms}}},
                      {"version", SVIR_VERSION},
                      {"typo_ledger_hash", typo_ledger_hash()}};
    rendered = report.dump(2) + "\n";
  } else {
    rendered = o.text;
  }
  try {
    if (g.out.empty()) {
      out << rendered;
    } else {
      write_atomic(g.out, rendered);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return o.code;
}

}  // namespace svir
