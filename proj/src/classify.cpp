#include "svir/classify.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "svir/errors.hpp"
#include "svir/verify.hpp"

namespace svir {

namespace {

const Rational kHalf(1, 2);

MultiPoly V(const char* name) { return MultiPoly::var(standard_symbols(), name); }
MultiPoly K(const Rational& c) { return MultiPoly::constant(standard_symbols(), c); }

nlohmann::json vector_json(const std::vector<std::string>& labels, const RationalVector& x) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) j[labels[i]] = x[i].to_string();
  return j;
}

nlohmann::json witness_json(const std::vector<WitnessRow>& rows, const Rational& value,
                            bool checked) {
  nlohmann::json r = nlohmann::json::array();
  for (const auto& w : rows) r.push_back({{"row", w.tag}, {"multiplier", w.multiplier.to_string()}});
  return {{"rows", r}, {"value", value.to_string()}, {"rechecked", checked}};
}

std::vector<WitnessRow> witness_rows(const LinearSystem& sys, const InconsistencyWitness& w) {
  std::vector<WitnessRow> out;
  for (const auto& [i, y] : w.multipliers) out.push_back({sys.rows()[i].tag, y});
  return out;
}

}  // namespace

// ---- named polynomials ------------------------------------------------------

PolyMatrix build_ijk_system() {
  const MultiPoly u = V("u"), p = V("p"), m = V("m"), b = V("b"), bp = V("b'");
  const MultiPoly one = K(1), two = K(2);
  const MultiPoly hm = m * kHalf;
  const MultiPoly pp = (p - hm) * (p + hm);  // (p - m/2)(p + m/2)

  PolyMatrix M(3, std::vector<MultiPoly>(3, K(0)));
  M[0][0] = pp * (u + (two * b - one) * m) + (p - m) * (u + (b - one) * m) * (u + b * m);
  M[0][1] = K(-2) * (p - m) * (u + (b - one) * m) * (u + p + bp * m);
  M[0][2] = (p - m) * (u + p + (bp - one) * m) * (u + p + bp * m) -
            pp * (u + p + (two * bp - one) * m);

  M[1][0] = (p + m) * (u + p - (bp - one) * m) * (u + p - bp * m) -
            pp * (u + p - (two * bp - one) * m);
  M[1][1] = K(-2) * (p + m) * (u - (b - one) * m) * (u + p - bp * m);
  M[1][2] = pp * (u - (two * b - one) * m) + (p + m) * (u - (b - one) * m) * (u - b * m);

  M[2][0] = (u + b * m) * (u + p - (bp - one) * m);
  M[2][1] = -((u + p - bp * m) * (u + p + (bp - one) * m) +
              (p + hm) * (m * Rational(3, 2) - p) + (u + b * m) * (u - (b - one) * m));
  M[2][2] = (u - b * m) * (u + p + (bp - one) * m);
  return M;
}

MultiPoly assembled_delta(const MultiPoly& d0, const MultiPoly& d1, const MultiPoly& d2,
                          const MultiPoly& d3) {
  const MultiPoly u = V("u"), p = V("p"), m = V("m");
  return m.pow(6) * Rational(1, 64) * d0 * (d1 * u * p + d2 * m * m + d3 * p * p);
}

namespace {

struct Tables {
  std::map<std::string, MultiPoly> polys;
};

const Tables& tables() {
  static const Tables t = [] {
    const MultiPoly u = V("u"), p = V("p"), m = V("m"), b = V("b"), bp = V("b'");
    const MultiPoly one = K(1), two = K(2);
    Tables out;
    auto& P = out.polys;
    P.emplace("table_delta0", (two * b - two * bp - one) * (two * b - two * bp + one));
    P.emplace("table_delta1",
              K(18) * (two * b + two * bp - K(3)) * (two * b + two * bp - one));
    P.emplace("table_delta2",
              K(4) * (b + bp - one) *
                  (K(-3) * b - K(4) * b.pow(2) + K(4) * b.pow(3) - K(9) * bp +
                   K(4) * b * bp + K(4) * b.pow(2) * bp + K(12) * bp.pow(2) -
                   K(4) * b * bp.pow(2) - K(4) * bp.pow(3)));
    const MultiPoly d3 = K(27) - K(156) * b + K(152) * b.pow(2) - K(16) * b.pow(3) -
                         K(16) * b.pow(4) - K(180) * bp + K(328) * b * bp -
                         K(80) * b.pow(2) * bp - K(32) * b.pow(3) * bp + K(240) * bp.pow(2) -
                         K(176) * b * bp.pow(2) - K(112) * bp.pow(3) +
                         K(32) * b * bp.pow(3) + K(16) * bp.pow(4);
    P.emplace("table_delta3", d3);
    P.emplace("table_delta3_doubled", d3 + K(240) * bp.pow(2));
    const MultiPoly e2 = u * (one - K(4) * b) + (one + K(6) * b) * (b - one) * p;
    P.emplace("elimination_delta2", e2);
    P.emplace("elimination_delta1", e2 * m * m + K(6) * u * u * p +
                                        K(8) * u * (one - b) * p * p +
                                        K(4) * (one - b) * p.pow(3));
    const MultiPoly n2 = u * u + K(3) * u * p + K(2) * p * p;
    const MultiPoly n0 = K(-6) * u.pow(3) * p - K(10) * u * u * p * p -
                         K(6) * u * p.pow(3) - K(2) * p.pow(4);
    P.emplace("nabla2", n2);
    P.emplace("nabla0", n0);
    P.emplace("nabla", n2 * m * m + n0);
    P.emplace("delta", det3(build_ijk_system()));
    return out;
  }();
  return t;
}

const MultiPoly& poly(const char* name) { return tables().polys.at(name); }

}  // namespace

std::map<std::string, MultiPoly> named_polynomials() { return tables().polys; }

nlohmann::json DeltaReport::to_json() const {
  nlohmann::json r = nlohmann::json::array();
  for (const auto& d : readings) {
    nlohmann::json j{{"reading", d.name},
                     {"symbolic_equal", d.symbolic_equal},
                     {"points", d.points},
                     {"agreements", d.agreements}};
    if (d.mismatch) {
      nlohmann::json w = nlohmann::json::object();
      for (const auto& [k, v] : *d.mismatch) w[k] = v.to_string();
      j["first_mismatch"] = w;
    }
    r.push_back(j);
  }
  return {{"readings", r}, {"seed", seed}};
}

DeltaReport verify_delta_factorization(std::size_t points, std::uint64_t seed) {
  const MultiPoly& D = poly("delta");
  struct Reading {
    const char* name;
    MultiPoly F;
  };
  const std::vector<Reading> rs{
      {"single", assembled_delta(poly("table_delta0"), poly("table_delta1"),
                                 poly("table_delta2"), poly("table_delta3"))},
      {"doubled", assembled_delta(poly("table_delta0"), poly("table_delta1"),
                                  poly("table_delta2"), poly("table_delta3_doubled"))},
  };
  std::mt19937_64 rng(seed);
  std::vector<std::map<std::string, Rational>> pts;
  for (std::size_t i = 0; i < points; ++i) {
    pts.push_back({{"u", random_rational(rng)},
                   {"p", random_rational(rng)},
                   {"m", random_rational(rng)},
                   {"b", random_rational(rng)},
                   {"b'", random_rational(rng)}});
  }
  DeltaReport report;
  report.seed = seed;
  for (const auto& r : rs) {
    DeltaReading d;
    d.name = r.name;
    d.symbolic_equal = D == r.F;
    d.points = pts.size();
    for (const auto& pt : pts) {
      if (D.evaluate(pt) == r.F.evaluate(pt)) {
        ++d.agreements;
      } else if (!d.mismatch) {
        d.mismatch = pt;
      }
    }
    report.readings.push_back(std::move(d));
  }
  return report;
}

// ---- admissible pairs -------------------------------------------------------

std::vector<Rational> parse_grid(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const auto c = text.find(':', pos);
    parts.push_back(text.substr(pos, c == std::string_view::npos ? text.npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  if (parts.size() == 1) return {Rational::parse(parts[0])};
  if (parts.size() != 3) throw UsageError("grid must look like lo:hi:step, got '" + std::string(text) + "'");
  const Rational lo = Rational::parse(parts[0]);
  const Rational hi = Rational::parse(parts[1]);
  const Rational step = Rational::parse(parts[2]);
  if (step.sign() <= 0) throw UsageError("grid step must be positive");
  if (hi < lo) throw UsageError("grid upper bound is below the lower bound");
  std::vector<Rational> out;
  for (Rational x = lo; x <= hi; x += step) {
    out.push_back(x);
    if (out.size() > 10000) throw UsageError("grid has more than 10000 values");
  }
  return out;
}

nlohmann::json AdmissibleReport::to_json() const {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& a : pairs) {
    ps.push_back({{"b", a.b.to_string()}, {"b'", a.bp.to_string()}, {"via", a.reason}});
  }
  nlohmann::json ss = nlohmann::json::array();
  for (const auto& [b, bp] : sampled) ss.push_back({b.to_string(), bp.to_string()});
  return {{"admissible", ps},
          {"sampled_route", ss},
          {"routes_agree", routes_agree},
          {"grid_size", grid_size}};
}

AdmissibleReport admissible_scan(const std::vector<Rational>& bs, const std::vector<Rational>& bps,
                                 std::size_t samples, std::uint64_t seed) {
  AdmissibleReport report;
  const MultiPoly& D = poly("delta");
  std::mt19937_64 rng(seed);
  std::vector<std::map<std::string, Rational>> pts;
  for (std::size_t i = 0; i < samples; ++i) {
    pts.push_back({{"u", random_rational(rng)}, {"p", random_rational(rng)},
                   {"m", random_rational(rng)}});
  }
  for (const auto& b : bs) {
    for (const auto& bp : bps) {
      ++report.grid_size;
      const std::map<std::string, Rational> at{{"b", b}, {"b'", bp}};
      if (poly("table_delta0").evaluate(at).is_zero()) {
        report.pairs.push_back({b, bp, "delta0"});
      } else if (poly("table_delta1").evaluate(at).is_zero() &&
                 poly("table_delta2").evaluate(at).is_zero() &&
                 poly("table_delta3").evaluate(at).is_zero()) {
        report.pairs.push_back({b, bp, "delta123"});
      }
      const MultiPoly Dbb = D.substitute(at);
      const bool vanishes = std::all_of(pts.begin(), pts.end(), [&](const auto& pt) {
        return Dbb.evaluate(pt).is_zero();
      });
      if (vanishes) report.sampled.emplace_back(b, bp);
    }
  }
  report.routes_agree = report.pairs.size() == report.sampled.size();
  for (std::size_t i = 0; report.routes_agree && i < report.pairs.size(); ++i) {
    report.routes_agree = report.pairs[i].b == report.sampled[i].first &&
                          report.pairs[i].bp == report.sampled[i].second;
  }
  return report;
}

// ---- ansatz -----------------------------------------------------------------

nlohmann::json AnsatzConfig::to_json() const {
  return {{"sector", sector_name(sector)},
          {"a", a.to_string()},
          {"b", b.to_string()},
          {"b'", effective_bp().to_string()},
          {"window", window},
          {"genrange", genrange.to_string()},
          {"f0", f0.to_string()},
          {"d0", d0.to_string()}};
}

std::string f_label(HalfIndex p, HalfIndex k) {
  return "f[" + p.to_string() + "," + k.to_string() + "]";
}
std::string g_label(HalfIndex n, HalfIndex k) {
  return "g[" + n.to_string() + "," + k.to_string() + "]";
}

namespace {

// Lattice of module indices: all of (1/2)Z in sector 1/2, Z in sector 0.
std::vector<HalfIndex> ansatz_ks(const AnsatzConfig& cfg) {
  std::vector<HalfIndex> out;
  for (auto d = -cfg.window; d <= cfg.window; ++d) {
    const auto k = HalfIndex::from_doubled(d);
    if (cfg.sector == Sector::kOriginal || k.is_integer()) out.push_back(k);
  }
  return out;
}

std::vector<HalfIndex> y_range(const AnsatzConfig& cfg) {
  std::vector<HalfIndex> out;
  for (const auto& g : generators_up_to(cfg.sector, cfg.genrange)) {
    if (g.kind == GenKind::kY) out.push_back(g.index);
  }
  return out;
}

std::vector<HalfIndex> int_range(const AnsatzConfig& cfg, bool skip_zero) {
  std::vector<HalfIndex> out;
  const auto r = cfg.genrange.doubled() / 2;
  for (auto n = -r; n <= r; ++n) {
    if (skip_zero && n == 0) continue;
    out.push_back(HalfIndex::integer(n));
  }
  return out;
}

Rational l_coeff(const AnsatzConfig& cfg, HalfIndex m, HalfIndex k) {
  const Rational b = k.is_integer() ? cfg.b : cfg.effective_bp();
  return cfg.a + k.value() + b * m.value();
}

LinearSystem f_system_frame(const AnsatzConfig& cfg) {
  std::vector<std::string> labels;
  for (auto p : y_range(cfg)) {
    for (auto k : ansatz_ks(cfg)) {
      if (in_window(k + p, cfg.window)) labels.push_back(f_label(p, k));
    }
  }
  return LinearSystem(std::move(labels));
}

LinearSystem g_system_frame(const AnsatzConfig& cfg) {
  std::vector<std::string> labels;
  for (auto n : int_range(cfg, false)) {
    for (auto k : ansatz_ks(cfg)) {
      if (in_window(k + n, cfg.window)) labels.push_back(g_label(n, k));
    }
  }
  return LinearSystem(std::move(labels));
}

std::string tag2(const std::string& x, const std::string& y, HalfIndex k) {
  return "[" + x + "," + y + "]x[" + k.to_string() + "]";
}

}  // namespace

LinearSystem generate_ansatz_constraints(const AnsatzConfig& cfg) {
  LinearSystem sys = f_system_frame(cfg);
  for (auto p : y_range(cfg)) {
    for (auto m : int_range(cfg, true)) {
      for (auto k : ansatz_ks(cfg)) {
        const auto c_pk = sys.find(f_label(p, k));
        const auto c_pkm = sys.find(f_label(p, k + m));
        const auto c_pmk = sys.find(f_label(p + m, k));
        if (!c_pk || !c_pkm || !c_pmk) continue;
        // L_m Y_p x_k - Y_p L_m x_k - (p - m/2) Y_{p+m} x_k = 0
        std::map<std::size_t, Rational> row;
        const auto put = [&row](std::size_t j, const Rational& c) {
          row[j] += c;
          if (row[j].is_zero()) row.erase(j);
        };
        put(*c_pk, l_coeff(cfg, m, k + p));
        put(*c_pkm, -l_coeff(cfg, m, k));
        put(*c_pmk, -(p.value() - m.value() / Rational(2)));
        sys.add_sparse_row(row, Rational(0),
                           tag2(Generator::L(m.as_integer()).to_string(),
                                Generator::Y(p).to_string(), k));
      }
    }
  }
  return sys;
}

RationalVector ansatz_pattern(const AnsatzConfig& cfg, const LinearSystem& system,
                              const Rational& f0, const Rational& d0) {
  RationalVector x(system.width());
  for (auto p : y_range(cfg)) {
    for (auto k : ansatz_ks(cfg)) {
      const auto j = system.find(f_label(p, k));
      if (!j) continue;
      x[*j] = k.is_integer() ? (cfg.a + k.value() + Rational(2) * cfg.b * p.value()) * f0 : d0;
    }
  }
  return x;
}

nlohmann::json StageReport::to_json() const {
  nlohmann::json j{{"stage", stage},   {"unknowns", unknowns},   {"rows", rows},
                   {"rank", rank},     {"nullity", nullity},     {"consistent", consistent},
                   {"extra", extra}};
  if (!consistent) j["witness"] = witness_json(witness, witness_value, witness_checked);
  return j;
}

nlohmann::json AnsatzReport::to_json() const {
  nlohmann::json b = nlohmann::json::array();
  for (const auto& v : basis) b.push_back(vector_json(labels, v));
  return {{"config", config.to_json()},
          {"stage1", stage1.to_json()},
          {"stage2", stage2.to_json()},
          {"stage3", stage3.to_json()},
          {"patterns_in_nullspace", patterns_in_nullspace},
          {"patterns_span_nullspace", patterns_span_nullspace},
          {"nullspace_basis", b},
          {"mm_rows_hold", mm_rows_hold}};
}

namespace {

bool satisfies(const LinearSystem& sys, const RationalVector& x) {
  for (std::size_t i = 0; i < sys.rows().size(); ++i) {
    if (!sys.residual(i, x).is_zero()) return false;
  }
  return true;
}

StageReport stage_from(const std::string& name, const LinearSystem& sys, const SolveReport& s) {
  StageReport r;
  r.stage = name;
  r.unknowns = sys.width();
  r.rows = sys.rows().size();
  r.rank = s.rank;
  r.nullity = s.nullspace.size();
  r.consistent = s.consistent;
  if (s.witness) {
    r.witness = witness_rows(sys, *s.witness);
    r.witness_value = s.witness->value;
    r.witness_checked = witness_holds(sys, *s.witness);
  }
  return r;
}

// Rank of a set of vectors, via the same exact elimination.
std::size_t rank_of(const std::vector<RationalVector>& vs, std::size_t width) {
  if (vs.empty()) return 0;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < width; ++i) labels.push_back(std::to_string(i));
  LinearSystem sys(labels);
  for (const auto& v : vs) sys.add_row(v, Rational(0));
  return solve_linear(sys).rank;
}

}  // namespace

AnsatzReport solve_ansatz(const AnsatzConfig& cfg) {
  AnsatzReport report;
  report.config = cfg;

  // Stage 1: [L, Y] rows on f.
  const LinearSystem fsys = generate_ansatz_constraints(cfg);
  const SolveReport s1 = solve_linear(fsys);
  report.stage1 = stage_from("f from [L,Y]", fsys, s1);
  report.labels = fsys.labels();
  report.basis = s1.nullspace;

  std::vector<RationalVector> patterns{ansatz_pattern(cfg, fsys, 1, 0)};
  if (cfg.sector == Sector::kOriginal) patterns.push_back(ansatz_pattern(cfg, fsys, 0, 1));
  report.patterns_in_nullspace = std::all_of(
      patterns.begin(), patterns.end(), [&](const auto& v) { return satisfies(fsys, v); });
  {
    std::vector<RationalVector> all = s1.nullspace;
    all.insert(all.end(), patterns.begin(), patterns.end());
    report.patterns_span_nullspace =
        report.patterns_in_nullspace &&
        rank_of(all, fsys.width()) == rank_of(patterns, fsys.width());
  }
  report.stage1.extra["pattern_rank"] = rank_of(patterns, fsys.width());

  // The f-solution handed on: f0 * pattern_f0 + d0 * pattern_d0 when that lies
  // in the nullspace, otherwise the zero solution.
  RationalVector f(fsys.width());
  const RationalVector fpat = ansatz_pattern(cfg, fsys, cfg.f0,
                                             cfg.sector == Sector::kOriginal ? cfg.d0 : Rational(0));
  if (satisfies(fsys, fpat)) f = fpat;
  report.stage1.extra["f_solution_is_pattern"] = f == fpat;
  const auto fval = [&](HalfIndex p, HalfIndex k) -> std::optional<Rational> {
    auto j = fsys.find(f_label(p, k));
    if (!j) return std::nullopt;
    return f[*j];
  };

  // Stage 2: [Y_p, Y_q] x_k = (q - p) M_{p+q} x_k.
  LinearSystem gsys = g_system_frame(cfg);
  const auto ys = y_range(cfg);
  for (auto p : ys) {
    for (auto q : ys) {
      if (!(p < q)) continue;
      for (auto k : ansatz_ks(cfg)) {
        const auto a1 = fval(q, k), a2 = fval(p, k + q), b1 = fval(p, k), b2 = fval(q, k + p);
        const auto gj = gsys.find(g_label(p + q, k));
        if (!a1 || !a2 || !b1 || !b2 || !gj) continue;
        gsys.add_sparse_row({{*gj, q.value() - p.value()}}, *a1 * *a2 - *b1 * *b2,
                            tag2(Generator::Y(p).to_string(), Generator::Y(q).to_string(), k));
      }
    }
  }
  const SolveReport s2 = solve_linear(gsys);
  report.stage2 = stage_from("g from [Y,Y]", gsys, s2);
  {
    // g_{n,i} = 2b d0 f0, g_{n,j} = (1-2b) d0 f0
    RationalVector closed(gsys.width());
    const Rational df = cfg.sector == Sector::kOriginal ? cfg.d0 * cfg.f0 : Rational(0);
    for (auto n : int_range(cfg, false)) {
      for (auto k : ansatz_ks(cfg)) {
        if (auto j = gsys.find(g_label(n, k))) {
          closed[*j] = k.is_integer() ? Rational(2) * cfg.b * df
                                      : (Rational(1) - Rational(2) * cfg.b) * df;
        }
      }
    }
    report.stage2.extra["closed_form_satisfies_rows"] = satisfies(gsys, closed);
  }

  // Stage 3: add [Y_p, M_n] x_k = 0 and [L_m, M_n] x_k = n M_{m+n} x_k.
  LinearSystem full = gsys;
  std::size_t ym_rows = 0;
  for (auto p : ys) {
    for (auto n : int_range(cfg, false)) {
      for (auto k : ansatz_ks(cfg)) {
        const auto fpk = fval(p, k), fpkn = fval(p, k + n);
        const auto gnk = full.find(g_label(n, k)), gnkp = full.find(g_label(n, k + p));
        if (!fpk || !fpkn || !gnk || !gnkp) continue;
        // Y_p M_n x_k - M_n Y_p x_k = g_{n,k} f_{p,k+n} - f_{p,k} g_{n,k+p}
        std::map<std::size_t, Rational> row;
        row[*gnk] += *fpkn;
        row[*gnkp] -= *fpk;
        std::erase_if(row, [](const auto& e) { return e.second.is_zero(); });
        if (row.empty()) continue;
        full.add_sparse_row(row, Rational(0),
                            tag2(Generator::Y(p).to_string(),
                                 Generator::M(n.as_integer()).to_string(), k));
        ++ym_rows;
      }
    }
  }
  for (auto m : int_range(cfg, true)) {
    for (auto n : int_range(cfg, false)) {
      for (auto k : ansatz_ks(cfg)) {
        const auto gnk = full.find(g_label(n, k)), gnkm = full.find(g_label(n, k + m)),
                   gmnk = full.find(g_label(m + n, k));
        if (!gnk || !gnkm || !gmnk) continue;
        std::map<std::size_t, Rational> row;
        row[*gnk] += l_coeff(cfg, m, k + n);
        row[*gnkm] -= l_coeff(cfg, m, k);
        row[*gmnk] -= n.value();
        std::erase_if(row, [](const auto& e) { return e.second.is_zero(); });
        if (row.empty()) continue;
        full.add_sparse_row(row, Rational(0),
                            tag2(Generator::L(m.as_integer()).to_string(),
                                 Generator::M(n.as_integer()).to_string(), k));
      }
    }
  }
  const SolveReport s3 = solve_linear(full);
  report.stage3 = stage_from("g against [Y,M] and [L,M]", full, s3);
  report.stage3.extra["ym_rows"] = ym_rows;
  if (!report.stage3.consistent) {
    const bool has_ym = std::any_of(report.stage3.witness.begin(), report.stage3.witness.end(),
                                    [](const WitnessRow& w) { return w.tag.rfind("[Y", 0) == 0 &&
                                                                     w.tag.find(",M[") != std::string::npos; });
    report.stage3.extra["witness_uses_YM_row"] = has_ym;
  }

  // [M_m, M_n] x_k = 0 on the particular solution.
  report.mm_rows_hold = true;
  if (s3.particular) {
    const auto& g = *s3.particular;
    for (auto m : int_range(cfg, false)) {
      for (auto n : int_range(cfg, false)) {
        for (auto k : ansatz_ks(cfg)) {
          const auto a1 = full.find(g_label(n, k)), a2 = full.find(g_label(m, k + n)),
                     b1 = full.find(g_label(m, k)), b2 = full.find(g_label(n, k + m));
          if (!a1 || !a2 || !b1 || !b2) continue;
          if (g[*a1] * g[*a2] != g[*b1] * g[*b2]) report.mm_rows_hold = false;
        }
      }
    }
  }
  return report;
}

// ---- deformations -----------------------------------------------------------

Affine Affine::unknown(std::size_t i) {
  Affine a;
  a.v[i] = Rational(1);
  return a;
}

Affine& Affine::operator+=(const Affine& o) {
  c += o.c;
  for (const auto& [i, x] : o.v) {
    auto& slot = v[i];
    slot += x;
    if (slot.is_zero()) v.erase(i);
  }
  return *this;
}

Affine& Affine::operator-=(const Affine& o) {
  c -= o.c;
  for (const auto& [i, x] : o.v) {
    auto& slot = v[i];
    slot -= x;
    if (slot.is_zero()) v.erase(i);
  }
  return *this;
}

Affine operator*(Affine x, const Rational& r) {
  if (r.is_zero()) return {};
  x.c *= r;
  for (auto& [i, y] : x.v) y *= r;
  return x;
}

Affine operator*(const Affine& x, const Affine& y) {
  if (!x.is_constant() && !y.is_constant()) {
    throw std::logic_error("deformation row is not linear in the unknowns");
  }
  return x.is_constant() ? y * x.c : x * y.c;
}

nlohmann::json DeformationSpec::to_json() const {
  return {{"name", name},
          {"base", family_tag(base)},
          {"params", params.to_json()},
          {"k0", k0.to_string()},
          {"direction", direction == Direction::kOutgoing ? "outgoing" : "incoming"},
          {"alpha", alpha.to_string()},
          {"window", window},
          {"genrange", genrange.to_string()}};
}

std::vector<std::string> deformation_preset_names() {
  return {"1.1", "1.2", "1.3", "1.4", "B1", "B2", "B1-printed", "B2-printed", "C", "D"};
}

DeformationSpec deformation_preset(const std::string& name, const Rational& alpha) {
  DeformationSpec s;
  s.name = name;
  s.alpha = alpha;
  const auto ab = [&](FamilyId id, Rational a, Rational b, HalfIndex k0, Direction d) {
    s.base = id;
    s.params.a = std::move(a);
    s.params.b = std::move(b);
    s.k0 = k0;
    s.direction = d;
  };
  const HalfIndex zero = HalfIndex::integer(0), half = HalfIndex::from_doubled(1);
  const auto out = Direction::kOutgoing, in = Direction::kIncoming;
  if (name == "1.1") ab(FamilyId::kSvAab, 0, 1, zero, out);
  else if (name == "1.2") ab(FamilyId::kSvAab, 0, 0, zero, in);
  else if (name == "1.3") ab(FamilyId::kSvAab, -kHalf, kHalf, half, out);
  else if (name == "1.4") ab(FamilyId::kSvAab, -kHalf, -kHalf, half, in);
  else if (name == "B1") ab(FamilyId::kSvBab, -kHalf, kHalf, half, out);
  else if (name == "B2") ab(FamilyId::kSvBab, 0, 0, zero, in);
  else if (name == "B1-printed") ab(FamilyId::kSvBab, 0, 1, zero, out);
  else if (name == "B2-printed") ab(FamilyId::kSvBab, -kHalf, -kHalf, half, in);
  else if (name == "C") {
    s.base = FamilyId::kSvCa;
    s.params.a = Rational(0);
    s.k0 = zero;
    s.direction = in;
  } else if (name == "D") {
    s.base = FamilyId::kSvDa;
    s.params.a = -kHalf;
    s.k0 = half;
    s.direction = out;
  } else {
    throw UsageError("unknown deformation preset '" + name + "'");
  }
  return s;
}

std::string DeformationReport::verdict() const {
  if (!feasible) return "infeasible";
  const bool zero = solution && std::all_of(solution->begin(), solution->end(),
                                            [](const Rational& r) { return r.is_zero(); });
  return nullity == 0 && zero ? "feasible-with-zero" : "feasible";
}

nlohmann::json DeformationReport::to_json() const {
  nlohmann::json j{{"spec", spec.to_json()},
                   {"unknowns", labels},
                   {"rows", rows},
                   {"rank", rank},
                   {"feasible", feasible},
                   {"nullity", nullity},
                   {"verdict", verdict()}};
  if (solution) j["solution"] = vector_json(labels, *solution);
  nlohmann::json ns = nlohmann::json::array();
  for (const auto& v : nullspace) ns.push_back(vector_json(labels, v));
  j["nullspace"] = ns;
  if (!feasible) j["witness"] = witness_json(witness, witness_value, witness_checked);
  return j;
}

DeformationReport deformation_check(const DeformationSpec& spec) {
  const Family base(spec.base, spec.params);
  const bool outgoing = spec.direction == Direction::kOutgoing;
  std::map<Generator, std::size_t> unknowns;  // created on first use

  const auto coeff = [&](const Generator& g, HalfIndex k) -> Affine {
    if (g.kind == GenKind::kC) return {};
    const bool slot = outgoing ? k == spec.k0 : k + ad_weight(g) == spec.k0;
    if (!slot) return base.coeff(g, k);
    const Rational n = g.index.value();
    switch (g.kind) {
      case GenKind::kL: return outgoing ? n * (n + spec.alpha) : -n * (n + spec.alpha);
      case GenKind::kM:
        if (n.is_zero()) return {};
        [[fallthrough]];
      default: {
        auto [it, inserted] = unknowns.try_emplace(g, unknowns.size());
        return Affine::unknown(it->second);
      }
    }
  };

  struct RawRow {
    Affine residual;
    std::string tag;
  };
  std::vector<RawRow> raw;
  const auto gens = generators_up_to(base.sector(), spec.genrange);
  const auto ks = window_indices(base, spec.window);
  for (const auto& g1 : gens) {
    for (const auto& g2 : gens) {
      for (auto k : ks) {
        const HalfIndex w1 = ad_weight(g1), w2 = ad_weight(g2);
        if (!in_window(k + w1, spec.window) || !in_window(k + w2, spec.window) ||
            !in_window(k + w1 + w2, spec.window)) {
          continue;
        }
        Affine r = module_residual<Affine>(coeff, g1, g2, k, base.sector());
        if (!scalar_is_zero(r)) raw.push_back({std::move(r), tag2(g1.to_string(), g2.to_string(), k)});
      }
    }
  }

  // Stable label order: Y unknowns then M unknowns, ascending index.
  std::vector<std::pair<Generator, std::size_t>> order(unknowns.begin(), unknowns.end());
  std::vector<std::size_t> remap(order.size());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i].second] = i;
    const auto& g = order[i].first;
    labels.push_back((g.kind == GenKind::kY ? "g[" : "f[") + g.index.to_string() + "]");
  }
  LinearSystem sys(labels);
  for (const auto& r : raw) {
    std::map<std::size_t, Rational> row;
    for (const auto& [i, x] : r.residual.v) row[remap[i]] = x;
    sys.add_sparse_row(row, -r.residual.c, r.tag);
  }

  const SolveReport s = solve_linear(sys);
  DeformationReport report;
  report.spec = spec;
  report.labels = labels;
  report.rows = sys.rows().size();
  report.rank = s.rank;
  report.feasible = s.consistent;
  report.nullity = s.nullspace.size();
  report.solution = s.particular;
  report.nullspace = s.nullspace;
  if (s.witness) {
    report.witness = witness_rows(sys, *s.witness);
    report.witness_value = s.witness->value;
    report.witness_checked = witness_holds(sys, *s.witness);
  }
  return report;
}

// ---- lemma identities -------------------------------------------------------

nlohmann::json LemmaVerdict::to_json() const {
  return {{"id", id}, {"holds", holds}, {"detail", detail}};
}

std::vector<std::string> lemma_ids() {
  return {"L3.2", "L3.3-closed-form", "L3.4-constant", "g-closed-form", "L3.4-nabla"};
}

namespace {

// Combination II[2]*(I) - I[2]*(II), which eliminates f_{p,k-m}; returns the
// coefficients of f_{p,k+m} and f_{p,k}.
std::pair<MultiPoly, MultiPoly> eliminate_km(const PolyMatrix& M) {
  return {M[1][2] * M[0][0] - M[0][2] * M[1][0], M[1][2] * M[0][1] - M[0][2] * M[1][1]};
}

LemmaVerdict check_l32() {
  const MultiPoly u = V("u"), p = V("p"), m = V("m"), b = V("b");
  PolyMatrix M = build_ijk_system();
  for (auto& row : M) {
    for (auto& e : row) e = e.compose("b'", b + kHalf);
  }
  const auto [A, B] = eliminate_km(M);
  const MultiPoly lhs = u + K(2) * b * p;       // coefficient of f_{p,k+m}
  const MultiPoly rhs = u + m + K(2) * b * p;   // coefficient of f_{p,k}
  const auto [Q, rem] = A.divmod(lhs);
  LemmaVerdict v{"L3.2", false, ""};
  if (!rem.is_zero()) {
    v.detail = "f_{p,k+m} coefficient not divisible by (u+2bp); remainder " + rem.to_string();
    return v;
  }
  if (!(B == -(Q * rhs))) {
    v.detail = "f_{p,k} coefficient is not -Q*(u+m+2bp)";
    return v;
  }
  const MultiPoly expected = m * m * kHalf * poly("elimination_delta1");
  v.holds = true;
  v.detail = Q == expected ? "cofactor = (m^2/2)*elimination_delta1"
                           : "cofactor = " + Q.to_string();
  return v;
}

LemmaVerdict check_nabla() {
  const MultiPoly m = V("m");
  PolyMatrix M = build_ijk_system();
  // Half-integer k exchanges the roles of b and b': (b, b') = (1/2, 0).
  for (auto& row : M) {
    for (auto& e : row) e = e.substitute({{"b", kHalf}, {"b'", Rational(0)}});
  }
  const auto [A, B] = eliminate_km(M);
  LemmaVerdict v{"L3.4-nabla", false, ""};
  if (!(B == -A)) {
    v.detail = "eliminated row is not proportional to f_{p,k+m} - f_{p,k}";
    return v;
  }
  const auto [Q, rem] = A.divmod(poly("nabla"));
  if (!rem.is_zero()) {
    v.detail = "cofactor not divisible by nabla; remainder " + rem.to_string();
    return v;
  }
  v.holds = true;
  v.detail = Q == -(m * m * kHalf) ? "combination = -(m^2/2)*nabla*(f_{p,k+m} - f_{p,k})"
                                   : "combination = (" + Q.to_string() + ")*nabla*(f_{p,k+m} - f_{p,k})";
  return v;
}

LemmaVerdict check_l33() {
  const MultiPoly u = V("u"), p = V("p"), m = V("m"), b = V("b"), f0 = V("f0");
  const MultiPoly bp = b + kHalf;
  const auto f = [&](const MultiPoly& idx, const MultiPoly& shift) {
    return (u + shift + K(2) * b * idx) * f0;  // f_{idx, k+shift}
  };
  const MultiPoly zero = K(0);
  // integer k: L(m,k+p) f_{p,k} - L(m,k) f_{p,k+m} - (p - m/2) f_{p+m,k}
  const MultiPoly r = (u + p + bp * m) * f(p, zero) - (u + b * m) * f(p, m) -
                      (p - m * kHalf) * f(p + m, zero);
  return {"L3.3-closed-form", r.is_zero(),
          r.is_zero() ? "integer-k row vanishes identically" : "residual " + r.to_string()};
}

LemmaVerdict check_l34() {
  const MultiPoly u = V("u"), p = V("p"), m = V("m"), b = V("b"), d0 = V("d0");
  const MultiPoly bp = b + kHalf;
  // half-integer k: L(m,k+p) uses b (k+p integer), L(m,k) uses b'
  const MultiPoly r = (u + p + b * m) * d0 - (u + bp * m) * d0 - (p - m * kHalf) * d0;
  return {"L3.4-constant", r.is_zero(),
          r.is_zero() ? "half-integer-k row vanishes identically" : "residual " + r.to_string()};
}

LemmaVerdict check_g() {
  const MultiPoly u = V("u"), m = V("m"), n = V("n"), b = V("b"), f0 = V("f0"), d0 = V("d0"),
                  g = V("g");
  const MultiPoly two_b = K(2) * b;
  // [Y_m, Y_n] x_k - (n - m) M_{m+n} x_k with M_{m+n} x_k = g x_{k+m+n}
  const MultiPoly r_int = d0 * (u + two_b * n) * f0 - d0 * (u + two_b * m) * f0 - (n - m) * g;
  const MultiPoly r_half =
      d0 * (u + n + two_b * m) * f0 - d0 * (u + m + two_b * n) * f0 - (n - m) * g;
  const MultiPoly g_int = two_b * d0 * f0;
  const MultiPoly g_half = (K(1) - two_b) * d0 * f0;
  const bool shape = r_int == -((n - m) * (g - g_int)) && r_half == -((n - m) * (g - g_half));
  const bool closes = r_int.compose("g", g_int).is_zero() && r_half.compose("g", g_half).is_zero();
  return {"g-closed-form", shape && closes,
          shape ? "rows reduce to (n-m)(g - 2b d0 f0) and (n-m)(g - (1-2b) d0 f0)"
                : "rows do not factor as (n-m)(g - closed form)"};
}

}  // namespace

LemmaVerdict lemma_identity_check(const std::string& id) {
  if (id == "L3.2") return check_l32();
  if (id == "L3.3-closed-form") return check_l33();
  if (id == "L3.4-constant") return check_l34();
  if (id == "g-closed-form") return check_g();
  if (id == "L3.4-nabla") return check_nabla();
  throw UsageError("unknown lemma id '" + id + "'");
}

}  // namespace svir
