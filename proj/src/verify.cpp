#include "svir/verify.hpp"

#include <deque>
#include <map>

#include "svir/errors.hpp"

namespace svir {

ModuleVector axiom_residual(const ActionModel& model, const Generator& g1, const Generator& g2,
                            HalfIndex k) {
  validate_generator(g1, model.sector());
  validate_generator(g2, model.sector());
  const auto coeff = [&model](const Generator& g, HalfIndex x) {
    return g.kind == GenKind::kC ? Rational(0) : model.coeff(g, x);
  };
  const Rational r = module_residual<Rational>(coeff, g1, g2, k, model.sector());
  return ModuleVector(k + ad_weight(g1) + ad_weight(g2), r);
}

nlohmann::json ResidualReport::to_json() const {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : violations) {
    v.push_back({{"g1", x.g1.to_string()},
                 {"g2", x.g2.to_string()},
                 {"k", x.k.to_string()},
                 {"residual", x.residual.to_string()}});
  }
  return {{"family", family}, {"params", params}, {"checked", checked}, {"violations", v}};
}

ResidualReport verify_model(const ActionModel& model, std::int64_t window, HalfIndex genrange) {
  ResidualReport report{model.label(), model.params_json(), {}, 0};
  const auto gens = generators_up_to(model.sector(), genrange);
  const auto ks = window_indices(model, window);
  for (const auto& g1 : gens) {
    for (const auto& g2 : gens) {
      const HalfIndex w1 = ad_weight(g1);
      const HalfIndex w2 = ad_weight(g2);
      for (auto k : ks) {
        if (!in_window(k + w1, window) || !in_window(k + w2, window) ||
            !in_window(k + w1 + w2, window)) {
          continue;
        }
        ++report.checked;
        ModuleVector r = axiom_residual(model, g1, g2, k);
        if (!r.is_zero()) report.violations.push_back({g1, g2, k, std::move(r)});
      }
    }
  }
  return report;
}

ResidualReport verify_family(const Family& family, std::int64_t window, HalfIndex genrange) {
  return verify_model(family, window, genrange);
}

nlohmann::json InvariantIndexSet::to_json() const {
  nlohmann::json idx = nlohmann::json::array();
  for (auto k : indices) idx.push_back(k.to_string());
  nlohmann::json sd = nlohmann::json::array();
  for (auto k : seeds) sd.push_back(k.to_string());
  return {{"indices", idx}, {"certified", certified}, {"seeds", sd}};
}

namespace {

template <class Visit>
void for_each_target(const ActionModel& model, HalfIndex k, std::int64_t window,
                     const std::vector<Generator>& gens, Visit&& visit) {
  for (const auto& g : gens) {
    const HalfIndex t = k + ad_weight(g);
    if (!in_window(t, window) || !model.in_lattice(t)) continue;
    if (!model.coeff(g, k).is_zero()) visit(t);
  }
}

}  // namespace

bool closure_certified(const ActionModel& model, const std::set<HalfIndex>& indices,
                       std::int64_t window, HalfIndex genrange) {
  const auto gens = generators_up_to(model.sector(), genrange);
  bool ok = true;
  for (auto k : indices) {
    if (!model.in_lattice(k) || !in_window(k, window)) return false;
    for_each_target(model, k, window, gens, [&](HalfIndex t) {
      if (indices.count(t) == 0) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<InvariantIndexSet> scan_submodules(const ActionModel& model, std::int64_t window,
                                               HalfIndex genrange) {
  const auto gens = generators_up_to(model.sector(), genrange);
  const auto ks = window_indices(model, window);
  std::map<std::set<HalfIndex>, std::size_t> seen;
  std::vector<InvariantIndexSet> out;
  for (auto seed : ks) {
    std::set<HalfIndex> closure{seed};
    std::deque<HalfIndex> queue{seed};
    while (!queue.empty()) {
      const HalfIndex k = queue.front();
      queue.pop_front();
      for_each_target(model, k, window, gens, [&](HalfIndex t) {
        if (closure.insert(t).second) queue.push_back(t);
      });
    }
    if (closure.size() == ks.size()) continue;  // not proper
    auto [it, inserted] = seen.try_emplace(closure, out.size());
    if (inserted) {
      InvariantIndexSet s;
      s.certified = closure_certified(model, closure, window, genrange);
      s.indices = std::move(closure);
      out.push_back(std::move(s));
    }
    out[it->second].seeds.push_back(seed);
  }
  return out;
}

SubQuotient sub_quotient(const ActionModel& model, const InvariantIndexSet& s,
                         std::int64_t window, HalfIndex genrange) {
  if (s.indices.empty() || !closure_certified(model, s.indices, window, genrange)) {
    throw UsageError("sub_quotient needs a closure-certified invariant index set");
  }
  const auto ks = window_indices(model, window);
  std::set<HalfIndex> rest;
  for (auto k : ks) {
    if (s.indices.count(k) == 0) rest.insert(k);
  }
  const HalfIndex wide = genrange + genrange;
  ActionTable sub(model.label() + "/sub", model.params_json(), model.sector(), window, wide,
                  s.indices);
  ActionTable quo(model.label() + "/quotient", model.params_json(), model.sector(), window, wide,
                  rest);
  for (const auto& g : generators_up_to(model.sector(), wide)) {
    for (auto k : ks) {
      const HalfIndex t = k + ad_weight(g);
      if (!in_window(t, window) || !model.in_lattice(t)) continue;
      const bool k_in = s.indices.count(k) > 0;
      const bool t_in = s.indices.count(t) > 0;
      if (k_in && t_in) sub.set(g, k, model.coeff(g, k));
      if (!k_in && !t_in) quo.set(g, k, model.coeff(g, k));
    }
  }
  return {std::move(sub), std::move(quo)};
}

bool injectivity_check(const Family& family, HalfIndex k, std::int64_t i) {
  if (i == 0) throw UsageError("injectivity_check needs i != 0");
  const Sector sec = family.sector();
  const HalfIndex shift = HalfIndex::from_rational(sector_shift(sec));
  const Generator gens[] = {
      Generator::L(i),
      Generator::L(i + 1),
      Generator::Y(HalfIndex::integer(i) + shift),
      Generator::Y(HalfIndex::integer(i + 1) + shift),
  };
  for (const auto& g : gens) {
    if (!family.coeff(g, k).is_zero()) return true;
  }
  return false;
}

bool torus_check(const Family& family, std::int64_t window) {
  for (auto k : window_indices(family, window)) {
    if (family.coeff(Generator::L(0), k) != family.weight(k)) return false;
    if (!family.coeff(Generator::M(0), k).is_zero()) return false;
    if (!family.coeff(Generator::C(), k).is_zero()) return false;
  }
  return true;
}

Rational random_rational(std::mt19937_64& rng) {
  const auto num = static_cast<long>(rng() % 201) - 100;
  const auto den = static_cast<long>(rng() % 100) + 1;
  return {num, den};
}

namespace {

bool in_half_lattice(const Rational& r) { return (r * Rational(2)).is_integer(); }

bool special_b(const Rational& b) {
  for (const Rational& x : {Rational(0), Rational(1, 2), Rational(-1, 2), Rational(1),
                            Rational(3, 2)}) {
    if (b == x) return true;
  }
  return false;
}

Rational draw_until(std::mt19937_64& rng, bool (*reject)(const Rational&)) {
  for (;;) {
    Rational r = random_rational(rng);
    if (!reject(r)) return r;
  }
}

}  // namespace

FamilyParams random_params(FamilyId id, std::mt19937_64& rng) {
  FamilyParams p;
  const auto any = [](const Rational&) { return false; };
  switch (id) {
    case FamilyId::kVirAab:
    case FamilyId::kSvAab:
    case FamilyId::kSvBab:
      p.a = draw_until(rng, in_half_lattice);
      p.b = draw_until(rng, special_b);
      break;
    case FamilyId::kSvCa:
    case FamilyId::kSvDa:
      p.a = draw_until(rng, in_half_lattice);
      break;
    case FamilyId::kVirAalpha:
    case FamilyId::kVirBalpha:
    case FamilyId::kSvA1:
    case FamilyId::kSvA2:
    case FamilyId::kSvB1:
    case FamilyId::kSvB2:
      p.alpha = draw_until(rng, any);
      break;
    case FamilyId::kSvCalphas:
      p.alpha = draw_until(rng, any);
      p.alpha_p = draw_until(rng, any);
      break;
    case FamilyId::kSvDbetas:
      p.beta = draw_until(rng, any);
      p.beta_p = draw_until(rng, any);
      break;
  }
  return p;
}

}  // namespace svir
