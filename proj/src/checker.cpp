#include "qsetk/checker.hpp"

#include <algorithm>
#include <chrono>

namespace qsetk {

using nlohmann::json;

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"NONZERO", "SUBCARD", "MONO", "ADD",
                                               "POW",     "SING1",   "GEN"};
  return ids;
}

namespace {

std::string kind_label(std::size_t i) {
  return i < 22 ? std::string(1, static_cast<char>('e' + i)) : "k" + std::to_string(i);
}

std::string atom_label(std::size_t j) {
  return j < 4 ? std::string(1, static_cast<char>('a' + j)) : "u" + std::to_string(j);
}

// ------------------------------------------------------------ json payloads

json celem_to_json(const ClassicalElem& e) {
  if (e.is_atom()) return json{{"atom", e.label()}};
  json members = json::array();
  for (const auto& m : e.members()) members.push_back(celem_to_json(m));
  return json{{"set", members}};
}

ClassicalElem celem_from_json(const json& j) {
  if (j.contains("atom")) return ClassicalElem::atom(j["atom"].get<std::string>());
  std::vector<ClassicalElem> members;
  for (const auto& m : j["set"]) members.push_back(celem_from_json(m));
  return ClassicalElem::set(std::move(members));
}

json universe_to_json(const Universe& u) {
  json kinds = json::array();
  for (std::size_t i = 0; i < u.kind_count(); ++i)
    kinds.push_back(json{{"label", u.kind(i).label}, {"pool", u.pool_size(i)}});
  json classical = json::array();
  for (const auto& e : u.classical()) classical.push_back(celem_to_json(e));
  return json{{"kinds", kinds},
              {"classical", classical},
              {"depth_bound", u.classical_depth_bound()}};
}

UniversePtr universe_from_json(const json& j) {
  std::vector<KindSpec> kinds;
  for (const auto& k : j["kinds"])
    kinds.push_back(KindSpec{k["label"].get<std::string>(), k["pool"].get<Nat>(), ""});
  std::vector<ClassicalElem> classical;
  for (const auto& e : j["classical"]) classical.push_back(celem_from_json(e));
  return make_universe(std::move(kinds), std::move(classical),
                       j["depth_bound"].get<int>());
}

json qset_to_json(const Qset& x) {
  json m = json::array();
  for (const auto& t : x.tokens()) m.push_back(json::array({t.kind, t.serial}));
  json c = json::array();
  for (const auto& e : x.classical_part()) c.push_back(celem_to_json(e));
  json nested = json::array();
  for (const auto& n : x.nested_part()) nested.push_back(qset_to_json(n));
  return json{{"m", m}, {"c", c}, {"nested", nested}};
}

Qset qset_from_json(const json& j, const UniversePtr& u) {
  std::vector<Token> m;
  for (const auto& t : j["m"])
    m.push_back(Token{t[0].get<std::uint32_t>(), t[1].get<std::uint32_t>()});
  std::vector<ClassicalElem> c;
  for (const auto& e : j["c"]) c.push_back(celem_from_json(e));
  std::vector<Qset> nested;
  for (const auto& n : j["nested"]) nested.push_back(qset_from_json(n, u));
  return Qset::from_parts(u, std::move(m), std::move(c), std::move(nested));
}

// --------------------------------------------------------------- evaluation

struct Ctx {
  const QcardFn* fn = nullptr;
  QcardCache cache;

  QcardResult qcr(const Qset& x) {
    if (fn && *fn) return (*fn)(x);
    return qcard(x, cache);
  }
  bool qc_is(const Qset& x, Nat n) {
    auto r = qcr(x);
    return r.defined && r.value == n;
  }
};

Chain greedy_chain(const Qset& x) {
  Chain c;
  c.members.push_back(x);
  Qset cur = x;
  while (!cur.is_empty()) {
    cur = direct_descendants(cur).front();
    c.members.push_back(cur);
  }
  return c;
}

bool prop_h1(const Qset& x) {
  Chain c = greedy_chain(x);
  return is_chain(x, c.members);
}

bool prop_h2(Ctx& ctx, const Qset& x, const Qset& y) {
  bool hyp = ctx.qcr(x).defined && indist(x, y) && is_sub(subqset(x, y));
  return !hyp || ext_eq(x, y);
}

bool prop_nonzero(Ctx& ctx, const Qset& x) {
  auto r = ctx.qcr(x);
  return r.defined && r.value != 0;
}

bool prop_subcard_exhaustive(Ctx& ctx, const Qset& x, Nat beta) {
  const Qset p = powerset(x);  // keep the carrier alive past the span
  for (const auto& y : p.nested_part())
    if (ctx.qc_is(y, beta) && is_sub(subqset(y, x))) return true;
  return false;
}

bool prop_subcard(Ctx& ctx, const Qset& x, Nat beta) {
  Chain c = greedy_chain(x);
  const std::size_t len = c.members.size();
  if (beta < len) {
    const Qset& witness = c.members[len - 1 - beta];
    if (ctx.qc_is(witness, beta) && is_sub(subqset(witness, x))) return true;
  }
  return prop_subcard_exhaustive(ctx, x, beta);
}

bool prop_mono(Ctx& ctx, const Qset& x, const Qset& y) {
  auto rx = ctx.qcr(x);
  auto ry = ctx.qcr(y);
  return rx.defined && ry.defined && rx.value < ry.value;
}

bool prop_add(Ctx& ctx, const Qset& x, const Qset& y) {
  auto rx = ctx.qcr(x);
  auto ry = ctx.qcr(y);
  auto ru = ctx.qcr(qset_union(x, y));
  return rx.defined && ry.defined && ru.defined && ru.value == rx.value + ry.value;
}

bool prop_pow(Ctx& ctx, const Qset& x, Nat carrier_cap) {
  Qset p = powerset(x, carrier_cap);
  auto rx = ctx.qcr(x);
  auto rp = ctx.qcr(p);
  return rx.defined && rp.defined && rx.value < 64 &&
         rp.value == (Nat{1} << rx.value);
}

bool prop_sing1(Ctx& ctx, const Qset& x, const ElemPick& pick) {
  try {
    return ctx.qc_is(singleton(x, pick), 1);
  } catch (const Error&) {
    return false;
  }
}

bool prop_gen_step(Ctx& ctx, const Qset& z, Nat n) {
  return z.is_pure() && ctx.qc_is(z, n);
}

// ------------------------------------------------------------ bookkeeping

Counterexample make_ce(const UniversePtr& u, const std::string& theorem,
                       const std::vector<Qset>& qs, std::string detail,
                       json args = json::object()) {
  Counterexample ce;
  ce.universe = universe_display(*u);
  for (const auto& q : qs) ce.forms.push_back(q.canonical_form());
  ce.detail = std::move(detail);
  json qjs = json::array();
  for (const auto& q : qs) qjs.push_back(qset_to_json(q));
  ce.replay = json{{"theorem", theorem},
                   {"universe", universe_to_json(*u)},
                   {"qsets", qjs},
                   {"args", std::move(args)}};
  return ce;
}

void record(Verdict& v, Counterexample ce) {
  v.holds = false;
  if (!v.counterexample) v.counterexample = std::move(ce);
}

std::string qcr_str(Ctx& ctx, const Qset& x) {
  auto r = ctx.qcr(x);
  return r.defined ? std::to_string(r.value) : "undefined(" + r.reason + ")";
}

}  // namespace

// ------------------------------------------------------------- enumeration

std::vector<UniversePtr> enumerate_universes(const Bounds& b, bool kind_symmetry) {
  std::vector<std::vector<Nat>> tuples;
  std::vector<Nat> current(b.max_kinds, 0);
  auto gen = [&](auto&& self, std::size_t pos, Nat remaining) -> void {
    if (pos == b.max_kinds) {
      tuples.push_back(current);
      return;
    }
    Nat limit = remaining;
    if (kind_symmetry && pos > 0) limit = std::min(limit, current[pos - 1]);
    for (Nat p = 0; p <= limit; ++p) {
      current[pos] = p;
      self(self, pos + 1, remaining - p);
    }
  };
  gen(gen, 0, b.max_total_matoms);

  std::vector<UniversePtr> out;
  for (const auto& tuple : tuples) {
    for (Nat c = 0; c <= b.max_classical; ++c) {
      std::vector<KindSpec> kinds;
      for (std::size_t i = 0; i < tuple.size(); ++i)
        kinds.push_back(KindSpec{kind_label(i), tuple[i], ""});
      std::vector<ClassicalElem> classical;
      std::vector<ClassicalElem> atoms;
      for (Nat j = 0; j < c; ++j) atoms.push_back(ClassicalElem::atom(atom_label(j)));
      classical = atoms;
      if (c >= 1 && b.max_nesting >= 1) classical.push_back(ClassicalElem::set(atoms));
      out.push_back(make_universe(std::move(kinds), std::move(classical),
                                  static_cast<int>(b.max_nesting)));
    }
  }
  return out;
}

std::vector<Qset> enumerate_qsets(const UniversePtr& u) {
  std::vector<Token> all_tokens;
  for (std::size_t k = 0; k < u->kind_count(); ++k)
    for (Nat s = 0; s < u->pool_size(k); ++s)
      all_tokens.push_back(
          Token{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(s)});
  const auto& registry = u->classical();
  const std::size_t t = all_tokens.size();
  const std::size_t n = t + registry.size();
  if (n > 20)
    throw Error(ErrorCode::BoundExceeded,
                "universe with " + std::to_string(n) + " carriers is too large");
  std::vector<Qset> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Token> m;
    std::vector<ClassicalElem> c;
    for (std::size_t i = 0; i < t; ++i)
      if (mask & (std::uint64_t{1} << i)) m.push_back(all_tokens[i]);
    for (std::size_t i = 0; i < registry.size(); ++i)
      if (mask & (std::uint64_t{1} << (t + i))) c.push_back(registry[i]);
    out.push_back(Qset::from_parts(u, std::move(m), std::move(c), {}));
  }
  return out;
}

std::string universe_display(const Universe& u) {
  std::string out = "kinds:";
  bool any = false;
  for (std::size_t i = 0; i < u.kind_count(); ++i) {
    out += (any ? ", " : " ") + u.kind(i).label + "×" + std::to_string(u.pool_size(i));
    any = true;
  }
  if (!any) out += " none";
  if (!u.classical().empty()) {
    out += "; classical:";
    for (std::size_t i = 0; i < u.classical().size(); ++i)
      out += (i ? ", " : " ") + u.classical()[i].canonical();
  }
  return out;
}

// ------------------------------------------------------------------ checks

std::vector<Verdict> check_axioms(const UniversePtr& u, const CheckOptions& opts) {
  Ctx ctx{&opts.qcard_fn, {}};
  Verdict h1{.id = "H1", .universes_checked = 1};
  Verdict h2{.id = "H2", .universes_checked = 1};
  auto qsets = enumerate_qsets(u);
  for (const auto& x : qsets) {
    if (x.is_empty()) continue;
    ++h1.instances_checked;
    if (!prop_h1(x))
      record(h1, make_ce(u, "H1", {x}, "no valid descent chain from " +
                                           x.canonical_form()));
  }
  for (const auto& x : qsets)
    for (const auto& y : qsets) {
      ++h2.instances_checked;
      if (!prop_h2(ctx, x, y))
        record(h2, make_ce(u, "H2", {x, y},
                           "indistinguishable finite subqset is not extensionally "
                           "equal to its superset"));
    }
  return {h1, h2};
}

Verdict check_theorem(const std::string& id, const UniversePtr& u, const Bounds& b,
                      const CheckOptions& opts) {
  const auto& ids = theorem_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end())
    throw Error(ErrorCode::UnknownTheorem, "no theorem named " + id);

  Ctx ctx{&opts.qcard_fn, {}};
  Verdict v{.id = id, .universes_checked = 1};
  auto qsets = enumerate_qsets(u);

  if (id == "NONZERO") {
    for (const auto& x : qsets) {
      if (x.is_empty()) continue;
      ++v.instances_checked;
      if (!prop_nonzero(ctx, x))
        record(v, make_ce(u, id, {x},
                          "qcard(" + x.canonical_form() + ") = " + qcr_str(ctx, x)));
    }
  } else if (id == "SUBCARD") {
    for (const auto& x : qsets) {
      auto rx = ctx.qcr(x);
      if (!rx.defined) continue;
      for (Nat beta = 0; beta <= rx.value; ++beta) {
        ++v.instances_checked;
        if (!prop_subcard(ctx, x, beta))
          record(v, make_ce(u, id, {x},
                            "no subqset of " + x.canonical_form() +
                                " has quasicardinal " + std::to_string(beta),
                            json{{"beta", beta}}));
      }
    }
  } else if (id == "MONO" || id == "ADD") {
    for (std::uint64_t xm = 0; xm < qsets.size(); ++xm) {
      const std::uint64_t comp = (qsets.size() - 1) & ~xm;
      // iterate submasks of the complement; ADD includes the empty extension
      std::uint64_t e = comp;
      while (true) {
        if (id == "MONO" ? e != 0 : true) {
          const Qset& x = qsets[xm];
          const Qset& y = qsets[id == "MONO" ? (xm | e) : e];
          ++v.instances_checked;
          if (id == "MONO") {
            if (!prop_mono(ctx, x, y))
              record(v, make_ce(u, id, {x, y},
                                "qcard(" + x.canonical_form() + ") = " +
                                    qcr_str(ctx, x) + " not below qcard(" +
                                    y.canonical_form() + ") = " + qcr_str(ctx, y)));
          } else {
            if (!prop_add(ctx, x, y))
              record(v, make_ce(u, id, {x, y},
                                "qcard(X) = " + qcr_str(ctx, x) + ", qcard(Y) = " +
                                    qcr_str(ctx, y) + ", qcard(X∪Y) = " +
                                    qcr_str(ctx, qset_union(x, y))));
          }
        }
        if (e == 0) break;
        e = (e - 1) & comp;
      }
    }
  } else if (id == "POW") {
    const Nat carrier_cap = std::min<Nat>(b.powerset_card_cap, kPowersetCardCap);
    for (const auto& x : qsets) {
      const Nat card = x.tokens().size() + x.classical_part().size() +
                       x.nested_part().size();
      if (card > b.powerset_card_cap) continue;
      ++v.instances_checked;
      if (!prop_pow(ctx, x, carrier_cap))
        record(v, make_ce(u, id, {x},
                          "qcard(℘(" + x.canonical_form() + ")) = " +
                              qcr_str(ctx, powerset(x, carrier_cap)) +
                              " but qcard(X) = " + qcr_str(ctx, x)));
    }
  } else if (id == "SING1") {
    for (const auto& x : qsets) {
      if (x.is_empty()) continue;
      std::vector<std::pair<ElemPick, json>> picks;
      for (const auto& [label, count] : x.kind_profile())
        picks.emplace_back(KindPick{label}, json{{"kind", label}});
      for (const auto& e : x.classical_part())
        picks.emplace_back(e, json{{"classical", celem_to_json(e)}});
      for (const auto& q : x.nested_part())
        picks.emplace_back(q, json{{"nested", qset_to_json(q)}});
      for (const auto& [pick, pick_json] : picks) {
        ++v.instances_checked;
        if (!prop_sing1(ctx, x, pick))
          record(v, make_ce(u, id, {x},
                            "a singleton drawn from " + x.canonical_form() +
                                " does not have quasicardinal 1",
                            json{{"pick", pick_json}}));
      }
    }
  } else if (id == "GEN") {
    Qset full = qsets.back();  // highest mask: all tokens and classical elements
    Qset target = Qset::from_parts(u, {full.tokens().begin(), full.tokens().end()},
                                   {}, {});
    Qset z = empty_qset(u);
    Nat step = 0;
    while (true) {
      ++v.instances_checked;
      if (!prop_gen_step(ctx, z, step))
        record(v, make_ce(u, id, {z},
                          "generated qset " + z.canonical_form() + " at step " +
                              std::to_string(step) + " has qcard " + qcr_str(ctx, z),
                          json{{"n", step}}));
      Qset rest = qset_difference(target, z);
      if (rest.is_empty()) break;
      const auto& next_kind =
          rest.universe()->kind(rest.tokens().front().kind).label;
      z = qset_union(z, singleton(rest, KindPick{next_kind}));
      ++step;
    }
  }
  return v;
}

Report run_suite(const Bounds& b, const CheckOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  report.bounds = b;
  report.kind_symmetry = opts.kind_symmetry;

  std::vector<std::string> order = {"H1", "H2"};
  for (const auto& id : theorem_ids()) order.push_back(id);
  for (const auto& id : order) report.verdicts.push_back(Verdict{.id = id});

  auto merge = [&](const Verdict& piece) {
    for (auto& v : report.verdicts)
      if (v.id == piece.id) {
        v.instances_checked += piece.instances_checked;
        if (!piece.holds) {
          v.holds = false;
          if (!v.counterexample) v.counterexample = piece.counterexample;
        }
        for (const auto& note : piece.notes) v.notes.push_back(note);
        return;
      }
  };

  auto universes = enumerate_universes(b, opts.kind_symmetry);
  for (const auto& u : universes) {
    for (const auto& verdict : check_axioms(u, opts)) merge(verdict);
    for (const auto& id : theorem_ids()) {
      try {
        merge(check_theorem(id, u, b, opts));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BoundExceeded) throw;
        Verdict note{.id = id};
        note.notes.push_back(universe_display(*u) + ": " + e.what());
        merge(note);
      }
    }
  }
  for (auto& v : report.verdicts) v.universes_checked = universes.size();

  const auto t1 = std::chrono::steady_clock::now();
  report.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return report;
}

// --------------------------------------------------------------------- json

json verdict_json(const Verdict& v) {
  json j{{"id", v.id},
         {"holds", v.holds},
         {"universes_checked", v.universes_checked},
         {"instances_checked", v.instances_checked}};
  if (v.counterexample) {
    const auto& ce = *v.counterexample;
    j["counterexample"] = json{{"universe", ce.universe},
                               {"qsets", ce.forms},
                               {"detail", ce.detail},
                               {"replay", ce.replay}};
  } else {
    j["counterexample"] = nullptr;
  }
  if (!v.notes.empty()) j["notes"] = v.notes;
  return j;
}

json report_json(const Report& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(verdict_json(v));
  return json{{"bounds",
               {{"max_kinds", r.bounds.max_kinds},
                {"max_total_matoms", r.bounds.max_total_matoms},
                {"max_classical", r.bounds.max_classical},
                {"max_nesting", r.bounds.max_nesting},
                {"powerset_card_cap", r.bounds.powerset_card_cap},
                {"kind_symmetry", r.kind_symmetry}}},
              {"verdicts", verdicts},
              {"elapsed_ms", r.elapsed_ms}};
}

// ------------------------------------------------------------------- replay

bool replay_counterexample(const Verdict& v, const QcardFn& fn) {
  if (!v.counterexample) return false;
  const json& r = v.counterexample->replay;
  const std::string id = r["theorem"].get<std::string>();
  UniversePtr u = universe_from_json(r["universe"]);
  std::vector<Qset> qs;
  for (const auto& qj : r["qsets"]) qs.push_back(qset_from_json(qj, u));
  Ctx ctx{&fn, {}};
  const json& args = r["args"];

  bool holds = true;
  if (id == "H1") {
    holds = prop_h1(qs.at(0));
  } else if (id == "H2") {
    holds = prop_h2(ctx, qs.at(0), qs.at(1));
  } else if (id == "NONZERO") {
    holds = prop_nonzero(ctx, qs.at(0));
  } else if (id == "SUBCARD") {
    holds = prop_subcard_exhaustive(ctx, qs.at(0), args["beta"].get<Nat>());
  } else if (id == "MONO") {
    holds = prop_mono(ctx, qs.at(0), qs.at(1));
  } else if (id == "ADD") {
    holds = prop_add(ctx, qs.at(0), qs.at(1));
  } else if (id == "POW") {
    holds = prop_pow(ctx, qs.at(0), kPowersetCardCap);
  } else if (id == "SING1") {
    const json& pj = args["pick"];
    ElemPick pick = KindPick{""};
    if (pj.contains("kind")) pick = KindPick{pj["kind"].get<std::string>()};
    else if (pj.contains("classical")) pick = celem_from_json(pj["classical"]);
    else pick = qset_from_json(pj["nested"], u);
    holds = prop_sing1(ctx, qs.at(0), pick);
  } else if (id == "GEN") {
    holds = prop_gen_step(ctx, qs.at(0), args["n"].get<Nat>());
  } else {
    throw Error(ErrorCode::UnknownTheorem, "no theorem named " + id);
  }
  return !holds;
}

}  // namespace qsetk
