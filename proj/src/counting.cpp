#include "qsetk/counting.hpp"

#include <algorithm>

namespace qsetk {

namespace {

// One concrete element position inside a qset.
struct Slot {
  int part;          // 0 = token, 1 = classical, 2 = nested
  std::size_t idx;
};

std::size_t slot_count(const Qset& x) {
  return x.tokens().size() + x.classical_part().size() + x.nested_part().size();
}

std::vector<Slot> slots_of(const Qset& x) {
  std::vector<Slot> out;
  out.reserve(slot_count(x));
  for (std::size_t i = 0; i < x.tokens().size(); ++i) out.push_back({0, i});
  for (std::size_t i = 0; i < x.classical_part().size(); ++i) out.push_back({1, i});
  for (std::size_t i = 0; i < x.nested_part().size(); ++i) out.push_back({2, i});
  return out;
}

Qset subset_by_slots(const Qset& x, const std::vector<Slot>& keep) {
  std::vector<Token> m;
  std::vector<ClassicalElem> c;
  std::vector<Qset> nested;
  for (const auto& s : keep) {
    if (s.part == 0) m.push_back(x.tokens()[s.idx]);
    else if (s.part == 1) c.push_back(x.classical_part()[s.idx]);
    else nested.push_back(x.nested_part()[s.idx]);
  }
  return Qset::from_parts(x.universe(), std::move(m), std::move(c), std::move(nested));
}

Qset remove_slot(const Qset& x, const Slot& drop) {
  std::vector<Slot> keep;
  for (const auto& s : slots_of(x))
    if (s.part != drop.part || s.idx != drop.idx) keep.push_back(s);
  return subset_by_slots(x, keep);
}

// Resolves a designator to a concrete slot; the pick among indistinguishable
// candidates is arbitrary and unobservable.
Slot resolve_pick(const Qset& x, const ElemPick& pick) {
  if (const auto* kp = std::get_if<KindPick>(&pick)) {
    std::size_t k = x.universe()->find_kind(kp->label);
    if (k != Universe::npos)
      for (std::size_t i = 0; i < x.tokens().size(); ++i)
        if (x.tokens()[i].kind == k) return {0, i};
    throw Error(ErrorCode::NotMember, "no m-atom of kind " + kp->label);
  }
  if (const auto* ce = std::get_if<ClassicalElem>(&pick)) {
    auto c = x.classical_part();
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] == *ce) return {1, i};
    throw Error(ErrorCode::NotMember, "classical element " + ce->canonical() +
                                          " is not a member");
  }
  const auto& q = std::get<Qset>(pick);
  if (q.universe() != x.universe())
    throw Error(ErrorCode::UniverseMismatch, "designator from a different universe");
  auto n = x.nested_part();
  for (std::size_t i = 0; i < n.size(); ++i)
    if (n[i].token_key() == q.token_key()) return {2, i};
  throw Error(ErrorCode::NotMember, "no nested member equals " + q.canonical_form());
}

bool is_direct_descendant(const Qset& z, const Qset& w) {
  for (const auto& s : slots_of(z))
    if (ext_eq(remove_slot(z, s), w)) return true;
  return false;
}

}  // namespace

Qset family_Ax(const Qset& x, const ElemPick& pick) {
  Slot fixed = resolve_pick(x, pick);
  std::vector<Slot> rest;
  for (const auto& s : slots_of(x))
    if (s.part != fixed.part || s.idx != fixed.idx) rest.push_back(s);
  if (rest.size() > kPowersetCardCap)
    throw Error(ErrorCode::BoundExceeded, "family enumeration too large");
  std::vector<Qset> members;
  members.reserve(std::size_t{1} << rest.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
    std::vector<Slot> keep = {fixed};
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) keep.push_back(rest[i]);
    members.push_back(subset_by_slots(x, keep));
  }
  return Qset::from_parts(x.universe(), {}, {}, std::move(members));
}

Qset singleton(const Qset& x, const ElemPick& pick) {
  return subset_by_slots(x, {resolve_pick(x, pick)});
}

std::vector<Qset> direct_descendants(const Qset& x) {
  std::vector<Qset> out;
  for (const auto& s : slots_of(x)) out.push_back(remove_slot(x, s));
  std::sort(out.begin(), out.end(),
            [](const Qset& a, const Qset& b) { return a.token_key() < b.token_key(); });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Qset& a, const Qset& b) {
                          return a.token_key() == b.token_key();
                        }),
            out.end());
  return out;
}

std::vector<Chain> descendant_chains(const Qset& x, Nat cap) {
  const std::size_t n = slot_count(x);
  Nat expected = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (expected > cap / i)
      throw Error(ErrorCode::CapExceeded,
                  "the chain family of a " + std::to_string(n) +
                      "-element qset exceeds the cap of " + std::to_string(cap));
    expected *= i;
  }
  if (expected > cap)
    throw Error(ErrorCode::CapExceeded,
                std::to_string(expected) + " chains exceed the cap of " +
                    std::to_string(cap));

  std::vector<Chain> family;
  family.reserve(expected);
  std::vector<Qset> trail = {x};
  auto descend = [&](auto&& self, const Qset& current) -> void {
    if (current.is_empty()) {
      family.push_back(Chain{trail});
      return;
    }
    for (const auto& s : slots_of(current)) {
      Qset next = remove_slot(current, s);
      trail.push_back(next);
      self(self, next);
      trail.pop_back();
    }
  };
  descend(descend, x);

  auto chain_key = [](const Chain& c) {
    std::string k;
    for (const auto& q : c.members) k += q.token_key() + ";";
    return k;
  };
  std::sort(family.begin(), family.end(), [&](const Chain& a, const Chain& b) {
    auto da = chain_display(a);
    auto db = chain_display(b);
    if (da != db) return da < db;
    return chain_key(a) < chain_key(b);
  });
  return family;
}

bool is_chain(const Qset& x, const std::vector<Qset>& family) {
  std::vector<Qset> members;
  for (const auto& q : family) {
    bool seen = false;
    for (const auto& m : members)
      if (ext_eq(m, q)) { seen = true; break; }
    if (!seen) members.push_back(q);
  }
  bool holds_x = false;
  for (const auto& m : members) {
    if (ext_eq(m, x)) holds_x = true;
    if (!is_sub(subqset(m, x))) return false;
  }
  if (!holds_x) return false;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      auto ij = subqset(members[i], members[j]);
      auto ji = subqset(members[j], members[i]);
      if (ij != SubVerdict::ProperSub && ji != SubVerdict::ProperSub) return false;
    }
  for (const auto& z : members) {
    if (z.is_empty()) continue;
    std::size_t inside = 0;
    for (const auto& w : members)
      if (is_direct_descendant(z, w)) ++inside;
    if (inside != 1) return false;  // members are already distinct under ext_eq
  }
  return true;
}

QFunction build_qfunction(const Chain& chain) {
  if (chain.members.empty())
    throw Error(ErrorCode::NonTerminatingChain, "empty chain");
  std::vector<Qset> descending = chain.members;
  std::stable_sort(descending.begin(), descending.end(),
                   [](const Qset& a, const Qset& b) {
                     return slot_count(a) > slot_count(b);
                   });
  if (!descending.back().is_empty())
    throw Error(ErrorCode::NonTerminatingChain,
                "chain does not reach the empty qset; last member is " +
                    descending.back().canonical_form());
  for (std::size_t j = 0; j + 1 < descending.size(); ++j)
    if (!is_direct_descendant(descending[j], descending[j + 1]))
      throw Error(ErrorCode::NonTerminatingChain,
                  descending[j + 1].canonical_form() + " does not directly descend from " +
                      descending[j].canonical_form());
  QFunction f;
  f.values.assign(descending.rbegin(), descending.rend());
  return f;
}

namespace {

// Below this size every branch of the descent is walked; above it one branch
// suffices and the memoized suffixes below the threshold cover the rest.
constexpr std::size_t kExhaustiveDescentMax = 8;

Nat qcard_node(const Qset& x, QcardCache& cache) {
  if (auto it = cache.memo.find(x.token_key()); it != cache.memo.end())
    return it->second;
  const std::size_t n = slot_count(x);
  Nat result = 0;
  if (n == 0) {
    result = 0;
  } else if (n <= kExhaustiveDescentMax) {
    bool first = true;
    Nat common = 0;
    for (const auto& d : direct_descendants(x)) {
      Nat below = qcard_node(d, cache);
      if (first) {
        common = below;
        first = false;
      } else if (below != common) {
        throw Error(ErrorCode::NonTerminatingChain,
                    "descent chains disagree below " + x.canonical_form());
      }
    }
    result = common + 1;
  } else {
    result = qcard_node(remove_slot(x, slots_of(x).front()), cache) + 1;
  }
  cache.memo.emplace(x.token_key(), result);
  return result;
}

}  // namespace

QcardResult qcard(const Qset& x, QcardCache& cache) {
  return QcardResult::definite(qcard_node(x, cache));
}

QcardResult qcard(const Qset& x) {
  QcardCache cache;
  return qcard(x, cache);
}

bool is_finite(const Qset& x) { return qcard(x).defined; }

std::string chain_display(const Chain& chain) {
  std::string out;
  for (const auto& q : chain.members) {
    if (!out.empty()) out += " ⊃ ";
    out += q.canonical_form();
  }
  return out;
}

std::vector<std::string> chain_forms(const Chain& chain) {
  std::vector<std::string> out;
  out.reserve(chain.members.size());
  for (const auto& q : chain.members) out.push_back(q.canonical_form());
  return out;
}

std::string qfunction_display(const QFunction& f) {
  std::string out = "[";
  for (std::size_t j = f.values.size(); j-- > 0;) {
    out += "⟨" + std::to_string(j) + ";" + f.values[j].canonical_form() + "⟩";
    if (j != 0) out += "; ";
  }
  out += "]";
  return out;
}

}  // namespace qsetk
