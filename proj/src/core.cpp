#include "qsetk/core.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace qsetk {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateKind: return "DuplicateKind";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::PoolExhausted: return "PoolExhausted";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::UniverseMismatch: return "UniverseMismatch";
    case ErrorCode::IllFormedFormula: return "IllFormedFormula";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::KindViolation: return "KindViolation";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::NonTerminatingChain: return "NonTerminatingChain";
    case ErrorCode::UnknownTheorem: return "UnknownTheorem";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadDistribution: return "BadDistribution";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::NoQuasisetRepresentation: return "NoQuasisetRepresentation";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnboundIdent: return "UnboundIdent";
    case ErrorCode::EvalError: return "EvalError";
  }
  return "Error";
}

// ---------------------------------------------------------------- classical

ClassicalElem ClassicalElem::atom(std::string label) {
  ClassicalElem e;
  e.atom_ = true;
  e.label_ = std::move(label);
  return e;
}

ClassicalElem ClassicalElem::set(std::vector<ClassicalElem> members) {
  ClassicalElem e;
  e.atom_ = false;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  e.members_ = std::move(members);
  return e;
}

int ClassicalElem::depth() const {
  if (atom_) return 0;
  int d = 0;
  for (const auto& m : members_) d = std::max(d, m.depth());
  return d + 1;
}

std::string ClassicalElem::canonical() const {
  if (atom_) return label_;
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ",";
    out += members_[i].canonical();
  }
  out += "}";
  return out;
}

std::strong_ordering ClassicalElem::operator<=>(const ClassicalElem& other) const {
  if (atom_ != other.atom_)
    return atom_ ? std::strong_ordering::less : std::strong_ordering::greater;
  if (atom_) return label_ <=> other.label_;
  return std::lexicographical_compare_three_way(
      members_.begin(), members_.end(), other.members_.begin(), other.members_.end());
}

bool ClassicalElem::operator==(const ClassicalElem& other) const {
  return (*this <=> other) == std::strong_ordering::equal;
}

// ----------------------------------------------------------------- universe

UniversePtr Universe::make(std::vector<KindSpec> kinds,
                           std::vector<ClassicalElem> classical,
                           int classical_depth_bound) {
  auto u = std::shared_ptr<Universe>(new Universe());
  u->depth_bound_ = classical_depth_bound;
  for (auto& spec : kinds) {
    for (const auto& existing : u->kinds_)
      if (existing.label == spec.label)
        throw Error(ErrorCode::DuplicateKind, "kind label repeated: " + spec.label);
    u->kinds_.push_back(Kind{spec.label, spec.description});
    u->pools_.push_back(spec.pool_size);
  }
  for (const auto& c : classical)
    if (c.depth() > classical_depth_bound)
      throw Error(ErrorCode::DepthExceeded,
                  "classical element " + c.canonical() + " has depth " +
                      std::to_string(c.depth()) + " > bound " +
                      std::to_string(classical_depth_bound));
  std::sort(classical.begin(), classical.end());
  classical.erase(std::unique(classical.begin(), classical.end()), classical.end());
  u->classical_ = std::move(classical);
  return u;
}

std::size_t Universe::find_kind(const std::string& label) const {
  for (std::size_t i = 0; i < kinds_.size(); ++i)
    if (kinds_[i].label == label) return i;
  return npos;
}

bool Universe::has_classical(const ClassicalElem& elem) const {
  return std::binary_search(classical_.begin(), classical_.end(), elem);
}

Nat Universe::total_tokens() const {
  return std::accumulate(pools_.begin(), pools_.end(), Nat{0});
}

UniversePtr make_universe(std::vector<KindSpec> kinds,
                          std::vector<ClassicalElem> classical,
                          int classical_depth_bound) {
  return Universe::make(std::move(kinds), std::move(classical), classical_depth_bound);
}

// --------------------------------------------------------------------- qset

namespace {

void require_same_universe(const Qset& x, const Qset& y) {
  if (x.universe() != y.universe())
    throw Error(ErrorCode::UniverseMismatch, "operands belong to different universes");
}

std::string build_key(const std::vector<Token>& m, const std::vector<ClassicalElem>& c,
                      const std::vector<Qset>& nested) {
  std::string key;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) key += ",";
    key += std::to_string(m[i].kind) + "." + std::to_string(m[i].serial);
  }
  key += "|";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) key += ",";
    key += c[i].canonical();
  }
  key += "|";
  for (std::size_t i = 0; i < nested.size(); ++i) {
    if (i) key += ",";
    key += "(" + nested[i].token_key() + ")";
  }
  return key;
}

}  // namespace

Qset Qset::from_parts(UniversePtr universe, std::vector<Token> m,
                      std::vector<ClassicalElem> c, std::vector<Qset> nested) {
  if (!universe) throw Error(ErrorCode::UniverseMismatch, "qset without a universe");
  for (const auto& t : m) {
    if (t.kind >= universe->kind_count())
      throw Error(ErrorCode::UnknownKind, "token kind index out of range");
    if (t.serial >= universe->pool_size(t.kind))
      throw Error(ErrorCode::PoolExhausted,
                  "token serial exceeds pool of kind " + universe->kind(t.kind).label);
  }
  for (const auto& e : c)
    if (!universe->has_classical(e))
      throw Error(ErrorCode::UnknownKind,
                  "classical element not registered: " + e.canonical());
  for (const auto& n : nested)
    if (n.universe() != universe)
      throw Error(ErrorCode::UniverseMismatch, "nested qset from a different universe");

  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  std::sort(nested.begin(), nested.end(),
            [](const Qset& a, const Qset& b) { return a.token_key() < b.token_key(); });
  nested.erase(std::unique(nested.begin(), nested.end(),
                           [](const Qset& a, const Qset& b) {
                             return a.token_key() == b.token_key();
                           }),
               nested.end());

  auto rep = std::make_shared<Rep>();
  rep->universe = std::move(universe);
  rep->m = std::move(m);
  rep->c = std::move(c);
  rep->nested = std::move(nested);
  rep->key = build_key(rep->m, rep->c, rep->nested);
  return Qset(std::move(rep));
}

bool Qset::is_empty() const {
  return rep_->m.empty() && rep_->c.empty() && rep_->nested.empty();
}

bool Qset::is_pure() const { return rep_->c.empty() && rep_->nested.empty(); }

std::map<std::string, Nat> Qset::kind_profile() const {
  std::map<std::string, Nat> profile;
  for (const auto& t : rep_->m) ++profile[rep_->universe->kind(t.kind).label];
  return profile;
}

std::string Qset::canonical_form() const {
  if (is_empty()) return "∅";
  std::string m_part;
  for (const auto& [label, count] : kind_profile()) {
    if (!m_part.empty()) m_part += ", ";
    m_part += label + "×" + std::to_string(count);
  }
  std::string c_part;
  for (const auto& e : rep_->c) {
    if (!c_part.empty()) c_part += ", ";
    c_part += e.canonical();
  }
  std::string n_part;
  std::vector<std::string> forms;
  forms.reserve(rep_->nested.size());
  for (const auto& n : rep_->nested) forms.push_back(n.canonical_form());
  std::sort(forms.begin(), forms.end());
  for (const auto& f : forms) {
    if (!n_part.empty()) n_part += ", ";
    n_part += f;
  }
  std::string body = m_part;
  if (!c_part.empty() || !n_part.empty()) body += "; " + c_part;
  if (!n_part.empty()) body += "; " + n_part;
  return "⟨" + body + "⟩";
}

Qset make_qset(const UniversePtr& u, const QsetSpec& spec) {
  if (!u) throw Error(ErrorCode::UniverseMismatch, "qset without a universe");
  std::map<std::string, Nat> wanted;
  for (const auto& [label, mult] : spec.matoms) wanted[label] += mult;
  std::vector<Token> m;
  for (const auto& [label, mult] : wanted) {
    std::size_t k = u->find_kind(label);
    if (k == Universe::npos)
      throw Error(ErrorCode::UnknownKind, "no kind named " + label);
    if (mult > u->pool_size(k))
      throw Error(ErrorCode::PoolExhausted,
                  "requested " + std::to_string(mult) + " of kind " + label +
                      " from a pool of " + std::to_string(u->pool_size(k)));
    for (Nat s = 0; s < mult; ++s)
      m.push_back(Token{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(s)});
  }
  return Qset::from_parts(u, std::move(m), spec.classical, {});
}

Qset empty_qset(const UniversePtr& u) { return Qset::from_parts(u, {}, {}, {}); }

// ------------------------------------------------------------------ algebra

namespace {

template <typename T, typename Less>
std::vector<T> merge_union(const std::vector<T>& a, const std::vector<T>& b, Less less) {
  std::vector<T> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), less);
  return out;
}

template <typename T, typename Less>
std::vector<T> merge_intersection(const std::vector<T>& a, const std::vector<T>& b,
                                  Less less) {
  std::vector<T> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                        less);
  return out;
}

template <typename T, typename Less>
std::vector<T> merge_difference(const std::vector<T>& a, const std::vector<T>& b,
                                Less less) {
  std::vector<T> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                      less);
  return out;
}

const auto token_less = [](const Token& a, const Token& b) { return a < b; };
const auto classical_less = [](const ClassicalElem& a, const ClassicalElem& b) {
  return a < b;
};
const auto nested_less = [](const Qset& a, const Qset& b) {
  return a.token_key() < b.token_key();
};

std::vector<Token> to_vec(std::span<const Token> s) { return {s.begin(), s.end()}; }
std::vector<ClassicalElem> to_vec(std::span<const ClassicalElem> s) {
  return {s.begin(), s.end()};
}
std::vector<Qset> to_vec(std::span<const Qset> s) { return {s.begin(), s.end()}; }

}  // namespace

Qset qset_union(const Qset& x, const Qset& y) {
  require_same_universe(x, y);
  return Qset::from_parts(
      x.universe(), merge_union(to_vec(x.tokens()), to_vec(y.tokens()), token_less),
      merge_union(to_vec(x.classical_part()), to_vec(y.classical_part()), classical_less),
      merge_union(to_vec(x.nested_part()), to_vec(y.nested_part()), nested_less));
}

Qset qset_intersection(const Qset& x, const Qset& y) {
  require_same_universe(x, y);
  return Qset::from_parts(
      x.universe(),
      merge_intersection(to_vec(x.tokens()), to_vec(y.tokens()), token_less),
      merge_intersection(to_vec(x.classical_part()), to_vec(y.classical_part()),
                         classical_less),
      merge_intersection(to_vec(x.nested_part()), to_vec(y.nested_part()), nested_less));
}

Qset qset_difference(const Qset& x, const Qset& y) {
  require_same_universe(x, y);
  return Qset::from_parts(
      x.universe(),
      merge_difference(to_vec(x.tokens()), to_vec(y.tokens()), token_less),
      merge_difference(to_vec(x.classical_part()), to_vec(y.classical_part()),
                       classical_less),
      merge_difference(to_vec(x.nested_part()), to_vec(y.nested_part()), nested_less));
}

SubVerdict subqset(const Qset& x, const Qset& y) {
  require_same_universe(x, y);
  bool sub = std::includes(y.tokens().begin(), y.tokens().end(), x.tokens().begin(),
                           x.tokens().end(), token_less) &&
             std::includes(y.classical_part().begin(), y.classical_part().end(),
                           x.classical_part().begin(), x.classical_part().end(),
                           classical_less) &&
             std::includes(y.nested_part().begin(), y.nested_part().end(),
                           x.nested_part().begin(), x.nested_part().end(), nested_less);
  if (!sub) return SubVerdict::NotSub;
  return x.token_key() == y.token_key() ? SubVerdict::Sub : SubVerdict::ProperSub;
}

// ----------------------------------------------------------------- equality

bool ext_eq(const Qset& x, const Qset& y) {
  require_same_universe(x, y);
  return x.token_key() == y.token_key();
}

namespace {

// Empty-m-part, empty-nested qsets collapse into classical sets.
bool qset_matches_classical(const Qset& x, const ClassicalElem& e) {
  if (e.is_atom()) return false;
  if (!x.tokens().empty() || !x.nested_part().empty()) return false;
  auto c = x.classical_part();
  return std::equal(c.begin(), c.end(), e.members().begin(), e.members().end());
}

}  // namespace

bool ext_eq(const Element& a, const Element& b) {
  if (std::holds_alternative<MAtom>(a) || std::holds_alternative<MAtom>(b))
    throw Error(ErrorCode::IllFormedFormula,
                "extensional equality is not well formed for m-atoms");
  if (const auto* xa = std::get_if<Qset>(&a)) {
    if (const auto* xb = std::get_if<Qset>(&b)) return ext_eq(*xa, *xb);
    return qset_matches_classical(*xa, std::get<ClassicalElem>(b));
  }
  const auto& ca = std::get<ClassicalElem>(a);
  if (const auto* xb = std::get_if<Qset>(&b)) return qset_matches_classical(*xb, ca);
  return ca == std::get<ClassicalElem>(b);
}

bool indist(const Qset& x, const Qset& y) {
  require_same_universe(x, y);
  auto xm = x.tokens();
  auto ym = y.tokens();
  if (xm.size() != ym.size()) return false;
  for (std::size_t i = 0; i < xm.size(); ++i)
    if (xm[i].kind != ym[i].kind) return false;  // both sorted by (kind, serial)
  auto xc = x.classical_part();
  auto yc = y.classical_part();
  if (!std::equal(xc.begin(), xc.end(), yc.begin(), yc.end())) return false;
  auto xn = x.nested_part();
  auto yn = y.nested_part();
  if (xn.size() != yn.size()) return false;
  // Nested members match as a multiset up to indistinguishability; canonical
  // forms are complete invariants for it, so sorted forms decide the matching.
  std::vector<std::string> xf;
  std::vector<std::string> yf;
  xf.reserve(xn.size());
  yf.reserve(yn.size());
  for (const auto& z : xn) xf.push_back(z.canonical_form());
  for (const auto& z : yn) yf.push_back(z.canonical_form());
  std::sort(xf.begin(), xf.end());
  std::sort(yf.begin(), yf.end());
  return xf == yf;
}

bool indist(const Element& a, const Element& b) {
  if (const auto* ma = std::get_if<MAtom>(&a)) {
    const auto* mb = std::get_if<MAtom>(&b);
    if (!mb) return false;
    if (ma->universe != mb->universe)
      throw Error(ErrorCode::UniverseMismatch, "m-atoms from different universes");
    return ma->kind_label == mb->kind_label;
  }
  if (std::holds_alternative<MAtom>(b)) return false;
  return ext_eq(a, b);  // collapses on the classical/qset part
}

// ----------------------------------------------------------------- powerset

Qset powerset(const Qset& x, Nat max_card) {
  const Nat n = x.tokens().size() + x.classical_part().size() + x.nested_part().size();
  if (n > max_card)
    throw Error(ErrorCode::BoundExceeded,
                "powerset of " + std::to_string(n) + " elements exceeds cap " +
                    std::to_string(max_card));
  const auto& u = x.universe();
  std::vector<Qset> subsets;
  subsets.reserve(std::size_t{1} << n);
  const std::size_t tn = x.tokens().size();
  const std::size_t cn = x.classical_part().size();
  const std::size_t nn = x.nested_part().size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Token> m;
    std::vector<ClassicalElem> c;
    std::vector<Qset> nested;
    for (std::size_t i = 0; i < tn; ++i)
      if (mask & (std::uint64_t{1} << i)) m.push_back(x.tokens()[i]);
    for (std::size_t i = 0; i < cn; ++i)
      if (mask & (std::uint64_t{1} << (tn + i))) c.push_back(x.classical_part()[i]);
    for (std::size_t i = 0; i < nn; ++i)
      if (mask & (std::uint64_t{1} << (tn + cn + i)))
        nested.push_back(x.nested_part()[i]);
    subsets.push_back(Qset::from_parts(u, std::move(m), std::move(c), std::move(nested)));
  }
  return Qset::from_parts(u, {}, {}, std::move(subsets));
}

// ------------------------------------------------------------------- rebind

Qset rebind(const Qset& x, const UniversePtr& target) {
  if (!target) throw Error(ErrorCode::UniverseMismatch, "rebind to a null universe");
  const auto& src = *x.universe();
  if (target->kind_count() < src.kind_count())
    throw Error(ErrorCode::UniverseMismatch, "target universe drops kinds");
  for (std::size_t i = 0; i < src.kind_count(); ++i) {
    if (target->kind(i).label != src.kind(i).label)
      throw Error(ErrorCode::UniverseMismatch,
                  "target universe reorders kind " + src.kind(i).label);
    if (target->pool_size(i) < src.pool_size(i))
      throw Error(ErrorCode::UniverseMismatch,
                  "target universe shrinks pool of kind " + src.kind(i).label);
  }
  for (const auto& e : src.classical())
    if (!target->has_classical(e))
      throw Error(ErrorCode::UniverseMismatch,
                  "target universe drops classical element " + e.canonical());
  std::vector<Qset> nested;
  nested.reserve(x.nested_part().size());
  for (const auto& n : x.nested_part()) nested.push_back(rebind(n, target));
  return Qset::from_parts(target, to_vec(x.tokens()), to_vec(x.classical_part()),
                          std::move(nested));
}

}  // namespace qsetk
