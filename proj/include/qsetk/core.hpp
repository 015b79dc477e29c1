#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qsetk/error.hpp"

namespace qsetk {

using Nat = std::uint64_t;

// A class of mutually indistinguishable m-atoms.
struct Kind {
  std::string label;
  std::string description;
};

// Internal carrier of an m-atom. The serial exists so the machinery can run;
// no user-facing result may depend on which serial was drawn, and the
// equivariance suite checks that it never does.
struct Token {
  std::uint32_t kind = 0;    // index into the universe's kind table
  std::uint32_t serial = 0;  // position in the kind's pool
  auto operator<=>(const Token&) const = default;
};

// Hereditarily finite classical element: an M-atom label or a set of these.
// Classical equality is structural and always defined.
class ClassicalElem {
 public:
  static ClassicalElem atom(std::string label);
  static ClassicalElem set(std::vector<ClassicalElem> members);

  bool is_atom() const { return atom_; }
  const std::string& label() const { return label_; }
  const std::vector<ClassicalElem>& members() const { return members_; }

  int depth() const;            // atom = 0, set = 1 + deepest member
  std::string canonical() const;

  std::strong_ordering operator<=>(const ClassicalElem& other) const;
  bool operator==(const ClassicalElem& other) const;

 private:
  bool atom_ = true;
  std::string label_;
  std::vector<ClassicalElem> members_;  // sorted, duplicates removed
};

class Universe;
using UniversePtr = std::shared_ptr<const Universe>;

struct KindSpec {
  std::string label;
  Nat pool_size = 0;
  std::string description;
};

// Registry of m-atom kinds with their finite token pools plus the classical
// elements admitted alongside them. Immutable once built.
class Universe {
 public:
  static UniversePtr make(std::vector<KindSpec> kinds,
                          std::vector<ClassicalElem> classical = {},
                          int classical_depth_bound = kDefaultDepthBound);

  std::size_t kind_count() const { return kinds_.size(); }
  const Kind& kind(std::size_t index) const { return kinds_[index]; }
  Nat pool_size(std::size_t index) const { return pools_[index]; }
  // index of the kind with this label, or npos
  std::size_t find_kind(const std::string& label) const;
  const std::vector<ClassicalElem>& classical() const { return classical_; }
  bool has_classical(const ClassicalElem& elem) const;
  int classical_depth_bound() const { return depth_bound_; }
  Nat total_tokens() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  static constexpr int kDefaultDepthBound = 2;

 private:
  Universe() = default;
  std::vector<Kind> kinds_;
  std::vector<Nat> pools_;
  std::vector<ClassicalElem> classical_;  // sorted, unique
  int depth_bound_ = kDefaultDepthBound;
};

// A finite extensional collection over a universe. Immutable value; the
// public face shows kinds and multiplicities, never token serials.
class Qset {
 public:
  const UniversePtr& universe() const { return rep_->universe; }
  bool is_empty() const;
  bool is_pure() const;  // m-atoms only (vacuously true for the empty qset)

  std::map<std::string, Nat> kind_profile() const;
  std::span<const Token> tokens() const { return rep_->m; }
  std::span<const ClassicalElem> classical_part() const { return rep_->c; }
  std::span<const Qset> nested_part() const { return rep_->nested; }

  // Identity-free display form: `⟨e×2, f×1; a, {a,b}; ...nested...⟩`,
  // kinds sorted by label, the empty qset printed as `∅`.
  std::string canonical_form() const;

  // Carrier-level total-order key. Deterministic, injective on structure,
  // independent of how the value was produced. Not part of the identity-free
  // surface; used for internal ordering and ext_eq.
  const std::string& token_key() const { return rep_->key; }

  // Carrier-level factory: validates tokens and classical elements against
  // the universe, sorts and deduplicates all three parts.
  static Qset from_parts(UniversePtr universe, std::vector<Token> m,
                         std::vector<ClassicalElem> c, std::vector<Qset> nested);

 private:
  struct Rep {
    UniversePtr universe;
    std::vector<Token> m;             // sorted
    std::vector<ClassicalElem> c;     // sorted
    std::vector<Qset> nested;         // sorted by token_key, pairwise distinct
    std::string key;                  // built once at construction
  };
  explicit Qset(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

struct QsetSpec {
  std::vector<std::pair<std::string, Nat>> matoms;  // kind label -> multiplicity
  std::vector<ClassicalElem> classical;
};

UniversePtr make_universe(std::vector<KindSpec> kinds,
                          std::vector<ClassicalElem> classical = {},
                          int classical_depth_bound = Universe::kDefaultDepthBound);

// Draws the requested multiplicity of tokens per kind. Which tokens are drawn
// is unobservable; any kind-preserving choice is equivalent.
Qset make_qset(const UniversePtr& u, const QsetSpec& spec);
Qset empty_qset(const UniversePtr& u);

Qset qset_union(const Qset& x, const Qset& y);
Qset qset_intersection(const Qset& x, const Qset& y);
Qset qset_difference(const Qset& x, const Qset& y);

enum class SubVerdict { NotSub, Sub, ProperSub };

SubVerdict subqset(const Qset& x, const Qset& y);
inline bool is_sub(SubVerdict v) { return v != SubVerdict::NotSub; }

// An m-atom named only by its class; there is nothing more to say about it.
struct MAtom {
  UniversePtr universe;
  std::string kind_label;
};

using Element = std::variant<MAtom, ClassicalElem, Qset>;

// Extensional equality. Defined for qsets and classical elements, collapses
// to structural equality on the classical part, and is not a well-formed
// formula when either argument is an m-atom.
bool ext_eq(const Qset& x, const Qset& y);
bool ext_eq(const Element& a, const Element& b);

// The primitive indistinguishability relation: kind equality for m-atoms,
// extensional equality for classical elements, and for qsets an identical
// kind-multiplicity profile, equal classical parts, and nested parts that
// match as multisets up to indistinguishability. Invariant under kind
// permutations; strictly coarser than extensional equality on qsets.
bool indist(const Qset& x, const Qset& y);
bool indist(const Element& a, const Element& b);

inline constexpr Nat kPowersetCardCap = 16;

// All carrier-level subquasisets of x, as the nested content of a fresh qset.
Qset powerset(const Qset& x, Nat max_card = kPowersetCardCap);

// Rebinds a qset to a universe that extends its own (same kinds with the
// same pools in the same order, at least the same classical registry).
Qset rebind(const Qset& x, const UniversePtr& target);

}  // namespace qsetk
