#pragma once

#include <unordered_map>
#include <variant>

#include "qsetk/core.hpp"

namespace qsetk {

// Designates an element of a qset without naming a token: by kind (any one
// m-atom of that kind, all choices equivalent), by classical element, or by
// a nested member up to extensional equality.
struct KindPick {
  std::string label;
};
using ElemPick = std::variant<KindPick, ClassicalElem, Qset>;

// Descent sequence: members[0] = X, strictly decreasing under proper
// inclusion, last member = the empty qset.
struct Chain {
  std::vector<Qset> members;
};

// F(j) = values[j]; F(0) is empty, F(top()) is the chain's origin.
struct QFunction {
  std::vector<Qset> values;
  Nat top() const { return values.size() - 1; }
};

struct QcardResult {
  bool defined = false;
  Nat value = 0;
  std::string reason;

  static QcardResult definite(Nat n) { return {true, n, ""}; }
  static QcardResult undefined(std::string why) { return {false, 0, std::move(why)}; }
  bool operator==(const QcardResult&) const = default;
};

// The family A_x: every token-level subset of x that contains the designated
// element, returned as the nested content of a fresh qset.
Qset family_Ax(const Qset& x, const ElemPick& pick);

// The singleton of the designated element relative to x. Equals the
// intersection of family_Ax(x, pick); built directly.
Qset singleton(const Qset& x, const ElemPick& pick);

// Every x minus a singleton of one of its elements, deduplicated under
// extensional equality. Empty exactly when x is empty.
std::vector<Qset> direct_descendants(const Qset& x);

inline constexpr Nat kChainCap = 10000;

// All token-level descent chains from x down to the empty qset: one per
// removal order, n! of them. The empty qset has the single degenerate chain
// containing only itself. Never truncates: past the cap it throws.
std::vector<Chain> descendant_chains(const Qset& x, Nat cap = kChainCap);

// Checks the three chain clauses on an arbitrary family: x is a member,
// members are totally ordered by proper inclusion, and every nonempty member
// has exactly one direct descendant inside the family.
bool is_chain(const Qset& x, const std::vector<Qset>& family);

// Indexes a chain's members 0..n from the empty qset up to the origin,
// verifying each step is a direct descent.
QFunction build_qfunction(const Chain& chain);

// Memo shared across qcard calls. Valid only for qsets of one universe;
// reuse across universes is a caller bug.
struct QcardCache {
  std::unordered_map<std::string, Nat> memo;
};

// The derived quasicardinal: the common top index of every descent chain of
// x, computed purely by descending chains. Small qsets verify every chain;
// larger ones descend one chain and the shared suffixes below the threshold
// still get full verification through the memo.
QcardResult qcard(const Qset& x);
QcardResult qcard(const Qset& x, QcardCache& cache);

bool is_finite(const Qset& x);

std::string chain_display(const Chain& chain);
std::vector<std::string> chain_forms(const Chain& chain);
std::string qfunction_display(const QFunction& f);

}  // namespace qsetk
