#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "qsetk/counting.hpp"
#include "qsetk/oracle.hpp"

using namespace qsetk;

namespace {

UniversePtr small_universe() {
  return make_universe({{"e", 3, ""}, {"f", 2, ""}},
                       {ClassicalElem::atom("a"), ClassicalElem::atom("b")});
}

Nat factorial(Nat n) {
  Nat out = 1;
  for (Nat i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace

TEST_CASE("family_Ax collects the subsets containing the pick") {
  auto u = small_universe();

  Qset e1 = make_qset(u, {{{"e", 1}}, {}});
  CHECK(oracle::card(family_Ax(e1, KindPick{"e"})) == 1);

  Qset e2 = make_qset(u, {{{"e", 2}}, {}});
  CHECK(oracle::card(family_Ax(e2, KindPick{"e"})) == 2);

  Qset ef = make_qset(u, {{{"e", 2}, {"f", 1}}, {}});
  Qset fam = family_Ax(ef, KindPick{"f"});
  CHECK(oracle::card(fam) == 4);  // fixed f slot, free choice over the two e
  for (const auto& z : fam.nested_part()) {
    CHECK(is_sub(subqset(z, ef)));
    CHECK(z.kind_profile().count("f") == 1);
  }

  Qset withc = make_qset(u, {{{"e", 1}}, {ClassicalElem::atom("a")}});
  Qset famc = family_Ax(withc, ClassicalElem::atom("a"));
  CHECK(oracle::card(famc) == 2);
  for (const auto& z : famc.nested_part()) CHECK(z.classical_part().size() == 1);

  CHECK_THROWS_AS(family_Ax(e1, KindPick{"f"}), Error);
  try {
    family_Ax(e1, ClassicalElem::atom("a"));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NotMember);
  }
}

TEST_CASE("singleton is the intersection of its family") {
  auto u = small_universe();
  Qset x = make_qset(u, {{{"e", 2}, {"f", 1}}, {ClassicalElem::atom("a")}});

  std::vector<ElemPick> picks = {KindPick{"e"}, KindPick{"f"},
                                 ElemPick{ClassicalElem::atom("a")}};
  for (const auto& pick : picks) {
    Qset s = singleton(x, pick);
    CHECK(oracle::card(s) == 1);
    CHECK(subqset(s, x) == SubVerdict::ProperSub);

    Qset folded = x;
    Qset fam = family_Ax(x, pick);
    for (const auto& z : fam.nested_part())
      folded = qset_intersection(folded, z);
    CHECK(ext_eq(folded, s));
  }
}

TEST_CASE("singleton of a classical element is its unit set") {
  auto u = small_universe();
  auto a = ClassicalElem::atom("a");
  Qset x = Qset::from_parts(u, {}, {a, ClassicalElem::atom("b")}, {});
  Qset s = singleton(x, a);
  CHECK(ext_eq(Element{s}, Element{ClassicalElem::set({a})}));
}

TEST_CASE("singleton admits only the trivial subqsets") {
  auto u = small_universe();
  Qset x = make_qset(u, {{{"e", 3}}, {}});
  Qset s = singleton(x, KindPick{"e"});
  Qset subs = powerset(s);
  CHECK(oracle::card(subs) == 2);
  bool saw_empty = false, saw_self = false;
  for (const auto& z : subs.nested_part()) {
    if (ext_eq(z, empty_qset(u))) saw_empty = true;
    if (ext_eq(z, s)) saw_self = true;
  }
  CHECK(saw_empty);
  CHECK(saw_self);
}

TEST_CASE("nested pick uses extensional equality") {
  auto u = small_universe();
  Qset inner = make_qset(u, {{{"e", 1}}, {}});
  Qset x = Qset::from_parts(u, {}, {}, {inner, empty_qset(u)});
  Qset same_inner = Qset::from_parts(u, {inner.tokens()[0]}, {}, {});
  Qset s = singleton(x, same_inner);
  CHECK(oracle::card(s) == 1);
  CHECK(ext_eq(s.nested_part()[0], inner));
}

TEST_CASE("direct descendants") {
  auto u = small_universe();
  CHECK(direct_descendants(empty_qset(u)).empty());

  Qset e2 = make_qset(u, {{{"e", 2}}, {}});
  auto dd = direct_descendants(e2);
  CHECK(dd.size() == 2);  // distinct token draws, yet pairwise indistinguishable
  for (const auto& p : dd)
    for (const auto& q : dd) CHECK(indist(p, q));
  CHECK_FALSE(ext_eq(dd[0], dd[1]));

  Qset ef = make_qset(u, {{{"e", 1}, {"f", 1}}, {}});
  auto dd2 = direct_descendants(ef);
  CHECK(dd2.size() == 2);
  CHECK_FALSE(indist(dd2[0], dd2[1]));

  for (const auto& p : dd2) CHECK(oracle::card(p) == oracle::card(ef) - 1);
}

TEST_CASE("descendant chains of the empty qset") {
  auto u = small_universe();
  auto chains = descendant_chains(empty_qset(u));
  REQUIRE(chains.size() == 1);
  REQUIRE(chains[0].members.size() == 1);
  CHECK(chains[0].members[0].is_empty());
}

TEST_CASE("descendant chains enumerate removal orders") {
  auto u = small_universe();
  Qset x = make_qset(u, {{{"e", 2}, {"f", 1}}, {}});
  auto chains = descendant_chains(x);
  CHECK(chains.size() == factorial(3));
  for (const auto& c : chains) {
    CHECK(c.members.size() == oracle::card(x) + 1);
    CHECK(ext_eq(c.members.front(), x));
    CHECK(c.members.back().is_empty());
    CHECK(is_chain(x, c.members));
    for (std::size_t i = 0; i + 1 < c.members.size(); ++i)
      CHECK(subqset(c.members[i + 1], c.members[i]) == SubVerdict::ProperSub);
  }
}

TEST_CASE("helium chains") {
  auto u = make_universe({{"e", 2, ""}});
  Qset he = make_qset(u, {{{"e", 2}}, {}});
  auto chains = descendant_chains(he);
  REQUIRE(chains.size() == 2);
  for (const auto& c : chains) {
    CHECK(chain_display(c) == "⟨e×2⟩ ⊃ ⟨e×1⟩ ⊃ ∅");
  }
  CHECK(indist(chains[0].members[1], chains[1].members[1]));
  CHECK_FALSE(ext_eq(chains[0].members[1], chains[1].members[1]));
}

TEST_CASE("chain caps") {
  auto u = make_universe({{"e", 8, ""}});
  Qset big = make_qset(u, {{{"e", 8}}, {}});
  try {
    descendant_chains(big);  // 8! exceeds the default cap
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::CapExceeded);
  }
  Qset three = make_qset(u, {{{"e", 3}}, {}});
  CHECK_THROWS_AS(descendant_chains(three, 5), Error);
  CHECK(descendant_chains(three, 6).size() == 6);
}

TEST_CASE("is_chain rejects non-chains") {
  auto u = small_universe();
  Qset x = make_qset(u, {{{"e", 1}, {"f", 1}}, {}});
  Qset ye = make_qset(u, {{{"e", 1}}, {}});
  Qset yf = make_qset(u, {{{"f", 1}}, {}});

  CHECK(is_chain(x, {x, ye, empty_qset(u)}));
  CHECK(is_chain(x, {empty_qset(u), ye, x}));  // order inside the family is free
  CHECK(is_chain(x, {x, ye, ye, empty_qset(u)}));  // ext_eq duplicates collapse

  CHECK_FALSE(is_chain(x, {x}));                    // nonempty member w/o descendant
  CHECK_FALSE(is_chain(x, {ye, empty_qset(u)}));    // x itself missing
  CHECK_FALSE(is_chain(x, {x, empty_qset(u), ye, yf}));  // two descendants of x
  CHECK_FALSE(is_chain(x, {x, empty_qset(u)}));     // gap: empty is not a direct step

  Qset other = make_qset(u, {{{"e", 2}}, {}});
  CHECK_FALSE(is_chain(x, {x, ye, empty_qset(u), other}));  // incomparable member
}

TEST_CASE("qfunctions index chains from the bottom") {
  auto u = small_universe();
  Qset x = make_qset(u, {{{"e", 2}}, {}});
  for (const auto& c : descendant_chains(x)) {
    QFunction f = build_qfunction(c);
    CHECK(f.top() == 2);
    CHECK(f.values.front().is_empty());
    CHECK(ext_eq(f.values.back(), x));
    CHECK(qfunction_display(f) == "[⟨2;⟨e×2⟩⟩; ⟨1;⟨e×1⟩⟩; ⟨0;∅⟩]");
  }

  Chain gap{{x, empty_qset(u)}};
  try {
    build_qfunction(gap);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NonTerminatingChain);
  }
  Chain no_bottom{{x}};
  CHECK_THROWS_AS(build_qfunction(no_bottom), Error);
}

TEST_CASE("qcard base cases") {
  auto u = small_universe();
  CHECK(qcard(empty_qset(u)) == QcardResult::definite(0));
  Qset s = make_qset(u, {{{"e", 1}}, {}});
  CHECK(qcard(s) == QcardResult::definite(1));
  Qset he = make_qset(u, {{{"e", 2}}, {}});
  CHECK(qcard(he) == QcardResult::definite(2));
  CHECK(is_finite(he));
  CHECK(is_finite(empty_qset(u)));
}

TEST_CASE("qcard agrees with every chain's top index") {
  auto u = small_universe();
  std::vector<Qset> samples = {
      make_qset(u, {{{"e", 2}, {"f", 2}}, {}}),
      make_qset(u, {{{"e", 1}}, {ClassicalElem::atom("a"), ClassicalElem::atom("b")}}),
      Qset::from_parts(u, {Token{0, 0}}, {ClassicalElem::atom("a")},
                       {empty_qset(u), make_qset(u, {{{"f", 1}}, {}})}),
  };
  for (const auto& x : samples) {
    auto r = qcard(x);
    REQUIRE(r.defined);
    for (const auto& c : descendant_chains(x)) {
      CHECK(build_qfunction(c).top() == r.value);
      CHECK(c.members.size() == r.value + 1);
    }
  }
}

TEST_CASE("qcard handles nested structure") {
  auto u = small_universe();
  Qset he = make_qset(u, {{{"e", 2}}, {}});
  Qset p = powerset(he);
  auto r = qcard(p);
  REQUIRE(r.defined);
  CHECK(r.value == 4);

  // a qset containing indistinguishable-but-distinct nested members
  auto dd = direct_descendants(he);
  REQUIRE(dd.size() == 2);
  Qset pair = Qset::from_parts(u, {}, {}, {dd[0], dd[1]});
  CHECK(qcard(pair) == QcardResult::definite(2));
}

TEST_CASE("qcard above the exhaustive threshold") {
  auto u = make_universe({{"e", 6, ""}, {"f", 6, ""}});
  Qset big = make_qset(u, {{{"e", 6}, {"f", 6}}, {}});
  QcardCache cache;
  auto r = qcard(big, cache);
  REQUIRE(r.defined);
  CHECK(r.value == 12);
  CHECK(qcard(big, cache) == r);  // memo hit
  CHECK_FALSE(cache.memo.empty());
}

TEST_CASE("qcard is permutation invariant") {
  auto u = small_universe();
  Qset x = make_qset(u, {{{"e", 2}, {"f", 1}}, {ClassicalElem::atom("b")}});
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    auto pi = oracle::random_permutation(u, rng);
    CHECK(qcard(oracle::permute(x, pi)) == qcard(x));
  }
}

TEST_CASE("indistinguishable subqsets of the same profile are extensionally equal") {
  // the H2 shape on a concrete pair: both singleton draws from helium sit in
  // it, are indistinguishable, and only coincide when they use the same token
  auto u = make_universe({{"e", 2, ""}});
  Qset he = make_qset(u, {{{"e", 2}}, {}});
  auto dd = direct_descendants(he);
  REQUIRE(dd.size() == 2);
  CHECK(indist(dd[0], dd[1]));
  CHECK(is_sub(subqset(dd[0], he)));
  CHECK(is_sub(subqset(dd[1], he)));
  CHECK_FALSE(ext_eq(dd[0], dd[1]));
  CHECK(qcard(dd[0]) == qcard(dd[1]));
}
