#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qsetk/core.hpp"
#include "qsetk/oracle.hpp"

using namespace qsetk;

namespace {

UniversePtr helium_universe() { return make_universe({{"e", 3, ""}}); }

UniversePtr mixed_universe() {
  return make_universe({{"e", 3, ""}, {"f", 2, ""}},
                       {ClassicalElem::atom("a"), ClassicalElem::atom("b")});
}

}  // namespace

TEST_CASE("classical elements are structural") {
  auto a = ClassicalElem::atom("a");
  auto b = ClassicalElem::atom("b");
  auto s = ClassicalElem::set({b, a, a});
  CHECK(a == ClassicalElem::atom("a"));
  CHECK(a.depth() == 0);
  CHECK(s.depth() == 1);
  CHECK(s.members().size() == 2);  // duplicate removed, sorted
  CHECK(s.canonical() == "{a,b}");
  CHECK(ClassicalElem::set({s}).depth() == 2);
  CHECK(a < b);
  CHECK(a < s);  // atoms order before sets
}

TEST_CASE("universe construction validates") {
  auto u = make_universe({{"e", 3, "electrons"}}, {ClassicalElem::atom("a")});
  CHECK(u->kind_count() == 1);
  CHECK(u->pool_size(0) == 3);
  CHECK(u->find_kind("e") == 0);
  CHECK(u->find_kind("f") == Universe::npos);
  CHECK(u->total_tokens() == 3);
  CHECK(u->has_classical(ClassicalElem::atom("a")));
  CHECK_FALSE(u->has_classical(ClassicalElem::atom("b")));

  CHECK_THROWS_AS(make_universe({{"e", 1, ""}, {"e", 2, ""}}), Error);
  try {
    make_universe({{"e", 1, ""}, {"e", 2, ""}});
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DuplicateKind);
  }

  auto deep = ClassicalElem::set({ClassicalElem::set({ClassicalElem::set({})})});
  try {
    make_universe({}, {deep});  // depth 3 above the default bound 2
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DepthExceeded);
  }
  CHECK_NOTHROW(make_universe({}, {deep}, 3));
}

TEST_CASE("purely classical universe") {
  auto u = make_universe({}, {ClassicalElem::atom("a"), ClassicalElem::atom("b")});
  CHECK(u->kind_count() == 0);
  CHECK(u->total_tokens() == 0);
  CHECK(u->classical().size() == 2);
}

TEST_CASE("mixed universe constructor output") {
  auto u = make_universe({{"e", 2, ""}, {"ph", 1, ""}}, {ClassicalElem::atom("a")});
  CHECK(u->kind_count() == 2);
  CHECK(u->pool_size(0) == 2);
  CHECK(u->pool_size(1) == 1);
  CHECK(u->total_tokens() == 3);
  CHECK(u->classical().size() == 1);
}

TEST_CASE("make_qset draws by kind") {
  auto u = helium_universe();
  Qset x = make_qset(u, {{{"e", 2}}, {}});
  CHECK(oracle::card(x) == 2);
  CHECK(x.kind_profile().at("e") == 2);
  CHECK(x.canonical_form() == "⟨e×2⟩");
  CHECK(x.is_pure());
  CHECK_FALSE(x.is_empty());

  Qset empty = make_qset(u, {});
  CHECK(empty.is_empty());
  CHECK(empty.canonical_form() == "∅");
  CHECK(empty.is_pure());
  CHECK(ext_eq(empty, empty_qset(u)));

  try {
    make_qset(u, {{{"e", 4}}, {}});
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::PoolExhausted);
  }
  try {
    make_qset(u, {{{"zz", 1}}, {}});
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::UnknownKind);
  }
}

TEST_CASE("from_parts validates and normalizes") {
  auto u = mixed_universe();
  Qset x = Qset::from_parts(u, {Token{0, 1}, Token{0, 0}, Token{0, 1}},
                            {ClassicalElem::atom("b"), ClassicalElem::atom("a")}, {});
  CHECK(oracle::card(x) == 4);  // duplicate token removed
  CHECK(x.tokens().size() == 2);
  CHECK(x.classical_part().size() == 2);
  CHECK(x.canonical_form() == "⟨e×2; a, b⟩");

  CHECK_THROWS_AS(Qset::from_parts(u, {Token{7, 0}}, {}, {}), Error);
  CHECK_THROWS_AS(Qset::from_parts(u, {Token{0, 9}}, {}, {}), Error);
  CHECK_THROWS_AS(Qset::from_parts(u, {}, {ClassicalElem::atom("z")}, {}), Error);
  CHECK_THROWS_AS(Qset::from_parts(u, {}, {}, {empty_qset(helium_universe())}), Error);
}

TEST_CASE("set algebra at token level") {
  auto u = mixed_universe();
  Qset e2 = make_qset(u, {{{"e", 2}}, {}});
  Qset f1 = make_qset(u, {{{"f", 1}}, {}});
  Qset both = qset_union(e2, f1);
  CHECK(both.canonical_form() == "⟨e×2, f×1⟩");
  CHECK(oracle::card(both) == 3);

  CHECK(ext_eq(qset_difference(both, both), empty_qset(u)));
  CHECK(ext_eq(qset_union(e2, empty_qset(u)), e2));
  CHECK(ext_eq(qset_intersection(e2, e2), e2));
  CHECK(ext_eq(qset_intersection(qset_difference(both, f1), f1), empty_qset(u)));

  Qset s = Qset::from_parts(u, {e2.tokens()[0]}, {}, {});
  CHECK(oracle::card(qset_difference(e2, s)) == 1);

  auto other = helium_universe();
  try {
    qset_union(e2, empty_qset(other));
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::UniverseMismatch);
  }
}

TEST_CASE("subqset verdicts") {
  auto u = mixed_universe();
  Qset x = make_qset(u, {{{"e", 2}, {"f", 1}}, {ClassicalElem::atom("a")}});
  CHECK(subqset(empty_qset(u), x) == SubVerdict::ProperSub);
  CHECK(subqset(empty_qset(u), empty_qset(u)) == SubVerdict::Sub);
  CHECK(subqset(x, x) == SubVerdict::Sub);
  Qset minus = qset_difference(x, Qset::from_parts(u, {x.tokens()[0]}, {}, {}));
  CHECK(subqset(minus, x) == SubVerdict::ProperSub);
  CHECK(subqset(x, minus) == SubVerdict::NotSub);
  Qset f = make_qset(u, {{{"f", 1}}, {}});
  CHECK(subqset(f, x) == SubVerdict::ProperSub);
}

TEST_CASE("ext_eq and the ill-formed m-atom case") {
  auto u = mixed_universe();
  CHECK(ext_eq(empty_qset(u), empty_qset(u)));

  Element ea = MAtom{u, "e"};
  Element eb = MAtom{u, "e"};
  CHECK_THROWS_AS(ext_eq(ea, eb), Error);
  try {
    ext_eq(ea, Element{empty_qset(u)});
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::IllFormedFormula);
  }

  // same shape from distinct token draws
  Qset a = Qset::from_parts(u, {Token{0, 0}, Token{0, 1}}, {}, {});
  Qset b = Qset::from_parts(u, {Token{0, 1}, Token{0, 2}}, {}, {});
  CHECK_FALSE(ext_eq(a, b));
  CHECK(indist(a, b));
}

TEST_CASE("classical-only qsets collapse into classical sets") {
  auto u = mixed_universe();
  auto a = ClassicalElem::atom("a");
  auto b = ClassicalElem::atom("b");
  Qset classical_only = Qset::from_parts(u, {}, {a, b}, {});
  CHECK(ext_eq(Element{classical_only}, Element{ClassicalElem::set({a, b})}));
  CHECK_FALSE(ext_eq(Element{classical_only}, Element{ClassicalElem::set({a})}));
  CHECK_FALSE(ext_eq(Element{classical_only}, Element{a}));
  Qset with_tokens = qset_union(classical_only, make_qset(u, {{{"e", 1}}, {}}));
  CHECK_FALSE(ext_eq(Element{with_tokens}, Element{ClassicalElem::set({a, b})}));
}

TEST_CASE("indist is kind-profile comparison") {
  auto u = mixed_universe();
  CHECK(indist(Element{MAtom{u, "e"}}, Element{MAtom{u, "e"}}));
  CHECK_FALSE(indist(Element{MAtom{u, "e"}}, Element{MAtom{u, "f"}}));
  CHECK_FALSE(indist(Element{MAtom{u, "e"}}, Element{empty_qset(u)}));

  Qset e2 = make_qset(u, {{{"e", 2}}, {}});
  Qset e1 = make_qset(u, {{{"e", 1}}, {}});
  CHECK_FALSE(indist(e2, e1));
  CHECK(indist(e2, e2));
  Qset f2 = make_qset(u, {{{"f", 2}}, {}});
  CHECK_FALSE(indist(e2, f2));

  // ext_eq implies indist on the defined domain
  Qset c1 = Qset::from_parts(u, {}, {ClassicalElem::atom("a")}, {});
  Qset c2 = Qset::from_parts(u, {}, {ClassicalElem::atom("a")}, {});
  CHECK(ext_eq(c1, c2));
  CHECK(indist(c1, c2));
}

TEST_CASE("powerset enumerates token-level subsets") {
  auto u = helium_universe();
  Qset empty = empty_qset(u);
  Qset p0 = powerset(empty);
  CHECK(oracle::card(p0) == 1);
  CHECK(ext_eq(p0.nested_part()[0], empty));

  Qset s = make_qset(u, {{{"e", 1}}, {}});
  CHECK(oracle::card(powerset(s)) == 2);

  Qset e2 = make_qset(u, {{{"e", 2}}, {}});
  Qset p = powerset(e2);
  CHECK(oracle::card(p) == 4);
  CHECK_FALSE(p.is_pure());
  CHECK(p.canonical_form() == "⟨; ; ∅, ⟨e×1⟩, ⟨e×1⟩, ⟨e×2⟩⟩");

  Qset e3 = make_qset(u, {{{"e", 3}}, {}});
  try {
    powerset(e3, 2);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::BoundExceeded);
  }
}

TEST_CASE("canonical forms") {
  auto u = mixed_universe();
  CHECK(empty_qset(u).canonical_form() == "∅");
  CHECK(make_qset(u, {{{"f", 1}, {"e", 2}}, {}}).canonical_form() == "⟨e×2, f×1⟩");
  CHECK(Qset::from_parts(u, {}, {ClassicalElem::atom("a")}, {}).canonical_form() ==
        "⟨; a⟩");
  Qset nested_only = Qset::from_parts(u, {}, {}, {empty_qset(u)});
  CHECK(nested_only.canonical_form() == "⟨; ; ∅⟩");
  Qset all = Qset::from_parts(u, {Token{0, 0}}, {ClassicalElem::atom("b")},
                              {empty_qset(u)});
  CHECK(all.canonical_form() == "⟨e×1; b; ∅⟩");
}

TEST_CASE("token keys are structural identities") {
  auto u = mixed_universe();
  Qset a = Qset::from_parts(u, {Token{0, 0}}, {}, {});
  Qset b = Qset::from_parts(u, {Token{0, 0}}, {}, {});
  Qset c = Qset::from_parts(u, {Token{0, 1}}, {}, {});
  CHECK(a.token_key() == b.token_key());
  CHECK(a.token_key() != c.token_key());
  CHECK(ext_eq(a, b));
  CHECK_FALSE(ext_eq(a, c));
}

TEST_CASE("permutation equivariance basics") {
  auto u = mixed_universe();
  Qset x = make_qset(u, {{{"e", 2}, {"f", 1}}, {ClassicalElem::atom("a")}});

  auto id = oracle::identity_permutation(u);
  CHECK(ext_eq(oracle::permute(x, id), x));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    auto pi = oracle::random_permutation(u, rng);
    Qset px = oracle::permute(x, pi);
    CHECK(oracle::card(px) == oracle::card(x));
    CHECK(indist(px, x));
    CHECK(px.canonical_form() == x.canonical_form());
  }

  Qset single = Qset::from_parts(u, {Token{0, 0}}, {}, {});
  oracle::Permutation swap = id;
  std::swap(swap.maps[0][0], swap.maps[0][1]);
  Qset swapped = oracle::permute(single, swap);
  CHECK(indist(single, swapped));
  CHECK_FALSE(ext_eq(single, swapped));

  oracle::Permutation bad;
  bad.maps = {{0, 1, 2}};  // wrong number of kinds for this universe
  try {
    oracle::permute(x, bad);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::KindViolation);
  }
  oracle::Permutation not_bijective = id;
  not_bijective.maps[0] = {0, 0, 2};
  CHECK_THROWS_AS(oracle::permute(x, not_bijective), Error);
}

TEST_CASE("rebind to an extending universe") {
  auto u1 = make_universe({{"e", 2, ""}});
  Qset x = make_qset(u1, {{{"e", 2}}, {}});
  auto u2 = make_universe({{"e", 2, ""}, {"f", 1, ""}}, {ClassicalElem::atom("a")});
  Qset y = rebind(x, u2);
  CHECK(y.universe() == u2);
  CHECK(y.canonical_form() == x.canonical_form());
  CHECK(ext_eq(y, Qset::from_parts(u2, {Token{0, 0}, Token{0, 1}}, {}, {})));

  auto shrunk = make_universe({{"e", 1, ""}});
  CHECK_THROWS_AS(rebind(x, shrunk), Error);
  auto reordered = make_universe({{"f", 1, ""}, {"e", 2, ""}});
  CHECK_THROWS_AS(rebind(x, reordered), Error);
}
