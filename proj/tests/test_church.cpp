#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "proftree/church.hpp"

using namespace proftree;

namespace {

const RankedAlphabet kS01{{0, 1}};
const RankedAlphabet kS11{{1, 1}};
const RankedAlphabet kS02{{0, 2}};

Tree leaf() { return Tree::node(1, {}); }

}  // namespace

TEST_CASE("alphabet and term types") {
  CHECK(format_type(ChurchContext::make(kS01, 1).type) == "(o * o -> o) -> o -> o");
  CHECK(format_type(ChurchContext::make(kS11, 1).type) == "(o -> o * o -> o) -> o -> o");
  CHECK(format_type(ChurchContext::make(kS02, 0).type) == "(o * o -> o -> o) -> o");
  // no letters: the unit product, still one letter-tuple argument
  CHECK(format_type(ChurchContext::make(RankedAlphabet{{}}, 2).type) == "1 -> o -> o -> o");

  CHECK(alphabet_type(kS02) == parse_type("(o * o -> o -> o)"));
  CHECK_THROWS_AS(ChurchContext::make(kS01, -1), IndexOutOfRange);
}

TEST_CASE("encoding lands in canonical form") {
  auto cc01 = ChurchContext::make(kS01, 1);
  CHECK(format_term(encode(cc01, Tree::variable(1))) == "\\x0:(o * o -> o). \\x1:o. x1");

  auto cc11 = ChurchContext::make(kS11, 1);
  Tree ba = Tree::node(2, {Tree::node(1, {Tree::variable(1)})});
  CHECK(format_term(encode(cc11, ba)) ==
        "\\x0:(o -> o * o -> o). \\x1:o. x0.2 (x0.1 x1)");

  auto cc01c = ChurchContext::make(kS01, 0);
  CHECK(format_term(encode(cc01c, leaf())) == "\\x0:(o * o -> o). x0.1");

  auto cc02c = ChurchContext::make(kS02, 0);
  Tree t = Tree::node(2, {leaf(), Tree::node(2, {leaf(), leaf()})});
  CHECK(format_term(encode(cc02c, t)) ==
        "\\x0:(o * o -> o -> o). x0.2 x0.1 (x0.2 x0.1 x0.1)");

  // already beta-normal and eta-long: normalize is the identity on encodings
  auto cc11b = ChurchContext::make(kS11, 2);
  for (const Tree& u : enumerate_trees_up_to(kS11, 2, 5))
    CHECK(normalize({}, encode(cc11b, u)) == encode(cc11b, u));
  auto cc02b = ChurchContext::make(kS02, 1);
  for (const Tree& u : enumerate_trees_up_to(kS02, 1, 5))
    CHECK(normalize({}, encode(cc02b, u)) == encode(cc02b, u));

  // trees are validated against the context before anything is built
  CHECK_THROWS_AS(encode(cc01, Tree::variable(2)), IndexOutOfRange);
  CHECK_THROWS_AS(encode(cc01, Tree::node(2, {})), ArityMismatch);
}

TEST_CASE("decode inverts encode and distinct trees stay distinct") {
  struct Row { RankedAlphabet sigma; size_t trees; };
  for (const Row& row : {Row{kS01, 32}, Row{kS11, 765}, Row{kS02, 1428}}) {
    auto cc = ChurchContext::make(row.sigma, 3);
    auto trees = enumerate_trees_up_to(row.sigma, 3, 8);
    REQUIRE(trees.size() == row.trees);
    std::set<std::string> forms;
    for (const Tree& t : trees) {
      Term e = encode(cc, t);
      forms.insert(format_term(e));
      CHECK(decode(cc, e) == t);
    }
    CHECK(forms.size() == row.trees);
  }
}

TEST_CASE("decode handles any well-typed term of the context type") {
  auto cc01 = ChurchContext::make(kS01, 1);
  Term m = parse_term("\\s:(o * o -> o). \\x:o. (\\y:o. y) x");
  CHECK(decode(cc01, m) == Tree::variable(1));
  CHECK(encode(cc01, decode(cc01, m)) == normalize({}, m));

  auto cc11 = ChurchContext::make(kS11, 1);
  Term r = parse_term(
      "\\s:(o -> o * o -> o). \\x:o. s.2 ((\\f:o -> o. f) s.1 x)");
  CHECK(decode(cc11, r) == Tree::node(2, {Tree::node(1, {Tree::variable(1)})}));
  CHECK(encode(cc11, decode(cc11, r)) == normalize({}, r));

  // the letter tuple flowing through a redex as a first-class value
  Term v = parse_term(
      "\\s:(o * o -> o). \\x:o. "
      "(\\p:(o * o -> o). p.2 p.1) <s.1, \\y:o. s.2 y>");
  CHECK(decode(cc01, v) == Tree::node(2, {leaf()}));

  CHECK_THROWS_WITH_AS(decode(cc01, parse_term("\\x:o. x")),
                       doctest::Contains("expected"), NotChurchTyped);
  CHECK_THROWS_AS(decode(cc01, parse_term("\\x:o. x x")), NotChurchTyped);
  // right shape, wrong alphabet
  CHECK_THROWS_AS(decode(cc11, encode(cc01, Tree::variable(1))), NotChurchTyped);
}

TEST_CASE("generators in canonical form") {
  CHECK(format_term(generator(kS01, 1)) == "\\x0:1. \\x1:(o * o -> o). x1.1");
  CHECK(format_term(generator(kS01, 2)) ==
        "\\x0:((o * o -> o) -> o *). \\x1:(o * o -> o). "
        "x1.2 (x0.1 <x1.1, \\x2:o. x1.2 x2>)");
  CHECK(format_term(generator(kS11, 1)) ==
        "\\x0:((o -> o * o -> o) -> o *). \\x1:(o -> o * o -> o). "
        "x1.1 (x0.1 <\\x2:o. x1.1 x2, \\x2:o. x1.2 x2>)");
  CHECK(format_term(generator(kS02, 2)) ==
        "\\x0:((o * o -> o -> o) -> o * (o * o -> o -> o) -> o). "
        "\\x1:(o * o -> o -> o). "
        "x1.2 (x0.1 <x1.1, \\x2:o. \\x3:o. x1.2 x2 x3>) "
        "(x0.2 <x1.1, \\x2:o. \\x3:o. x1.2 x2 x3>)");

  CHECK(format_type(generator_type(kS02, 2)) ==
        "((o * o -> o -> o) -> o * (o * o -> o -> o) -> o) -> "
        "(o * o -> o -> o) -> o");
  for (int i : {1, 2})
    for (const RankedAlphabet& s : {kS01, kS11, kS02})
      CHECK(typecheck({}, generator(s, i)) == generator_type(s, i));

  // the generator is the normal form of the one-node fold written directly
  Term disp = parse_term(
      "\\t:(((o * o -> o) -> o) *). \\s:(o * o -> o). s.2 (t.1 s)");
  CHECK(normalize({}, disp) == generator(kS01, 2));
  Term disp1 = parse_term(
      "\\t:(((o -> o * o -> o) -> o) *). \\s:(o -> o * o -> o). s.1 (t.1 s)");
  CHECK(normalize({}, disp1) == generator(kS11, 1));

  CHECK_THROWS_AS(generator(kS01, 0), IndexOutOfRange);
  CHECK_THROWS_AS(generator(kS01, 3), IndexOutOfRange);
}

TEST_CASE("applying a generator grafts a node") {
  auto cc = ChurchContext::make(kS01, 0);
  Term g1 = generator(kS01, 1);
  Term g2 = generator(kS01, 2);
  CHECK(normalize({}, Term::app(g1, Term::unit_value())) == encode(cc, leaf()));
  for (const Tree& t : enumerate_trees_up_to(kS01, 0, 4)) {
    Term grafted = normalize({}, Term::app(g2, Term::tuple({encode(cc, t)})));
    CHECK(grafted == encode(cc, Tree::node(2, {t})));
  }
}

TEST_CASE("term-level substitution mirrors tree substitution") {
  auto ccm = ChurchContext::make(kS11, 2);
  auto ccn = ChurchContext::make(kS11, 1);
  for (const Tree& t : enumerate_trees_up_to(kS11, 2, 4))
    for (const Tree& u1 : enumerate_trees_up_to(kS11, 1, 2))
      for (const Tree& u2 : enumerate_trees_up_to(kS11, 1, 2)) {
        Term lhs = kleisli_subst(kS11, encode(ccm, t), 2,
                                 {encode(ccn, u1), encode(ccn, u2)}, 1);
        CHECK(lhs == encode(ccn, tree_subst(t, {u1, u2})));
      }

  auto ccm2 = ChurchContext::make(kS02, 2);
  auto ccn2 = ChurchContext::make(kS02, 1);
  for (const Tree& t : enumerate_trees_up_to(kS02, 2, 3))
    for (const Tree& u1 : enumerate_trees_up_to(kS02, 1, 2))
      for (const Tree& u2 : enumerate_trees_up_to(kS02, 1, 2)) {
        Term lhs = kleisli_subst(kS02, encode(ccm2, t), 2,
                                 {encode(ccn2, u1), encode(ccn2, u2)}, 1);
        CHECK(lhs == encode(ccn2, tree_subst(t, {u1, u2})));
      }

  // a closed head picks up fresh variable binders
  auto cc0 = ChurchContext::make(kS01, 0);
  auto cc2 = ChurchContext::make(kS01, 2);
  Tree c = Tree::node(2, {leaf()});
  CHECK(kleisli_subst(kS01, encode(cc0, c), 0, {}, 2) == encode(cc2, c));

  CHECK_THROWS_AS(kleisli_subst(kS11, encode(ccm, Tree::variable(1)), 2,
                                {encode(ccn, Tree::variable(1))}, 1),
                  ArityMismatch);
}

TEST_CASE("letter assignments are points of the letter-tuple domain") {
  auto sb = substitution_bijection(kS11, 2);
  auto ms = enumerate_morphisms(kS11, make_endo_clone(2));
  REQUIRE(ms.size() == 16);

  // injective into the domain: converting back restores every letter table
  for (const FreeMorphism& p : ms) {
    FreeMorphism back = sb.to_morphism(sb.to_semantics(p));
    REQUIRE(back.letters.size() == p.letters.size());
    for (size_t j = 0; j < p.letters.size(); ++j)
      CHECK(back.letters[j].as_table() == p.letters[j].as_table());
  }

  // surjective from it: every domain point is some assignment, all distinct
  auto dom = enumerate_domain(alphabet_type(kS11), 2);
  REQUIRE(dom.size() == 16);
  std::set<std::vector<int>> seen;
  for (const SemValue& v : dom) {
    FreeMorphism p = sb.to_morphism(v);
    std::vector<int> sig;
    for (const CloneElem& e : p.letters)
      for (int x : e.as_table()) sig.push_back(x);
    seen.insert(sig);
    SemValue w = sb.to_semantics(p);
    for (size_t j = 0; j < p.letters.size(); ++j)
      CHECK(table_of_sem(2, kS11.arities[j], w.components()[j]) ==
            table_of_sem(2, kS11.arities[j], v.components()[j]));
  }
  CHECK(seen.size() == 16);

  // no letters: one assignment, one point
  RankedAlphabet empty{{}};
  CHECK(enumerate_morphisms(empty, make_endo_clone(2)).size() == 1);
  CHECK(enumerate_domain(alphabet_type(empty), 2).size() == 1);
  CHECK(substitution_bijection(empty, 2).to_semantics(
            enumerate_morphisms(empty, make_endo_clone(2))[0]).components().empty());

  CHECK_THROWS_AS(substitution_bijection(RankedAlphabet{{2, 2}}, 3),
                  GuardExceeded);
  CHECK_THROWS_AS(substitution_bijection(kS11, 0), IndexOutOfRange);
  CHECK_THROWS_AS(sb.to_semantics(FreeMorphism{
                      kS01, make_endo_clone(2),
                      {CloneElem::table(2, 0, {0}),
                       CloneElem::table(2, 1, {0, 1})}}),
                  ArityMismatch);
}

TEST_CASE("denotations of encodings agree with clone evaluation") {
  auto cc = ChurchContext::make(kS11, 1);
  auto ms = enumerate_morphisms(kS11, make_endo_clone(2));
  auto trees = enumerate_trees_up_to(kS11, 1, 5);
  REQUIRE(ms.size() == 16);
  REQUIRE(trees.size() == 31);
  for (const FreeMorphism& p : ms)
    for (const Tree& t : trees)
      CHECK(church_table(cc, encode(cc, t), p, 2) ==
            eval_morphism(p, t, 1).as_table());

  // a wider alphabet over the same base
  auto cc02 = ChurchContext::make(kS02, 1);
  auto ms02 = enumerate_morphisms(kS02, make_endo_clone(2));
  REQUIRE(ms02.size() == 32);
  for (const FreeMorphism& p : ms02)
    for (const Tree& t : enumerate_trees_up_to(kS02, 1, 4))
      CHECK(church_table(cc02, encode(cc02, t), p, 2) ==
            eval_morphism(p, t, 1).as_table());

  // one-point base: everything collapses to the unique table
  for (const FreeMorphism& p : enumerate_morphisms(kS11, make_endo_clone(1)))
    CHECK(church_table(ChurchContext::make(kS11, 2),
                       encode(ChurchContext::make(kS11, 2),
                              Tree::node(1, {Tree::variable(2)})), p, 1) ==
          std::vector<int>{0});
}

TEST_CASE("function tables and semantic values convert both ways") {
  // exclusive-or as a curried value
  SemValue x = sem_of_table(2, 2, {0, 1, 1, 0});
  CHECK(x.apply(SemValue::base(1)).apply(SemValue::base(0)).base_elem() == 1);
  CHECK(x.apply(SemValue::base(1)).apply(SemValue::base(1)).base_elem() == 0);
  CHECK(table_of_sem(2, 2, x) == std::vector<int>{0, 1, 1, 0});

  // constants and empty argument lists
  CHECK(table_of_sem(3, 0, sem_of_table(3, 0, {2})) == std::vector<int>{2});

  // every unary table over three points survives the round trip
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        std::vector<int> tbl{a, b, c};
        CHECK(table_of_sem(3, 1, sem_of_table(3, 1, tbl)) == tbl);
      }

  CHECK_THROWS_AS(sem_of_table(2, 2, {0, 1, 1}), ArityMismatch);
  CHECK_THROWS_AS(sem_of_table(2, 1, {0, 2}), IndexOutOfRange);
  CHECK_THROWS_AS(sem_of_table(0, 1, {}), IndexOutOfRange);
  CHECK_THROWS_AS(table_of_sem(3, 11, sem_of_table(2, 0, {0})), GuardExceeded);
}
