#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "proftree/profinite.hpp"

using namespace proftree;

namespace {

const RankedAlphabet kS1{{1}};
const RankedAlphabet kS01{{0, 1}};
const RankedAlphabet kS11{{1, 1}};

std::shared_ptr<CloneRoster> standard_roster() {
  return std::make_shared<CloneRoster>(CloneRoster::standard());
}

Tree chain(int letter, int reps, Tree base) {
  for (int i = 0; i < reps; ++i) base = Tree::node(letter, {base});
  return base;
}

}  // namespace

TEST_CASE("roster construction and generated edges") {
  auto r = standard_roster();
  REQUIRE(r->size() == 5);
  CHECK(r->members[0].name == "endo1");
  CHECK(r->members[1].name == "endo2");
  CHECK(r->members[2].name == "endo3");
  CHECK(r->members[3].name == "act-z2");
  CHECK(r->members[4].name == "img-swap");
  CHECK(r->find("endo3") == 2);
  CHECK(r->find("nope") == -1);

  int prod = r->add_product(1, 2);
  CHECK(r->members[prod].name == "(endo2 x endo3)");
  int cayt = r->add_endo_carrier(1, 1);
  CHECK(r->members[cayt].name == "endo(endo2_1)");
  int dlt = r->add_delta_pair(2);
  CHECK(r->members[dlt].name == "delta(endo2)");
  CHECK(r->members[dlt + 1].name == "endo2^2");
  REQUIRE(r->size() == 9);

  // one identity per member, two projections, one inclusion, one evaluation
  // morphism, and the two halves of the arity-shift isomorphism
  auto edges = roster_edges(*r);
  CHECK(edges.size() == 15);

  CHECK_THROWS_AS(r->add_product(-1, 0), IndexOutOfRange);
  CHECK_THROWS_AS(r->add_endo_carrier(99, 1), IndexOutOfRange);
}

TEST_CASE("families from trees") {
  auto r = standard_roster();

  // variables go to variables under every assignment
  auto uv = family_of_tree(kS1, 2, Tree::variable(2), r);
  for (int i = 0; i < r->size(); ++i) {
    const ClonePtr& c = r->members[i].clone;
    for (const CloneElem& v : uv.tables[i]) CHECK(c->equal(2, v, c->variable(2, 2)));
  }

  // squaring a unary letter on two points: the four assignments in order
  // give const0, id (from the identity), id (the swap squared), const1
  auto u = family_of_tree(kS1, 1, chain(1, 2, Tree::variable(1)), r);
  REQUIRE(u.tables[1].size() == 4);
  CHECK(u.tables[1][0].as_table() == std::vector<int>{0, 0});
  CHECK(u.tables[1][1].as_table() == std::vector<int>{0, 1});
  CHECK(u.tables[1][2].as_table() == std::vector<int>{0, 1});
  CHECK(u.tables[1][3].as_table() == std::vector<int>{1, 1});

  CHECK_THROWS_AS(family_of_tree(kS1, 1, Tree::variable(2), r), IndexOutOfRange);
  CHECK_THROWS_AS(
      family_from_trees(kS1, 1, {Tree::variable(1)}, r), ArityMismatch);
  // a ternary letter needs the arity-3 carrier of Endo(3), which is too big
  auto r3 = std::make_shared<CloneRoster>();
  r3->add_endo(3);
  CHECK_THROWS_AS(family_of_tree(RankedAlphabet{{3}}, 1,
                                 Tree::node(1, {Tree::variable(1), Tree::variable(1),
                                                Tree::variable(1)}),
                                 r3),
                  GuardExceeded);
}

TEST_CASE("tree families are natural, mixed families are not") {
  auto big = standard_roster();
  big->add_product(1, 2);
  big->add_endo_carrier(1, 1);
  big->add_delta_pair(2);
  Tree aax = chain(1, 2, Tree::variable(1));

  auto rep = naturality_check(family_of_tree(kS1, 1, aax, big));
  CHECK(rep.pass);
  CHECK(rep.squares_checked == 688);
  CHECK(rep.failures.empty());

  // one tree on Endo(3), another everywhere else: every edge inside the
  // agreeing part still commutes, so the plain roster cannot see the seam
  auto base = standard_roster();
  std::vector<Tree> mixed(base->members.size(), Tree::node(1, {Tree::variable(1)}));
  mixed[2] = Tree::variable(1);
  auto blind = naturality_check(family_from_trees(kS1, 1, mixed, base));
  CHECK(blind.pass);
  CHECK(blind.squares_checked == 40);

  // the projection out of the on-demand product is what catches it
  auto sharp = standard_roster();
  sharp->add_product(1, 2);
  std::vector<Tree> mixed2(sharp->members.size(), Tree::node(1, {Tree::variable(1)}));
  mixed2[2] = Tree::variable(1);
  auto caught = naturality_check(family_from_trees(kS1, 1, mixed2, sharp));
  CHECK_FALSE(caught.pass);
  CHECK(caught.squares_checked == 364);
  REQUIRE_FALSE(caught.failures.empty());
  CHECK(caught.failures.size() == 5);  // capped per edge
  CHECK(caught.failures[0].edge == "pi2: (endo2 x endo3) -> endo3");
}

TEST_CASE("definability search finds the least defining tree") {
  auto r = standard_roster();
  auto uv = family_of_tree(kS1, 1, Tree::variable(1), r);
  auto got = definability_search(uv, 3);
  REQUIRE(got.has_value());
  CHECK(*got == Tree::variable(1));

  // verdicts are roster-relative: on two points the fourth power of a map
  // is its square, on three points it is not
  Tree a4 = chain(1, 4, Tree::variable(1));
  auto two = std::make_shared<CloneRoster>();
  two->add_endo(2);
  auto both = std::make_shared<CloneRoster>();
  both->add_endo(2);
  both->add_endo(3);
  auto coarse = definability_search(family_of_tree(kS1, 1, a4, two), 8);
  REQUIRE(coarse.has_value());
  CHECK(format_tree(*coarse) == "(a1 (a1 x1))");
  auto fine = definability_search(family_of_tree(kS1, 1, a4, both), 8);
  REQUIRE(fine.has_value());
  CHECK(format_tree(*fine) == "(a1 (a1 (a1 (a1 x1))))");

  // a deep two-letter word stays out of reach at this bound
  Tree w = Tree::variable(1);
  for (int i = 0; i < 11; ++i) w = Tree::node(1 + (i % 2), {w});
  REQUIRE(tree_size(w) == 12);
  CHECK_FALSE(definability_search(family_of_tree(kS11, 1, w, both), 8).has_value());

  // round trip: whatever the search returns defines the family
  for (const Tree& t : enumerate_trees_up_to(kS1, 1, 5)) {
    auto f = family_of_tree(kS1, 1, t, r);
    auto back = definability_search(f, 5);
    REQUIRE(back.has_value());
    CHECK(families_equal(family_of_tree(kS1, 1, *back, r), f));
  }
}

TEST_CASE("restriction to endo members is the term denotation") {
  auto r = standard_roster();
  for (const Tree& t : enumerate_trees_up_to(kS01, 1, 5)) {
    auto theta = restrict_family(family_of_tree(kS01, 1, t, r));
    CHECK(theta.base_sizes == std::vector<int>{1, 2, 3});
    CHECK(approx_equal(theta, approx_from_tree(kS01, 1, t, {1, 2, 3})));
  }

  // substitution before restricting equals composition after restricting
  auto cc = ChurchContext::make(kS01, 1);
  for (const Tree& t : enumerate_trees_up_to(kS01, 1, 4))
    for (const Tree& arg : enumerate_trees_up_to(kS01, 1, 3)) {
      auto lhs = restrict_family(
          family_of_tree(kS01, 1, tree_subst(t, {arg}), r));
      Term composed =
          kleisli_subst(kS01, encode(cc, t), 1, {encode(cc, arg)}, 1);
      CHECK(approx_equal(lhs, approx_from_term(kS01, 1, composed, {1, 2, 3})));
    }

  auto actions_only = std::make_shared<CloneRoster>();
  actions_only->add_action("act-z2", MonoidAction::z2_flip());
  CHECK_THROWS_AS(
      restrict_family(family_of_tree(kS01, 1, Tree::variable(1), actions_only)),
      MissingRosterMember);
}

TEST_CASE("lifting inverts restriction on tree-induced families") {
  auto r = standard_roster();
  for (const Tree& t : enumerate_trees_up_to(kS01, 1, 4)) {
    auto theta = approx_from_tree(kS01, 1, t, {1, 2, 3});
    auto back = lift(theta, r);
    CHECK(families_equal(back, family_of_tree(kS01, 1, t, r)));
    CHECK(approx_equal(restrict_family(back), theta));
  }

  // tables alone cannot be lifted: the carrier sets are new base sizes
  auto tables_only =
      restrict_family(family_of_tree(kS01, 1, Tree::variable(1), r));
  CHECK_THROWS_AS(lift(tables_only, r), UnsupportedOperation);

  // Endo(3) at arity 3 is past any enumeration guard
  auto theta3 = approx_from_tree(kS01, 3, Tree::variable(1), {2});
  CHECK_THROWS_AS(lift(theta3, r), GuardExceeded);
}

TEST_CASE("evaluation after the carrier embedding is the identity") {
  auto r = standard_roster();
  for (int i = 0; i < r->size(); ++i) {
    const ClonePtr& c = r->members[i].clone;
    for (int n = 0; n <= 2; ++n) {
      CloneMorphism phi = cay(c, n);
      for (const CloneElem& v : c->enumerate(n))
        CHECK(c->equal(n, appvar(c, n, phi.component(n, v)), v));
    }
  }
}

TEST_CASE("one-step unfolding over the function space") {
  // nullary letter plus unary letter: the function space over two points
  // has 2^8 elements, and every tree-induced family is a fixed point
  for (const Tree& t : enumerate_trees_up_to(kS01, 0, 4)) {
    auto rho = parametric_from_tree(kS01, 0, t, {2});
    auto rep = fixed_point_check(rho, kS01, 2);
    CHECK(rep.pass);
    CHECK(rep.expansion_size == 256);
    CHECK(rep.witness.empty());
  }

  // a rule that switches trees between the base and the function space is
  // caught, with the separating letter tuple named
  Tree e = Tree::node(1, {});
  auto lo = parametric_from_tree(kS01, 0, Tree::node(2, {e}), {2});
  auto hi = parametric_from_tree(kS01, 0, chain(2, 2, e), {2});
  ParametricFamily mixed{lo.type, {2},
                         [lo, hi](int q) { return q <= 2 ? lo.rule(q) : hi.rule(q); }};
  auto bad = fixed_point_check(mixed, kS01, 2);
  CHECK_FALSE(bad.pass);
  CHECK(bad.witness == "((o * o -> o), |Q|=2, #2) -> 1 vs 0");

  // three points would need 3^81 elements
  auto rho = parametric_from_tree(kS01, 0, e, {3});
  CHECK_THROWS_AS(fixed_point_check(rho, kS01, 3), GuardExceeded);
  // shape is checked before anything is enumerated
  auto wrong = parametric_from_tree(kS01, 1, Tree::variable(1), {2});
  CHECK_THROWS_AS(fixed_point_check(wrong, kS01, 2), UnsupportedOperation);
}

TEST_CASE("parametricity across all small relations") {
  auto rho = parametric_from_tree(kS1, 1, chain(1, 2, Tree::variable(1)), {1, 2, 3});
  auto rep = parametricity_check(rho);
  CHECK(rep.pass);
  CHECK(rep.relations_checked == 682);

  // different trees at different sizes: a relation between the two bases
  // separates them
  auto at2 = parametric_from_tree(kS1, 1, Tree::node(1, {Tree::variable(1)}), {2, 3});
  auto at3 = parametric_from_tree(kS1, 1, chain(1, 2, Tree::variable(1)), {2, 3});
  ParametricFamily mix{at2.type, {2, 3},
                       [at2, at3](int q) { return q == 2 ? at2.rule(q) : at3.rule(q); }};
  auto bad = parametricity_check(mix);
  CHECK_FALSE(bad.pass);
  REQUIRE_FALSE(bad.failures.empty());
  CHECK(bad.failures[0].left_base == 2);
  CHECK(bad.failures[0].right_base == 3);
  CHECK(bad.failures[0].relation == "{(0,1),(1,0)}");

  // successor modulo the base size is the textbook non-parametric value
  ParametricFamily succ{parse_type("o -> o"), {2, 3}, [](int q) {
                          return SemValue::fn([q](const SemValue& x) {
                            return SemValue::base((x.base_elem() + 1) % q);
                          });
                        }};
  CHECK_FALSE(parametricity_check(succ).pass);

  // at the unit type every family is parametric
  ParametricFamily unit{Type::product({}), {2, 3},
                        [](int) { return SemValue::unit(); }};
  CHECK(parametricity_check(unit).pass);
}

TEST_CASE("parametric families of context type come from trees") {
  Tree ba = Tree::node(2, {Tree::node(1, {Tree::variable(1)})});
  auto rho = parametric_from_tree(kS11, 1, ba, {1, 2, 3});
  auto got = parametric_to_tree(rho, kS11, 1, 6);
  REQUIRE(got.has_value());
  CHECK(*got == ba);

  auto vr = parametric_from_tree(kS11, 1, Tree::variable(1), {1, 2, 3});
  auto vgot = parametric_to_tree(vr, kS11, 1, 6);
  REQUIRE(vgot.has_value());
  CHECK(*vgot == Tree::variable(1));

  // too small a bound is inconclusive, not negative
  auto deep = parametric_from_tree(kS11, 1, chain(1, 5, Tree::variable(1)), {2, 3});
  CHECK_FALSE(parametric_to_tree(deep, kS11, 1, 3).has_value());

  CHECK_THROWS_AS(parametric_to_tree(rho, kS11, 2, 6), UnsupportedOperation);

  // product-valued families split componentwise and search per component
  auto cc = ChurchContext::make(kS11, 1);
  Term enc = encode(cc, ba);
  Term wrapped = normalize(
      {}, Term::lam(alphabet_type(kS11),
                    Term::tuple({Term::app(shift(enc, 1), Term::var(0))})));
  auto parts = split_components(parametric_from_term(wrapped, {1, 2, 3}));
  REQUIRE(parts.size() == 1);
  CHECK(format_type(parts[0].type) == "(o -> o * o -> o) -> o -> o");
  auto pgot = parametric_to_tree(parts[0], kS11, 1, 6);
  REQUIRE(pgot.has_value());
  CHECK(*pgot == ba);

  ParametricFamily flat{Type::base(), {2}, [](int) { return SemValue::base(0); }};
  CHECK_THROWS_AS(split_components(flat), UnsupportedOperation);
}
